//! Monte-Carlo cokernels of uniform random matrices over Z/p^d.
//!
//! Sampling is counter-keyed per matrix index, so the stream depends only on
//! the seed — shard layout and thread scheduling cannot change a single
//! draw, and reports are bit-identical across shard counts. Empirical
//! moments are computed from the tallied cokernel types with closed-form
//! surjection counts (no second layer of sampling noise), and the closed
//! loop feeds them back through the inversion to compare against the
//! empirical frequencies directly.

mod rng;
mod smith;

pub use rng::CounterRng;
pub use smith::{cokernel_type, MatrixMod};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::hall_littlewood::surjection_count;
use crate::inversion::{invert, Diagnostics, Distribution, MomentTable, TruncationPolicy};
use crate::partitions::{enumerate_up_to, Partition};
use crate::scalar::{rat_string, Rat};
use crate::Result;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV_VAR: &str = "GROUP_MOMENTS_THREADS";

/// Simulation parameters. The same `(p, d, n, sample_count, seed)` always
/// produces the same samples; `shard_count` only partitions the work.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub p: u64,
    pub d: u32,
    pub n: usize,
    pub sample_count: u64,
    pub seed: u64,
    pub shard_count: u32,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::InvalidConfig(format!("p must be >= 2, got {}", self.p)));
        }
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be >= 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("matrix dimension n must be >= 1".into()));
        }
        if self.sample_count == 0 {
            return Err(Error::InvalidConfig("sample_count must be >= 1".into()));
        }
        if self.shard_count == 0 {
            return Err(Error::InvalidConfig("shard_count must be >= 1".into()));
        }
        let modulus = self
            .p
            .checked_pow(self.d)
            .ok_or_else(|| Error::InvalidConfig(format!("p^d = {}^{} overflows", self.p, self.d)))?;
        if modulus > u32::MAX as u64 {
            return Err(Error::InvalidConfig(format!(
                "modulus p^d = {modulus} too large for the sampler"
            )));
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.d)
    }
}

/// The uniform matrix with index `idx` in the stream: entries drawn
/// row-major from the counter generator keyed `(seed, idx)`.
pub fn matrix_for_index(config: &SimConfig, idx: u64) -> MatrixMod {
    let modulus = config.modulus();
    let mut rng = CounterRng::for_stream(config.seed, idx);
    let mut m = MatrixMod::zero(config.n, modulus);
    for r in 0..config.n {
        for c in 0..config.n {
            m.set(r, c, rng.uniform_below(modulus));
        }
    }
    m
}

fn worker_threads(shards: usize) -> usize {
    let cap = std::env::var(THREADS_ENV_VAR)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(shards);
    cap.min(shards).max(1)
}

/// Tally of cokernel types over the whole sample stream, computed shard by
/// shard and merged in shard order. The result depends only on
/// `(p, d, n, sample_count, seed)` and the matrix source.
fn run_tally(
    config: &SimConfig,
    source: &(dyn Fn(u64) -> MatrixMod + Sync),
) -> Result<BTreeMap<Partition, u64>> {
    config.validate()?;
    let shards = config.shard_count as u64;
    let chunk = config.sample_count.div_ceil(shards);
    let ranges: Vec<(u64, u64)> = (0..shards)
        .map(|s| {
            let lo = s * chunk;
            let hi = ((s + 1) * chunk).min(config.sample_count);
            (lo, hi.max(lo))
        })
        .collect();

    let shard_tallies: Vec<Result<BTreeMap<Partition, u64>>> = {
        let threads = worker_threads(ranges.len());
        let mut results: Vec<Option<Result<BTreeMap<Partition, u64>>>> =
            (0..ranges.len()).map(|_| None).collect();
        for wave in ranges.chunks(threads).enumerate() {
            let (wave_idx, wave_ranges) = wave;
            std::thread::scope(|scope| {
                let handles: Vec<_> = wave_ranges
                    .iter()
                    .map(|&(lo, hi)| {
                        scope.spawn(move || {
                            let mut tally: BTreeMap<Partition, u64> = BTreeMap::new();
                            for idx in lo..hi {
                                let m = source(idx);
                                let ty = cokernel_type(&m, config.p, config.d)?;
                                *tally.entry(ty).or_insert(0) += 1;
                            }
                            Ok(tally)
                        })
                    })
                    .collect();
                for (i, h) in handles.into_iter().enumerate() {
                    results[wave_idx * threads + i] = Some(h.join().expect("shard panicked"));
                }
            });
        }
        results.into_iter().map(|r| r.expect("shard ran")).collect()
    };

    let mut merged: BTreeMap<Partition, u64> = BTreeMap::new();
    for shard in shard_tallies {
        for (ty, count) in shard? {
            *merged.entry(ty).or_insert(0) += count;
        }
    }
    Ok(merged)
}

fn empirical_from_tally(
    config: &SimConfig,
    tally: BTreeMap<Partition, u64>,
    probe: &[Partition],
) -> Result<(Distribution, MomentTable)> {
    let total = config.sample_count;
    let denom = Rat::from_integer(total.into());
    let masses: BTreeMap<Partition, Rat> = tally
        .iter()
        .map(|(ty, &c)| (ty.clone(), Rat::from_integer(c.into()) / &denom))
        .collect();
    let dist = Distribution::new(masses)?;

    let p = config.p;
    let moment_of = move |tally: &BTreeMap<Partition, u64>, mu: &Partition| -> Result<Rat> {
        let mut acc = Rat::zero();
        for (ty, &c) in tally {
            let s = surjection_count(ty, mu, p)?;
            acc += Rat::from_integer(s.into()) * Rat::from_integer(c.into());
        }
        Ok(acc / Rat::from_integer(total.into()))
    };

    let mut entries = BTreeMap::new();
    for mu in probe {
        if entries.contains_key(mu) {
            continue;
        }
        entries.insert(mu.clone(), moment_of(&tally, mu)?);
    }

    let tally = Arc::new(tally);
    let provider_tally = tally.clone();
    let provider = Arc::new(move |mu: &Partition| {
        moment_of(&provider_tally, mu).expect("closed-form surjection count on sampled types")
    });
    let table = MomentTable::with_provider(p, entries, provider)?;
    Ok((dist, table))
}

/// Draw `sample_count` uniform matrices, tally cokernel types, and return
/// the empirical distribution together with the empirical moment table over
/// the probe set (the table also carries a provider for any other `mu`).
/// All frequencies are exact rationals `k / N`.
pub fn sample_empirical(
    config: &SimConfig,
    probe: &[Partition],
) -> Result<(Distribution, MomentTable)> {
    let source = |idx: u64| matrix_for_index(config, idx);
    let tally = run_tally(config, &source)?;
    empirical_from_tally(config, tally, probe)
}

/// [`sample_empirical`] with an explicit matrix source; the hook tests use
/// to force degenerate streams (e.g. all-zero matrices).
pub fn sample_empirical_with(
    config: &SimConfig,
    probe: &[Partition],
    source: &(dyn Fn(u64) -> MatrixMod + Sync),
) -> Result<(Distribution, MomentTable)> {
    let tally = run_tally(config, source)?;
    empirical_from_tally(config, tally, probe)
}

/// Config echo in reports. Shard count is an execution detail with no effect
/// on any sampled value, so it is deliberately absent: reports are
/// byte-identical across shard layouts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub p: u64,
    pub d: u32,
    pub n: usize,
    pub sample_count: u64,
    pub seed: u64,
}

/// One probed target: empirical frequency vs inversion of empirical moments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub nu: Partition,
    pub empirical: String,
    pub inverted: String,
    pub abs_gap: String,
    /// Set when the gap exceeds the alert threshold; small samples are
    /// expected to trip this rather than fail.
    pub flagged: bool,
    pub diagnostics: Diagnostics,
}

/// Side-by-side closed-loop comparison for every target up to the probe
/// depth, with the truncation trace attached per row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedLoopReport {
    pub config: ReportConfig,
    pub distinct_types: usize,
    pub gap_alert_threshold: String,
    pub max_abs_gap: String,
    pub rows: Vec<ReportRow>,
}

/// Gap size above which a closed-loop row is flagged.
fn gap_alert() -> Rat {
    Rat::new(1.into(), 50.into())
}

/// Run the full loop: sample, tally, build empirical moments, invert them at
/// every `nu` with `|nu| <= probe_depth`, and report empirical frequency,
/// inverted estimate, and the gap between them.
pub fn closed_loop_report(config: &SimConfig, probe_depth: u64) -> Result<ClosedLoopReport> {
    let source = |idx: u64| matrix_for_index(config, idx);
    closed_loop_report_with(config, probe_depth, &source)
}

/// [`closed_loop_report`] with an explicit matrix source (test hook).
pub fn closed_loop_report_with(
    config: &SimConfig,
    probe_depth: u64,
    source: &(dyn Fn(u64) -> MatrixMod + Sync),
) -> Result<ClosedLoopReport> {
    let probe = enumerate_up_to(probe_depth);
    let (dist, table) = sample_empirical_with(config, &probe, source)?;

    // moments vanish once mu needs more cyclic factors than the matrix has
    // rows, so capping the first column at n + 1 loses nothing
    let base_cap = config.n as u32 + 1;
    let threshold = gap_alert();
    let mut rows = Vec::new();
    let mut max_gap = Rat::zero();
    for nu in &probe {
        let cap = base_cap.max(nu.conjugate().part(1));
        let (value, diagnostics) = invert(&table, nu, config.p, &TruncationPolicy::cap(cap))?;
        let empirical = dist.mass(nu);
        let gap = (&empirical - &value).abs();
        if gap > max_gap {
            max_gap = gap.clone();
        }
        rows.push(ReportRow {
            nu: nu.clone(),
            empirical: rat_string(&empirical),
            inverted: rat_string(&value),
            abs_gap: rat_string(&gap),
            flagged: gap > threshold,
            diagnostics,
        });
    }
    Ok(ClosedLoopReport {
        config: ReportConfig {
            p: config.p,
            d: config.d,
            n: config.n,
            sample_count: config.sample_count,
            seed: config.seed,
        },
        distinct_types: dist.masses().len(),
        gap_alert_threshold: rat_string(&threshold),
        max_abs_gap: rat_string(&max_gap),
        rows,
    })
}

//! Moments of a random abelian p-group and the inverse problem: recovering
//! the distribution from a table of surjection moments.
//!
//! The forward direction is a finite mass-weighted sum of closed-form
//! surjection counts. The inverse direction sums, over all `mu` whose
//! conjugate interlaces above `conjugate(nu)`, the product of an explicit
//! coefficient and the moment `M_mu`. That domain is finite in every
//! coordinate except the first column height of `mu`, so truncation policy
//! is an explicit, visible part of the API:
//!
//! * `exact-finite-support` — the table is a complete finite map (moments of
//!   a finitely supported distribution vanish off the downward closure of
//!   the support), so the sum is provably finite and the answer exact;
//! * `cap` — sum the column blocks up to a fixed first-column height and
//!   report the partial-sum trace; the tail is not certified;
//! * `adaptive` — raise the cap until a window of consecutive blocks falls
//!   below a tolerance. A stopping rule, not a proof: absolute convergence
//!   of the full series is an assumption the caller owns, and the
//!   diagnostics say so.
//!
//! Sub-probability outputs are reported as they are, never renormalized.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group_oracle::exact_moment;
use crate::hall_littlewood::inversion_coefficient;
use crate::partitions::{conjugate_interlacing_block, partitions_between, Partition};
use crate::scalar::{rat_opt_serde, rat_string, rat_vec_serde, Rat};
use crate::Result;

/// A (sub-)probability distribution over partition types: nonnegative
/// rational masses with total at most 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    masses: BTreeMap<Partition, Rat>,
}

impl Distribution {
    pub fn new(masses: BTreeMap<Partition, Rat>) -> Result<Self> {
        let mut total = Rat::zero();
        for (nu, m) in &masses {
            if m.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative mass {} at {nu}",
                    rat_string(m)
                )));
            }
            total += m;
        }
        if total > Rat::one() {
            return Err(Error::InvalidDistribution(format!(
                "total mass {} exceeds 1",
                rat_string(&total)
            )));
        }
        let masses = masses.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(Distribution { masses })
    }

    pub fn point_mass(nu: Partition) -> Self {
        Distribution {
            masses: [(nu, Rat::one())].into(),
        }
    }

    pub fn masses(&self) -> &BTreeMap<Partition, Rat> {
        &self.masses
    }

    pub fn mass(&self, nu: &Partition) -> Rat {
        self.masses.get(nu).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_mass(&self) -> Rat {
        self.masses.values().sum()
    }

    /// True when the total mass falls short of 1 (a truncated or empirical
    /// remainder is unaccounted for).
    pub fn is_sub_probability(&self) -> bool {
        self.total_mass() < Rat::one()
    }
}

/// On-demand moment source for infinite families (e.g. all moments equal 1).
pub type MomentProvider = Arc<dyn Fn(&Partition) -> Rat + Send + Sync>;

/// A table of moments `M_mu` over a fixed modulus `p`, as a finite map plus
/// an optional provider consulted for partitions outside the map.
#[derive(Clone)]
pub struct MomentTable {
    p: u64,
    entries: BTreeMap<Partition, Rat>,
    provider: Option<MomentProvider>,
}

impl std::fmt::Debug for MomentTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MomentTable")
            .field("p", &self.p)
            .field("entries", &self.entries)
            .field("provider", &self.provider.is_some())
            .finish()
    }
}

impl MomentTable {
    pub fn new(p: u64, entries: BTreeMap<Partition, Rat>) -> Result<Self> {
        Self::build(p, entries, None)
    }

    pub fn with_provider(
        p: u64,
        entries: BTreeMap<Partition, Rat>,
        provider: MomentProvider,
    ) -> Result<Self> {
        Self::build(p, entries, Some(provider))
    }

    /// The table with every moment equal to 1.
    pub fn all_ones(p: u64) -> Result<Self> {
        Self::build(
            p,
            BTreeMap::new(),
            Some(Arc::new(|_: &Partition| Rat::one())),
        )
    }

    fn build(
        p: u64,
        entries: BTreeMap<Partition, Rat>,
        provider: Option<MomentProvider>,
    ) -> Result<Self> {
        if p < 2 {
            return Err(Error::TableMismatch(format!(
                "modulus must be at least 2, got {p}"
            )));
        }
        for (mu, v) in &entries {
            if v.is_negative() {
                return Err(Error::TableMismatch(format!(
                    "negative moment {} at {mu}",
                    rat_string(v)
                )));
            }
        }
        Ok(MomentTable {
            p,
            entries,
            provider,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &BTreeMap<Partition, Rat> {
        &self.entries
    }

    pub fn has_provider(&self) -> bool {
        self.provider.is_some()
    }

    /// Look up a moment: stored entries first, then the provider.
    pub fn get(&self, mu: &Partition) -> Option<Rat> {
        if let Some(v) = self.entries.get(mu) {
            return Some(v.clone());
        }
        self.provider.as_ref().map(|f| f(mu))
    }
}

#[derive(Serialize, Deserialize)]
struct MomentEntryJson {
    partition: Partition,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct MomentTableJson {
    p: u64,
    entries: Vec<MomentEntryJson>,
}

impl Serialize for MomentTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // the provider is a closure and cannot travel; only the finite map is written
        let json = MomentTableJson {
            p: self.p,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| MomentEntryJson {
                    partition: k.clone(),
                    value: rat_string(v),
                })
                .collect(),
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MomentTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = MomentTableJson::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in json.entries {
            let v = crate::scalar::parse_rat(&e.value).map_err(serde::de::Error::custom)?;
            entries.insert(e.partition, v);
        }
        MomentTable::new(json.p, entries).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Distribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct DistJson<'a> {
            entries: Vec<MomentEntryJsonRef<'a>>,
        }
        #[derive(Serialize)]
        struct MomentEntryJsonRef<'a> {
            partition: &'a Partition,
            value: String,
        }
        DistJson {
            entries: self
                .masses
                .iter()
                .map(|(k, v)| MomentEntryJsonRef {
                    partition: k,
                    value: rat_string(v),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct DistJson {
            entries: Vec<MomentEntryJson>,
        }
        let json = DistJson::deserialize(d)?;
        let mut masses = BTreeMap::new();
        for e in json.entries {
            let v = crate::scalar::parse_rat(&e.value).map_err(serde::de::Error::custom)?;
            masses.insert(e.partition, v);
        }
        Distribution::new(masses).map_err(serde::de::Error::custom)
    }
}

/// How to handle the one unbounded direction of the summation domain.
#[derive(Clone, Debug, PartialEq)]
pub enum TruncationMode {
    /// Treat the table as the complete list of nonzero moments; the sum is
    /// then finite and exact. Requires a plain table with no provider.
    ExactFiniteSupport,
    /// Sum column blocks for first-column heights up to the cap, verbatim.
    Cap(u32),
    /// Raise the cap until `window` consecutive blocks each stay below
    /// `tolerance` in absolute value, up to `hard_cap`. Heuristic by
    /// construction; failure is an error carrying the trace, not a value.
    Adaptive {
        tolerance: Rat,
        window: u32,
        hard_cap: u32,
    },
}

/// Truncation mode plus whether to record the partial-sum trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub mode: TruncationMode,
    pub report_partial_sums: bool,
}

impl TruncationPolicy {
    pub fn exact() -> Self {
        TruncationPolicy {
            mode: TruncationMode::ExactFiniteSupport,
            report_partial_sums: true,
        }
    }

    pub fn cap(first_column_cap: u32) -> Self {
        TruncationPolicy {
            mode: TruncationMode::Cap(first_column_cap),
            report_partial_sums: true,
        }
    }

    pub fn adaptive(tolerance: Rat, window: u32, hard_cap: u32) -> Self {
        TruncationPolicy {
            mode: TruncationMode::Adaptive {
                tolerance,
                window,
                hard_cap,
            },
            report_partial_sums: true,
        }
    }

    pub fn without_partial_sums(mut self) -> Self {
        self.report_partial_sums = false;
        self
    }
}

/// What an inversion did: which mode ran, how far it summed, the
/// partial-sum trace, and any caveats about what the number means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub mode: String,
    pub cap: Option<u32>,
    #[serde(with = "rat_vec_serde")]
    pub partial_sums: Vec<Rat>,
    #[serde(with = "rat_opt_serde")]
    pub last_block: Option<Rat>,
    pub terms: usize,
    pub converged: bool,
    pub notes: Vec<String>,
}

/// Moments of a finitely supported distribution for each requested `mu`,
/// through the closed-form surjection count (no group enumeration).
pub fn moments_from_distribution(
    dist: &Distribution,
    p: u64,
    mu_list: &[Partition],
) -> Result<MomentTable> {
    let mut entries = BTreeMap::new();
    for mu in mu_list {
        if entries.contains_key(mu) {
            continue;
        }
        entries.insert(mu.clone(), exact_moment(dist, mu, p)?);
    }
    MomentTable::new(p, entries)
}

/// The downward closure of the support: every `mu` contained in some
/// support element. Moments vanish off this set, so a table over it is a
/// complete description of the distribution's moments.
pub fn moment_probe_set(dist: &Distribution) -> Vec<Partition> {
    let mut set: std::collections::BTreeSet<Partition> = std::collections::BTreeSet::new();
    set.insert(Partition::empty());
    for nu in dist.masses().keys() {
        for mu in partitions_between(&Partition::empty(), nu) {
            set.insert(mu);
        }
    }
    set.into_iter().collect()
}

/// Complete moment table of a finitely supported distribution: the probe
/// set is the downward closure of the support, so exact-finite-support
/// inversion of this table is exact.
pub fn complete_moment_table(dist: &Distribution, p: u64) -> Result<MomentTable> {
    moments_from_distribution(dist, p, &moment_probe_set(dist))
}

/// Recover `Pr(G = G_nu)` from the moment table.
pub fn invert(
    table: &MomentTable,
    nu: &Partition,
    p: u64,
    policy: &TruncationPolicy,
) -> Result<(Rat, Diagnostics)> {
    invert_impl(table, nu, p, None, policy)
}

/// Recover `Pr(G/p^d G = G_nu)` from moments of `p^d`-torsion types: the
/// same series with the domain restricted to `mu` with parts at most `d`.
/// `nu` itself must have parts at most `d`.
pub fn invert_fixed_level(
    table: &MomentTable,
    nu: &Partition,
    p: u64,
    d: u32,
    policy: &TruncationPolicy,
) -> Result<(Rat, Diagnostics)> {
    if d == 0 {
        return Err(Error::ParameterDomain("level d must be positive".into()));
    }
    if nu.part(1) > d {
        return Err(Error::ParameterDomain(format!(
            "nu = {nu} has a part above the level d = {d}"
        )));
    }
    invert_impl(table, nu, p, Some(d), policy)
}

fn t_of(p: u64) -> Rat {
    Rat::new(1.into(), p.into())
}

fn invert_impl(
    table: &MomentTable,
    nu: &Partition,
    p: u64,
    level: Option<u32>,
    policy: &TruncationPolicy,
) -> Result<(Rat, Diagnostics)> {
    if table.p() != p {
        return Err(Error::TableMismatch(format!(
            "table is over modulus {}, inversion requested at {p}",
            table.p()
        )));
    }
    let t = t_of(p);
    match &policy.mode {
        TruncationMode::ExactFiniteSupport => {
            if table.has_provider() {
                return Err(Error::TableMismatch(
                    "exact-finite-support mode requires a plain finite table; \
                     a provider implies an infinite family"
                        .into(),
                ));
            }
            let mut acc = Rat::zero();
            let mut partial = Vec::new();
            let mut terms = 0usize;
            for (mu, m) in table.entries() {
                if let Some(d) = level {
                    if mu.part(1) > d {
                        continue;
                    }
                }
                if m.is_zero() {
                    continue;
                }
                let coeff = inversion_coefficient(nu, mu, &t)?;
                if coeff.is_zero() {
                    continue;
                }
                acc += coeff * m;
                terms += 1;
                if policy.report_partial_sums {
                    partial.push(acc.clone());
                }
            }
            let mut diag = Diagnostics {
                mode: mode_name("exact-finite-support", level),
                cap: None,
                partial_sums: partial,
                last_block: None,
                terms,
                converged: true,
                notes: vec![
                    "table treated as the complete list of nonzero moments; \
                     the sum is finite and the value exact under that reading"
                        .into(),
                ],
            };
            note_range(&acc, &mut diag);
            Ok((acc, diag))
        }
        TruncationMode::Cap(cap) => {
            let (acc, diag) = capped_sum(table, nu, &t, level, *cap, policy, None)?;
            Ok((acc, diag))
        }
        TruncationMode::Adaptive {
            tolerance,
            window,
            hard_cap,
        } => {
            if !tolerance.is_positive() {
                return Err(Error::ParameterDomain(
                    "adaptive tolerance must be positive".into(),
                ));
            }
            if *window == 0 {
                return Err(Error::ParameterDomain(
                    "adaptive window must be at least 1".into(),
                ));
            }
            capped_sum(
                table,
                nu,
                &t,
                level,
                *hard_cap,
                policy,
                Some((tolerance.clone(), *window)),
            )
        }
    }
}

fn mode_name(base: &str, level: Option<u32>) -> String {
    match level {
        Some(d) => format!("{base} (level {d})"),
        None => base.to_string(),
    }
}

fn note_range(value: &Rat, diag: &mut Diagnostics) {
    if value.is_negative() || *value > Rat::one() {
        diag.notes.push(format!(
            "value {} lies outside [0, 1]: truncation error or a non-probability moment table",
            rat_string(value)
        ));
    }
}

/// Column-block summation shared by cap and adaptive modes. With a stopping
/// rule the sum ends early once `window` consecutive blocks each stay below
/// the tolerance; hitting the cap without that is a non-convergence error.
fn capped_sum(
    table: &MomentTable,
    nu: &Partition,
    t: &Rat,
    level: Option<u32>,
    cap: u32,
    policy: &TruncationPolicy,
    stop_rule: Option<(Rat, u32)>,
) -> Result<(Rat, Diagnostics)> {
    let start = nu.conjugate().part(1);
    if cap < start {
        return Err(Error::EmptyDomain {
            cap,
            required: start,
        });
    }
    let adaptive = stop_rule.is_some();
    let mut acc = Rat::zero();
    let mut partial = Vec::new();
    let mut terms = 0usize;
    let mut last_block = None;
    let mut recent: VecDeque<Rat> = VecDeque::new();
    let mut converged = !adaptive;
    let mut reached = start;
    for c in start..=cap {
        reached = c;
        let mut block = Rat::zero();
        for mu in conjugate_interlacing_block(nu, c, level) {
            let m = table
                .get(&mu)
                .ok_or_else(|| Error::MissingMoment(mu.to_string()))?;
            if m.is_zero() {
                continue;
            }
            let coeff = inversion_coefficient(nu, &mu, t)?;
            if coeff.is_zero() {
                continue;
            }
            block += coeff * m;
            terms += 1;
        }
        acc += &block;
        if policy.report_partial_sums {
            partial.push(acc.clone());
        }
        last_block = Some(block.clone());
        if let Some((tolerance, window)) = &stop_rule {
            recent.push_back(block.abs());
            if recent.len() > *window as usize {
                recent.pop_front();
            }
            if recent.len() == *window as usize && recent.iter().all(|b| b < tolerance) {
                converged = true;
                break;
            }
        }
    }
    let mut diag = Diagnostics {
        mode: mode_name(if adaptive { "adaptive" } else { "cap" }, level),
        cap: Some(reached),
        partial_sums: partial,
        last_block,
        terms,
        converged,
        notes: Vec::new(),
    };
    if adaptive {
        diag.notes.push(
            "adaptive stopping is a heuristic on block magnitudes; it assumes the \
             series converges absolutely, which finitely many moments cannot certify"
                .into(),
        );
        if !converged {
            return Err(Error::AdaptiveNonConvergence(Box::new(diag)));
        }
    } else {
        diag.notes
            .push("cap truncation: the tail beyond the cap is not certified".into());
    }
    note_range(&acc, &mut diag);
    Ok((acc, diag))
}

/// Moments over several moduli at once, either as a dense map on tuples of
/// partitions or as a tensor product of per-modulus tables (exact for
/// independent components, and the cheaper form).
#[derive(Clone, Debug)]
pub enum MultiMomentTable {
    Dense {
        primes: Vec<u64>,
        entries: BTreeMap<Vec<Partition>, Rat>,
    },
    Tensor {
        factors: Vec<MomentTable>,
    },
}

impl MultiMomentTable {
    pub fn dense(primes: Vec<u64>, entries: BTreeMap<Vec<Partition>, Rat>) -> Result<Self> {
        check_primes(&primes)?;
        for (tuple, v) in &entries {
            if tuple.len() != primes.len() {
                return Err(Error::TableMismatch(format!(
                    "tuple of {} partitions in a table over {} moduli",
                    tuple.len(),
                    primes.len()
                )));
            }
            if v.is_negative() {
                return Err(Error::TableMismatch("negative moment".into()));
            }
        }
        Ok(MultiMomentTable::Dense { primes, entries })
    }

    pub fn tensor(factors: Vec<MomentTable>) -> Result<Self> {
        check_primes(&factors.iter().map(|f| f.p()).collect::<Vec<_>>())?;
        Ok(MultiMomentTable::Tensor { factors })
    }

    pub fn primes(&self) -> Vec<u64> {
        match self {
            MultiMomentTable::Dense { primes, .. } => primes.clone(),
            MultiMomentTable::Tensor { factors } => factors.iter().map(|f| f.p()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TupleEntryJson {
    partitions: Vec<Partition>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct MultiTableJson {
    primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<TupleEntryJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<MomentTable>>,
}

impl Serialize for MultiMomentTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match self {
            MultiMomentTable::Dense { primes, entries } => MultiTableJson {
                primes: primes.clone(),
                entries: Some(
                    entries
                        .iter()
                        .map(|(k, v)| TupleEntryJson {
                            partitions: k.clone(),
                            value: rat_string(v),
                        })
                        .collect(),
                ),
                factors: None,
            },
            MultiMomentTable::Tensor { factors } => MultiTableJson {
                primes: self.primes(),
                entries: None,
                factors: Some(factors.clone()),
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiMomentTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = MultiTableJson::deserialize(d)?;
        match (json.entries, json.factors) {
            (Some(entries), None) => {
                let mut map = BTreeMap::new();
                for e in entries {
                    let v = crate::scalar::parse_rat(&e.value).map_err(serde::de::Error::custom)?;
                    map.insert(e.partitions, v);
                }
                MultiMomentTable::dense(json.primes, map).map_err(serde::de::Error::custom)
            }
            (None, Some(factors)) => {
                let table =
                    MultiMomentTable::tensor(factors).map_err(serde::de::Error::custom)?;
                if table.primes() != json.primes {
                    return Err(serde::de::Error::custom(
                        "factor moduli disagree with the primes list",
                    ));
                }
                Ok(table)
            }
            _ => Err(serde::de::Error::custom(
                "exactly one of `entries` (dense) or `factors` (tensor) must be present",
            )),
        }
    }
}

fn check_primes(primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::TableMismatch("empty modulus list".into()));
    }
    for (i, p) in primes.iter().enumerate() {
        if *p < 2 {
            return Err(Error::TableMismatch(format!("modulus {p} below 2")));
        }
        if primes[..i].contains(p) {
            return Err(Error::DuplicatePrimes);
        }
    }
    Ok(())
}

/// Moments of a product of independent per-modulus distributions, laid out
/// as a dense tuple map over the product of probe sets.
pub fn dense_moments_from_product(
    dists: &[Distribution],
    primes: &[u64],
) -> Result<MultiMomentTable> {
    if dists.len() != primes.len() {
        return Err(Error::TableMismatch(
            "one distribution per modulus required".into(),
        ));
    }
    let factor_tables: Vec<MomentTable> = dists
        .iter()
        .zip(primes)
        .map(|(d, &p)| complete_moment_table(d, p))
        .collect::<Result<_>>()?;
    let mut entries: BTreeMap<Vec<Partition>, Rat> = BTreeMap::new();
    let mut stack: Vec<(Vec<Partition>, Rat)> = vec![(Vec::new(), Rat::one())];
    for table in &factor_tables {
        let mut next = Vec::new();
        for (prefix, value) in &stack {
            for (mu, m) in table.entries() {
                let mut tuple = prefix.clone();
                tuple.push(mu.clone());
                next.push((tuple, value * m));
            }
        }
        stack = next;
    }
    for (tuple, value) in stack {
        entries.insert(tuple, value);
    }
    MultiMomentTable::dense(primes.to_vec(), entries)
}

/// Tensor-form moments of a product of independent per-modulus
/// distributions.
pub fn tensor_moments_from_product(
    dists: &[Distribution],
    primes: &[u64],
) -> Result<MultiMomentTable> {
    if dists.len() != primes.len() {
        return Err(Error::TableMismatch(
            "one distribution per modulus required".into(),
        ));
    }
    MultiMomentTable::tensor(
        dists
            .iter()
            .zip(primes)
            .map(|(d, &p)| complete_moment_table(d, p))
            .collect::<Result<_>>()?,
    )
}

/// Multi-modulus inversion: the same series with one interlacing domain per
/// modulus and the per-modulus coefficients multiplied.
///
/// Dense tables run in exact-finite-support or cap mode; tensor tables
/// factor into per-modulus inversions whose values multiply exactly.
pub fn invert_multi(
    table: &MultiMomentTable,
    nu_tuple: &[Partition],
    primes: &[u64],
    policy: &TruncationPolicy,
) -> Result<(Rat, Diagnostics)> {
    check_primes(primes)?;
    if table.primes() != primes {
        return Err(Error::TableMismatch(format!(
            "table moduli {:?} differ from requested {:?}",
            table.primes(),
            primes
        )));
    }
    if nu_tuple.len() != primes.len() {
        return Err(Error::TableMismatch(format!(
            "{} target partitions for {} moduli",
            nu_tuple.len(),
            primes.len()
        )));
    }
    match table {
        MultiMomentTable::Tensor { factors } => {
            let mut value = Rat::one();
            let mut terms = 0;
            let mut converged = true;
            let mut notes =
                vec!["tensor table: per-modulus inversions multiplied exactly".to_string()];
            for ((factor, nu), &p) in factors.iter().zip(nu_tuple).zip(primes) {
                let (v, d) = invert(factor, nu, p, policy)?;
                terms += d.terms;
                converged &= d.converged;
                notes.push(format!(
                    "modulus {p}: value {} via {} ({} terms)",
                    rat_string(&v),
                    d.mode,
                    d.terms
                ));
                value *= v;
            }
            let mut diag = Diagnostics {
                mode: "tensor-product".into(),
                cap: None,
                partial_sums: Vec::new(),
                last_block: None,
                terms,
                converged,
                notes,
            };
            note_range(&value, &mut diag);
            Ok((value, diag))
        }
        MultiMomentTable::Dense { entries, .. } => match &policy.mode {
            TruncationMode::ExactFiniteSupport => {
                let ts: Vec<Rat> = primes.iter().map(|&p| t_of(p)).collect();
                let mut acc = Rat::zero();
                let mut partial = Vec::new();
                let mut terms = 0usize;
                for (tuple, m) in entries {
                    if m.is_zero() {
                        continue;
                    }
                    let mut coeff = Rat::one();
                    for ((mu, nu), t) in tuple.iter().zip(nu_tuple).zip(&ts) {
                        coeff *= inversion_coefficient(nu, mu, t)?;
                        if coeff.is_zero() {
                            break;
                        }
                    }
                    if coeff.is_zero() {
                        continue;
                    }
                    acc += coeff * m;
                    terms += 1;
                    if policy.report_partial_sums {
                        partial.push(acc.clone());
                    }
                }
                let mut diag = Diagnostics {
                    mode: "multi exact-finite-support".into(),
                    cap: None,
                    partial_sums: partial,
                    last_block: None,
                    terms,
                    converged: true,
                    notes: vec!["dense tuple table treated as complete".into()],
                };
                note_range(&acc, &mut diag);
                Ok((acc, diag))
            }
            TruncationMode::Cap(cap) => {
                let ts: Vec<Rat> = primes.iter().map(|&p| t_of(p)).collect();
                let mut domains: Vec<Vec<Partition>> = Vec::new();
                for nu in nu_tuple {
                    domains.push(crate::partitions::enumerate_conjugate_interlacing(
                        nu, *cap,
                    )?);
                }
                let mut acc = Rat::zero();
                let mut terms = 0usize;
                let mut partial = Vec::new();
                let mut tuple_indices = vec![0usize; domains.len()];
                loop {
                    let tuple: Vec<Partition> = tuple_indices
                        .iter()
                        .zip(&domains)
                        .map(|(&i, d)| d[i].clone())
                        .collect();
                    let m = entries
                        .get(&tuple)
                        .ok_or_else(|| Error::MissingMoment(format!("{tuple:?}")))?;
                    if !m.is_zero() {
                        let mut coeff = Rat::one();
                        for ((mu, nu), t) in tuple.iter().zip(nu_tuple).zip(&ts) {
                            coeff *= inversion_coefficient(nu, mu, t)?;
                            if coeff.is_zero() {
                                break;
                            }
                        }
                        if !coeff.is_zero() {
                            acc += coeff * m;
                            terms += 1;
                            if policy.report_partial_sums {
                                partial.push(acc.clone());
                            }
                        }
                    }
                    let mut carry = true;
                    for i in 0..tuple_indices.len() {
                        tuple_indices[i] += 1;
                        if tuple_indices[i] < domains[i].len() {
                            carry = false;
                            break;
                        }
                        tuple_indices[i] = 0;
                    }
                    if carry {
                        break;
                    }
                }
                let mut diag = Diagnostics {
                    mode: "multi cap".into(),
                    cap: Some(*cap),
                    partial_sums: partial,
                    last_block: None,
                    terms,
                    converged: false,
                    notes: vec!["cap truncation over the product domain".into()],
                };
                note_range(&acc, &mut diag);
                Ok((acc, diag))
            }
            TruncationMode::Adaptive { .. } => Err(Error::InvalidInput(
                "adaptive truncation is not defined for dense multi-modulus tables; \
                 use cap or exact-finite-support, or the tensor form"
                    .into(),
            )),
        },
    }
}

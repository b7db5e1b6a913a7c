//! Integer partitions and the combinatorial orders the inversion formula
//! sums over.
//!
//! A partition is stored as its weakly decreasing positive parts; trailing
//! zeros are normalized away and indexing past the stored length reads 0.
//! Two partial orders matter here: *containment* (componentwise `<=` of
//! parts) and *interlacing* (`lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...`).
//! The inversion formula's summation domain is interlacing of conjugates,
//! which is finite in every coordinate except the first column height; the
//! enumeration helpers below expose exactly that structure.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::Result;

/// An integer partition: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

/// `C(n, 2)` as a u64.
pub fn binom2(n: u32) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

impl Partition {
    /// The empty partition.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Build from weakly decreasing parts; zeros are stripped.
    /// Errors if the sequence increases anywhere.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts must be weakly decreasing, got {parts:?}"
            )));
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Build from parts in any order.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// The stored parts, largest first, no zeros.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// 1-based part access; indices beyond the length read 0,
    /// matching the eventually-zero-sequence convention.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 || i > self.parts.len() {
            0
        } else {
            self.parts[i - 1]
        }
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Sum of the parts.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// True for the empty partition.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of parts equal to `i` (for `i >= 1`).
    pub fn multiplicity(&self, i: u32) -> u32 {
        debug_assert!(i >= 1);
        self.parts.iter().filter(|&&p| p == i).count() as u32
    }

    /// The conjugate partition: part `i` of the result counts the parts of
    /// `self` that are `>= i` (reflection of the Ferrers diagram).
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(1) as usize;
        let mut conj = Vec::with_capacity(cols);
        for i in 1..=cols {
            conj.push(self.parts.iter().filter(|&&p| p >= i as u32).count() as u32);
        }
        Partition { parts: conj }
    }

    /// The statistic `sum_i (i-1) * part_i`, which also equals
    /// `sum_i C(conjugate_i, 2)`.
    pub fn n_stat(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// Containment of Ferrers diagrams: every part of `self` fits inside the
    /// corresponding part of `other`.
    pub fn contained_in(&self, other: &Partition) -> bool {
        contains(self, other)
    }
}

/// True iff `mu_i <= lambda_i` for all `i` (Ferrers-diagram containment).
pub fn contains(mu: &Partition, lambda: &Partition) -> bool {
    (1..=mu.length()).all(|i| mu.part(i) <= lambda.part(i))
}

/// True iff `lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...`.
pub fn interlaces(mu: &Partition, lambda: &Partition) -> bool {
    let n = mu.length().max(lambda.length());
    (1..=n).all(|i| mu.part(i) <= lambda.part(i) && mu.part(i) >= lambda.part(i + 1))
}

/// All partitions of exactly `n`, in descending lexicographic order:
/// `(n)` first, the all-ones partition last.
pub fn partitions_of(n: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    gen_desc(n, n.min(u32::MAX as u64) as u32, &mut prefix, &mut out);
    out
}

fn gen_desc(remaining: u64, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: prefix.clone(),
        });
        return;
    }
    let hi = (max_part as u64).min(remaining) as u32;
    for p in (1..=hi).rev() {
        prefix.push(p);
        gen_desc(remaining - p as u64, p, prefix, out);
        prefix.pop();
    }
}

/// All partitions of size at most `max_size`, each exactly once, graded by
/// size and in descending lexicographic order within each grade. The order
/// is fixed so serialized output is byte-stable.
pub fn enumerate_up_to(max_size: u64) -> Vec<Partition> {
    (0..=max_size).flat_map(partitions_of).collect()
}

/// The partitions `mu` with `conjugate(mu)` interlacing above
/// `conjugate(nu)` and exactly `first_col` parts (i.e. `mu'_1 = first_col`).
///
/// When `level = Some(d)`, restricts to `mu` with parts at most `d`
/// (equivalently `mu'_{d+1} = 0`); callers must have checked
/// `nu_1 <= d` beforehand. Deterministic odometer order over the
/// conjugate coordinates.
pub fn conjugate_interlacing_block(
    nu: &Partition,
    first_col: u32,
    level: Option<u32>,
) -> Vec<Partition> {
    let nu_conj = nu.conjugate();
    let positions = nu_conj.length() + 1; // mu' can add at most one column
    let nu_c = |i: usize| nu_conj.part(i);
    if first_col < nu_c(1) {
        return Vec::new();
    }
    if let Some(d) = level {
        if positions > d as usize + 1 {
            // nu has parts above d; no mu in the level-d set interlaces it
            return Vec::new();
        }
    }

    let mut out = Vec::new();
    let mut cols = vec![0u32; positions];
    cols[0] = first_col;

    fn rec(
        i: usize,
        positions: usize,
        cols: &mut Vec<u32>,
        nu_c: &dyn Fn(usize) -> u32,
        level: Option<u32>,
        out: &mut Vec<Partition>,
    ) {
        if i > positions {
            let parts: Vec<u32> = cols.iter().copied().filter(|&c| c > 0).collect();
            // interlacing guarantees the column heights decrease weakly
            let conj = Partition { parts };
            out.push(conj.conjugate());
            return;
        }
        let lo = nu_c(i);
        let hi = nu_c(i - 1);
        for v in lo..=hi {
            if let Some(d) = level {
                if i > d as usize && v > 0 {
                    continue;
                }
            }
            cols[i - 1] = v;
            rec(i + 1, positions, cols, nu_c, level, out);
        }
        cols[i - 1] = 0;
    }

    if positions == 1 {
        // nu is empty: mu' is the single column (first_col)
        let parts: Vec<u32> = if first_col > 0 { vec![first_col] } else { vec![] };
        let conj = Partition { parts };
        return vec![conj.conjugate()];
    }
    rec(2, positions, &mut cols, &nu_c, level, &mut out);
    out
}

/// All `mu` whose conjugate interlaces above `conjugate(nu)` with first
/// column height at most `first_column_cap`. Errors when the cap is below
/// `nu'_1`, which would make even `mu = nu` unreachable.
///
/// Blocks are emitted in increasing first-column order; within a block the
/// order is the odometer order of [`conjugate_interlacing_block`].
pub fn enumerate_conjugate_interlacing(
    nu: &Partition,
    first_column_cap: u32,
) -> Result<Vec<Partition>> {
    let required = nu.conjugate().part(1);
    if first_column_cap < required {
        return Err(Error::EmptyDomain {
            cap: first_column_cap,
            required,
        });
    }
    Ok((required..=first_column_cap)
        .flat_map(|c| conjugate_interlacing_block(nu, c, None))
        .collect())
}

/// All partitions `mu` with `lo` contained in `mu` contained in `hi`.
pub fn partitions_between(lo: &Partition, hi: &Partition) -> Vec<Partition> {
    if !contains(lo, hi) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut prefix: Vec<u32> = Vec::new();
    fn rec(i: usize, lo: &Partition, hi: &Partition, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i > hi.length() {
            out.push(Partition {
                parts: prefix.iter().copied().filter(|&p| p > 0).collect(),
            });
            return;
        }
        let upper = if i == 1 {
            hi.part(1)
        } else {
            hi.part(i).min(prefix[i - 2])
        };
        for v in lo.part(i)..=upper {
            prefix.push(v);
            rec(i + 1, lo, hi, prefix, out);
            prefix.pop();
        }
    }
    rec(1, lo, hi, &mut prefix, &mut out);
    out
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic order: first by size, then part-by-part
/// (absent parts compare as 0). Within a grade this is the
/// lexicographic order used to triangularize symmetric-function bases.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| {
            let n = self.length().max(other.length());
            for i in 1..=n {
                match self.part(i).cmp(&other.part(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// Convenience constructor for literals in tests and examples.
pub fn ptn(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("literal partition must be weakly decreasing")
}

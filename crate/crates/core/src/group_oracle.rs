//! Brute-force finite abelian p-group computations used as ground truth.
//!
//! Groups of type `lambda` are presented by generators `g_i` of order
//! `p^{lambda_i}`; a homomorphism into `G_mu` is a tuple of images, one per
//! generator, each annihilated by the generator's order. Surjectivity is
//! decided by generating the subgroup the images span (iterative closure
//! over addition) and comparing orders — no formulas from the closed-form
//! side are involved, which is what makes this an independent oracle.
//!
//! Two exact strategies share that definition:
//!  * plain enumeration of every candidate tuple, used while the candidate
//!    count fits the configured budget;
//!  * a count-preserving sweep that processes one generator at a time and
//!    groups candidate prefixes by the subgroup they generate, used when the
//!    tuple space is too large to walk directly. Both count exactly the same
//!    maps; they are cross-checked against each other in the tests.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Error;
use crate::hall_littlewood::surjection_count;
use crate::inversion::Distribution;
use crate::partitions::Partition;
use crate::scalar::Rat;
use crate::Result;

/// Default budget for plain tuple enumeration: `|G_mu|^{len(lambda)}`
/// candidate maps.
pub const DEFAULT_MAP_BUDGET: u64 = 10_000_000;

/// Candidate count past which the grouped sweep takes over from plain
/// enumeration even when the budget would allow walking the tuples.
const NAIVE_CROSSOVER: u64 = 200_000;
/// Largest group order the grouped sweep will precompute addition tables for.
const MAX_DP_GROUP_ORDER: u64 = 512;
/// Safety valve on distinct subgroup states during the grouped sweep.
const MAX_DP_STATES: usize = 200_000;

/// The isomorphism type of a finite abelian group over `p`:
/// a direct sum of cyclic factors `Z/p^{lambda_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupType {
    pub lambda: Partition,
    pub p: u64,
}

impl AbelianGroupType {
    pub fn new(lambda: Partition, p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::ParameterDomain(format!(
                "group modulus must be at least 2, got {p}"
            )));
        }
        Ok(AbelianGroupType { lambda, p })
    }

    /// `p^{|lambda|}`.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.lambda.size() as u32)
    }
}

/// Elements of `G_mu` as mixed-radix codes: coordinate `j` runs modulo
/// `p^{mu_j}`.
struct GroupTable {
    moduli: Vec<u64>,
    weights: Vec<u64>,
    order: u64,
    p: u64,
    exps: Vec<u32>,
}

impl GroupTable {
    fn new(mu: &Partition, p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::ParameterDomain(format!(
                "group modulus must be at least 2, got {p}"
            )));
        }
        let mut moduli = Vec::with_capacity(mu.length());
        let mut weights = Vec::with_capacity(mu.length());
        let mut order: u64 = 1;
        for &e in mu.parts() {
            let m = p.checked_pow(e).ok_or_else(|| Error::BudgetExceeded {
                needed: format!("{p}^{e} elements in one coordinate"),
                budget: u64::MAX,
            })?;
            weights.push(order);
            order = order.checked_mul(m).ok_or_else(|| Error::BudgetExceeded {
                needed: format!("group order {p}^{}", mu.size()),
                budget: u64::MAX,
            })?;
            moduli.push(m);
        }
        Ok(GroupTable {
            moduli,
            weights,
            order,
            p,
            exps: mu.parts().to_vec(),
        })
    }

    fn decode(&self, mut code: u64) -> Vec<u64> {
        let mut coords = Vec::with_capacity(self.moduli.len());
        for m in &self.moduli {
            coords.push(code % m);
            code /= m;
        }
        coords
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let mut out = 0u64;
        let mut ra = a;
        let mut rb = b;
        for (j, m) in self.moduli.iter().enumerate() {
            let s = (ra % m + rb % m) % m;
            out += s * self.weights[j];
            ra /= m;
            rb /= m;
        }
        out
    }

    /// Codes of elements annihilated by `p^a`: coordinate `j` ranges over
    /// the multiples of `p^{max(0, mu_j - a)}`.
    fn torsion_codes(&self, a: u32) -> Vec<u64> {
        let mut codes = vec![0u64];
        for (j, &m) in self.moduli.iter().enumerate() {
            let step = if self.exps[j] > a {
                self.p.pow(self.exps[j] - a)
            } else {
                1
            };
            let count = m / step;
            let mut next = Vec::with_capacity(codes.len() * count as usize);
            for &c in &codes {
                for k in 0..count {
                    next.push(c + k * step * self.weights[j]);
                }
            }
            codes = next;
        }
        codes
    }

    /// Smallest `a` with `p^a * y = 0`.
    fn order_exponent(&self, y: u64) -> u32 {
        let coords = self.decode(y);
        let mut best = 0u32;
        for (j, &c) in coords.iter().enumerate() {
            let mut v = 0u32;
            let mut c = c;
            if c == 0 {
                v = self.exps[j];
            } else {
                while c % self.p == 0 {
                    c /= self.p;
                    v += 1;
                }
            }
            best = best.max(self.exps[j] - v);
        }
        best
    }
}

/// Dense bitset over group element codes.
type Bits = Box<[u64]>;

fn bits_new(order: u64) -> Bits {
    vec![0u64; (order as usize).div_ceil(64)].into_boxed_slice()
}

fn bits_set(b: &mut Bits, i: u64) {
    b[(i / 64) as usize] |= 1u64 << (i % 64);
}

fn bits_get(b: &Bits, i: u64) -> bool {
    b[(i / 64) as usize] >> (i % 64) & 1 == 1
}

fn bits_count(b: &Bits) -> u64 {
    b.iter().map(|w| w.count_ones() as u64).sum()
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x & !y == 0)
}

fn bits_or_assign(a: &mut Bits, b: &Bits) {
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x |= y;
    }
}

/// Reusable surjection counter onto a fixed target group, sharing the
/// discovered subgroup states across all source types. Construction is
/// cheap; state discovery happens on demand and is kept for later calls.
pub struct SurjectionOracle {
    table: GroupTable,
    add_perm: Vec<u32>,
    states: HashMap<Bits, usize>,
    keys: Vec<Bits>,
    popcounts: Vec<u64>,
    /// per state: aggregated (target state, order exponent, multiplicity)
    transitions: Vec<Option<Vec<(usize, u32, u64)>>>,
}

impl SurjectionOracle {
    pub fn new(mu: &Partition, p: u64) -> Result<Self> {
        let table = GroupTable::new(mu, p)?;
        if table.order > MAX_DP_GROUP_ORDER {
            return Err(Error::BudgetExceeded {
                needed: format!("target group of order {}", table.order),
                budget: MAX_DP_GROUP_ORDER,
            });
        }
        let n = table.order as usize;
        let mut add_perm = vec![0u32; n * n];
        for a in 0..n as u64 {
            for b in 0..n as u64 {
                add_perm[(a * table.order + b) as usize] = table.add(a, b) as u32;
            }
        }
        let mut oracle = SurjectionOracle {
            table,
            add_perm,
            states: HashMap::new(),
            keys: Vec::new(),
            popcounts: Vec::new(),
            transitions: Vec::new(),
        };
        let mut zero = bits_new(oracle.table.order);
        bits_set(&mut zero, 0);
        oracle.intern(zero)?;
        Ok(oracle)
    }

    fn intern(&mut self, key: Bits) -> Result<usize> {
        if let Some(&id) = self.states.get(&key) {
            return Ok(id);
        }
        if self.keys.len() >= MAX_DP_STATES {
            return Err(Error::BudgetExceeded {
                needed: format!("more than {MAX_DP_STATES} subgroup states"),
                budget: MAX_DP_STATES as u64,
            });
        }
        let id = self.keys.len();
        self.states.insert(key.clone(), id);
        self.popcounts.push(bits_count(&key));
        self.keys.push(key);
        self.transitions.push(None);
        Ok(id)
    }

    fn translate(&self, bits: &Bits, y: u64) -> Bits {
        let mut out = bits_new(self.table.order);
        let base = (y * self.table.order) as usize;
        for e in 0..self.table.order {
            if bits_get(bits, e) {
                bits_set(&mut out, self.add_perm[base + e as usize] as u64);
            }
        }
        out
    }

    /// Subgroup generated by the state's subgroup together with `y`.
    fn close_with(&self, bits: &Bits, y: u64) -> Bits {
        let mut acc = bits.clone();
        let mut cur = self.translate(bits, y);
        while !bits_subset(&cur, &acc) {
            bits_or_assign(&mut acc, &cur);
            cur = self.translate(&cur, y);
        }
        acc
    }

    fn transitions_of(&mut self, state: usize) -> Result<&[(usize, u32, u64)]> {
        if self.transitions[state].is_none() {
            let bits = self.keys[state].clone();
            let mut agg: HashMap<(usize, u32), u64> = HashMap::new();
            for y in 0..self.table.order {
                let closed = self.close_with(&bits, y);
                let target = self.intern(closed)?;
                let ord = self.table.order_exponent(y);
                *agg.entry((target, ord)).or_insert(0) += 1;
            }
            let mut list: Vec<(usize, u32, u64)> =
                agg.into_iter().map(|((s, o), c)| (s, o, c)).collect();
            list.sort_unstable();
            self.transitions[state] = Some(list);
        }
        Ok(self.transitions[state].as_ref().unwrap())
    }

    /// Exact number of surjections from the group of type `lambda` onto the
    /// oracle's target, counted by walking generators one at a time and
    /// merging candidate prefixes that generate the same subgroup.
    pub fn count(&mut self, lambda: &Partition) -> Result<BigUint> {
        let mut current: HashMap<usize, u128> = HashMap::new();
        current.insert(0, 1);
        for &a in lambda.parts() {
            let mut next: HashMap<usize, u128> = HashMap::new();
            for (&state, &cnt) in &current {
                // clone to appease the borrow of self in transitions_of
                let trans = self.transitions_of(state)?.to_vec();
                for (target, ord, ways) in trans {
                    if ord <= a {
                        let slot = next.entry(target).or_insert(0);
                        *slot = slot.checked_add(cnt.checked_mul(ways as u128).ok_or_else(
                            || Error::BudgetExceeded {
                                needed: "homomorphism count beyond u128".into(),
                                budget: u64::MAX,
                            },
                        )?)
                        .ok_or_else(|| Error::BudgetExceeded {
                            needed: "homomorphism count beyond u128".into(),
                            budget: u64::MAX,
                        })?;
                    }
                }
            }
            current = next;
        }
        let full = self.table.order;
        let mut total: u128 = 0;
        for (&state, &cnt) in &current {
            if self.popcounts[state] == full {
                total += cnt;
            }
        }
        Ok(BigUint::from(total))
    }
}

/// Plain enumeration: walk every candidate tuple of generator images and
/// test surjectivity by closing under addition. Exact, and exactly as slow
/// as it sounds; callers gate it with a budget.
fn naive_sur_count(lambda: &Partition, mu: &Partition, p: u64) -> Result<u128> {
    let table = GroupTable::new(mu, p)?;
    let torsion: Vec<Vec<u64>> = lambda
        .parts()
        .iter()
        .map(|&a| table.torsion_codes(a))
        .collect();
    let full = table.order;
    let mut surjective: u128 = 0;
    let mut idx = vec![0usize; torsion.len()];
    let mut seen = vec![0u64; full as usize]; // generation-stamped membership
    let mut stamp = 0u64;
    let mut stack: Vec<u64> = Vec::with_capacity(full as usize);
    loop {
        // closure of the current tuple
        stamp += 1;
        stack.clear();
        stack.push(0);
        seen[0] = stamp;
        let mut size = 1u64;
        let mut head = 0usize;
        while head < stack.len() {
            let s = stack[head];
            head += 1;
            for (gi, list) in torsion.iter().enumerate() {
                let y = list[idx[gi]];
                let t = table.add(s, y);
                if seen[t as usize] != stamp {
                    seen[t as usize] = stamp;
                    stack.push(t);
                    size += 1;
                }
            }
        }
        if size == full {
            surjective += 1;
        }
        // odometer
        let mut carry = true;
        for gi in 0..torsion.len() {
            idx[gi] += 1;
            if idx[gi] < torsion[gi].len() {
                carry = false;
                break;
            }
            idx[gi] = 0;
        }
        if carry || torsion.is_empty() {
            break;
        }
    }
    Ok(surjective)
}

/// Candidate-map count `|G_mu|^{len(lambda)}` used for the enumeration
/// budget, saturating at `u64::MAX`.
fn candidate_bound(lambda: &Partition, mu: &Partition, p: u64) -> u64 {
    let order_bits = (mu.size() as f64) * (p as f64).log2();
    let total_bits = order_bits * lambda.length() as f64;
    if total_bits >= 63.0 {
        u64::MAX
    } else {
        let order = p.pow(mu.size() as u32);
        order.saturating_pow(lambda.length() as u32)
    }
}

/// Brute-force surjection count with the default enumeration budget.
///
/// Small tuple spaces are enumerated outright; larger ones go through the
/// grouped sweep (same maps, same counts, shared prefixes), falling back to
/// plain enumeration while it still fits the budget. When both are
/// infeasible the call errors rather than sampling: an oracle is exact or
/// absent.
pub fn brute_sur_count(lambda: &Partition, mu: &Partition, p: u64) -> Result<BigUint> {
    brute_sur_count_with_budget(lambda, mu, p, DEFAULT_MAP_BUDGET)
}

/// [`brute_sur_count`] with an explicit tuple-enumeration budget.
pub fn brute_sur_count_with_budget(
    lambda: &Partition,
    mu: &Partition,
    p: u64,
    budget: u64,
) -> Result<BigUint> {
    let bound = candidate_bound(lambda, mu, p);
    if bound <= budget.min(NAIVE_CROSSOVER) {
        return naive_sur_count(lambda, mu, p).map(BigUint::from);
    }
    match SurjectionOracle::new(mu, p) {
        Ok(mut oracle) => oracle.count(lambda),
        // target too large for the sweep's tables, but the tuple space is
        // still within the caller's stated budget: walk it
        Err(Error::BudgetExceeded { .. }) if bound <= budget => {
            naive_sur_count(lambda, mu, p).map(BigUint::from)
        }
        Err(e) => Err(e),
    }
}

/// Total homomorphism count `prod_{i,j} p^{min(lambda_i, mu_j)}`, used by
/// tests as an independent factorization check on the enumeration.
pub fn hom_count(lambda: &Partition, mu: &Partition, p: u64) -> BigUint {
    let mut exp = 0u64;
    for &a in lambda.parts() {
        for &b in mu.parts() {
            exp += a.min(b) as u64;
        }
    }
    BigUint::from(p).pow(exp as u32)
}

/// Exact moment `E[#Sur(G, G_mu)]` of a finitely supported distribution:
/// the mass-weighted sum of closed-form surjection counts.
pub fn exact_moment(dist: &Distribution, mu: &Partition, p: u64) -> Result<Rat> {
    let mut acc = Rat::zero();
    for (nu, mass) in dist.masses() {
        let count = surjection_count(nu, mu, p)?;
        acc += mass * Rat::from_integer(count.into());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_up_to, ptn};
    use crate::scalar::{rat, rat_int};

    #[test]
    fn brute_examples() {
        assert_eq!(brute_sur_count(&ptn(&[1]), &ptn(&[1]), 2).unwrap(), 1u32.into());
        assert_eq!(
            brute_sur_count(&ptn(&[1, 1]), &ptn(&[1]), 2).unwrap(),
            3u32.into()
        );
        assert_eq!(brute_sur_count(&ptn(&[2]), &ptn(&[1]), 3).unwrap(), 2u32.into());
        // no surjection onto a larger group
        assert_eq!(
            brute_sur_count(&ptn(&[1]), &ptn(&[2]), 5).unwrap(),
            BigUint::zero()
        );
        // empty lambda surjects only onto the trivial group
        assert_eq!(
            brute_sur_count(&Partition::empty(), &Partition::empty(), 2).unwrap(),
            1u32.into()
        );
        assert_eq!(
            brute_sur_count(&Partition::empty(), &ptn(&[1]), 2).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn grouped_sweep_agrees_with_plain_enumeration() {
        for (p, max) in [(2u64, 4u64), (3, 3), (5, 2)] {
            for lambda in enumerate_up_to(max) {
                for mu in enumerate_up_to(max) {
                    let plain = BigUint::from(naive_sur_count(&lambda, &mu, p).unwrap());
                    let mut oracle = SurjectionOracle::new(&mu, p).unwrap();
                    let grouped = oracle.count(&lambda).unwrap();
                    assert_eq!(plain, grouped, "p={p} lambda={lambda} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn brute_matches_closed_form_smoke() {
        // the full acceptance ranges run in the acceptance suite
        for (p, max) in [(2u64, 4u64), (3, 3)] {
            for lambda in enumerate_up_to(max) {
                for mu in enumerate_up_to(max) {
                    assert_eq!(
                        brute_sur_count(&lambda, &mu, p).unwrap(),
                        surjection_count(&lambda, &mu, p).unwrap(),
                        "p={p} lambda={lambda} mu={mu}"
                    );
                }
            }
        }
    }

    #[test]
    fn hom_count_factorizes() {
        for p in [2u64, 3] {
            for lambda in enumerate_up_to(3) {
                for mu in enumerate_up_to(3) {
                    // total candidate tuples = number of homomorphisms
                    let table = GroupTable::new(&mu, p).unwrap();
                    let total: u64 = lambda
                        .parts()
                        .iter()
                        .map(|&a| table.torsion_codes(a).len() as u64)
                        .product();
                    assert_eq!(BigUint::from(total), hom_count(&lambda, &mu, p));
                }
            }
        }
    }

    #[test]
    fn exact_moment_examples() {
        // point mass at nu, mu = nu: the automorphism count
        let nu = ptn(&[2, 1]);
        let dist = Distribution::point_mass(nu.clone());
        let m = exact_moment(&dist, &nu, 2).unwrap();
        let aut = brute_sur_count(&nu, &nu, 2).unwrap();
        assert_eq!(m, Rat::from_integer(aut.into()));

        // moment at the empty partition is the total mass
        let half = Distribution::new(
            [(Partition::empty(), rat(1, 3)), (ptn(&[1]), rat(1, 3))].into(),
        )
        .unwrap();
        assert_eq!(
            exact_moment(&half, &Partition::empty(), 7).unwrap(),
            rat(2, 3)
        );

        // {empty: 1/2, (1): 1/2} at mu=(1), p=3: (1/2)*0 + (1/2)*2 = 1
        let mix = Distribution::new(
            [(Partition::empty(), rat(1, 2)), (ptn(&[1]), rat(1, 2))].into(),
        )
        .unwrap();
        assert_eq!(exact_moment(&mix, &ptn(&[1]), 3).unwrap(), rat_int(1));
    }

    #[test]
    fn group_type_order() {
        let g = AbelianGroupType::new(ptn(&[3, 1]), 2).unwrap();
        assert_eq!(g.order(), 16u32.into());
        assert!(AbelianGroupType::new(ptn(&[1]), 1).is_err());
    }
}

//! Generic-(q,t) Macdonald symmetric functions at desk scale.
//!
//! The engine constructs the P basis by Gram-Schmidt over the (q,t) scalar
//! product, working degree by degree against the lexicographically ordered
//! monomial basis, and derives skew functions from the split-alphabet
//! expansion (on power sums, splitting an alphabet is the substitution
//! `p_k -> p_k' + p_k''`). Parameters are exact rational points rather than
//! indeterminates: every identity checked here is an identity of rational
//! functions, so exact evaluation at enough rational points is decisive.
//!
//! Results are memoized per degree behind a read-write lock, so one engine
//! is safe for concurrent readers.

mod special;
mod symfunc;

pub use special::{specialize, Specialization};
pub use symfunc::{
    monomial_to_powersum, power_sum_in_monomials, powersum_to_monomial, solve_linear, Basis,
    SymmetricFunction,
};

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::Error;
use crate::partitions::{contains, partitions_between, partitions_of, Partition};
use crate::scalar::{abs_lt_one, rat_pow, rat_string, Rat};
use crate::Result;

/// Default bound on `|lambda|` for basis construction and skew extraction.
pub const DEFAULT_DEGREE_CAP: usize = 8;

/// The Macdonald parameter pair, both inside `(-1, 1)` so that every
/// scalar-product factor `(1-q^k)/(1-t^k)` is finite and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct MacdonaldParams {
    q: Rat,
    t: Rat,
}

impl MacdonaldParams {
    pub fn new(q: Rat, t: Rat) -> Result<Self> {
        for (name, v) in [("q", &q), ("t", &t)] {
            if !abs_lt_one(v) {
                return Err(Error::ParameterDomain(format!(
                    "{name} must satisfy |{name}| < 1, got {}",
                    rat_string(v)
                )));
            }
        }
        Ok(MacdonaldParams { q, t })
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    /// The parameter pair with q and t exchanged (used by beta duality).
    pub fn swapped(&self) -> MacdonaldParams {
        MacdonaldParams {
            q: self.t.clone(),
            t: self.q.clone(),
        }
    }
}

/// `<p_lambda, p_lambda>_{q,t}`: the diagonal scalar-product weight
/// `prod_i (1-q^{lambda_i})/(1-t^{lambda_i}) * prod_i i^{m_i} m_i!`.
pub fn z_weight(lambda: &Partition, params: &MacdonaldParams) -> Rat {
    let mut acc = Rat::one();
    for &part in lambda.parts() {
        let num = Rat::one() - rat_pow(params.q(), part as i64);
        let den = Rat::one() - rat_pow(params.t(), part as i64);
        acc *= num / den;
    }
    for i in 1..=lambda.part(1) {
        let m = lambda.multiplicity(i) as u64;
        let mut fac = 1u64;
        for j in 2..=m {
            fac *= j;
        }
        acc *= Rat::from_integer((pow_u64(i as u64, m) * fac).into());
    }
    acc
}

fn pow_u64(base: u64, exp: u64) -> u64 {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// One fully orthogonalized degree: the P basis of that degree in both the
/// power-sum and monomial pictures, plus the norms `<P, P>`.
struct GsLevel {
    /// Partitions of the degree in ascending lexicographic order.
    order: Vec<Partition>,
    p_in_powersum: BTreeMap<Partition, SymmetricFunction>,
    p_in_monomial: BTreeMap<Partition, SymmetricFunction>,
    norms: BTreeMap<Partition, Rat>,
}

/// Macdonald engine: holds the parameter point, a degree cap, and the
/// memoized Gram-Schmidt output. Cheap to share behind an `Arc`; reads are
/// concurrent, level construction is serialized by the write lock.
pub struct Macdonald {
    params: MacdonaldParams,
    degree_cap: usize,
    levels: RwLock<BTreeMap<usize, Arc<GsLevel>>>,
}

impl Macdonald {
    pub fn new(params: MacdonaldParams) -> Self {
        Self::with_degree_cap(params, DEFAULT_DEGREE_CAP)
    }

    pub fn with_degree_cap(params: MacdonaldParams, degree_cap: usize) -> Self {
        Macdonald {
            params,
            degree_cap,
            levels: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn params(&self) -> &MacdonaldParams {
        &self.params
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    fn check_cap(&self, degree: usize) -> Result<()> {
        if degree > self.degree_cap {
            return Err(Error::DegreeCapExceeded {
                degree,
                cap: self.degree_cap,
            });
        }
        Ok(())
    }

    fn level(&self, degree: usize) -> Result<Arc<GsLevel>> {
        self.check_cap(degree)?;
        if let Some(level) = self.levels.read().unwrap().get(&degree) {
            return Ok(level.clone());
        }
        let built = Arc::new(self.build_level(degree)?);
        let mut write = self.levels.write().unwrap();
        Ok(write.entry(degree).or_insert(built).clone())
    }

    fn build_level(&self, degree: usize) -> Result<GsLevel> {
        let mut order = partitions_of(degree as u64);
        order.reverse(); // ascending lexicographic
        let n = order.len();
        let index: BTreeMap<&Partition, usize> =
            order.iter().enumerate().map(|(i, p)| (p, i)).collect();

        // transition matrix: column j holds p_{order[j]} in the monomial basis
        let mut a = vec![vec![Rat::zero(); n]; n];
        let mut p_to_m: Vec<SymmetricFunction> = Vec::with_capacity(n);
        for (j, lambda) in order.iter().enumerate() {
            let exp = power_sum_in_monomials(lambda);
            for (mu, v) in exp.coeffs() {
                a[index[mu]][j] = v.clone();
            }
            p_to_m.push(exp);
        }
        let a_inv = invert_matrix(a).ok_or_else(|| {
            Error::InternalInconsistency(format!(
                "power-sum transition matrix singular at degree {degree}"
            ))
        })?;

        // m_kappa in power-sum coordinates: column kappa of the inverse
        let m_in_p: Vec<SymmetricFunction> = (0..n)
            .map(|j| {
                let mut f = SymmetricFunction::zero(Basis::PowerSum);
                for (i, lambda) in order.iter().enumerate() {
                    f.add_term(lambda.clone(), a_inv[i][j].clone());
                }
                f
            })
            .collect();

        let mut p_in_powersum: BTreeMap<Partition, SymmetricFunction> = BTreeMap::new();
        let mut p_in_monomial: BTreeMap<Partition, SymmetricFunction> = BTreeMap::new();
        let mut norms: BTreeMap<Partition, Rat> = BTreeMap::new();

        for (j, kappa) in order.iter().enumerate() {
            let mut cur = m_in_p[j].clone();
            for mu in order.iter().take(j) {
                let proj = self.inner_powersum(&cur, &p_in_powersum[mu]) / &norms[mu];
                cur.sub_scaled(&p_in_powersum[mu], &proj);
            }
            let norm = self.inner_powersum(&cur, &cur);
            if norm.is_zero() {
                return Err(Error::DegenerateGram(format!(
                    "norm of P_{kappa} vanished at q={}, t={}",
                    rat_string(self.params.q()),
                    rat_string(self.params.t())
                )));
            }
            // monomial picture via the cached p_lambda expansions
            let mut in_m = SymmetricFunction::zero(Basis::Monomial);
            for (lambda, c) in cur.coeffs() {
                for (mu, v) in p_to_m[index[lambda]].coeffs() {
                    in_m.add_term(mu.clone(), c * v);
                }
            }
            p_in_powersum.insert(kappa.clone(), cur);
            p_in_monomial.insert(kappa.clone(), in_m);
            norms.insert(kappa.clone(), norm);
        }

        Ok(GsLevel {
            order,
            p_in_powersum,
            p_in_monomial,
            norms,
        })
    }

    fn inner_powersum(&self, f: &SymmetricFunction, g: &SymmetricFunction) -> Rat {
        let mut acc = Rat::zero();
        for (lambda, cf) in f.coeffs() {
            let cg = g.coeff(lambda);
            if cg.is_zero() {
                continue;
            }
            acc += cf * cg * z_weight(lambda, &self.params);
        }
        acc
    }

    /// The Macdonald symmetric function `P_lambda`, monic and
    /// upper-triangular against the monomial basis, in the monomial basis.
    pub fn p(&self, lambda: &Partition) -> Result<SymmetricFunction> {
        let level = self.level(lambda.size() as usize)?;
        Ok(level.p_in_monomial[lambda].clone())
    }

    /// The dual function `Q_lambda = P_lambda / <P_lambda, P_lambda>`.
    pub fn q(&self, lambda: &Partition) -> Result<SymmetricFunction> {
        let level = self.level(lambda.size() as usize)?;
        let inv_norm = Rat::one() / &level.norms[lambda];
        Ok(level.p_in_monomial[lambda].scaled(&inv_norm))
    }

    /// `<P_lambda, P_lambda>` under the (q,t) scalar product.
    pub fn norm(&self, lambda: &Partition) -> Result<Rat> {
        let level = self.level(lambda.size() as usize)?;
        Ok(level.norms[lambda].clone())
    }

    /// The (q,t) scalar product of two symmetric functions, extended
    /// bilinearly from the diagonal power-sum values.
    pub fn scalar_product(&self, f: &SymmetricFunction, g: &SymmetricFunction) -> Result<Rat> {
        let fp = to_powersum(f)?;
        let gp = to_powersum(g)?;
        Ok(self.inner_powersum(&fp, &gp))
    }

    /// Skew function `P_{lambda/mu}` (or `Q_{lambda/mu}`), extracted from the
    /// split-alphabet expansion of `P_lambda`: writing each power sum over
    /// two alphabets as `p_k' + p_k''`, the coefficient of `P_mu` in the
    /// first alphabet is the skew function of the second. Returns the zero
    /// function when `mu` is not contained in `lambda`.
    pub fn skew(&self, kind: SkewKind, lambda: &Partition, mu: &Partition) -> Result<SymmetricFunction> {
        self.check_cap(lambda.size() as usize)?;
        if !contains(mu, lambda) {
            return Ok(SymmetricFunction::zero(Basis::Monomial));
        }
        let out_degree = (lambda.size() - mu.size()) as usize;
        let first_degree = mu.size() as usize;
        let top = self.level(lambda.size() as usize)?;
        let first_level = self.level(first_degree)?;

        // split every p_kappa term of P_lambda, keeping the slices whose
        // first alphabet has total degree |mu|; the first leg is converted
        // to the monomial basis on the fly
        let mut first_m: BTreeMap<Partition, SymmetricFunction> = BTreeMap::new();
        for (kappa, c) in top.p_in_powersum[lambda].coeffs() {
            for (left, right, ways) in split_partition(kappa, first_degree) {
                let weight = c * Rat::from_integer(ways.into());
                for (mk, mv) in power_sum_in_monomials(&left).coeffs() {
                    let slot = first_m
                        .entry(mk.clone())
                        .or_insert_with(|| SymmetricFunction::zero(Basis::PowerSum));
                    slot.add_term(right.clone(), &weight * mv);
                }
            }
        }

        // peel off P_rho components in descending lexicographic order until
        // mu's turn; monic upper-triangularity makes this a back-substitution
        let mut result = SymmetricFunction::zero(Basis::PowerSum);
        for rho in first_level.order.iter().rev() {
            let coeff_fn = match first_m.remove(rho) {
                Some(f) => f,
                None => continue,
            };
            if coeff_fn.is_zero() {
                continue;
            }
            if *rho == *mu {
                result = coeff_fn;
                break;
            }
            for (mk, mv) in first_level.p_in_monomial[rho].coeffs() {
                if mk == rho {
                    continue;
                }
                let slot = first_m
                    .entry(mk.clone())
                    .or_insert_with(|| SymmetricFunction::zero(Basis::PowerSum));
                slot.sub_scaled(&coeff_fn, mv);
            }
        }

        if let SkewKind::Q = kind {
            let factor = &first_level.norms[mu] / &top.norms[lambda];
            result = result.scaled(&factor);
        }
        powersum_to_monomial(&result, out_degree)
    }

    /// `P_{lambda/mu}` in the monomial basis.
    pub fn skew_p(&self, lambda: &Partition, mu: &Partition) -> Result<SymmetricFunction> {
        self.skew(SkewKind::P, lambda, mu)
    }

    /// `Q_{lambda/mu}` in the monomial basis.
    pub fn skew_q(&self, lambda: &Partition, mu: &Partition) -> Result<SymmetricFunction> {
        self.skew(SkewKind::Q, lambda, mu)
    }

    /// The telescoping check
    /// `sum_{nu: mu <= nu <= lambda} P_{lambda/nu}(alpha(u, ut, ...))
    ///   * Q_{nu'/mu'}(alpha(-u, -uq, ...); t, q)`,
    /// with the second factor evaluated through beta duality as
    /// `P_{nu/mu}(beta(-u, -uq, ...); q, t)`. The contract is the indicator
    /// of `lambda = mu`.
    pub fn specs_cancel_check(&self, lambda: &Partition, mu: &Partition, u: &Rat) -> Result<Rat> {
        self.check_cap(lambda.size() as usize)?;
        let alpha = Specialization::geometric_alpha(u.clone(), self.params.t().clone())?;
        let beta = Specialization::geometric_beta(-u.clone(), self.params.q().clone(), &self.params)?;
        let mut acc = Rat::zero();
        for nu in partitions_between(mu, lambda) {
            let left = specialize(&self.skew_p(lambda, &nu)?, &alpha)?;
            if left.is_zero() {
                continue;
            }
            let right = specialize(&self.skew_p(&nu, mu)?, &beta)?;
            acc += left * right;
        }
        Ok(acc)
    }

    /// Checks `P_{lambda/mu}(beta(c_1..c_n); q, t) = Q_{lambda'/mu'}(c_1..c_n; t, q)`
    /// by exact evaluation of both sides.
    pub fn beta_duality_check(&self, lambda: &Partition, mu: &Partition, cs: &[Rat]) -> Result<bool> {
        self.check_cap(lambda.size() as usize)?;
        let beta_spec = Specialization::finite(Vec::new(), cs.to_vec(), Rat::zero(), &self.params);
        let lhs = specialize(&self.skew_p(lambda, mu)?, &beta_spec)?;

        let swapped = Macdonald::with_degree_cap(self.params.swapped(), self.degree_cap);
        let rhs_fn = swapped.skew_q(&lambda.conjugate(), &mu.conjugate())?;
        let rhs = specialize(&rhs_fn, &Specialization::finite_alpha(cs.to_vec()))?;
        Ok(lhs == rhs)
    }
}

/// Which of the dual skew families to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkewKind {
    P,
    Q,
}

fn to_powersum(f: &SymmetricFunction) -> Result<SymmetricFunction> {
    match f.basis() {
        Basis::PowerSum => Ok(f.clone()),
        Basis::Monomial => monomial_to_powersum(f, f.degree()),
    }
}

/// All ways to split the multiset of parts of `kappa` into a left part of
/// total size `left_degree` and a complementary right part, with the number
/// of ways to pick which copies move left.
fn split_partition(kappa: &Partition, left_degree: usize) -> Vec<(Partition, Partition, u64)> {
    let mut distinct: Vec<(u32, u32)> = Vec::new(); // (value, multiplicity)
    for &p in kappa.parts() {
        match distinct.last_mut() {
            Some((v, m)) if *v == p => *m += 1,
            _ => distinct.push((p, 1)),
        }
    }
    let mut out = Vec::new();
    let mut chosen = vec![0u32; distinct.len()];
    fn rec(
        i: usize,
        remaining: i64,
        distinct: &[(u32, u32)],
        chosen: &mut Vec<u32>,
        out: &mut Vec<(Partition, Partition, u64)>,
    ) {
        if remaining < 0 {
            return;
        }
        if i == distinct.len() {
            if remaining != 0 {
                return;
            }
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut ways = 1u64;
            for (j, &(v, m)) in distinct.iter().enumerate() {
                let a = chosen[j];
                for _ in 0..a {
                    left.push(v);
                }
                for _ in 0..(m - a) {
                    right.push(v);
                }
                ways *= binomial_u64(m as u64, a as u64);
            }
            out.push((
                Partition::from_unsorted(left),
                Partition::from_unsorted(right),
                ways,
            ));
            return;
        }
        let (v, m) = distinct[i];
        for a in 0..=m {
            chosen[i] = a;
            rec(i + 1, remaining - (v as i64) * (a as i64), distinct, chosen, out);
        }
        chosen[i] = 0;
    }
    rec(0, left_degree as i64, &distinct, &mut chosen, &mut out);
    out
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Gauss-Jordan inversion over exact rationals.
fn invert_matrix(mut a: Vec<Vec<Rat>>) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &scale;
            inv[col][c] /= &scale;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let s = &factor * &a[col][c];
                a[r][c] -= s;
                let s = &factor * &inv[col][c];
                inv[r][c] -= s;
            }
        }
    }
    Some(inv)
}

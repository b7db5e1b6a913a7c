//! Closed-form Hall-Littlewood and q-Whittaker evaluations.
//!
//! Everything here is a finite product or finite sum of exact rationals:
//! principal specializations of Hall-Littlewood functions, one-variable
//! q-Whittaker branching weights, surjection counts between finite abelian
//! p-groups, the coefficient of the moment-inversion series, and the
//! cancellation sum that makes the inversion work. The generic engine in
//! [`crate::macdonald`] re-derives these values independently at small sizes.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::partitions::{binom2, contains, interlaces, partitions_between, Partition};
use crate::qseries::{poch_t, q_binomial};
use crate::scalar::{in_open_unit_interval, rat_pow, rat_string, rat_to_biguint, Rat};
use crate::Result;

/// Hall-Littlewood parameter `t`, constrained to `(0, 1)`. For a group over
/// residue cardinality `c` (a prime, or a prime power for modules over a
/// complete DVR), `t = 1/c`.
#[derive(Clone, Debug, PartialEq)]
pub struct HlParams {
    t: Rat,
}

impl HlParams {
    pub fn new(t: Rat) -> Result<Self> {
        check_t_open_unit(&t)?;
        Ok(HlParams { t })
    }

    /// `t = 1 / residue_cardinality`.
    pub fn from_residue_cardinality(c: u64) -> Result<Self> {
        if c < 2 {
            return Err(Error::ParameterDomain(format!(
                "residue cardinality must be at least 2, got {c}"
            )));
        }
        Ok(HlParams {
            t: Rat::new(1.into(), c.into()),
        })
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }
}

fn check_t_open_unit(t: &Rat) -> Result<()> {
    if !in_open_unit_interval(t) {
        return Err(Error::ParameterDomain(format!(
            "t must lie in (0, 1), got {}",
            rat_string(t)
        )));
    }
    Ok(())
}

fn check_t_nonzero_abs_lt_one(t: &Rat) -> Result<()> {
    if t.is_zero() || !crate::scalar::abs_lt_one(t) {
        return Err(Error::ParameterDomain(format!(
            "t must satisfy 0 < |t| < 1, got {}",
            rat_string(t)
        )));
    }
    Ok(())
}

fn check_abs_lt_one(q: &Rat) -> Result<()> {
    if !crate::scalar::abs_lt_one(q) {
        return Err(Error::ParameterDomain(format!(
            "parameter must satisfy |q| < 1, got {}",
            rat_string(q)
        )));
    }
    Ok(())
}

/// Principal specialization of the Hall-Littlewood P function over the
/// infinite geometric alphabet `(u, ut, ut^2, ...)`:
/// `u^|lambda| t^{n(lambda)} / prod_i (t;t)_{m_i(lambda)}`.
pub fn principal_p(lambda: &Partition, u: &Rat, t: &Rat) -> Result<Rat> {
    check_t_nonzero_abs_lt_one(t)?;
    let mut denom = Rat::one();
    let max_part = lambda.part(1);
    for i in 1..=max_part {
        denom *= poch_t(t, lambda.multiplicity(i));
    }
    Ok(rat_pow(u, lambda.size() as i64) * rat_pow(t, lambda.n_stat() as i64) / denom)
}

/// Principal specialization of the Hall-Littlewood Q function:
/// `u^|lambda| t^{n(lambda)}`.
pub fn principal_q(lambda: &Partition, u: &Rat, t: &Rat) -> Result<Rat> {
    check_t_nonzero_abs_lt_one(t)?;
    Ok(rat_pow(u, lambda.size() as i64) * rat_pow(t, lambda.n_stat() as i64))
}

/// The ratio `P_{lambda/mu}(1,t,...;0,t) / P_lambda(1,t,...;0,t)`, computed
/// as a product over the columns of `mu`:
///
/// `prod_{i=1}^{mu_1} t^{C(l'_i - m'_i, 2) - C(l'_i, 2)} (t^{1+l'_i-m'_i}; t)_{m'_i - m'_{i+1}}`
///
/// where `l' = conjugate(lambda)`, `m' = conjugate(mu)`. Columns of `lambda`
/// beyond `mu_1` contribute factors of 1, so the minimal column count
/// `d = mu_1` is used; the independence from larger `d` is checked in tests.
/// Returns 0 when `mu` is not contained in `lambda` (the skew function
/// vanishes there, and the exponent arithmetic would be meaningless).
pub fn skew_ratio(lambda: &Partition, mu: &Partition, t: &Rat) -> Result<Rat> {
    check_t_open_unit(t)?;
    skew_ratio_with_columns(lambda, mu, t, mu.part(1))
}

/// Same product taken over `d >= mu_1` columns; exposed for the
/// independence-of-`d` property test.
pub fn skew_ratio_with_columns(
    lambda: &Partition,
    mu: &Partition,
    t: &Rat,
    d: u32,
) -> Result<Rat> {
    if !contains(mu, lambda) {
        return Ok(Rat::zero());
    }
    debug_assert!(d >= mu.part(1));
    let lc = lambda.conjugate();
    let mc = mu.conjugate();
    let mut acc = Rat::one();
    for i in 1..=d as usize {
        let li = lc.part(i);
        let mi = mc.part(i);
        let exp = binom2(li - mi) as i64 - binom2(li) as i64;
        acc *= rat_pow(t, exp);
        let base = rat_pow(t, 1 + (li - mi) as i64);
        acc *= crate::qseries::q_pochhammer(&base, t, mc.part(i) - mc.part(i + 1));
    }
    Ok(acc)
}

/// Principal specialization of the skew Hall-Littlewood P function over
/// `(u, ut, ut^2, ...)`, via homogeneity of degree `|lambda| - |mu|`:
/// `u^{|lambda|-|mu|} * skew_ratio(lambda, mu, t) * P_lambda(1,t,...;0,t)`.
pub fn skew_p_principal(lambda: &Partition, mu: &Partition, u: &Rat, t: &Rat) -> Result<Rat> {
    if !contains(mu, lambda) {
        return Ok(Rat::zero());
    }
    let deg = lambda.size() as i64 - mu.size() as i64;
    Ok(rat_pow(u, deg) * skew_ratio(lambda, mu, t)? * principal_p(lambda, &Rat::one(), t)?)
}

/// One-variable q-Whittaker branching weight for P:
/// `x^{|lambda|-|mu|} prod_{i=1}^{len(mu)} [lambda_i - lambda_{i+1} over lambda_i - mu_i]_q`,
/// and 0 when `mu` does not interlace below `lambda`.
pub fn qw_skew_p_one(lambda: &Partition, mu: &Partition, x: &Rat, q: &Rat) -> Result<Rat> {
    check_abs_lt_one(q)?;
    if !interlaces(mu, lambda) {
        return Ok(Rat::zero());
    }
    let mut acc = rat_pow(x, lambda.size() as i64 - mu.size() as i64);
    for i in 1..=mu.length() {
        let a = lambda.part(i) - lambda.part(i + 1);
        let b = (lambda.part(i) - mu.part(i)) as i64;
        acc *= q_binomial(a, b, q)?;
    }
    Ok(acc)
}

/// One-variable q-Whittaker branching weight for Q:
/// `x^{|lambda|-|mu|} / (q;q)_{lambda_1 - mu_1}
///  * prod_{i=1}^{len(lambda)-1} [mu_i - mu_{i+1} over mu_i - lambda_{i+1}]_q`,
/// and 0 when `mu` does not interlace below `lambda`.
pub fn qw_skew_q_one(lambda: &Partition, mu: &Partition, x: &Rat, q: &Rat) -> Result<Rat> {
    check_abs_lt_one(q)?;
    if !interlaces(mu, lambda) {
        return Ok(Rat::zero());
    }
    let mut acc = rat_pow(x, lambda.size() as i64 - mu.size() as i64);
    let den = poch_t(q, lambda.part(1) - mu.part(1));
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!(
            "(q;q)_(lambda_1 - mu_1) vanishes at q = {}",
            rat_string(q)
        )));
    }
    acc /= den;
    for i in 1..lambda.length().max(1) {
        let a = mu.part(i) - mu.part(i + 1);
        let b = (mu.part(i) - lambda.part(i + 1)) as i64;
        acc *= q_binomial(a, b, q)?;
    }
    Ok(acc)
}

/// Number of surjective homomorphisms from the group of type `lambda` onto
/// the group of type `mu`, both over residue cardinality `c`, evaluated as
///
/// `P_{lambda/mu}(t,t^2,...;0,t) / (P_lambda(t,t^2,...;0,t) Q_mu(1,t,...;0,t))`
///
/// with `t = 1/c`. The expression is rational a priori; integrality is
/// asserted before returning, as a cheap transcription check on the
/// exponents. Returns 0 when `mu` is not contained in `lambda`.
pub fn surjection_count(lambda: &Partition, mu: &Partition, residue_cardinality: u64) -> Result<BigUint> {
    if !contains(mu, lambda) {
        return Ok(BigUint::zero());
    }
    let params = HlParams::from_residue_cardinality(residue_cardinality)?;
    let t = params.t();
    let numer = skew_p_principal(lambda, mu, t, t)?;
    let denom = principal_p(lambda, t, t)? * principal_q(mu, &Rat::one(), t)?;
    let value = numer / denom;
    rat_to_biguint(&value).map_err(|_| {
        Error::InternalInconsistency(format!(
            "surjection count for lambda={lambda}, mu={mu}, c={residue_cardinality} \
             evaluated to a non-integer"
        ))
    })
}

/// Coefficient of `M_mu` in the moment-inversion series at `nu`:
///
/// `(-1)^{|mu|-|nu|} t^{n(nu)+n(mu)+|mu|}
///  / prod_i (t;t)_{mu'_i - nu'_i} (t;t)_{nu'_i - mu'_{i+1}}`
///
/// when `conjugate(mu)` interlaces above `conjugate(nu)`, else 0.
pub fn inversion_coefficient(nu: &Partition, mu: &Partition, t: &Rat) -> Result<Rat> {
    check_t_open_unit(t)?;
    let nc = nu.conjugate();
    let mc = mu.conjugate();
    if !interlaces(&nc, &mc) {
        return Ok(Rat::zero());
    }
    let exp = nu.n_stat() as i64 + mu.n_stat() as i64 + mu.size() as i64;
    let mut acc = rat_pow(t, exp);
    if (mu.size() - nu.size()) % 2 == 1 {
        acc = -acc;
    }
    for i in 1..=mc.length() {
        acc /= poch_t(t, mc.part(i) - nc.part(i));
        acc /= poch_t(t, nc.part(i) - mc.part(i + 1));
    }
    Ok(acc)
}

/// The finite sum
/// `sum_{mu: nu <= mu <= lambda} P_{lambda/mu}(t,t^2,...;0,t) Q_{mu'/nu'}(-t;t,0)`,
/// which collapses to 1 when `lambda = nu` and to 0 otherwise. This telescoping
/// is exactly what isolates a single probability in the inversion series.
pub fn cancellation_sum(lambda: &Partition, nu: &Partition, t: &Rat) -> Result<Rat> {
    check_t_open_unit(t)?;
    let mut acc = Rat::zero();
    let x = -t.clone();
    for mu in partitions_between(nu, lambda) {
        let left = skew_p_principal(lambda, &mu, t, t)?;
        let right = qw_skew_q_one(&mu.conjugate(), &nu.conjugate(), &x, t)?;
        acc += left * right;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_up_to, ptn};
    use crate::scalar::{rat, rat_int};

    fn t_half() -> Rat {
        rat(1, 2)
    }

    #[test]
    fn principal_examples() {
        let t = rat(2, 7);
        assert_eq!(
            principal_q(&ptn(&[2, 1]), &Rat::one(), &t).unwrap(),
            t.clone()
        );
        assert_eq!(
            principal_p(&Partition::empty(), &rat(3, 4), &t).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            principal_p(&ptn(&[1, 1]), &Rat::one(), &t_half()).unwrap(),
            rat(4, 3)
        );
        assert!(principal_p(&ptn(&[1]), &Rat::one(), &rat_int(0)).is_err());
        assert!(principal_p(&ptn(&[1]), &Rat::one(), &rat_int(2)).is_err());
    }

    #[test]
    fn skew_ratio_examples() {
        let t = rat(2, 5);
        assert_eq!(
            skew_ratio(&ptn(&[3, 1]), &Partition::empty(), &t).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            skew_ratio(&ptn(&[1]), &ptn(&[1]), &t).unwrap(),
            Rat::one() - t.clone()
        );
        // t^{-1} (1 - t^2) at lambda = (1,1), mu = (1)
        let expect = rat_pow(&t, -1) * (Rat::one() - &t * &t);
        assert_eq!(skew_ratio(&ptn(&[1, 1]), &ptn(&[1]), &t).unwrap(), expect);
    }

    #[test]
    fn skew_ratio_is_independent_of_extra_columns() {
        let t = rat(1, 3);
        for lambda in enumerate_up_to(7) {
            for mu in enumerate_up_to(lambda.size()) {
                if !contains(&mu, &lambda) {
                    continue;
                }
                let base = skew_ratio(&lambda, &mu, &t).unwrap();
                for extra in 1..=2 {
                    let d = mu.part(1) + extra + lambda.part(1);
                    assert_eq!(
                        skew_ratio_with_columns(&lambda, &mu, &t, d).unwrap(),
                        base,
                        "lambda={lambda} mu={mu} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn skew_p_principal_examples() {
        let t = rat(1, 2);
        assert_eq!(
            skew_p_principal(&Partition::empty(), &Partition::empty(), &rat(5, 9), &t).unwrap(),
            rat_int(1)
        );
        // lambda=(1), mu=empty, u=t: t * 1/(1-t) = t/(1-t)
        let got = skew_p_principal(&ptn(&[1]), &Partition::empty(), &t, &t).unwrap();
        assert_eq!(got, &t / (Rat::one() - &t));
        assert_eq!(
            skew_p_principal(&ptn(&[1]), &ptn(&[2]), &t, &t).unwrap(),
            rat_int(0)
        );
    }

    #[test]
    fn skew_p_principal_is_homogeneous() {
        let t = rat(1, 3);
        let us = [rat(2, 7), rat(-3, 5), rat_int(2)];
        for lambda in enumerate_up_to(6) {
            for mu in enumerate_up_to(lambda.size()) {
                let base = skew_p_principal(&lambda, &mu, &Rat::one(), &t).unwrap();
                for u in &us {
                    let deg = lambda.size() as i64 - mu.size() as i64;
                    assert_eq!(
                        skew_p_principal(&lambda, &mu, u, &t).unwrap(),
                        rat_pow(u, deg) * &base
                    );
                }
            }
        }
    }

    #[test]
    fn qw_branching_examples() {
        let x = rat(3, 4);
        let q = rat(1, 5);
        assert_eq!(
            qw_skew_q_one(&ptn(&[1]), &Partition::empty(), &x, &q).unwrap(),
            &x / (Rat::one() - &q)
        );
        assert_eq!(
            qw_skew_p_one(&ptn(&[2]), &ptn(&[1]), &x, &q).unwrap(),
            &x * (Rat::one() + &q)
        );
        // interlacing fails: (2) does not interlace below (1,1)
        assert_eq!(
            qw_skew_p_one(&ptn(&[1, 1]), &ptn(&[2]), &x, &q).unwrap(),
            rat_int(0)
        );
        assert_eq!(
            qw_skew_q_one(&ptn(&[1, 1]), &ptn(&[2]), &x, &q).unwrap(),
            rat_int(0)
        );
    }

    #[test]
    fn surjection_count_examples() {
        assert_eq!(
            surjection_count(&ptn(&[1]), &ptn(&[1]), 2).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            surjection_count(&ptn(&[1, 1]), &ptn(&[1]), 2).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(
            surjection_count(&ptn(&[2]), &ptn(&[1]), 3).unwrap(),
            BigUint::from(2u32)
        );
        for c in [2u64, 3, 5, 7] {
            assert_eq!(
                surjection_count(&ptn(&[1]), &ptn(&[2]), c).unwrap(),
                BigUint::zero()
            );
        }
    }

    #[test]
    fn surjection_count_vanishes_exactly_off_containment() {
        for lambda in enumerate_up_to(5) {
            for mu in enumerate_up_to(5) {
                let n = surjection_count(&lambda, &mu, 2).unwrap();
                assert_eq!(n.is_zero(), !contains(&mu, &lambda), "{lambda} {mu}");
            }
        }
    }

    #[test]
    fn inversion_coefficient_examples() {
        let empty = Partition::empty();
        assert_eq!(
            inversion_coefficient(&empty, &empty, &rat(1, 7)).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            inversion_coefficient(&empty, &ptn(&[1]), &t_half()).unwrap(),
            rat_int(-1)
        );
        assert_eq!(
            inversion_coefficient(&ptn(&[1]), &ptn(&[1]), &rat(1, 3)).unwrap(),
            rat(1, 2)
        );
        // conjugates fail to interlace: coefficient is 0
        assert_eq!(
            inversion_coefficient(&ptn(&[2]), &ptn(&[1]), &t_half()).unwrap(),
            rat_int(0)
        );
    }

    #[test]
    fn inversion_coefficient_matches_triple_product_smoke() {
        // the full |mu| <= 8 sweep is in the acceptance suite
        let t = rat(1, 3);
        for nu in enumerate_up_to(4) {
            for mu in enumerate_up_to(4) {
                let triple = principal_p(&nu, &t, &t).unwrap()
                    * qw_skew_q_one(&mu.conjugate(), &nu.conjugate(), &(-t.clone()), &t).unwrap()
                    * principal_q(&mu, &Rat::one(), &t).unwrap();
                assert_eq!(
                    inversion_coefficient(&nu, &mu, &t).unwrap(),
                    triple,
                    "nu={nu} mu={mu}"
                );
            }
        }
    }

    #[test]
    fn cancellation_sum_examples() {
        let t = t_half();
        for lambda in [ptn(&[1]), ptn(&[2, 1]), ptn(&[3, 2, 2])] {
            assert_eq!(cancellation_sum(&lambda, &lambda, &t).unwrap(), rat_int(1));
        }
        assert_eq!(
            cancellation_sum(&ptn(&[2, 1]), &ptn(&[1]), &t).unwrap(),
            rat_int(0)
        );
        // nu not contained in lambda: empty domain
        assert_eq!(
            cancellation_sum(&ptn(&[1]), &ptn(&[2]), &t).unwrap(),
            rat_int(0)
        );
    }
}

//! Exact q-series primitives: q-Pochhammer symbols, q-binomial coefficients,
//! and truncated Euler products.
//!
//! All evaluation happens at rational points and stays exact. `q = 0` is
//! legal everywhere (the Hall-Littlewood side of the crate sets `q = 0`),
//! with the convention `q^0 = 1` so `(a;0)_n = 1 - a` for `n >= 1`.

use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::{abs_lt_one, rat_string, Rat};
use crate::Result;

/// The q-Pochhammer symbol `(a;q)_n = prod_{i=1}^{n} (1 - a q^{i-1})`.
/// The empty product (`n = 0`) is 1.
pub fn q_pochhammer(a: &Rat, q: &Rat, n: u32) -> Rat {
    let one = Rat::one();
    let mut qpow = Rat::one();
    let mut acc = Rat::one();
    for _ in 0..n {
        acc *= &one - a * &qpow;
        qpow *= q;
    }
    acc
}

/// The q-binomial coefficient `[a over b]_q = (q;q)_a / ((q;q)_b (q;q)_{a-b})`
/// for `0 <= b <= a`, and 0 outside that range so that vanishing branching
/// weights fall out uniformly.
///
/// Errors when a denominator Pochhammer vanishes, which for rational `q`
/// happens only at `q = 1` (any `b >= 1`) or `q = -1` (when a factor
/// `1 - q^{2k}` appears).
pub fn q_binomial(a: u32, b: i64, q: &Rat) -> Result<Rat> {
    if b < 0 || b > a as i64 {
        return Ok(Rat::zero());
    }
    let b = b as u32;
    let den = q_pochhammer(q, q, b) * q_pochhammer(q, q, a - b);
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!(
            "(q;q)_b (q;q)_(a-b) vanishes at q = {}",
            rat_string(q)
        )));
    }
    Ok(q_pochhammer(q, q, a) / den)
}

/// Truncated Euler product `prod_{k=1}^{terms} (1 - q^k)`, exact.
/// Requires `|q| < 1`, the domain where the full product converges.
pub fn euler_product(q: &Rat, terms: u32) -> Result<Rat> {
    if !abs_lt_one(q) {
        return Err(Error::ParameterDomain(format!(
            "euler_product needs |q| < 1, got {}",
            rat_string(q)
        )));
    }
    let one = Rat::one();
    let mut qpow = q.clone();
    let mut acc = Rat::one();
    for _ in 0..terms {
        acc *= &one - &qpow;
        qpow *= q;
    }
    Ok(acc)
}

/// `(t;t)_n`, the self-paired Pochhammer the Hall-Littlewood formulas use.
pub fn poch_t(t: &Rat, n: u32) -> Rat {
    q_pochhammer(t, t, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, rat_pow};
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn pochhammer_examples() {
        let a = rat(2, 3);
        let q = rat(1, 5);
        assert_eq!(q_pochhammer(&a, &q, 0), rat_int(1));
        assert_eq!(q_pochhammer(&rat(1, 2), &rat(1, 2), 2), rat(3, 8));
        let t = rat(3, 7);
        assert_eq!(q_pochhammer(&t, &t, 1), rat_int(1) - t.clone());
    }

    #[test]
    fn pochhammer_at_q_zero() {
        // (a;0)_n = 1 - a for n >= 1, using 0^0 = 1 in the first factor
        let a = rat(2, 5);
        for n in 1..5 {
            assert_eq!(q_pochhammer(&a, &rat_int(0), n), rat(3, 5));
        }
    }

    #[test]
    fn q_binomial_examples() {
        let q = rat(1, 3);
        for a in 0..6 {
            assert_eq!(q_binomial(a, 0, &q).unwrap(), rat_int(1));
        }
        assert_eq!(q_binomial(2, 1, &rat(1, 2)).unwrap(), rat(3, 2));
        assert_eq!(q_binomial(2, 3, &q).unwrap(), rat_int(0));
        assert_eq!(q_binomial(2, -1, &q).unwrap(), rat_int(0));
    }

    #[test]
    fn q_binomial_errors_at_roots_of_unity() {
        assert!(q_binomial(2, 1, &rat_int(1)).is_err());
        assert!(q_binomial(3, 2, &rat_int(-1)).is_err());
    }

    #[test]
    fn q_binomial_symmetry_and_pascal() {
        let qs = [rat(1, 2), rat(-1, 3), rat(2, 5), rat_int(0)];
        for q in &qs {
            for a in 0..=10u32 {
                for b in 0..=a as i64 {
                    let lhs = q_binomial(a, b, q).unwrap();
                    assert_eq!(lhs, q_binomial(a, a as i64 - b, q).unwrap());
                    if a >= 1 {
                        let rec = q_binomial(a - 1, b - 1, q).unwrap()
                            + rat_pow(q, b) * q_binomial(a - 1, b, q).unwrap();
                        assert_eq!(lhs, rec, "q-Pascal at a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn euler_product_examples() {
        assert_eq!(euler_product(&rat(1, 2), 1).unwrap(), rat(1, 2));
        assert_eq!(euler_product(&rat(1, 2), 3).unwrap(), rat(21, 64));
        assert!(euler_product(&rat_int(1), 5).is_err());
        assert!(euler_product(&rat(-7, 5), 5).is_err());
    }

    #[test]
    fn euler_product_converges_to_known_digits() {
        // (1/2;1/2)_inf = 0.2887880950866... ; the tail beyond 100 factors
        // is below 2^-100, so the 100-term product carries those digits.
        let e100 = euler_product(&rat(1, 2), 100).unwrap();
        let reference = rat(2887880950866i64, 1) / rat_pow(&rat_int(10), 13);
        assert!((&e100 - &reference).abs() < rat_pow(&rat_int(10), -13));
        // partial products converge: 200 more factors move the value by
        // far less than 10^-25
        let e200 = euler_product(&rat(1, 2), 200).unwrap();
        assert!((&e100 - &e200).abs() < rat_pow(&rat_int(10), -25));
    }

    proptest! {
        // (a;q)_{m+n} = (a;q)_m * (a q^m; q)_n
        #[test]
        fn pochhammer_splits(
            an in -4i64..=4, ad in 1i64..=5,
            qn in -4i64..=4, qd in 1i64..=5,
            m in 0u32..=8, n in 0u32..=8,
        ) {
            let a = rat(an, ad);
            let q = rat(qn, qd);
            let lhs = q_pochhammer(&a, &q, m + n);
            let shifted = &a * rat_pow(&q, m as i64);
            let rhs = q_pochhammer(&a, &q, m) * q_pochhammer(&shifted, &q, n);
            prop_assert_eq!(lhs, rhs);
        }
    }
}

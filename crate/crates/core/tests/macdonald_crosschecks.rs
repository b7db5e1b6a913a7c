//! Cross-checks between the generic Macdonald engine and the closed forms:
//! Schur degeneration at q = t against a tableau-enumeration oracle,
//! Hall-Littlewood principal formulas at q = 0, q-Whittaker branching at
//! t = 0, and the exact finite-alphabet/tail split of the skew principal
//! specialization.

mod common;

use num_traits::{Signed, Zero};

use group_moments::hall_littlewood::{
    principal_p, principal_q, qw_skew_p_one, qw_skew_q_one, skew_p_principal,
};
use group_moments::macdonald::{specialize, Macdonald, MacdonaldParams, Specialization};
use group_moments::partitions::{
    contains, enumerate_up_to, partitions_between, partitions_of, ptn,
};
use group_moments::qseries::poch_t;
use group_moments::scalar::{rat, rat_int, rat_pow, Rat};

fn hl_engine(t: Rat) -> Macdonald {
    Macdonald::new(MacdonaldParams::new(rat_int(0), t).unwrap())
}

fn qw_engine(q: Rat) -> Macdonald {
    Macdonald::new(MacdonaldParams::new(q, rat_int(0)).unwrap())
}

#[test]
fn schur_degeneration_matches_the_tableau_oracle() {
    for qt in [rat(1, 2), rat(1, 3)] {
        let eng = Macdonald::new(MacdonaldParams::new(qt.clone(), qt.clone()).unwrap());
        for d in 0..=5u64 {
            for lambda in partitions_of(d) {
                let p = eng.p(&lambda).unwrap();
                let kostka = common::schur_monomial_expansion(&lambda, d.max(1) as usize);
                for mu in partitions_of(d) {
                    let expect = kostka
                        .get(mu.parts())
                        .copied()
                        .unwrap_or(0);
                    assert_eq!(
                        p.coeff(&mu),
                        Rat::from_integer(expect.into()),
                        "K at lambda={lambda} mu={mu} qt={qt}"
                    );
                }
            }
        }
    }
}

#[test]
fn finite_principal_specialization_matches_the_factorized_form() {
    // P_lambda at the alphabet (u, ut, ..., ut^{K-1}) with q = 0 equals
    // u^|lambda| t^{n} (t;t)_K / ((t;t)_{K-len} prod_i (t;t)_{m_i})
    let t = rat(1, 2);
    let u = rat(2, 3);
    let eng = hl_engine(t.clone());
    for lambda in enumerate_up_to(5) {
        for extra in 0..=2u32 {
            let k = lambda.length() as u32 + extra;
            let alphas: Vec<Rat> = (0..k).map(|i| &u * rat_pow(&t, i as i64)).collect();
            let got = specialize(
                &eng.p(&lambda).unwrap(),
                &Specialization::finite_alpha(alphas),
            )
            .unwrap();
            let mut expect = rat_pow(&u, lambda.size() as i64)
                * rat_pow(&t, lambda.n_stat() as i64)
                * poch_t(&t, k);
            expect /= poch_t(&t, k - lambda.length() as u32);
            for i in 1..=lambda.part(1) {
                expect /= poch_t(&t, lambda.multiplicity(i));
            }
            assert_eq!(got, expect, "lambda={lambda} K={k}");
        }
        // fewer variables than rows kills the polynomial
        if lambda.length() >= 1 {
            let k = lambda.length() - 1;
            let alphas: Vec<Rat> = (0..k).map(|i| &u * rat_pow(&t, i as i64)).collect();
            let got = specialize(
                &eng.p(&lambda).unwrap(),
                &Specialization::finite_alpha(alphas),
            )
            .unwrap();
            assert_eq!(got, rat_int(0), "lambda={lambda} with {k} variables");
        }
    }
}

#[test]
fn infinite_principal_specializations_match_the_closed_forms() {
    let t = rat(1, 3);
    let u = rat(3, 5);
    let eng = hl_engine(t.clone());
    let geo = Specialization::geometric_alpha(u.clone(), t.clone()).unwrap();
    for lambda in enumerate_up_to(5) {
        let p_engine = specialize(&eng.p(&lambda).unwrap(), &geo).unwrap();
        assert_eq!(p_engine, principal_p(&lambda, &u, &t).unwrap(), "P at {lambda}");
        let q_engine = specialize(&eng.q(&lambda).unwrap(), &geo).unwrap();
        assert_eq!(q_engine, principal_q(&lambda, &u, &t).unwrap(), "Q at {lambda}");
    }
}

#[test]
fn skew_principal_closed_form_matches_the_engine() {
    // the product formula behind the skew principal value, checked against
    // the generic engine's skew extraction at the geometric alphabet
    let t = rat(1, 2);
    let u = rat(1, 2); // alphabet (t, t^2, ...) is geometric with head t
    let eng = hl_engine(t.clone());
    let geo = Specialization::geometric_alpha(u.clone(), t.clone()).unwrap();
    for lambda in enumerate_up_to(5) {
        for mu in enumerate_up_to(lambda.size()) {
            let engine_value = specialize(&eng.skew_p(&lambda, &mu).unwrap(), &geo).unwrap();
            let closed = skew_p_principal(&lambda, &mu, &u, &t).unwrap();
            assert_eq!(engine_value, closed, "lambda={lambda} mu={mu}");
        }
    }
}

#[test]
fn skew_principal_tail_split_is_exact() {
    // P_{lambda/mu}(t, t^2, ...) = sum_nu P_{nu/mu}(t..t^K) *
    // P_{lambda/nu}(t^{K+1}, t^{K+2}, ...): the K-variable head from the
    // engine, the tail in closed form, equality exact for every K
    let t = rat(1, 2);
    let eng = hl_engine(t.clone());
    for lambda in enumerate_up_to(5) {
        for mu in enumerate_up_to(lambda.size()) {
            if !contains(&mu, &lambda) {
                continue;
            }
            let whole = skew_p_principal(&lambda, &mu, &t, &t).unwrap();
            for k in 1..=3u32 {
                let head_alphabet: Vec<Rat> =
                    (1..=k).map(|i| rat_pow(&t, i as i64)).collect();
                let mut total = Rat::zero();
                for nu in partitions_between(&mu, &lambda) {
                    let head = specialize(
                        &eng.skew_p(&nu, &mu).unwrap(),
                        &Specialization::finite_alpha(head_alphabet.clone()),
                    )
                    .unwrap();
                    let tail =
                        skew_p_principal(&lambda, &nu, &rat_pow(&t, k as i64 + 1), &t).unwrap();
                    total += head * tail;
                }
                assert_eq!(total, whole, "lambda={lambda} mu={mu} K={k}");
            }
        }
    }
}

#[test]
fn truncated_principal_alphabets_converge_to_the_closed_form() {
    let t = rat(1, 2);
    let eng = hl_engine(t.clone());
    let lambda = ptn(&[3, 1]);
    let mu = ptn(&[1]);
    let closed = skew_p_principal(&lambda, &mu, &t, &t).unwrap();
    let mut previous_gap: Option<Rat> = None;
    for k in 2..=6u32 {
        let alphas: Vec<Rat> = (1..=k).map(|i| rat_pow(&t, i as i64)).collect();
        let truncated = specialize(
            &eng.skew_p(&lambda, &mu).unwrap(),
            &Specialization::finite_alpha(alphas),
        )
        .unwrap();
        let gap = (&closed - &truncated).abs();
        if let Some(prev) = previous_gap {
            assert!(gap < prev, "gap did not shrink at K = {k}");
        }
        previous_gap = Some(gap);
    }
}

#[test]
fn qw_branching_weights_match_the_engine() {
    let q = rat(1, 3);
    let eng = qw_engine(q.clone());
    let x = rat(2, 7);
    for lambda in enumerate_up_to(6) {
        for mu in enumerate_up_to(lambda.size()) {
            let spec = Specialization::finite_alpha(vec![x.clone()]);
            let engine_q = specialize(&eng.skew_q(&lambda, &mu).unwrap(), &spec).unwrap();
            assert_eq!(
                engine_q,
                qw_skew_q_one(&lambda, &mu, &x, &q).unwrap(),
                "Q at lambda={lambda} mu={mu}"
            );
            let engine_p = specialize(&eng.skew_p(&lambda, &mu).unwrap(), &spec).unwrap();
            assert_eq!(
                engine_p,
                qw_skew_p_one(&lambda, &mu, &x, &q).unwrap(),
                "P at lambda={lambda} mu={mu}"
            );
        }
    }
}

#[test]
fn one_variable_skew_vanishes_beyond_interlacing() {
    // in one variable the branching weight is supported exactly on
    // interlacing pairs, for generic (q, t) as well
    let eng = Macdonald::new(MacdonaldParams::new(rat(1, 3), rat(1, 2)).unwrap());
    let x = rat(3, 4);
    for lambda in enumerate_up_to(5) {
        for mu in enumerate_up_to(lambda.size()) {
            let v = specialize(
                &eng.skew_p(&lambda, &mu).unwrap(),
                &Specialization::finite_alpha(vec![x.clone()]),
            )
            .unwrap();
            let interlacing = group_moments::partitions::interlaces(&mu, &lambda);
            assert_eq!(!v.is_zero(), interlacing, "lambda={lambda} mu={mu}");
        }
    }
}

//! Specializations: algebra homomorphisms from symmetric functions to
//! scalars, determined by their values on the power sums.
//!
//! A specialization is built from alpha parameters, beta parameters, and a
//! Plancherel parameter. Beta and Plancherel values depend on the ambient
//! `(q, t)`; geometric families carry the closed forms of the convergent
//! sums so that infinite alphabets like `(u, ut, ut^2, ...)` stay exact.

use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::{abs_lt_one, rat_pow, rat_string, Rat};
use crate::Result;

use super::symfunc::{monomial_to_powersum, Basis, SymmetricFunction};
use super::MacdonaldParams;

/// A rule assigning an exact rational to each power sum `p_k`, applied to
/// products multiplicatively and to sums additively.
#[derive(Clone, Debug, PartialEq)]
pub enum Specialization {
    /// Finite alpha/beta lists plus a Plancherel parameter:
    /// `p_1 -> sum a_n + (1-q)/(1-t) (tau + sum b_n)`,
    /// `p_k -> sum a_n^k + (-1)^(k-1) (1-q^k)/(1-t^k) sum b_n^k` for `k >= 2`.
    Finite {
        alphas: Vec<Rat>,
        betas: Vec<Rat>,
        tau: Rat,
        q: Rat,
        t: Rat,
    },
    /// Alpha alphabet `(u, u*ratio, u*ratio^2, ...)`:
    /// `p_k -> u^k / (1 - ratio^k)`.
    GeometricAlpha { u: Rat, ratio: Rat },
    /// Beta alphabet `(u, u*ratio, u*ratio^2, ...)`:
    /// `p_k -> (-1)^(k-1) (1-q^k)/(1-t^k) * u^k / (1 - ratio^k)`.
    GeometricBeta { u: Rat, ratio: Rat, q: Rat, t: Rat },
    /// Values add: the alpha/beta multisets of the two sides union.
    Sum(Box<Specialization>, Box<Specialization>),
}

impl Specialization {
    /// Finite parameter lists evaluated literally.
    pub fn finite(alphas: Vec<Rat>, betas: Vec<Rat>, tau: Rat, params: &MacdonaldParams) -> Self {
        Specialization::Finite {
            alphas,
            betas,
            tau,
            q: params.q().clone(),
            t: params.t().clone(),
        }
    }

    /// Pure alpha alphabet from a finite list.
    pub fn finite_alpha(alphas: Vec<Rat>) -> Self {
        // the beta/Plancherel factor never fires, so (q, t) are irrelevant;
        // store zeros
        Specialization::Finite {
            alphas,
            betas: Vec::new(),
            tau: Rat::zero(),
            q: Rat::zero(),
            t: Rat::zero(),
        }
    }

    pub fn geometric_alpha(u: Rat, ratio: Rat) -> Result<Self> {
        check_ratio(&ratio)?;
        Ok(Specialization::GeometricAlpha { u, ratio })
    }

    pub fn geometric_beta(u: Rat, ratio: Rat, params: &MacdonaldParams) -> Result<Self> {
        check_ratio(&ratio)?;
        Ok(Specialization::GeometricBeta {
            u,
            ratio,
            q: params.q().clone(),
            t: params.t().clone(),
        })
    }

    /// Plancherel-only specialization: `p_1 -> (1-q)/(1-t) tau`, `p_k -> 0`.
    pub fn plancherel(tau: Rat, params: &MacdonaldParams) -> Self {
        Specialization::Finite {
            alphas: Vec::new(),
            betas: Vec::new(),
            tau,
            q: params.q().clone(),
            t: params.t().clone(),
        }
    }

    pub fn sum(self, other: Specialization) -> Specialization {
        Specialization::Sum(Box::new(self), Box::new(other))
    }

    /// The image of `p_k` (`k >= 1`).
    pub fn power_sum_value(&self, k: u32) -> Rat {
        assert!(k >= 1);
        match self {
            Specialization::Finite {
                alphas,
                betas,
                tau,
                q,
                t,
            } => {
                let mut acc: Rat = alphas.iter().map(|a| rat_pow(a, k as i64)).sum();
                let mut beta_side: Rat = betas.iter().map(|b| rat_pow(b, k as i64)).sum();
                if k == 1 {
                    beta_side += tau;
                }
                if !beta_side.is_zero() {
                    acc += beta_factor(k, q, t) * beta_side;
                }
                acc
            }
            Specialization::GeometricAlpha { u, ratio } => {
                rat_pow(u, k as i64) / (Rat::one() - rat_pow(ratio, k as i64))
            }
            Specialization::GeometricBeta { u, ratio, q, t } => {
                beta_factor(k, q, t) * rat_pow(u, k as i64)
                    / (Rat::one() - rat_pow(ratio, k as i64))
            }
            Specialization::Sum(a, b) => a.power_sum_value(k) + b.power_sum_value(k),
        }
    }
}

/// `(-1)^(k-1) (1 - q^k) / (1 - t^k)`.
fn beta_factor(k: u32, q: &Rat, t: &Rat) -> Rat {
    let num = Rat::one() - rat_pow(q, k as i64);
    let den = Rat::one() - rat_pow(t, k as i64);
    let f = num / den;
    if k.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

fn check_ratio(ratio: &Rat) -> Result<()> {
    if !abs_lt_one(ratio) {
        return Err(Error::ParameterDomain(format!(
            "geometric alphabet ratio must satisfy |ratio| < 1, got {}",
            rat_string(ratio)
        )));
    }
    Ok(())
}

/// Apply a specialization to a symmetric function: convert to the power-sum
/// basis and extend `p_k -> value(k)` multiplicatively over each `p_lambda`.
pub fn specialize(f: &SymmetricFunction, spec: &Specialization) -> Result<Rat> {
    let in_powersums;
    let f = match f.basis() {
        Basis::PowerSum => f,
        Basis::Monomial => {
            in_powersums = monomial_to_powersum(f, f.degree())?;
            &in_powersums
        }
    };
    let mut acc = Rat::zero();
    for (lambda, c) in f.coeffs() {
        let mut term = c.clone();
        for &part in lambda.parts() {
            term *= spec.power_sum_value(part);
        }
        acc += term;
    }
    Ok(acc)
}

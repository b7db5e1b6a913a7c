//! Symmetric functions as coefficient maps over partitions, in the monomial
//! or power-sum basis, with exact change of basis between the two.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::partitions::{partitions_of, Partition};
use crate::scalar::Rat;
use crate::Result;

/// Basis tag for a [`SymmetricFunction`] coefficient map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Monomial,
    PowerSum,
}

/// A symmetric function stored as a finite map from partitions to exact
/// rational coefficients, tagged with the basis the keys index.
/// Zero coefficients are never stored. Mixed-degree (inhomogeneous)
/// elements are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricFunction {
    basis: Basis,
    coeffs: BTreeMap<Partition, Rat>,
}

impl SymmetricFunction {
    pub fn zero(basis: Basis) -> Self {
        SymmetricFunction {
            basis,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant 1 (the empty partition indexes the unit in both bases).
    pub fn one(basis: Basis) -> Self {
        let mut f = Self::zero(basis);
        f.add_term(Partition::empty(), Rat::one());
        f
    }

    /// A single basis element with coefficient 1.
    pub fn basis_element(basis: Basis, index: Partition) -> Self {
        let mut f = Self::zero(basis);
        f.add_term(index, Rat::one());
        f
    }

    pub fn from_coeffs(basis: Basis, coeffs: BTreeMap<Partition, Rat>) -> Self {
        let mut f = Self::zero(basis);
        for (k, v) in coeffs {
            f.add_term(k, v);
        }
        f
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, Rat> {
        &self.coeffs
    }

    pub fn coeff(&self, index: &Partition) -> Rat {
        self.coeffs.get(index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest degree among stored terms (0 for the zero function).
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|p| p.size() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Accumulate `value` on `index`, dropping the entry if it cancels.
    pub fn add_term(&mut self, index: Partition, value: Rat) {
        if value.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(index);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &SymmetricFunction) {
        assert_eq!(self.basis, other.basis, "basis mismatch in add");
        for (k, v) in &other.coeffs {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_scaled(&mut self, other: &SymmetricFunction, scale: &Rat) {
        assert_eq!(self.basis, other.basis, "basis mismatch in sub");
        for (k, v) in &other.coeffs {
            self.add_term(k.clone(), -(v * scale));
        }
    }

    pub fn scaled(&self, scale: &Rat) -> SymmetricFunction {
        let mut out = Self::zero(self.basis);
        for (k, v) in &self.coeffs {
            out.add_term(k.clone(), v * scale);
        }
        out
    }

    /// The part of the function of exactly this degree.
    pub fn homogeneous_component(&self, degree: usize) -> SymmetricFunction {
        let mut out = Self::zero(self.basis);
        for (k, v) in &self.coeffs {
            if k.size() as usize == degree {
                out.add_term(k.clone(), v.clone());
            }
        }
        out
    }
}

/// Multiply a monomial-basis function by the power sum `p_k`.
///
/// The coefficient of `m_lambda` in `m_mu * p_k` counts the positions `i`
/// of `lambda` with `lambda_i >= k` such that removing `k` from that part
/// and resorting gives back `mu`; candidates are generated from `mu` by
/// adding `k` to one part or appending a new part `k`.
pub fn mul_by_power_sum(f: &SymmetricFunction, k: u32) -> SymmetricFunction {
    assert_eq!(f.basis, Basis::Monomial);
    assert!(k >= 1);
    let mut out = SymmetricFunction::zero(Basis::Monomial);
    for (mu, c) in &f.coeffs {
        let mut candidates: Vec<Partition> = Vec::with_capacity(mu.length() + 1);
        for j in 0..=mu.length() {
            let mut parts: Vec<u32> = mu.parts().to_vec();
            if j < mu.length() {
                parts[j] += k;
            } else {
                parts.push(k);
            }
            let cand = Partition::from_unsorted(parts);
            if !candidates.contains(&cand) {
                candidates.push(cand);
            }
        }
        for lambda in candidates {
            let mult = removal_count(&lambda, mu, k);
            if mult > 0 {
                out.add_term(lambda, c * Rat::from_integer(mult.into()));
            }
        }
    }
    out
}

/// Number of positions of `lambda` from which removing `k` leaves `mu`.
fn removal_count(lambda: &Partition, mu: &Partition, k: u32) -> u64 {
    let mut count = 0;
    for i in 1..=lambda.length() {
        if lambda.part(i) < k {
            break;
        }
        let mut parts: Vec<u32> = lambda.parts().to_vec();
        parts[i - 1] -= k;
        if Partition::from_unsorted(parts) == *mu {
            count += 1;
        }
    }
    count
}

/// Expansion of the power-sum basis element `p_lambda` in the monomial basis.
pub fn power_sum_in_monomials(lambda: &Partition) -> SymmetricFunction {
    let mut f = SymmetricFunction::one(Basis::Monomial);
    for &part in lambda.parts() {
        f = mul_by_power_sum(&f, part);
    }
    f
}

fn check_num_vars(num_vars: usize, degree: usize) -> Result<()> {
    if num_vars < degree {
        return Err(Error::TooFewVariables { num_vars, degree });
    }
    Ok(())
}

/// Change of basis power-sum -> monomial. `num_vars` must be at least the
/// degree so that the monomial images stay linearly independent; the
/// resulting expansion is then independent of `num_vars`.
pub fn powersum_to_monomial(f: &SymmetricFunction, num_vars: usize) -> Result<SymmetricFunction> {
    assert_eq!(f.basis(), Basis::PowerSum, "input must be in the power-sum basis");
    check_num_vars(num_vars, f.degree())?;
    let mut out = SymmetricFunction::zero(Basis::Monomial);
    for (lambda, c) in &f.coeffs {
        let expanded = power_sum_in_monomials(lambda);
        for (mu, v) in expanded.coeffs() {
            out.add_term(mu.clone(), c * v);
        }
    }
    Ok(out)
}

/// Change of basis monomial -> power-sum, degree by degree, by solving the
/// exact linear system against the `p_lambda` monomial expansions.
pub fn monomial_to_powersum(f: &SymmetricFunction, num_vars: usize) -> Result<SymmetricFunction> {
    assert_eq!(f.basis(), Basis::Monomial, "input must be in the monomial basis");
    check_num_vars(num_vars, f.degree())?;
    let mut out = SymmetricFunction::zero(Basis::PowerSum);
    let mut degrees: Vec<usize> = f.coeffs.keys().map(|p| p.size() as usize).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for d in degrees {
        let component = f.homogeneous_component(d);
        let order: Vec<Partition> = {
            let mut v = partitions_of(d as u64);
            v.reverse(); // lex ascending
            v
        };
        let n = order.len();
        let index: BTreeMap<&Partition, usize> =
            order.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // columns: p_lambda expanded in monomials
        let mut a = vec![vec![Rat::zero(); n]; n];
        for (j, lambda) in order.iter().enumerate() {
            for (mu, v) in power_sum_in_monomials(lambda).coeffs() {
                a[index[mu]][j] = v.clone();
            }
        }
        let mut b = vec![Rat::zero(); n];
        for (mu, v) in component.coeffs() {
            b[index[mu]] = v.clone();
        }
        let x = solve_linear(a, b).ok_or_else(|| {
            Error::InternalInconsistency(format!(
                "power-sum transition matrix singular at degree {d}"
            ))
        })?;
        for (j, lambda) in order.iter().enumerate() {
            out.add_term(lambda.clone(), x[j].clone());
        }
    }
    Ok(out)
}

/// Exact Gaussian elimination with partial (first nonzero) pivoting.
/// Returns `None` for a singular system.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &inv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
            let sub = &factor * &b[col];
            b[r] -= sub;
        }
    }
    Some(
        (0..n)
            .map(|i| &b[i] / &a[i][i])
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::ptn;
    use crate::scalar::{rat, rat_int};

    fn p_elem(parts: &[u32]) -> SymmetricFunction {
        SymmetricFunction::basis_element(Basis::PowerSum, ptn(parts))
    }

    #[test]
    fn power_sums_are_single_monomials() {
        // p_1 = m_(1), p_2 = m_(2)
        for k in 1..=4u32 {
            let f = powersum_to_monomial(&p_elem(&[k]), k as usize).unwrap();
            assert_eq!(
                f,
                SymmetricFunction::basis_element(Basis::Monomial, ptn(&[k]))
            );
        }
    }

    #[test]
    fn p11_expands_with_orbit_multiplicity() {
        // p_1^2 = m_(2) + 2 m_(1,1)
        let f = powersum_to_monomial(&p_elem(&[1, 1]), 2).unwrap();
        assert_eq!(f.coeff(&ptn(&[2])), rat_int(1));
        assert_eq!(f.coeff(&ptn(&[1, 1])), rat_int(2));
        assert_eq!(f.coeffs().len(), 2);
    }

    #[test]
    fn conversions_round_trip() {
        let mut f = SymmetricFunction::zero(Basis::PowerSum);
        f.add_term(ptn(&[3, 1]), rat(2, 3));
        f.add_term(ptn(&[2, 2]), rat(-1, 5));
        f.add_term(ptn(&[1]), rat_int(4));
        f.add_term(Partition::empty(), rat(7, 2));
        let m = powersum_to_monomial(&f, 4).unwrap();
        let back = monomial_to_powersum(&m, 4).unwrap();
        assert_eq!(back, f);

        let mut g = SymmetricFunction::zero(Basis::Monomial);
        g.add_term(ptn(&[2, 1, 1]), rat(5, 7));
        g.add_term(ptn(&[1, 1]), rat_int(-2));
        let p = monomial_to_powersum(&g, 4).unwrap();
        let back = powersum_to_monomial(&p, 4).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn too_few_variables_rejected() {
        let f = p_elem(&[2, 1]);
        assert!(matches!(
            powersum_to_monomial(&f, 2),
            Err(Error::TooFewVariables { num_vars: 2, degree: 3 })
        ));
    }

    #[test]
    fn solve_linear_detects_singularity() {
        let a = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert!(solve_linear(a, vec![rat_int(1), rat_int(2)]).is_none());
    }
}

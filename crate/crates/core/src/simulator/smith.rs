//! Square matrices over Z/p^d and their cokernel types via Smith reduction.
//!
//! Over the local ring Z/p^d every element is a unit times a power of p, so
//! diagonalization needs no Euclidean steps: pick the entry of minimum
//! p-adic valuation (ties to the lowest row-major index), scale its row by
//! the inverse of its unit part, and clear its row and column by exact
//! divisions. The diagonal valuations, capped at d, are the cyclic orders
//! of the cokernel.

use crate::error::Error;
use crate::partitions::Partition;
use crate::Result;

/// An `n x n` matrix with entries reduced modulo `p^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMod {
    n: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl MatrixMod {
    pub fn new(n: usize, modulus: u64, entries: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidConfig(format!(
                "matrix modulus must be at least 2, got {modulus}"
            )));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidConfig(format!(
                "{} entries for an {n} x {n} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % modulus).collect();
        Ok(MatrixMod { n, modulus, entries })
    }

    pub fn zero(n: usize, modulus: u64) -> Self {
        MatrixMod {
            n,
            modulus,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zero(n, modulus);
        for i in 0..n {
            m.entries[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.n + c] = v % self.modulus;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.n {
            self.entries.swap(a * self.n + c, b * self.n + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.n {
            self.entries.swap(r * self.n + a, r * self.n + b);
        }
    }

    /// Multiply a row by a scalar mod the modulus.
    pub fn scale_row(&mut self, r: usize, s: u64) {
        for c in 0..self.n {
            let v = mul_mod(self.get(r, c), s, self.modulus);
            self.set(r, c, v);
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    (a + m - b % m) % m
}

/// p-adic valuation of `x` as an element of Z/p^d; zero reads as `d`.
fn valuation(x: u64, p: u64, d: u32) -> u32 {
    if x == 0 {
        return d;
    }
    let mut v = 0;
    let mut x = x;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Modular inverse of `u` (coprime to the modulus) by extended Euclid.
fn mod_inverse(u: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (u % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "element not invertible");
    (s0.rem_euclid(m as i128)) as u64
}

/// The cokernel type of `a` over Z/p^d: the partition whose parts are the
/// diagonal valuations of the Smith form, capped at `d` (a zero diagonal
/// entry contributes a full part `d`).
pub fn cokernel_type(a: &MatrixMod, p: u64, d: u32) -> Result<Partition> {
    let modulus = p
        .checked_pow(d)
        .ok_or_else(|| Error::InvalidConfig(format!("p^d = {p}^{d} overflows")))?;
    if a.modulus() != modulus {
        return Err(Error::InvalidConfig(format!(
            "matrix modulus {} does not equal p^d = {modulus}",
            a.modulus()
        )));
    }
    let n = a.n();
    let mut a = a.clone();
    let mut parts: Vec<u32> = Vec::with_capacity(n);

    for k in 0..n {
        // minimum-valuation pivot, ties to the lowest row-major index
        let mut best: Option<(u32, usize, usize)> = None;
        for r in k..n {
            for c in k..n {
                let v = valuation(a.get(r, c), p, d);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, r, c));
                }
            }
        }
        let (v, r, c) = best.expect("nonempty submatrix");
        if v >= d {
            // remaining block is zero mod p^d: each row contributes Z/p^d
            for _ in k..n {
                parts.push(d);
            }
            break;
        }
        a.swap_rows(k, r);
        a.swap_cols(k, c);
        let pv = p.pow(v);
        let unit = a.get(k, k) / pv;
        a.scale_row(k, mod_inverse(unit, modulus));
        debug_assert_eq!(a.get(k, k), pv % modulus);
        // clear the pivot column with row operations
        for r2 in k + 1..n {
            let e = a.get(r2, k);
            if e == 0 {
                continue;
            }
            let factor = e / pv; // exact: val(e) >= v by pivot minimality
            for c2 in k..n {
                let sub = mul_mod(factor, a.get(k, c2), modulus);
                a.set(r2, c2, sub_mod(a.get(r2, c2), sub, modulus));
            }
        }
        // clear the pivot row with column operations
        for c2 in k + 1..n {
            let e = a.get(k, c2);
            if e == 0 {
                continue;
            }
            let factor = e / pv;
            for r2 in k..n {
                let sub = mul_mod(factor, a.get(r2, k), modulus);
                a.set(r2, c2, sub_mod(a.get(r2, c2), sub, modulus));
            }
        }
        if v > 0 {
            parts.push(v);
        }
    }
    Ok(Partition::from_unsorted(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::ptn;

    #[test]
    fn identity_has_trivial_cokernel() {
        let m = MatrixMod::identity(4, 8);
        assert_eq!(cokernel_type(&m, 2, 3).unwrap(), Partition::empty());
    }

    #[test]
    fn zero_matrix_has_full_cokernel() {
        let m = MatrixMod::zero(3, 9);
        assert_eq!(cokernel_type(&m, 3, 2).unwrap(), ptn(&[2, 2, 2]));
    }

    #[test]
    fn unit_determinant_example_mod_four() {
        let m = MatrixMod::new(2, 4, vec![2, 1, 1, 1]).unwrap();
        assert_eq!(cokernel_type(&m, 2, 2).unwrap(), Partition::empty());
    }

    #[test]
    fn diagonal_matrix_reads_off_valuations() {
        // diag(1, 2, 4, 0) over Z/8: parts 1, 2, 3 (zero caps at d)
        let mut m = MatrixMod::zero(4, 8);
        m.set(0, 0, 1);
        m.set(1, 1, 2);
        m.set(2, 2, 4);
        assert_eq!(cokernel_type(&m, 2, 3).unwrap(), ptn(&[3, 2, 1]));
    }

    #[test]
    fn modulus_mismatch_is_rejected() {
        let m = MatrixMod::zero(2, 8);
        assert!(cokernel_type(&m, 2, 2).is_err());
    }
}

//! Shared independent oracles for the integration and acceptance suites.
//! Everything here recomputes ground truth from first principles and never
//! calls the code paths it is used to check.
//!
//! Not every test target uses every oracle.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use group_moments::partitions::Partition;

/// Monomial expansion of the Schur function of `shape` by brute enumeration
/// of semistandard tableaux: rows weakly increase, columns strictly
/// increase, entries in `1..=max_entry`. Returns content vector -> count
/// (contents trimmed of trailing zeros).
pub fn schur_monomial_expansion(shape: &Partition, max_entry: usize) -> BTreeMap<Vec<u32>, u64> {
    let rows: Vec<usize> = shape.parts().iter().map(|&p| p as usize).collect();
    let mut grid: Vec<Vec<u32>> = rows.iter().map(|&len| vec![0; len]).collect();
    let mut counts = BTreeMap::new();
    fill(&rows, 0, 0, max_entry, &mut grid, &mut counts);
    counts
}

fn fill(
    rows: &[usize],
    r: usize,
    c: usize,
    max_entry: usize,
    grid: &mut Vec<Vec<u32>>,
    counts: &mut BTreeMap<Vec<u32>, u64>,
) {
    if r == rows.len() {
        let mut content = vec![0u32; max_entry];
        for row in grid.iter() {
            for &v in row {
                content[(v - 1) as usize] += 1;
            }
        }
        while content.last() == Some(&0) {
            content.pop();
        }
        *counts.entry(content).or_insert(0) += 1;
        return;
    }
    let (nr, nc) = if c + 1 < rows[r] {
        (r, c + 1)
    } else {
        (r + 1, 0)
    };
    let min_left = if c > 0 { grid[r][c - 1] } else { 1 };
    let min_above = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
    let lo = min_left.max(min_above);
    for v in lo..=max_entry as u32 {
        grid[r][c] = v;
        fill(rows, nr, nc, max_entry, grid, counts);
    }
    grid[r][c] = 0;
}

/// Rank of an `n x n` matrix over the field with `p` elements by plain
/// Gaussian elimination (independent of the Smith-reduction code).
pub fn rank_mod_p(n: usize, p: u64, entries: &[u64]) -> usize {
    assert_eq!(entries.len(), n * n);
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|r| (0..n).map(|c| entries[r * n + c] % p).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..n).find(|&r| a[r][col] != 0);
        let Some(pivot) = pivot else { continue };
        a.swap(rank, pivot);
        let inv = mod_inverse_prime(a[rank][col], p);
        for c in col..n {
            a[rank][c] = a[rank][c] * inv % p;
        }
        for r in 0..n {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in col..n {
                    a[r][c] = (a[r][c] + (p - f) * a[rank][c]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse_prime(x: u64, p: u64) -> u64 {
    // Fermat: x^(p-2) mod p
    let mut base = x % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

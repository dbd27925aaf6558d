//! Brute-force oracles for the integration suites. These enumerate the
//! feasible sets directly and never touch the production solver paths, so
//! equality against them is an independent check.

#![allow(dead_code)]

use dcswitch::matrix::{BinMatrix, SquareMatrix};
use dcswitch::switch::Matching;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_weights(n: usize, max: i64, rng: &mut ChaCha8Rng) -> SquareMatrix<i64> {
    SquareMatrix::from_fn(n, |_, _| rng.gen_range(0..=max))
}

/// Maximum matching weight over every subpermutation matrix, by recursive
/// row assignment (each row picks an unused column or stays empty).
pub fn brute_force_matching_weight(w: &SquareMatrix<i64>) -> i64 {
    fn rec(w: &SquareMatrix<i64>, row: usize, used: u32) -> i64 {
        if row == w.n() {
            return 0;
        }
        let mut best = rec(w, row + 1, used);
        for j in 0..w.n() {
            if used & (1 << j) == 0 {
                best = best.max(w[(row, j)] + rec(w, row + 1, used | (1 << j)));
            }
        }
        best
    }
    rec(w, 0, 0)
}

/// Maximum weight over every 0/1 matrix with row and column sums at most
/// `bound`: per-row subset masks, column counts tracked exactly.
pub fn brute_force_degree_constrained_weight(w: &SquareMatrix<i64>, bound: usize) -> i64 {
    let n = w.n();
    let row_masks: Vec<u32> = (0..1u32 << n)
        .filter(|m| m.count_ones() as usize <= bound)
        .collect();
    fn rec(
        w: &SquareMatrix<i64>,
        row_masks: &[u32],
        bound: usize,
        row: usize,
        col_counts: &mut [usize],
    ) -> i64 {
        let n = w.n();
        if row == n {
            return 0;
        }
        let mut best = i64::MIN;
        'mask: for &mask in row_masks {
            let mut gain = 0;
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    if col_counts[j] == bound {
                        continue 'mask;
                    }
                    gain += w[(row, j)];
                }
            }
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    col_counts[j] += 1;
                }
            }
            let total = gain + rec(w, row_masks, bound, row + 1, col_counts);
            best = best.max(total);
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    col_counts[j] -= 1;
                }
            }
        }
        best
    }
    rec(w, &row_masks, bound, 0, &mut vec![0; n])
}

/// Every subpermutation matrix of size n, as position masks.
pub fn all_matching_masks(n: usize) -> Vec<u32> {
    fn rec(n: usize, row: usize, used_cols: u32, mask: u32, out: &mut Vec<u32>) {
        if row == n {
            out.push(mask);
            return;
        }
        rec(n, row + 1, used_cols, mask, out);
        for j in 0..n {
            if used_cols & (1 << j) == 0 {
                rec(
                    n,
                    row + 1,
                    used_cols | (1 << j),
                    mask | (1 << (row * n + j)),
                    out,
                );
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 0, 0, 0, &mut out);
    out
}

fn mask_weight(w: &SquareMatrix<i64>, mask: u32) -> i64 {
    let n = w.n();
    (0..n * n)
        .filter(|k| mask & (1 << k) != 0)
        .map(|k| w[(k / n, k % n)])
        .sum()
}

/// Maximum covered weight over every tuple of `t` pairwise-disjoint
/// matchings, by direct enumeration with disjointness pruning. Small n
/// and t only.
pub fn brute_force_t_disjoint_weight(w: &SquareMatrix<i64>, t: usize) -> i64 {
    let matchings = all_matching_masks(w.n());
    fn rec(w: &SquareMatrix<i64>, matchings: &[u32], slots_left: usize, covered: u32) -> i64 {
        if slots_left == 0 {
            return 0;
        }
        let mut best = i64::MIN;
        for &m in matchings {
            if m & covered != 0 {
                continue;
            }
            let gain = mask_weight(w, m) + rec(w, matchings, slots_left - 1, covered | m);
            best = best.max(gain);
        }
        best
    }
    rec(w, &matchings, t, 0)
}

/// Random bipartite edge set with maximum degree at most `max_degree`.
pub fn random_bounded_degree_edges(
    n: usize,
    max_degree: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let mut left = vec![0usize; n];
    let mut right = vec![0usize; n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if left[i] < max_degree && right[j] < max_degree && rng.gen_bool(0.5) {
                left[i] += 1;
                right[j] += 1;
                edges.push((i, j));
            }
        }
    }
    edges
}

pub fn matching_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Matching {
    Matching::from_pairs(n, pairs).unwrap()
}

pub fn binary_matrix(rows: Vec<Vec<u8>>) -> BinMatrix {
    dcswitch::matrix::binary_from_rows(rows).unwrap()
}

/// The 3x3 weight instance where greedy matching-stripping is suboptimal
/// (frame optimum 17, greedy 15 with frame length 2).
pub fn greedy_gap_instance() -> SquareMatrix<i64> {
    SquareMatrix::from_rows(vec![vec![4, 4, 0], vec![4, 1, 4], vec![2, 1, 0]]).unwrap()
}

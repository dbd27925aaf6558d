//! Constraint matrix of the vectorized per-slot frame-scheduling LP
//! relaxation, plus an exact determinant for unimodularity diagnostics.
//!
//! The matrix stacks, for each slot, the 2n x n^2 incidence matrix of the
//! complete bipartite graph (input rows first, then output rows), followed
//! by the n^2 x n^2 identity repeated horizontally once per slot (the
//! at-most-once-per-frame coupling rows). Variables are ordered slot-major,
//! then row, then column.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u8>,
}

impl ConstraintMatrix {
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    /// Extracts the (0-based) row/column selection as signed integers.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<i64>> {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| i64::from(self.get(r, c))).collect())
            .collect()
    }
}

pub fn frame_scheduling_constraint_matrix(n: usize, t: usize) -> ConstraintMatrix {
    let rows = 2 * n * t + n * n;
    let cols = n * n * t;
    let mut data = vec![0u8; rows * cols];
    let var = |slot: usize, i: usize, j: usize| slot * n * n + i * n + j;
    for slot in 0..t {
        for i in 0..n {
            let r = slot * 2 * n + i;
            for j in 0..n {
                data[r * cols + var(slot, i, j)] = 1;
            }
        }
        for j in 0..n {
            let r = slot * 2 * n + n + j;
            for i in 0..n {
                data[r * cols + var(slot, i, j)] = 1;
            }
        }
        for i in 0..n {
            for j in 0..n {
                let r = 2 * n * t + i * n + j;
                data[r * cols + var(slot, i, j)] = 1;
            }
        }
    }
    ConstraintMatrix { rows, cols, data }
}

/// Exact determinant of a small integer matrix (fraction-free Bareiss).
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n, "determinant needs a square matrix");
            row.iter().map(|&v| i128::from(v)).collect()
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_single_slot() {
        // one variable constrained three times: input row, output row, coupling row
        let c = frame_scheduling_constraint_matrix(1, 1);
        assert_eq!((c.rows, c.cols), (3, 1));
        assert_eq!((c.get(0, 0), c.get(1, 0), c.get(2, 0)), (1, 1, 1));
    }

    #[test]
    fn two_by_two_single_slot_blocks() {
        let c = frame_scheduling_constraint_matrix(2, 1);
        assert_eq!((c.rows, c.cols), (8, 4));
        let incidence: Vec<Vec<u8>> = (0..4).map(|r| (0..4).map(|x| c.get(r, x)).collect()).collect();
        assert_eq!(
            incidence,
            vec![
                vec![1, 1, 0, 0],
                vec![0, 0, 1, 1],
                vec![1, 0, 1, 0],
                vec![0, 1, 0, 1],
            ]
        );
        for r in 0..4 {
            for x in 0..4 {
                assert_eq!(c.get(4 + r, x), u8::from(r == x));
            }
        }
    }

    #[test]
    fn determinant_basics() {
        assert_eq!(determinant(&[vec![3]]), 3);
        assert_eq!(determinant(&[vec![1, 2], vec![3, 4]]), -2);
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), 0);
        // row swap path
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
    }
}

//! Dense square matrices in row-major order.

use std::ops::{Index, IndexMut};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T> SquareMatrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
            data.extend(r);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn iter_indexed(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / n, k % n, v))
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|v| f(v)).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

impl<T: Clone> SquareMatrix<T> {
    pub fn filled(n: usize, value: T) -> Self {
        SquareMatrix {
            n,
            data: vec![value; n * n],
        }
    }
}

impl<T: Zero + Clone + std::ops::Add<Output = T>> SquareMatrix<T> {
    pub fn row_sum(&self, i: usize) -> T {
        self.data[i * self.n..(i + 1) * self.n]
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn col_sum(&self, j: usize) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, j)].clone())
    }

    pub fn total(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// 0/1 square matrix. Construct through [`binary_from_rows`] or the typed
/// wrappers in `switch` when the 0/1 invariant must hold.
pub type BinMatrix = SquareMatrix<u8>;

pub fn binary_from_rows(rows: Vec<Vec<u8>>) -> Result<BinMatrix> {
    let m = SquareMatrix::from_rows(rows)?;
    validate_binary(&m)?;
    Ok(m)
}

pub fn validate_binary(m: &BinMatrix) -> Result<()> {
    for (i, j, &v) in m.iter_indexed() {
        if v > 1 {
            return Err(Error::NotBinary { i, j, value: v });
        }
    }
    Ok(())
}

/// Entrywise dot product against a binary selection.
pub fn masked_sum<W>(weights: &SquareMatrix<W>, mask: &BinMatrix) -> W
where
    W: Zero + Clone + std::ops::Add<Output = W>,
{
    mask.iter_indexed().fold(W::zero(), |acc, (i, j, &v)| {
        if v == 1 {
            acc + weights[(i, j)].clone()
        } else {
            acc
        }
    })
}

//! Minimal dense square matrix, row-major. Everything this crate needs is
//! elementwise access, row slices and column strides; no linear algebra
//! library is pulled in for that.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// Dense `n x n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    /// Matrix filled with a constant.
    pub fn filled(n: usize, value: S) -> Self {
        Matrix { n, data: vec![value; n * n] }
    }

    /// Zero matrix.
    pub fn zeros(n: usize) -> Self {
        Self::filled(n, S::zero())
    }

    /// Build from a function of (row, col).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Build from a row-major vector; `data.len()` must equal `n * n`.
    pub fn from_vec(n: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), n * n, "matrix data length must be n*n");
        Matrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    /// Flat row-major view.
    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [S] {
        &mut self.data
    }

    /// True iff every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Elementwise map.
    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Matrix { n: self.n, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Maximum absolute entry; zero for an empty matrix.
    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, &v| m.max(v.abs()))
    }
}

impl<S: Scalar> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n + j]
    }
}

impl<S: Scalar> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n + j]
    }
}

//! Dense matrices over MPFR floats.

mod eigen;
mod lu;

pub use eigen::{sym_eigen, tridiagonal_eigenvalues, tridiagonalize, SymEigen};
pub use lu::{determinant, solve_full_pivot, FullPivotSolve};

use std::ops::{Index, IndexMut};

use rug::Float;

use crate::mp::{self, Prec};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    prec: Prec,
    data: Vec<Float>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, prec: Prec) -> Self {
        Mat { rows, cols, prec, data: vec![Float::new(prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: Prec) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m[(i, i)] = mp::one(prec);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, prec: Prec, mut f: impl FnMut(usize, usize) -> Float) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(Float::with_val(prec, f(i, j)));
            }
        }
        Mat { rows, cols, prec, data }
    }

    pub fn from_f64(rows: &[&[f64]], prec: Prec) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, prec, |i, j| Float::with_val(prec, rows[i][j]))
    }

    /// Symmetric tridiagonal matrix with the given diagonal and off diagonal.
    pub fn tridiagonal(diag: &[Float], off: &[Float], prec: Prec) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m[(i, i)] = Float::with_val(prec, &diag[i]);
        }
        for (i, b) in off.iter().enumerate().take(n.saturating_sub(1)) {
            m[(i, i + 1)] = Float::with_val(prec, b);
            m[(i + 1, i)] = Float::with_val(prec, b);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn row(&self, i: usize) -> &[Float] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Float] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Float> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Float]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = Float::with_val(self.prec, x);
        }
    }

    pub fn with_prec(&self, prec: Prec) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            prec,
            data: self.data.iter().map(|x| Float::with_val(prec, x)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.prec, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols, self.prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Float]) -> Vec<Float> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| mp::dot(self.row(i), v)).collect()
    }

    /// Principal submatrix with the first `k` rows and columns removed.
    pub fn drop_leading(&self, k: usize) -> Mat {
        let n = self.rows - k;
        Self::from_fn(n, self.cols - k, self.prec, |i, j| self[(i + k, j + k)].clone())
    }

    pub fn max_abs(&self) -> Float {
        mp::max_abs(self.prec, &self.data)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Largest entry of `|A - A^T|`.
    pub fn asymmetry(&self) -> Float {
        let mut m = Float::new(self.prec);
        for i in 0..self.rows {
            for j in 0..i {
                let d = Float::with_val(self.prec, &self[(i, j)] - &self[(j, i)]).abs();
                if d > m {
                    m = d;
                }
            }
        }
        m
    }

    /// `P^T A P` for the permutation `perm` (new index `i` reads old index `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Mat {
        Self::from_fn(perm.len(), perm.len(), self.prec, |i, j| self[(perm[i], perm[j])].clone())
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_f64()).collect()).collect()
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Float;
    fn index(&self, (i, j): (usize, usize)) -> &Float {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Float {
        &mut self.data[i * self.cols + j]
    }
}

/// Orthonormalizes `v` against the orthonormal rows in `basis` (two passes).
pub fn orthogonalize(v: &mut [Float], basis: &[Vec<Float>]) {
    for _ in 0..2 {
        for q in basis {
            let c = mp::dot(q, v);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= &c * qi;
            }
        }
    }
}

//! Floating-point dense linear algebra.
//!
//! Everything approximate in the crate funnels through [`eigh`]: spectral sums,
//! weighted step matrices, compound spectra and the PSD projections of the SOS solver.

mod jacobi;
mod simplex;

pub use jacobi::{eigh, eigh_with, eigvalsh, EighOptions};
pub use simplex::project_simplex;

use crate::error::{Error, Result};
use std::fmt;

/// Dense row-major real matrix of arbitrary shape.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    /// Column vector.
    pub fn column(v: &[f64]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, got: other.rows * other.cols });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:>10.6}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Dense symmetric matrix. Every write goes to both `(i, j)` and `(j, i)`, so
/// symmetry holds exactly by construction.
#[derive(Clone, PartialEq)]
pub struct SymMatF {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatF {
    pub fn zeros(dim: usize) -> Self {
        SymMatF { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SymMatF::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from the upper triangle of `f`; `f(i, j)` is only called with `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatF::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rejects input that is not exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        SymMatF::try_from(&m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn scale(&self, s: f64) -> SymMatF {
        SymMatF { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add_scaled_identity(&self, s: f64) -> SymMatF {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += s;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &SymMatF) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in i..self.dim {
                if !self.get(i, j).is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

impl TryFrom<&Matrix> for SymMatF {
    type Error = Error;

    fn try_from(m: &Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::DimensionMismatch { expected: m.rows, got: m.cols });
        }
        for i in 0..m.rows {
            for j in (i + 1)..m.cols {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::invalid(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(SymMatF { dim: m.rows, data: m.data.clone() })
    }
}

impl fmt::Debug for SymMatF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym{:?}", self.to_matrix())
    }
}

/// Eigenvalues sorted descending, with eigenvector `i` stored in column `i`.
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl EigenDecomp {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.col(i)
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> SymMatF {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        SymMatF::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)]).sum())
    }
}

/// Kronecker product: `(A⊗B)[i·p + k, j·q + l] = A[i,j]·B[k,l]` for `B` of shape `p×q`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (p, q) = b.shape();
    Matrix::from_fn(a.rows * p, a.cols * q, |r, c| a[(r / p, c / q)] * b[(r % p, c % q)])
}

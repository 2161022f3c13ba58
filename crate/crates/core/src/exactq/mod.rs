//! Exact rational linear algebra.
//!
//! [`SymMatQ`] stores arbitrary-precision rationals (always in lowest terms, which
//! `BigRational` maintains after every operation). PSD-ness is decided by
//! [`ldl_psd_check`], which either returns an exact rank-one decomposition or a
//! rational vector on which the quadratic form is negative.

mod approx;
mod ldl;
pub mod linsys;

pub use approx::rational_approx;
pub use ldl::{ldl_psd_check, PsdWitness, RankOneTerm};

use crate::error::{Error, Result};
use crate::numerics::SymMatF;
use crate::textfmt::rational_to_f64;
use crate::Rational;
use num_traits::{One, Zero};
use std::fmt;

/// Dense symmetric rational matrix; writes update both triangles.
#[derive(Clone, PartialEq, Eq)]
pub struct SymMatQ {
    dim: usize,
    data: Vec<Rational>,
}

impl SymMatQ {
    pub fn zeros(dim: usize) -> Self {
        SymMatQ { dim, data: vec![Rational::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Rational::one())
    }

    pub fn scalar(dim: usize, c: Rational) -> Self {
        let mut m = SymMatQ::zeros(dim);
        for i in 0..dim {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Builds from the upper triangle; `f(i, j)` is called with `i <= j` only.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = SymMatQ::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rejects input that is not square or not exactly symmetric.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::invalid(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(SymMatQ { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        if i != j {
            self.data[j * self.dim + i] = v.clone();
        }
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.dim.max(1)).map(<[Rational]>::to_vec).collect()
    }

    pub fn to_f64(&self) -> SymMatF {
        SymMatF::from_fn(self.dim, |i, j| rational_to_f64(self.get(i, j)))
    }

    pub fn add_scaled_identity(&self, c: &Rational) -> SymMatQ {
        let mut out = self.clone();
        for i in 0..self.dim {
            let v = out.get(i, i) + c;
            out.set(i, i, v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_denominator(&self) -> num_bigint::BigInt {
        self.data.iter().map(|r| r.denom().clone()).max().unwrap_or_else(num_bigint::BigInt::one)
    }
}

impl fmt::Debug for SymMatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatQ {}x{}", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(crate::textfmt::format_rational).collect();
            writeln!(f, "  [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Exact quadratic form `zᵀQz`.
pub fn q_eval(q: &SymMatQ, z: &[Rational]) -> Result<Rational> {
    if z.len() != q.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), got: z.len() });
    }
    let mut total = Rational::zero();
    for (i, zi) in z.iter().enumerate() {
        if zi.is_zero() {
            continue;
        }
        let mut row = Rational::zero();
        for (j, zj) in z.iter().enumerate() {
            let qij = q.get(i, j);
            if !zj.is_zero() && !qij.is_zero() {
                row += qij * zj;
            }
        }
        total += zi * row;
    }
    Ok(total)
}

#[cfg(test)]
pub(crate) fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

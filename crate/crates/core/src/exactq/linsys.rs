//! Sparse exact Gauss-Jordan elimination over ℚ.
//!
//! Used to pin down free parameters that must satisfy extra linear
//! relations (for instance kernel vectors a PSD matrix is forced to have)
//! before rounding the rest.

use crate::error::{Error, Result};
use crate::Rational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

pub type SparseRow = BTreeMap<usize, Rational>;

/// A system reduced to row echelon form where every pivot variable is expressed
/// through non-pivot variables only: `x_p + Σ c_j x_j = r`.
#[derive(Clone, Debug, Default)]
pub struct Reduced {
    nvars: usize,
    pivots: BTreeMap<usize, (SparseRow, Rational)>,
}

impl Reduced {
    pub fn new(nvars: usize) -> Self {
        Reduced { nvars, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_pivot(&self, var: usize) -> bool {
        self.pivots.contains_key(&var)
    }

    /// Adds `Σ row[j] x_j = rhs`. Redundant equations are dropped; contradictory ones error.
    pub fn push(&mut self, mut row: SparseRow, mut rhs: Rational) -> Result<()> {
        // Substitute existing pivots.
        let hits: Vec<usize> = row.keys().copied().filter(|v| self.pivots.contains_key(v)).collect();
        for v in hits {
            let Some(c) = row.remove(&v) else { continue };
            let (prow, prhs) = &self.pivots[&v];
            rhs -= &c * prhs;
            for (j, a) in prow {
                let e = row.entry(*j).or_insert_with(Rational::zero);
                *e -= &c * a;
                if e.is_zero() {
                    row.remove(j);
                }
            }
        }
        row.retain(|_, c| !c.is_zero());
        if row.is_empty() {
            return if rhs.is_zero() { Ok(()) } else { Err(Error::invalid("inconsistent linear system")) };
        }

        let (&p, _) = row
            .iter()
            .max_by(|(i, a), (j, b)| a.abs().cmp(&b.abs()).then(j.cmp(i)))
            .expect("non-empty row");
        let lead = row.remove(&p).expect("pivot present");
        for c in row.values_mut() {
            *c /= &lead;
        }
        rhs /= &lead;

        // Keep the system fully reduced: eliminate p from older pivot rows.
        for (prow, prhs) in self.pivots.values_mut() {
            let Some(c) = prow.remove(&p) else { continue };
            *prhs -= &c * &rhs;
            for (j, a) in &row {
                let e = prow.entry(*j).or_insert_with(Rational::zero);
                *e -= &c * a;
                if e.is_zero() {
                    prow.remove(j);
                }
            }
        }
        self.pivots.insert(p, (row, rhs));
        Ok(())
    }

    /// Full assignment: non-pivot variables from `free`, pivot variables solved.
    pub fn solve(&self, mut free: impl FnMut(usize) -> Rational) -> Vec<Rational> {
        let mut x: Vec<Rational> = (0..self.nvars)
            .map(|v| if self.is_pivot(v) { Rational::zero() } else { free(v) })
            .collect();
        for (&p, (row, rhs)) in &self.pivots {
            let mut v = rhs.clone();
            for (j, c) in row {
                v -= c * &x[*j];
            }
            x[p] = v;
        }
        x
    }
}

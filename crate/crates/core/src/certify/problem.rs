use crate::compound::{pairs, psi};
use crate::exactq::SymMatQ;
use crate::stepmodel::CandidateGraph;
use crate::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// The coefficient system behind
/// `c·I − ψ(M*(x)) = V(x)ᵀ Q V(x) + (1 − ‖x‖²)·T`, `V(x) = (1, x)ᵀ ⊗ I_m`,
/// with `M*(x) = diag(x)·A·diag(x)` and `m = C(k, 2)`.
///
/// `Q` is split into `(k+1)²` blocks `Q_ab` of size `m`. Matching coefficients and
/// eliminating `T = c·I − Q_00` leaves
///
/// * `Q_00 + Q_ii = c·I − A_ii·ψ(E_ii)` for `i = 1..k` (`diag_rhs`),
/// * `Q_0i + Q_i0 = 0` (each `Q_0i` skew),
/// * `Q_ij + Q_ji = −A_ij·ψ(E_ij + E_ji)` for `i < j` (`pair_rhs`).
///
/// Free parameters are the upper triangle of `Q_00` and the strict upper triangle of
/// the skew part of each `Q_ab`, `a < b`; everything else is determined by them.
#[derive(Clone, Debug)]
pub struct SosProblem {
    pub candidate: CandidateGraph,
    pub bound: Rational,
    pub k: usize,
    pub m: usize,
    /// `diag_rhs[i - 1] = c·I − A_ii·ψ(E_ii)`.
    pub diag_rhs: Vec<SymMatQ>,
    /// Keyed by block indices `(a, b)`, `0 <= a < b <= k`; zero when `a = 0`.
    pub pair_rhs: BTreeMap<(usize, usize), SymMatQ>,
    /// Index sets of `Q` that may interact (see [`SosProblem::classes`]).
    pub classes: Vec<Vec<usize>>,
    pub params: Vec<FreeParam>,
    param_of: BTreeMap<FreeParam, usize>,
    class_of: Vec<usize>,
}

/// A free scalar of the parametrization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreeParam {
    /// `Q_00[r][s]`, `r <= s`.
    Q00 { r: usize, s: usize },
    /// Skew part of `Q_ab[r][s]`, `a < b`, `r < s`.
    Skew { a: usize, b: usize, r: usize, s: usize },
}

/// Entry of `Q` as `constant + sign·param`.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub constant: Rational,
    pub term: Option<(usize, i8)>,
}

/// Counts of the three equation families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstraintCounts {
    pub diagonal_blocks: usize,
    pub skew_blocks: usize,
    pub pair_blocks: usize,
}

/// Builds the system for `candidate` at bound `c`.
///
/// With `sign_symmetry`, parameters are restricted to the subspace fixed by the sign
/// flips `x_i → −x_i`. Each flip maps a feasible `(Q, T)` to a feasible one, so the
/// average over the group is feasible whenever anything is, and the restriction loses
/// nothing. Under it `Q[I][J]` can be nonzero only when `I` and `J` have the same
/// parity vector, where index `(a, {i, j})` has parity `e_a + e_i + e_j` over GF(2)
/// (with `e_0 = 0`). This splits the PSD constraint into small independent blocks.
pub fn assemble(candidate: &CandidateGraph, bound: Rational, sign_symmetry: bool) -> SosProblem {
    let k = candidate.k();
    assert!(k >= 2, "candidate needs at least two blocks");
    let pr = pairs(k);
    let m = pr.len();
    let n = (k + 1) * m;
    let elem = |i: usize, j: usize| -> SymMatQ {
        SymMatQ::from_fn(k, |a, b| if (a, b) == (i.min(j), i.max(j)) { Rational::one() } else { Rational::zero() })
    };
    let adj = |i: usize, j: usize| if candidate.adjacent(i, j) { Rational::one() } else { Rational::zero() };

    let diag_rhs: Vec<SymMatQ> = (0..k)
        .map(|i| {
            let p = psi(&elem(i, i));
            let a = adj(i, i);
            SymMatQ::from_fn(m, |r, s| {
                let id = if r == s { bound.clone() } else { Rational::zero() };
                id - &a * p.get(r, s)
            })
        })
        .collect();

    let mut pair_rhs = BTreeMap::new();
    for b in 1..=k {
        pair_rhs.insert((0, b), SymMatQ::zeros(m));
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let p = psi(&elem(i, j));
            let a = adj(i, j);
            pair_rhs.insert((i + 1, j + 1), SymMatQ::from_fn(m, |r, s| -(&a * p.get(r, s))));
        }
    }

    let parity = |idx: usize| -> u32 {
        if !sign_symmetry {
            return 0;
        }
        let (a, p) = (idx / m, idx % m);
        let (i, j) = pr[p];
        let base = if a > 0 { 1u32 << (a - 1) } else { 0 };
        base ^ (1 << i) ^ (1 << j)
    };
    let mut by_parity: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for idx in 0..n {
        by_parity.entry(parity(idx)).or_default().push(idx);
    }
    let mut classes: Vec<Vec<usize>> = by_parity.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    let mut class_of = vec![0; n];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            class_of[i] = c;
        }
    }

    let mut params = Vec::new();
    for r in 0..m {
        for s in r..m {
            if class_of[r] == class_of[s] {
                params.push(FreeParam::Q00 { r, s });
            }
        }
    }
    for a in 0..=k {
        for b in (a + 1)..=k {
            for r in 0..m {
                for s in (r + 1)..m {
                    if class_of[a * m + r] == class_of[b * m + s] {
                        params.push(FreeParam::Skew { a, b, r, s });
                    }
                }
            }
        }
    }
    let param_of = params.iter().enumerate().map(|(i, p)| (*p, i)).collect();

    SosProblem { candidate: candidate.clone(), bound, k, m, diag_rhs, pair_rhs, classes, params, param_of, class_of }
}

impl SosProblem {
    pub fn dim_q(&self) -> usize {
        (self.k + 1) * self.m
    }

    pub fn constraint_counts(&self) -> ConstraintCounts {
        ConstraintCounts { diagonal_blocks: self.k, skew_blocks: self.k, pair_blocks: self.k * (self.k - 1) / 2 }
    }

    pub fn same_class(&self, i: usize, j: usize) -> bool {
        self.class_of[i] == self.class_of[j]
    }

    /// `Q[I][J]` in terms of the free parameters.
    pub fn entry(&self, big_i: usize, big_j: usize) -> Affine {
        let m = self.m;
        let (mut a, mut r) = (big_i / m, big_i % m);
        let (mut b, mut s) = (big_j / m, big_j % m);
        if a == b {
            let key = FreeParam::Q00 { r: r.min(s), s: r.max(s) };
            let param = self.param_of.get(&key).copied();
            return if a == 0 {
                Affine { constant: Rational::zero(), term: param.map(|p| (p, 1)) }
            } else {
                Affine { constant: self.diag_rhs[a - 1].get(r, s).clone(), term: param.map(|p| (p, -1)) }
            };
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut r, &mut s);
        }
        let constant = self.pair_rhs[&(a, b)].get(r, s) / Rational::from_integer(2.into());
        if r == s {
            return Affine { constant, term: None };
        }
        let key = FreeParam::Skew { a, b, r: r.min(s), s: r.max(s) };
        let term = self.param_of.get(&key).map(|&p| (p, if r < s { 1 } else { -1 }));
        Affine { constant, term }
    }

    /// Exact `Q` and `T = c·I − Q_00` for given parameter values.
    pub fn build(&self, values: &[Rational]) -> (SymMatQ, SymMatQ) {
        assert_eq!(values.len(), self.params.len());
        let q = SymMatQ::from_fn(self.dim_q(), |i, j| {
            let e = self.entry(i, j);
            match e.term {
                None => e.constant,
                Some((p, 1)) => e.constant + &values[p],
                Some((p, _)) => e.constant - &values[p],
            }
        });
        let t = SymMatQ::from_fn(self.m, |r, s| {
            let id = if r == s { self.bound.clone() } else { Rational::zero() };
            id - q.get(r, s)
        });
        (q, t)
    }

    /// Parameter values read off a numerical `Q` (upper triangle of `Q_00`, skew parts).
    pub fn extract_params(&self, q: &crate::numerics::SymMatF) -> Vec<f64> {
        let m = self.m;
        self.params
            .iter()
            .map(|p| match *p {
                FreeParam::Q00 { r, s } => q.get(r, s),
                FreeParam::Skew { a, b, r, s } => 0.5 * (q.get(a * m + r, b * m + s) - q.get(a * m + s, b * m + r)),
            })
            .collect()
    }
}

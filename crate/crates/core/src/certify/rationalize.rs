use super::problem::SosProblem;
use super::Certificate;
use crate::exactq::linsys::{Reduced, SparseRow};
use crate::exactq::rational_approx;
use crate::numerics::{eigh, SymMatF};
use crate::Rational;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct RationalizeConfig {
    /// Denominator bound for rounded free parameters.
    pub max_den: u64,
    /// Detect the numerical kernel of `Q` and impose it exactly before rounding.
    pub facial_reduction: bool,
    /// Eigenvalues below this count as kernel.
    pub kernel_tol: f64,
    /// Denominator bound for the entries of rounded kernel vectors.
    pub kernel_den: u64,
}

impl Default for RationalizeConfig {
    fn default() -> Self {
        RationalizeConfig { max_den: 10_000, facial_reduction: true, kernel_tol: 1e-7, kernel_den: 1_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Rationalized {
    pub certificate: Certificate,
    /// Kernel vectors imposed exactly.
    pub kernel_vectors: usize,
    /// Kernel vectors dropped because they contradicted the constraints.
    pub kernel_rejected: usize,
    /// Parameters fixed by the kernel equations instead of rounding.
    pub solved_params: usize,
    pub rounded_params: usize,
}

/// Rounds with default settings apart from `max_den`.
pub fn rationalize(problem: &SosProblem, q_num: &SymMatF, max_den: u64) -> Rationalized {
    rationalize_with(problem, q_num, &RationalizeConfig { max_den, ..RationalizeConfig::default() })
}

/// Turns a numerical solution into exact matrices satisfying the coefficient identity.
///
/// Free parameters are read off `q_num` and rounded to denominators at most `max_den`;
/// the dependent entries of `Q` and `T = c·I − Q_00` are then computed exactly, so the
/// identity holds by construction. `T_num` is not needed for this.
///
/// Rounding alone breaks PSD-ness whenever `Q` has to be singular (as it does when the
/// bound is attained): arbitrarily small perturbations push zero eigenvalues negative.
/// With `facial_reduction`, each class block's numerical kernel is rounded to rational
/// vectors `v`, the linear equations `Q·v = 0` are imposed exactly on the parameters,
/// and only the parameters those equations leave free are rounded.
pub fn rationalize_with(problem: &SosProblem, q_num: &SymMatF, cfg: &RationalizeConfig) -> Rationalized {
    let numeric = problem.extract_params(q_num);
    let mut system = Reduced::new(problem.params.len());
    let (mut accepted, mut rejected) = (0, 0);

    if cfg.facial_reduction {
        for cl in &problem.classes {
            for kv in kernel_basis(q_num, cl, cfg) {
                let before = system.clone();
                let ok = cl.iter().all(|&bi| {
                    let mut row = SparseRow::new();
                    let mut constant = Rational::zero();
                    for (&bj, v) in cl.iter().zip(&kv) {
                        if v.is_zero() {
                            continue;
                        }
                        let e = problem.entry(bi, bj);
                        constant += &e.constant * v;
                        if let Some((p, sign)) = e.term {
                            let c = row.entry(p).or_insert_with(Rational::zero);
                            if sign > 0 {
                                *c += v;
                            } else {
                                *c -= v;
                            }
                        }
                    }
                    system.push(row, -constant).is_ok()
                });
                if ok {
                    accepted += 1;
                } else {
                    system = before;
                    rejected += 1;
                }
            }
        }
    }

    let values = system.solve(|p| rational_approx(numeric[p], cfg.max_den));
    let (q, t) = problem.build(&values);
    Rationalized {
        certificate: Certificate::new(problem.candidate.name, problem.bound.clone(), problem.k, q, t),
        kernel_vectors: accepted,
        kernel_rejected: rejected,
        solved_params: system.rank(),
        rounded_params: problem.params.len() - system.rank(),
    }
}

/// Kernel of the class block in reduced row echelon form, rounded entrywise.
fn kernel_basis(q: &SymMatF, cl: &[usize], cfg: &RationalizeConfig) -> Vec<Vec<Rational>> {
    let s = cl.len();
    let block = SymMatF::from_fn(s, |i, j| q.get(cl[i], cl[j]));
    let d = eigh(&block).expect("finite solution");
    let mut rows: Vec<Vec<f64>> = (0..s).filter(|&t| d.eigenvalues[t] < cfg.kernel_tol).map(|t| d.vector(t)).collect();
    let mut r = 0;
    for col in 0..s {
        if r == rows.len() {
            break;
        }
        let p = (r..rows.len()).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs())).expect("rows left");
        if rows[p][col].abs() < 1e-6 {
            continue;
        }
        rows.swap(r, p);
        let lead = rows[r][col];
        rows[r].iter_mut().for_each(|x| *x /= lead);
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][col];
                for c in 0..s {
                    rows[i][c] -= f * rows[r][c];
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.into_iter().map(|row| row.into_iter().map(|x| rational_approx(x, cfg.kernel_den)).collect()).collect()
}

use super::problem::SosProblem;
use crate::numerics::{eigh, eigvalsh, SymMatF};
use crate::textfmt::rational_to_f64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Bound on both the affine residual (max-norm) and the most negative eigenvalue.
    pub tol: f64,
    /// Iteration budget per run.
    pub max_iter: usize,
    pub seed: u64,
    /// Independent runs whose PSD iterates are averaged. Averaging moves the point
    /// towards the relative interior of the feasible set, which is what rounding needs.
    pub runs: usize,
    /// Margin for the strictly feasible first attempt (`Q ⪰ ε·I`); 0 disables it.
    pub epsilon: f64,
    /// Iterations granted to the strictly feasible attempt before falling back to `ε = 0`.
    pub epsilon_iters: usize,
    /// Relaxation factor of the reflection step (1 is plain Douglas-Rachford).
    pub relaxation: f64,
    /// Residuals are evaluated every this many iterations.
    pub check_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-9,
            max_iter: 50_000,
            seed: 0,
            runs: 4,
            epsilon: 1e-6,
            epsilon_iters: 2_000,
            relaxation: 1.0,
            check_every: 25,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NumericSolution {
    pub q: SymMatF,
    pub t: SymMatF,
    /// `max |x − P_A(x)|` for the averaged PSD iterate `x`.
    pub affine_residual: f64,
    /// Smallest eigenvalue of the returned (affinely feasible) `Q`.
    pub min_eig: f64,
    pub iterations: usize,
    pub runs: usize,
    /// Margin that the returned point was computed with.
    pub epsilon: f64,
}

#[derive(Clone, Debug)]
pub struct NotFound {
    pub affine_residual: f64,
    pub min_eig: f64,
    pub iterations: usize,
}

/// Precomputed float data for the two projections.
pub(crate) struct Projector<'a> {
    problem: &'a SosProblem,
    n: usize,
    diag_rhs: Vec<Vec<f64>>,
    pair_rhs: Vec<((usize, usize), Vec<f64>)>,
}

impl<'a> Projector<'a> {
    pub(crate) fn new(problem: &'a SosProblem) -> Self {
        let m = problem.m;
        let dense = |s: &crate::exactq::SymMatQ| -> Vec<f64> {
            (0..m * m).map(|t| rational_to_f64(s.get(t / m, t % m))).collect()
        };
        Projector {
            problem,
            n: problem.dim_q(),
            diag_rhs: problem.diag_rhs.iter().map(dense).collect(),
            pair_rhs: problem.pair_rhs.iter().map(|(&ab, s)| (ab, dense(s))).collect(),
        }
    }

    /// Orthogonal projection onto the affine set (Frobenius norm): off-diagonal blocks
    /// keep their skew part and take the prescribed symmetric part; the diagonal blocks
    /// `(Q_00, Q_ii)` are corrected by the least-squares split of each residual
    /// `Q_00 + Q_ii − C_i`.
    pub(crate) fn project_affine(&self, y: &[f64], out: &mut [f64]) {
        let (n, m, k) = (self.n, self.problem.m, self.problem.k);
        out.copy_from_slice(y);
        for ((a, b), rhs) in &self.pair_rhs {
            for r in 0..m {
                for s in 0..m {
                    let yrs = y[(a * m + r) * n + b * m + s];
                    let ysr = y[(a * m + s) * n + b * m + r];
                    let v = 0.5 * (yrs - ysr) + 0.5 * rhs[r * m + s];
                    out[(a * m + r) * n + b * m + s] = v;
                    out[(b * m + s) * n + a * m + r] = v;
                }
            }
        }
        for r in 0..m {
            for s in 0..m {
                let y0 = y[r * n + s];
                let resid: Vec<f64> =
                    (1..=k).map(|i| y0 + y[(i * m + r) * n + i * m + s] - self.diag_rhs[i - 1][r * m + s]).collect();
                let mean = resid.iter().sum::<f64>() / (k + 1) as f64;
                out[r * n + s] = y0 - mean;
                for i in 1..=k {
                    out[(i * m + r) * n + i * m + s] = y[(i * m + r) * n + i * m + s] - (resid[i - 1] - mean);
                }
            }
        }
    }

    /// Eigenvalue clipping at `eps`, class block by class block. Entries between
    /// different classes are set to zero.
    pub(crate) fn project_psd(&self, y: &[f64], out: &mut [f64], eps: f64) {
        let n = self.n;
        out.iter_mut().for_each(|v| *v = 0.0);
        for cl in &self.problem.classes {
            let b = SymMatF::from_fn(cl.len(), |i, j| 0.5 * (y[cl[i] * n + cl[j]] + y[cl[j] * n + cl[i]]));
            let d = eigh(&b).expect("finite iterate");
            let w: Vec<f64> = d.eigenvalues.iter().map(|&l| l.max(eps)).collect();
            for i in 0..cl.len() {
                for j in i..cl.len() {
                    let v: f64 = (0..cl.len()).map(|t| d.eigenvectors[(i, t)] * w[t] * d.eigenvectors[(j, t)]).sum();
                    out[cl[i] * n + cl[j]] = v;
                    out[cl[j] * n + cl[i]] = v;
                }
            }
        }
    }

    pub(crate) fn min_eig(&self, y: &[f64]) -> f64 {
        let n = self.n;
        self.problem
            .classes
            .iter()
            .map(|cl| {
                let b = SymMatF::from_fn(cl.len(), |i, j| y[cl[i] * n + cl[j]]);
                *eigvalsh(&b).expect("finite").last().expect("non-empty class")
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

struct RunOutcome {
    x: Vec<f64>,
    affine_residual: f64,
    min_eig: f64,
    iterations: usize,
    converged: bool,
}

fn run(proj: &Projector, z: &mut [f64], eps: f64, budget: usize, cfg: &SolverConfig) -> RunOutcome {
    let n = proj.n;
    let mut x = vec![0.0; n * n];
    let mut refl = vec![0.0; n * n];
    let mut y = vec![0.0; n * n];
    let mut q = vec![0.0; n * n];
    for it in 1..=budget {
        proj.project_psd(z, &mut x, eps);
        for t in 0..n * n {
            refl[t] = 2.0 * x[t] - z[t];
        }
        proj.project_affine(&refl, &mut y);
        for t in 0..n * n {
            z[t] += cfg.relaxation * (y[t] - x[t]);
        }
        if it % cfg.check_every == 0 || it == budget {
            if max_abs_diff(&x, &y) > cfg.tol {
                continue;
            }
            proj.project_affine(&x, &mut q);
            let last = (max_abs_diff(&x, &q), proj.min_eig(&q));
            if last.0 <= cfg.tol && last.1 >= -cfg.tol {
                return RunOutcome { x, affine_residual: last.0, min_eig: last.1, iterations: it, converged: true };
            }
        }
    }
    proj.project_psd(z, &mut x, eps);
    proj.project_affine(&x, &mut q);
    let last = (max_abs_diff(&x, &q), proj.min_eig(&q));
    RunOutcome { x, affine_residual: last.0, min_eig: last.1, iterations: budget, converged: false }
}

/// Numerical feasibility solve by Douglas-Rachford splitting between the PSD cone and
/// the affine coefficient constraints.
///
/// Each run starts from a random symmetric matrix supported on the class blocks. The
/// first run tries the margin `ε` for `epsilon_iters` iterations; if that stalls, every
/// run uses `ε = 0`. The PSD iterates of all runs are averaged and projected onto the
/// affine set once more. Fails with [`NotFound`] when any run misses `tol` within
/// `max_iter`, which signals infeasibility or an insufficient budget (nothing is proved).
pub fn sdp_solve(problem: &SosProblem, cfg: &SolverConfig) -> Result<NumericSolution, NotFound> {
    assert!(cfg.tol > 0.0, "tol must be positive");
    let proj = Projector::new(problem);
    let n = proj.n;
    let mut eps = cfg.epsilon;
    let mut total_iters = 0;
    let mut acc = vec![0.0; n * n];

    for r in 0..cfg.runs.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(r as u64);
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let g: f64 = StandardNormal.sample(&mut rng);
                if problem.same_class(i, j) {
                    z[i * n + j] = 0.3 * g;
                    z[j * n + i] = 0.3 * g;
                }
            }
        }
        let out = if eps > 0.0 {
            let z0 = z.clone();
            let tried = run(&proj, &mut z, eps, cfg.epsilon_iters.min(cfg.max_iter), cfg);
            total_iters += tried.iterations;
            if tried.converged {
                tried
            } else {
                eps = 0.0;
                z = z0;
                run(&proj, &mut z, 0.0, cfg.max_iter, cfg)
            }
        } else {
            run(&proj, &mut z, 0.0, cfg.max_iter, cfg)
        };
        total_iters += out.iterations;
        if !out.converged {
            return Err(NotFound { affine_residual: out.affine_residual, min_eig: out.min_eig, iterations: total_iters });
        }
        for (a, v) in acc.iter_mut().zip(&out.x) {
            *a += v;
        }
    }

    let runs = cfg.runs.max(1);
    acc.iter_mut().for_each(|v| *v /= runs as f64);
    let mut q = vec![0.0; n * n];
    proj.project_affine(&acc, &mut q);
    let affine_residual = max_abs_diff(&acc, &q);
    let min_eig = proj.min_eig(&q);
    let qm = SymMatF::from_fn(n, |i, j| 0.5 * (q[i * n + j] + q[j * n + i]));
    let c = rational_to_f64(&problem.bound);
    let t = SymMatF::from_fn(problem.m, |r, s| (if r == s { c } else { 0.0 }) - qm.get(r, s));
    Ok(NumericSolution { q: qm, t, affine_residual, min_eig, iterations: total_iters, runs, epsilon: eps })
}

#[cfg(test)]
mod tests {
    use super::super::problem::assemble;
    use super::*;
    use crate::stepmodel::Candidate;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn affine_projection_is_idempotent_and_feasible() {
        let p = assemble(&Candidate::P4.graph(), q(8, 7), true);
        let proj = Projector::new(&p);
        let n = p.dim_q();
        let y: Vec<f64> = (0..n * n).map(|t| ((t * 7919) % 101) as f64 / 50.0 - 1.0).collect();
        let y: Vec<f64> = (0..n * n).map(|t| 0.5 * (y[t] + y[(t % n) * n + t / n])).collect();
        let mut a = vec![0.0; n * n];
        let mut b = vec![0.0; n * n];
        proj.project_affine(&y, &mut a);
        proj.project_affine(&a, &mut b);
        assert!(max_abs_diff(&a, &b) < 1e-14);
        let m = p.m;
        for i in 1..=p.k {
            for r in 0..m {
                let lhs = a[r * n + r] + a[(i * m + r) * n + i * m + r];
                assert!((lhs - rational_to_f64(p.diag_rhs[i - 1].get(r, r))).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn trivial_problem_converges_to_zero() {
        let p = assemble(&Candidate::P2.graph(), q(1, 1), true);
        let s = sdp_solve(&p, &SolverConfig::default()).unwrap();
        assert!(s.q.as_slice().iter().all(|v| v.abs() < 1e-8));
        assert!((s.t.get(0, 0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn below_the_extremal_value_is_not_found() {
        let p = assemble(&Candidate::H6.graph(), q(9, 8), true);
        let cfg = SolverConfig { max_iter: 2_000, epsilon: 0.0, ..SolverConfig::default() };
        let err = sdp_solve(&p, &cfg).unwrap_err();
        assert!(err.affine_residual > cfg.tol || err.min_eig < -cfg.tol);
    }
}

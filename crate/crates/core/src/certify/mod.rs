//! Exact matrix sum-of-squares certificates for `λ1 + λ2 ≤ c` on a looped base graph.
//!
//! With `M*(x) = diag(x)·A·diag(x)`, a certificate is a pair of rational matrices with
//!
//! ```text
//! c·I − ψ(M*(x)) = V(x)ᵀ Q V(x) + (1 − ‖x‖²)·T,    Q ⪰ 0,
//! ```
//!
//! so on the unit sphere `c·I − ψ(M*(x)) ⪰ 0`, i.e. the two largest eigenvalues of
//! `M*(x)` sum to at most `c`. Taking `x = √u` covers every step model on the base.
//!
//! Pipeline: [`assemble`] → [`sdp_solve`] → [`rationalize`] → [`verify_identity`] →
//! [`verify_psd`], driven by [`certify`].

mod file;
mod problem;
mod rationalize;
mod solver;
mod verify;

pub use file::{parse_certificate, write_certificate};
pub use problem::{assemble, Affine, ConstraintCounts, FreeParam, SosProblem};
pub use rationalize::{rationalize, rationalize_with, RationalizeConfig, Rationalized};
pub use solver::{sdp_solve, NotFound, NumericSolution, SolverConfig};
pub use verify::{verify_identity, verify_psd, IdentityReport, Location, Violation, MAX_REPORTED};

use crate::compound::psi;
use crate::exactq::{PsdWitness, SymMatQ};
use crate::numerics::{eigvalsh, SymMatF};
use crate::stepmodel::{Candidate, CandidateGraph};
use crate::textfmt::rational_to_f64;
use crate::Rational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt;

/// `Q` and `T` are stored as plain rows so that a file with an asymmetric entry can be
/// represented and rejected by [`verify_identity`] rather than at parse time.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub candidate: Candidate,
    pub bound: Rational,
    pub k: usize,
    pub m: usize,
    pub q: Vec<Vec<Rational>>,
    pub t: Vec<Vec<Rational>>,
}

impl Certificate {
    pub fn new(candidate: Candidate, bound: Rational, k: usize, q: SymMatQ, t: SymMatQ) -> Self {
        let m = t.dim();
        assert_eq!(q.dim(), (k + 1) * m, "Q must have dimension (k+1)·m");
        Certificate { candidate, bound, k, m, q: q.rows(), t: t.rows() }
    }

    pub fn dim_q(&self) -> usize {
        self.q.len()
    }

    /// Largest denominator among the entries of `Q` and `T`.
    pub fn max_denominator(&self) -> num_bigint::BigInt {
        self.q.iter().chain(&self.t).flatten().map(|r| r.denom().clone()).max().unwrap_or_else(|| 1.into())
    }
}

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub solver: SolverConfig,
    pub rationalize: RationalizeConfig,
    /// `max_den` is doubled on PSD failure while it stays at or below this cap.
    pub max_den_cap: u64,
    /// Additional solves with `tol / 10` and a fresh seed once the cap is exhausted.
    pub tol_retries: usize,
    /// Restrict `Q` to the sign-flip invariant block pattern.
    pub sign_symmetry: bool,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            solver: SolverConfig::default(),
            rationalize: RationalizeConfig::default(),
            max_den_cap: 1 << 20,
            tol_retries: 2,
            sign_symmetry: true,
        }
    }
}

/// A fully verified certificate with the diagnostics of the run that produced it.
#[derive(Clone, Debug)]
pub struct Certified {
    pub certificate: Certificate,
    pub identity: IdentityReport,
    pub psd: PsdWitness,
    pub affine_residual: f64,
    pub min_eig: f64,
    pub iterations: usize,
    pub epsilon: f64,
    pub max_den: u64,
    pub tol: f64,
    pub attempts: usize,
    pub kernel_vectors: usize,
    pub rounded_params: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Solve,
    Identity,
    Psd,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Solve => "sdp_solve",
            Stage::Identity => "verify_identity",
            Stage::Psd => "verify_psd",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CertifyFailure {
    pub stage: Stage,
    pub affine_residual: f64,
    pub min_eig: f64,
    pub iterations: usize,
    pub attempts: usize,
    /// Value of `zᵀQz` for the last PSD counterexample, if any.
    pub witness_value: Option<Rational>,
}

/// Runs the full pipeline for `candidate` at bound `c`.
///
/// On a PSD failure the same numerical solution is re-rounded with doubled `max_den`
/// up to `max_den_cap`; after that the solve is repeated with a tenfold tighter `tol`
/// and the next seed, at most `tol_retries` times.
pub fn certify(candidate: Candidate, c: Rational, cfg: &CertifyConfig) -> Result<Certified, CertifyFailure> {
    let problem = assemble(&candidate.graph(), c, cfg.sign_symmetry);
    let mut solver = cfg.solver.clone();
    let mut attempts = 0;
    let mut last = None;
    for _ in 0..=cfg.tol_retries {
        let sol = sdp_solve(&problem, &solver).map_err(|nf| CertifyFailure {
            stage: Stage::Solve,
            affine_residual: nf.affine_residual,
            min_eig: nf.min_eig,
            iterations: nf.iterations,
            attempts: attempts + 1,
            witness_value: None,
        })?;
        let mut max_den = cfg.rationalize.max_den.max(1);
        loop {
            attempts += 1;
            let rcfg = RationalizeConfig { max_den, ..cfg.rationalize.clone() };
            let r = rationalize_with(&problem, &sol.q, &rcfg);
            let fail = |stage, witness_value| CertifyFailure {
                stage,
                affine_residual: sol.affine_residual,
                min_eig: sol.min_eig,
                iterations: sol.iterations,
                attempts,
                witness_value,
            };
            let identity = verify_identity(&r.certificate);
            if !identity.holds {
                // Reconstruction is exact, so this is a bug rather than a numerical issue.
                return Err(fail(Stage::Identity, None));
            }
            let psd = verify_psd(&r.certificate);
            match psd {
                PsdWitness::Psd { .. } => {
                    return Ok(Certified {
                        certificate: r.certificate,
                        identity,
                        psd,
                        affine_residual: sol.affine_residual,
                        min_eig: sol.min_eig,
                        iterations: sol.iterations,
                        epsilon: sol.epsilon,
                        max_den,
                        tol: solver.tol,
                        attempts,
                        kernel_vectors: r.kernel_vectors,
                        rounded_params: r.rounded_params,
                    })
                }
                PsdWitness::NotPsd { value, .. } => last = Some(fail(Stage::Psd, Some(value))),
            }
            match max_den.checked_mul(2) {
                Some(d) if d <= cfg.max_den_cap => max_den = d,
                _ => break,
            }
        }
        solver.tol = (solver.tol / 10.0).max(1e-14);
        solver.seed = solver.seed.wrapping_add(1);
    }
    Err(last.expect("at least one attempt"))
}

/// `M*(x) = diag(x)·A·diag(x)` for a candidate base.
pub fn weighted_by_x(candidate: &CandidateGraph, x: &[f64]) -> SymMatF {
    SymMatF::from_fn(candidate.k(), |i, j| if candidate.adjacent(i, j) { x[i] * x[j] } else { 0.0 })
}

/// Smallest eigenvalue of `c·I − ψ(M*(x))` over `samples` uniformly random unit `x`.
/// A verified certificate forces every value to be nonnegative.
pub fn sphere_spot_check(cert: &Certificate, samples: usize, seed: u64) -> f64 {
    let g = cert.candidate.graph();
    let c = rational_to_f64(&cert.bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let mut x: Vec<f64> = (0..cert.k).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        let ev = eigvalsh(&psi(&weighted_by_x(&g, &x))).expect("finite");
        let top = ev[0];
        worst = worst.min(c - top);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::q as rq;
    use crate::stepmodel::{sigma, StepModel};
    use num_traits::{One, Zero};

    #[test]
    fn trivial_two_vertex_certificate() {
        let out = certify(Candidate::P2, Rational::one(), &CertifyConfig::default()).expect("certified");
        let cert = &out.certificate;
        assert_eq!((cert.k, cert.m, cert.dim_q()), (2, 1, 3));
        assert!(cert.q.iter().flatten().all(Zero::is_zero));
        assert_eq!(cert.t, vec![vec![Rational::one()]]);
        assert!(out.identity.holds);
        assert!(out.psd.is_psd());
    }

    #[test]
    fn zero_q_fails_for_h6() {
        let n = 105;
        let cert = Certificate::new(Candidate::H6, rq(8, 7), 6, SymMatQ::zeros(n), SymMatQ::identity(15));
        let rep = verify_identity(&cert);
        assert!(!rep.holds);
        assert!(rep.failed.contains(&Location::Cross(0, 1)));
        assert!(!rep.failed.contains(&Location::Cross(0, 5)));
    }

    #[test]
    fn file_roundtrip_and_corruption() {
        let out = certify(Candidate::P2, Rational::one(), &CertifyConfig::default()).unwrap();
        let text = write_certificate(&out.certificate);
        assert!(text.starts_with("candidate P2\nbound 1\n2 1 3\n"));
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, out.certificate);

        let mut bad = back.clone();
        bad.q[0][1] += rq(1, 1_000_000);
        let rep = verify_identity(&bad);
        assert!(!rep.holds);
        assert_eq!(rep.violations[0].location, Location::QSymmetry);

        assert!(matches!(parse_certificate("candidate P2\nbound 1\n2 2 3\n"), Err(crate::Error::Parse { line: 3, .. })));
        assert!(matches!(parse_certificate("candidate X9\n"), Err(crate::Error::Parse { line: 1, .. })));
        assert!(matches!(parse_certificate("candidate P2\nbound 1\n2 1 3\n0 0 0\n0 0\n"), Err(crate::Error::Parse { line: 5, .. })));
    }

    #[test]
    fn unit_x_matches_step_model() {
        let g = Candidate::H6.graph();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let w: Vec<f64> = (0..6).map(|_| rand_distr::Exp1.sample(&mut rng)).collect();
            let s: f64 = w.iter().sum();
            let u: Vec<f64> = w.iter().map(|v| v / s).collect();
            let x: Vec<f64> = u.iter().map(|v| v.sqrt()).collect();
            let ev = eigvalsh(&weighted_by_x(&g, &x)).unwrap();
            let model = StepModel::new(g.clone(), u).unwrap();
            assert!((ev[0] + ev[1] - sigma(&model)).abs() < 1e-9);
        }
    }
}

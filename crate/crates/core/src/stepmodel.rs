//! Looped base graphs with simplex weights.
//!
//! A step model is a base graph `G*` on blocks `1..k`, every block carrying a loop,
//! together with block weights `u` on the probability simplex. Its spectrum is that
//! of `M* = D_u^{1/2} A(G*) D_u^{1/2}`, so `M*[i][j] = √(u_i u_j)` on edges and loops.

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numerics::{eigh, eigvalsh, project_simplex, SymMatF};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use std::fmt;
use std::str::FromStr;

/// Simplex feasibility tolerance for user-supplied weights.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Candidate base graphs. `P2` (two looped vertices joined by an edge) is included
/// as the smallest sanity case; the others are the four possible extremal bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Candidate {
    P2,
    P3,
    P4,
    H5,
    H6,
}

impl Candidate {
    pub const ALL: [Candidate; 5] = [Candidate::P2, Candidate::P3, Candidate::P4, Candidate::H5, Candidate::H6];

    pub fn name(self) -> &'static str {
        match self {
            Candidate::P2 => "P2",
            Candidate::P3 => "P3",
            Candidate::P4 => "P4",
            Candidate::H5 => "H5",
            Candidate::H6 => "H6",
        }
    }

    pub fn k(self) -> usize {
        match self {
            Candidate::P2 => 2,
            Candidate::P3 => 3,
            Candidate::P4 => 4,
            Candidate::H5 => 5,
            Candidate::H6 => 6,
        }
    }

    /// Non-loop edges, 0-based.
    fn edges(self) -> &'static [(usize, usize)] {
        const H6: [(usize, usize); 9] = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)];
        match self {
            Candidate::P2 => &[(0, 1)],
            Candidate::P3 => &[(0, 1), (1, 2)],
            Candidate::P4 => &[(0, 1), (1, 2), (2, 3)],
            Candidate::H5 => &H6[..7],
            Candidate::H6 => &H6,
        }
    }

    /// Vertices of `H6` inducing a copy of this candidate, in this candidate's order.
    pub fn embedding_in_h6(self) -> &'static [usize] {
        match self {
            Candidate::P2 => &[0, 1],
            Candidate::P3 => &[0, 1, 3],
            Candidate::P4 => &[0, 1, 3, 4],
            Candidate::H5 => &[0, 1, 2, 3, 4],
            Candidate::H6 => &[0, 1, 2, 3, 4, 5],
        }
    }

    pub fn graph(self) -> CandidateGraph {
        let k = self.k();
        let loops = (0..k).map(|i| (i, i));
        let graph = Graph::from_edges(k, self.edges().iter().copied().chain(loops)).expect("static edge list");
        CandidateGraph { name: self, graph }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Candidate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Candidate::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown candidate {s:?} (expected one of P2, P3, P4, H5, H6)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateGraph {
    pub name: Candidate,
    pub graph: Graph,
}

impl CandidateGraph {
    pub fn k(&self) -> usize {
        self.graph.n()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.graph.has_edge(i, j)
    }
}

#[derive(Clone, Debug)]
pub struct StepModel {
    pub candidate: CandidateGraph,
    pub u: Vec<f64>,
}

impl StepModel {
    /// Checks length, finiteness, nonnegativity and `|Σu − 1| <= 1e-12`.
    pub fn new(candidate: CandidateGraph, u: Vec<f64>) -> Result<Self> {
        if u.len() != candidate.k() {
            return Err(Error::DimensionMismatch { expected: candidate.k(), got: u.len() });
        }
        if let Some(x) = u.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::invalid(format!("weights must be finite and nonnegative, got {x}")));
        }
        let s: f64 = u.iter().sum();
        if (s - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::invalid(format!("weights must sum to 1, got {s}")));
        }
        Ok(StepModel { candidate, u })
    }

    pub fn k(&self) -> usize {
        self.u.len()
    }
}

fn weighted(graph: &Graph, u: &[f64]) -> SymMatF {
    SymMatF::from_fn(u.len(), |i, j| if graph.has_edge(i, j) { (u[i] * u[j]).sqrt() } else { 0.0 })
}

pub fn weighted_matrix(model: &StepModel) -> SymMatF {
    weighted(&model.candidate.graph, &model.u)
}

/// `λ1 + λ2` of `M*`.
pub fn sigma(model: &StepModel) -> f64 {
    sigma_raw(&model.candidate.graph, &model.u)
}

fn sigma_raw(graph: &Graph, u: &[f64]) -> f64 {
    let ev = eigvalsh(&weighted(graph, u)).expect("weights are finite");
    ev[0] + ev.get(1).copied().unwrap_or(0.0)
}

/// Top two eigenpairs of `M*`, transported to step values `α_i = a_i/√u_i`, `β_i = b_i/√u_i`.
/// Blocks with zero weight get `None`.
#[derive(Clone, Debug)]
pub struct StepEigs {
    pub mu1: f64,
    pub mu2: f64,
    pub alpha: Vec<Option<f64>>,
    pub beta: Vec<Option<f64>>,
}

/// Signs are fixed so that `Σ u_i α_i >= 0` and the first defined `β` is at least the last.
pub fn step_eigs(model: &StepModel) -> Result<StepEigs> {
    let positive: Vec<usize> = (0..model.k()).filter(|&i| model.u[i] > 0.0).collect();
    if positive.len() < 2 {
        return Err(Error::invalid("step values need at least two blocks of positive weight"));
    }
    let d = eigh(&weighted_matrix(model))?;
    let transport = |v: Vec<f64>| -> Vec<Option<f64>> {
        (0..model.k()).map(|i| (model.u[i] > 0.0).then(|| v[i] / model.u[i].sqrt())).collect()
    };
    let mut alpha = transport(d.vector(0));
    let mut beta = transport(d.vector(1));

    let mass: f64 = positive.iter().map(|&i| model.u[i] * alpha[i].unwrap()).sum();
    if mass < 0.0 {
        alpha.iter_mut().flatten().for_each(|a| *a = -*a);
    }
    let (first, last) = (positive[0], positive[positive.len() - 1]);
    if beta[first] < beta[last] {
        beta.iter_mut().flatten().for_each(|b| *b = -*b);
    }
    Ok(StepEigs { mu1: d.eigenvalues[0], mu2: d.eigenvalues[1], alpha, beta })
}

/// `μ1·α_i² + μ2·β_i² − (μ1 + μ2)` per block; `None` on zero-weight blocks.
pub fn ellipse_residual(model: &StepModel) -> Result<Vec<Option<f64>>> {
    let e = step_eigs(model)?;
    Ok(e.alpha
        .iter()
        .zip(&e.beta)
        .map(|(a, b)| Some(e.mu1 * (*a)? * (*a)? + e.mu2 * (*b)? * (*b)? - (e.mu1 + e.mu2)))
        .collect())
}

pub const KAPPA_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct KappaEntry {
    pub i: usize,
    pub j: usize,
    /// `α_iα_j + β_iβ_j`.
    pub kappa: f64,
    pub adjacent: bool,
    /// `κ >= −tol` on edges (loops included) and `κ <= tol` on non-edges.
    pub consistent: bool,
}

/// Sign pattern of `κ` against adjacency for all pairs `i <= j` of positive-weight blocks.
pub fn adjacency_criterion_check(model: &StepModel) -> Result<Vec<KappaEntry>> {
    let e = step_eigs(model)?;
    let mut out = Vec::new();
    for i in 0..model.k() {
        for j in i..model.k() {
            let (Some(ai), Some(aj), Some(bi), Some(bj)) = (e.alpha[i], e.alpha[j], e.beta[i], e.beta[j]) else {
                continue;
            };
            let kappa = ai * aj + bi * bj;
            let adjacent = model.candidate.adjacent(i, j);
            let consistent = if adjacent { kappa >= -KAPPA_TOL } else { kappa <= KAPPA_TOL };
            out.push(KappaEntry { i, j, kappa, adjacent, consistent });
        }
    }
    Ok(out)
}

/// Pairs `(i, j)`, `i < j`, with identical closed neighbourhoods.
pub fn true_twin_check(g: &Graph) -> Vec<(usize, usize)> {
    let closed = |v: usize| -> Vec<usize> {
        let mut nb = g.neighbors(v);
        if !nb.contains(&v) {
            nb.push(v);
            nb.sort_unstable();
        }
        nb
    };
    let nbs: Vec<Vec<usize>> = (0..g.n()).map(closed).collect();
    let mut out = Vec::new();
    for i in 0..g.n() {
        for j in (i + 1)..g.n() {
            if nbs[i] == nbs[j] {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct OptimizeConfig {
    /// Dirichlet(1) random starts, in addition to the grid starts.
    pub restarts: usize,
    pub seed: u64,
    pub threads: usize,
    /// Grid mesh is `1/grid`.
    pub grid: usize,
    /// Best grid points used as local-search starts.
    pub grid_starts: usize,
    pub max_steps: usize,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig { restarts: 200, seed: 0, threads: 1, grid: 14, grid_starts: 8, max_steps: 400 }
    }
}

#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub u: Vec<f64>,
    pub sigma: f64,
    pub starts: usize,
    pub evaluations: u64,
}

/// Maximizes `σ` over the weight simplex with default settings apart from `restarts` and `seed`.
pub fn maximize_sigma(candidate: &CandidateGraph, restarts: usize, seed: u64) -> Result<OptimizeResult> {
    maximize_sigma_with(candidate, &OptimizeConfig { restarts, seed, ..OptimizeConfig::default() })
}

/// Multi-start projected finite-difference ascent.
///
/// Starts are the `grid_starts` best points of the `1/grid` simplex lattice followed by
/// `restarts` Dirichlet(1) samples. Start `s` draws from its own ChaCha stream `s`, so
/// the result is independent of `threads`. The best final point wins; exact ties go to
/// the lexicographically smaller `u`.
pub fn maximize_sigma_with(candidate: &CandidateGraph, cfg: &OptimizeConfig) -> Result<OptimizeResult> {
    if cfg.restarts == 0 {
        return Err(Error::invalid("maximize_sigma needs at least one restart"));
    }
    let k = candidate.k();
    let g = &candidate.graph;

    let mut grid: Vec<(f64, Vec<f64>)> =
        compositions(cfg.grid, k).into_iter().map(|c| {
            let u: Vec<f64> = c.iter().map(|&x| x as f64 / cfg.grid as f64).collect();
            (sigma_raw(g, &u), u)
        }).collect();
    let grid_evals = grid.len() as u64;
    grid.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| lex_cmp(&a.1, &b.1)));

    let mut starts: Vec<Vec<f64>> = grid.into_iter().take(cfg.grid_starts).map(|(_, u)| u).collect();
    let mut seeder = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        let e: Vec<f64> = (0..k).map(|_| seeder.sample::<f64, _>(Exp1)).collect();
        let s: f64 = e.iter().sum();
        starts.push(e.into_iter().map(|x| x / s).collect());
    }

    let threads = cfg.threads.max(1).min(starts.len());
    let chunk = starts.len().div_ceil(threads);
    let results: Vec<(Vec<f64>, f64, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = starts
            .chunks(chunk)
            .enumerate()
            .map(|(c, block)| {
                scope.spawn(move || {
                    block
                        .iter()
                        .enumerate()
                        .map(|(o, u0)| {
                            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                            rng.set_stream((c * chunk + o) as u64);
                            ascend(g, u0.clone(), cfg.max_steps, &mut rng)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("optimizer worker panicked")).collect()
    });

    let evaluations = grid_evals + results.iter().map(|r| r.2).sum::<u64>();
    let (u, sigma, _) = results
        .into_iter()
        .reduce(|best, cand| match cand.1.total_cmp(&best.1) {
            std::cmp::Ordering::Greater => cand,
            std::cmp::Ordering::Equal if lex_cmp(&cand.0, &best.0).is_lt() => cand,
            _ => best,
        })
        .expect("at least one start");
    Ok(OptimizeResult { u, sigma, starts: starts.len(), evaluations })
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

/// All vectors of `k` nonnegative integers summing to `total`, lexicographic.
fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=rem {
            cur.push(x);
            rec(rem - x, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, k, &mut Vec::with_capacity(k), &mut out);
    out
}

const FD_STEP: f64 = 1e-6;
const CROSSING_GAP: f64 = 1e-9;
const JITTER: f64 = 1e-7;
const ARMIJO: f64 = 1e-4;

/// Projected gradient ascent with Armijo step halving. Returns `(u, σ(u), evaluations)`.
fn ascend(g: &Graph, mut u: Vec<f64>, max_steps: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, f64, u64) {
    let k = u.len();
    let mut evals = 0u64;
    let mut eval = |u: &[f64]| {
        evals += 1;
        let ev = eigvalsh(&weighted(g, u)).expect("finite weights");
        (ev[0] + ev[1], ev.get(2).map(|l3| (ev[1] - l3).abs()))
    };
    let (mut f, mut gap) = eval(&u);
    let mut step = 1.0;
    for _ in 0..max_steps {
        if gap.is_some_and(|gp| gp < CROSSING_GAP) {
            // λ2 = λ3: the objective has a kink here, so nudge instead of differentiating.
            let noise: Vec<f64> = u.iter().map(|x| x + JITTER * rng.random::<f64>()).collect();
            let cand = project_simplex(&noise);
            let (fc, gc) = eval(&cand);
            if fc >= f - 1e-12 {
                (u, f, gap) = (cand, fc, gc);
            }
        }
        let grad: Vec<f64> = (0..k)
            .map(|i| {
                let mut up = u.clone();
                up[i] += FD_STEP;
                if u[i] >= FD_STEP {
                    let mut dn = u.clone();
                    dn[i] -= FD_STEP;
                    (eval(&up).0 - eval(&dn).0) / (2.0 * FD_STEP)
                } else {
                    (eval(&up).0 - f) / FD_STEP
                }
            })
            .collect();

        let mut accepted = false;
        while step > 1e-14 {
            let trial: Vec<f64> = u.iter().zip(&grad).map(|(x, d)| x + step * d).collect();
            let cand = project_simplex(&trial);
            let ascent: f64 = cand.iter().zip(&u).zip(&grad).map(|((c, x), d)| (c - x) * d).sum();
            if ascent <= 0.0 {
                break;
            }
            let (fc, gc) = eval(&cand);
            if fc >= f + ARMIJO * ascent {
                (u, f, gap) = (cand, fc, gc);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step = (step * 2.0).min(1.0);
    }
    (u, f, evals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(c: Candidate, u: &[f64]) -> StepModel {
        StepModel::new(c.graph(), u.to_vec()).unwrap()
    }

    const EXTREMAL: [f64; 3] = [2.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0];

    #[test]
    fn candidate_graphs() {
        for c in Candidate::ALL {
            let g = c.graph();
            assert_eq!(g.k(), c.k());
            assert!((0..c.k()).all(|i| g.adjacent(i, i)));
            // P2 is two true twins by construction; the real bases are twin-free.
            assert_eq!(true_twin_check(&g.graph).is_empty(), c != Candidate::P2, "{c}");
            assert_eq!(c.name().parse::<Candidate>().unwrap(), c);
            // Induced subgraph of H6 on the embedding.
            let h6 = Candidate::H6.graph();
            let emb = c.embedding_in_h6();
            for i in 0..c.k() {
                for j in 0..c.k() {
                    assert_eq!(g.adjacent(i, j), h6.adjacent(emb[i], emb[j]));
                }
            }
        }
        assert_eq!(Candidate::H6.graph().graph.edge_count(), 9 + 6);
        assert!("h7".parse::<Candidate>().is_err());
    }

    #[test]
    fn twins() {
        let k3 = Graph::from_edges(3, [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(true_twin_check(&k3), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn simplex_validation() {
        let g = Candidate::P3.graph();
        assert!(StepModel::new(g.clone(), vec![0.5, 0.5]).is_err());
        assert!(StepModel::new(g.clone(), vec![0.5, 0.6, -0.1]).is_err());
        assert!(StepModel::new(g.clone(), vec![0.3, 0.3, 0.3]).is_err());
        assert!(StepModel::new(g, vec![0.2, 0.3, 0.5]).is_ok());
    }

    #[test]
    fn weighted_matrix_examples() {
        let m = weighted_matrix(&model(Candidate::P3, &EXTREMAL));
        let r6 = 6f64.sqrt() / 7.0;
        let want = [[2.0 / 7.0, r6, 0.0], [r6, 3.0 / 7.0, r6], [0.0, r6, 2.0 / 7.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.get(i, j) - want[i][j]).abs() < 1e-15);
            }
        }
        let e1 = weighted_matrix(&model(Candidate::H6, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert_eq!(e1.get(0, 0), 1.0);
        assert_eq!(e1.as_slice().iter().filter(|x| **x != 0.0).count(), 1);
        let third = 1.0 / 3.0;
        let uni = weighted_matrix(&model(Candidate::P3, &[third, third, third]));
        assert!(uni.as_slice().iter().all(|x| *x == 0.0 || (x - third).abs() < 1e-15));
    }

    #[test]
    fn sigma_examples() {
        assert!((sigma(&model(Candidate::P3, &EXTREMAL)) - 8.0 / 7.0).abs() < 1e-12);
        for a in [0.0, 0.1, 0.5, 0.9] {
            assert!((sigma(&model(Candidate::P2, &[a, 1.0 - a])) - 1.0).abs() < 1e-12);
        }
        assert!((sigma(&model(Candidate::H6, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn step_values_at_extremal_path() {
        let e = step_eigs(&model(Candidate::P3, &EXTREMAL)).unwrap();
        assert!((e.mu1 - 6.0 / 7.0).abs() < 1e-12);
        assert!((e.mu2 - 2.0 / 7.0).abs() < 1e-12);
        let (s3, s7) = (3f64.sqrt(), 7f64.sqrt());
        let alpha = [s3 / 2.0, 2.0 / s3, s3 / 2.0];
        let beta = [s7 / 2.0, 0.0, -s7 / 2.0];
        for i in 0..3 {
            assert!((e.alpha[i].unwrap() - alpha[i]).abs() < 1e-10);
            assert!((e.beta[i].unwrap() - beta[i]).abs() < 1e-10);
        }
        for r in ellipse_residual(&model(Candidate::P3, &EXTREMAL)).unwrap() {
            assert!(r.unwrap().abs() < 1e-8);
        }
        let report = adjacency_criterion_check(&model(Candidate::P3, &EXTREMAL)).unwrap();
        assert!(report.iter().all(|r| r.consistent));
        let k13 = report.iter().find(|r| (r.i, r.j) == (0, 2)).unwrap();
        assert!((k13.kappa + 1.0).abs() < 1e-10 && !k13.adjacent);
        let k12 = report.iter().find(|r| (r.i, r.j) == (0, 1)).unwrap();
        assert!((k12.kappa - 1.0).abs() < 1e-10 && k12.adjacent);
    }

    #[test]
    fn step_values_other_cases() {
        let e = step_eigs(&model(Candidate::P2, &[0.5, 0.5])).unwrap();
        assert!((e.mu1 - 1.0).abs() < 1e-12);
        assert!((e.alpha[0].unwrap() - 1.0).abs() < 1e-12 && (e.alpha[1].unwrap() - 1.0).abs() < 1e-12);

        let third = 1.0 / 3.0;
        let r = ellipse_residual(&model(Candidate::P3, &[third, third, third])).unwrap();
        assert!(r.iter().any(|x| x.unwrap().abs() > 0.01));

        let m = model(Candidate::H5, &[0.3, 0.0, 0.2, 0.5, 0.0]);
        let e = step_eigs(&m).unwrap();
        assert!(e.alpha[1].is_none() && e.beta[4].is_none());
        assert!(step_eigs(&model(Candidate::H5, &[0.0, 0.0, 1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn normalisation_and_orthogonality_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for c in Candidate::ALL {
            for _ in 0..40 {
                let raw: Vec<f64> = (0..c.k()).map(|_| rng.sample::<f64, _>(Exp1)).collect();
                let s: f64 = raw.iter().sum();
                let u: Vec<f64> = raw.iter().map(|x| x / s).collect();
                let m = StepModel::new(c.graph(), u.clone()).unwrap();
                let e = step_eigs(&m).unwrap();
                let dot = |a: &[Option<f64>], b: &[Option<f64>]| -> f64 {
                    (0..u.len()).map(|i| u[i] * a[i].unwrap() * b[i].unwrap()).sum()
                };
                assert!((dot(&e.alpha, &e.alpha) - 1.0).abs() < 1e-8);
                assert!((dot(&e.beta, &e.beta) - 1.0).abs() < 1e-8);
                assert!(dot(&e.alpha, &e.beta).abs() < 1e-8);
                let mass: f64 = (0..u.len()).map(|i| u[i] * e.alpha[i].unwrap()).sum();
                assert!(mass >= 0.0);
                assert!(e.beta[0].unwrap() >= e.beta[u.len() - 1].unwrap());
                assert!(sigma(&m) <= 8.0 / 7.0 + 1e-6);
            }
        }
    }

    #[test]
    fn automorphism_invariance() {
        // i → 5 − i preserves the edge set of H6.
        let h6 = Candidate::H6.graph();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(h6.adjacent(i, j), h6.adjacent(5 - i, 5 - j));
            }
        }
        let u = [0.05, 0.1, 0.15, 0.2, 0.23, 0.27];
        let rev: Vec<f64> = u.iter().rev().copied().collect();
        let a = eigvalsh(&weighted_matrix(&model(Candidate::H6, &u))).unwrap();
        let b = eigvalsh(&weighted_matrix(&model(Candidate::H6, &rev))).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn optimizer_finds_path_extremum() {
        let r = maximize_sigma(&Candidate::P3.graph(), 20, 7).unwrap();
        assert!((r.sigma - 8.0 / 7.0).abs() < 1e-6);
        for (a, b) in r.u.iter().zip(EXTREMAL) {
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn optimizer_is_thread_independent() {
        let g = Candidate::P4.graph();
        let a = maximize_sigma_with(&g, &OptimizeConfig { restarts: 12, seed: 3, threads: 1, ..Default::default() }).unwrap();
        let b = maximize_sigma_with(&g, &OptimizeConfig { restarts: 12, seed: 3, threads: 4, ..Default::default() }).unwrap();
        assert_eq!(a.sigma.to_bits(), b.sigma.to_bits());
        assert_eq!(a.u, b.u);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(14, 3).len(), 120);
        assert_eq!(compositions(14, 6).len(), 11628);
        assert!(compositions(4, 3).iter().all(|c| c.iter().sum::<usize>() == 4));
    }
}

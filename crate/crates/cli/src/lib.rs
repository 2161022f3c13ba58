//! `ssc` command-line front end.
//!
//! Every command prints `key: value` lines (or an aligned table with `--table`) and
//! exits with 0 on success/PASS, 1 on FAIL/NOT_FOUND and 2 on usage or input errors.

mod report;

pub use report::{Num, Report};

use clap::{Args, Parser, Subcommand};
use ssc_core::certify::{self, CertifyConfig, Location, RationalizeConfig, SolverConfig};
use ssc_core::graphs::{self, SearchMode};
use ssc_core::stepmodel::{self, OptimizeConfig};
use ssc_core::textfmt::{format_rational, parse_matrix, parse_rational, write_matrix};
use ssc_core::{Candidate, Error, PsdWitness, Rational};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ssc", version, about = "Spectral sums of graphs: search, step models and exact certificates")]
pub struct Cli {
    /// Human-readable aligned output instead of key: value lines.
    #[arg(long, global = true)]
    pub table: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and spectral sum of a graph file.
    Spectrum { file: PathBuf },
    /// Exhaustive search over all labeled graphs on n vertices.
    Search(SearchArgs),
    /// Maximize λ1+λ2 over block weights of a candidate base graph.
    Optimize(OptimizeArgs),
    /// Produce an exact certificate that λ1+λ2 <= bound on a candidate base.
    Certify(CertifyArgs),
    /// Check a certificate file exactly.
    Verify { file: PathBuf },
    /// k-th additive compound of a square matrix file.
    Compound(CompoundArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(short, long)]
    pub n: usize,
    /// Maximize the spectral sum (default).
    #[arg(long, conflicts_with = "min_connected")]
    pub max: bool,
    /// Minimize the spectral sum over connected graphs.
    #[arg(long)]
    pub min_connected: bool,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Write the optimal graph here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// P2, P3, P4, H5 or H6.
    pub candidate: Candidate,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, env = "SSC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub candidate: Candidate,
    #[arg(long, default_value = "8/7", value_parser = parse_bound)]
    pub bound: Rational,
    #[arg(long, default_value_t = 10_000)]
    pub max_den: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    #[arg(long, env = "SSC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Certificate path; defaults to `<candidate>.cert`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Solve over the full block pattern instead of the sign-flip invariant one.
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Debug, Args)]
pub struct CompoundArgs {
    pub file: PathBuf,
    #[arg(short, long, default_value_t = 2)]
    pub k: usize,
    /// Also write the compound in matrix format.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_bound(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s)?;
    if r <= Rational::from_integer(0.into()) {
        return Err("bound must be positive".into());
    }
    Ok(r)
}

/// Outcome of a command: the report and whether its check passed.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

impl Outcome {
    fn pass(report: Report) -> Self {
        Outcome { report, passed: true }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let echo = args.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    match execute(&cli.command, &echo) {
        Ok(o) => {
            if let Err(e) = o.report.write(out, cli.table, start.elapsed()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if o.passed {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::NoConvergence { .. } => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}

pub fn execute(cmd: &Command, echo: &str) -> ssc_core::Result<Outcome> {
    match cmd {
        Command::Spectrum { file } => cmd_spectrum(echo, file),
        Command::Search(a) => cmd_search(echo, a),
        Command::Optimize(a) => cmd_optimize(echo, a),
        Command::Certify(a) => cmd_certify(echo, a),
        Command::Verify { file } => cmd_verify(echo, file),
        Command::Compound(a) => cmd_compound(echo, a),
    }
}

fn read(path: &PathBuf) -> ssc_core::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| Num(v).to_string())
}

fn edge_list(g: &ssc_core::Graph) -> String {
    if g.edge_count() == 0 {
        return "-".into();
    }
    join(g.edges().map(|(i, j)| format!("{}-{}", i + 1, j + 1)))
}

pub fn cmd_spectrum(echo: &str, file: &PathBuf) -> ssc_core::Result<Outcome> {
    let g = ssc_core::Graph::parse(&read(file)?)?;
    let s = graphs::spectral_sum(&g)?;
    let mut r = Report::new(echo);
    r.kv("n", g.n())
        .kv("edges", g.edge_count())
        .kv("loops", g.has_loops())
        .kv("eigenvalues", join(s.eigenvalues.iter().map(|&x| Num(x))))
        .kv("lambda1", Num(s.lambda1))
        .kv("lambda2", Num(s.lambda2))
        .kv("spectral_sum", Num(s.spectral_sum));
    if s.lambda2_by_convention {
        r.kv("note", "n = 1, lambda2 taken as 0");
    }
    Ok(Outcome::pass(r))
}

pub fn cmd_search(echo: &str, a: &SearchArgs) -> ssc_core::Result<Outcome> {
    let mode = if a.min_connected { SearchMode::MinConnected } else { SearchMode::Max };
    let res = graphs::search_extremal(a.n, mode, a.threads.max(1))?;
    let mut r = Report::new(echo);
    r.kv("mode", if a.min_connected { "min-connected" } else { "max" })
        .kv("n", a.n)
        .kv("threads", a.threads.max(1))
        .kv("value", Num(res.value))
        .kv("mask", res.mask)
        .kv("edges", edge_list(&res.graph))
        .kv("degree_sequence", join(res.graph.degree_sequence()))
        .kv("graphs_scanned", res.graphs_scanned)
        .kv("optimal_count", res.optimal_count)
        .kv("distinct_optimizers", res.distinct_optimizers.len());
    let mut passed = true;
    if mode == SearchMode::Max {
        let bound = 8.0 * a.n as f64 / 7.0;
        let within = res.value <= bound + 1e-9;
        passed &= within;
        r.kv("bound_8n_over_7", Num(bound)).kv("within_bound", within);
        if a.n >= 5 {
            let (p, q) = graphs::conjecture_pq(a.n)?;
            let reference = graphs::knpq(a.n, p, q)?;
            let matches = res.distinct_optimizers.iter().any(|g| graphs::is_isomorphic(g, &reference));
            r.kv("conjecture_pq", format!("{p} {q}")).kv("matches_knpq", matches);
        }
    }
    if let Some(path) = &a.out {
        std::fs::write(path, res.graph.to_text())?;
        r.kv("out", path.display());
    }
    r.kv("status", if passed { "PASS" } else { "FAIL" });
    Ok(Outcome { report: r, passed })
}

pub fn cmd_optimize(echo: &str, a: &OptimizeArgs) -> ssc_core::Result<Outcome> {
    let g = a.candidate.graph();
    let cfg = OptimizeConfig { restarts: a.restarts, seed: a.seed, threads: a.threads.max(1), ..OptimizeConfig::default() };
    let res = stepmodel::maximize_sigma_with(&g, &cfg)?;
    let model = ssc_core::StepModel::new(g, res.u.clone())?;
    let mut r = Report::new(echo);
    r.kv("candidate", a.candidate)
        .kv("seed", a.seed)
        .kv("restarts", a.restarts)
        .kv("threads", cfg.threads)
        .kv("sigma", Num(res.sigma))
        .kv("sigma_minus_8_over_7", Num(res.sigma - 8.0 / 7.0))
        .kv("u", join(res.u.iter().map(|&x| Num(x))));
    match stepmodel::step_eigs(&model) {
        Ok(e) => {
            r.kv("mu1", Num(e.mu1))
                .kv("mu2", Num(e.mu2))
                .kv("alpha", join(e.alpha.iter().map(|x| opt(*x))))
                .kv("beta", join(e.beta.iter().map(|x| opt(*x))))
                .kv("ellipse_residuals", join(stepmodel::ellipse_residual(&model)?.iter().map(|x| opt(*x))));
            let kappa = stepmodel::adjacency_criterion_check(&model)?;
            r.kv("kappa_consistent", kappa.iter().all(|k| k.consistent));
            let rows = kappa
                .iter()
                .map(|k| vec![(k.i + 1).to_string(), (k.j + 1).to_string(), Num(k.kappa).to_string(), k.adjacent.to_string(), k.consistent.to_string()])
                .collect();
            r.table("kappa", &["i", "j", "kappa", "adjacent", "consistent"], rows);
        }
        Err(_) => {
            r.kv("note", "fewer than two positive weights; step values undefined");
        }
    }
    r.kv("starts", res.starts).kv("evaluations", res.evaluations);
    Ok(Outcome::pass(r))
}

pub fn cmd_certify(echo: &str, a: &CertifyArgs) -> ssc_core::Result<Outcome> {
    if a.tol <= 0.0 || !a.tol.is_finite() {
        return Err(Error::InvalidInput("--tol must be positive".into()));
    }
    let cfg = CertifyConfig {
        solver: SolverConfig { tol: a.tol, max_iter: a.max_iter, seed: a.seed, ..SolverConfig::default() },
        rationalize: RationalizeConfig { max_den: a.max_den.max(1), ..RationalizeConfig::default() },
        sign_symmetry: !a.no_symmetry,
        ..CertifyConfig::default()
    };
    let mut r = Report::new(echo);
    let k = a.candidate.k();
    let m = k * (k - 1) / 2;
    r.kv("candidate", a.candidate)
        .kv("bound", format_rational(&a.bound))
        .kv("dims", format!("k={k} m={m} dimQ={}", (k + 1) * m))
        .kv("seed", a.seed)
        .kv("tol", Num(a.tol))
        .kv("max_iter", a.max_iter)
        .kv("max_den", a.max_den)
        .kv("sign_symmetry", !a.no_symmetry);
    match certify::certify(a.candidate, a.bound.clone(), &cfg) {
        Ok(c) => {
            let path = a.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.cert", a.candidate)));
            std::fs::write(&path, certify::write_certificate(&c.certificate))?;
            r.kv("iterations", c.iterations)
                .kv("affine_residual", Num(c.affine_residual))
                .kv("min_eig", Num(c.min_eig))
                .kv("epsilon", Num(c.epsilon))
                .kv("max_den_used", c.max_den)
                .kv("kernel_vectors", c.kernel_vectors)
                .kv("rounded_params", c.rounded_params)
                .kv("largest_denominator", c.certificate.max_denominator())
                .kv("identity", c.identity.holds)
                .kv("psd", "PSD")
                .kv("psd_rank", c.psd.rank().unwrap_or(0))
                .kv("out", path.display())
                .kv("status", "CERTIFIED");
            Ok(Outcome::pass(r))
        }
        Err(f) => {
            r.kv("stage", f.stage)
                .kv("iterations", f.iterations)
                .kv("affine_residual", Num(f.affine_residual))
                .kv("min_eig", Num(f.min_eig))
                .kv("attempts", f.attempts);
            if let Some(v) = &f.witness_value {
                r.kv("witness_value", format_rational(v));
            }
            r.kv("status", "NOT_FOUND");
            Ok(Outcome { report: r, passed: false })
        }
    }
}

pub fn cmd_verify(echo: &str, file: &PathBuf) -> ssc_core::Result<Outcome> {
    let cert = certify::parse_certificate(&read(file)?)?;
    let id = certify::verify_identity(&cert);
    let psd = certify::verify_psd(&cert);
    let mut r = Report::new(echo);
    r.kv("candidate", cert.candidate)
        .kv("bound", format_rational(&cert.bound))
        .kv("dims", format!("k={} m={} dimQ={}", cert.k, cert.m, cert.dim_q()))
        .kv("identity", id.holds)
        .kv("entries_checked", id.entries_checked)
        .kv("violations", id.violation_count);
    if !id.failed.is_empty() {
        r.kv("failed_coefficients", id.failed.iter().map(Location::to_string).collect::<Vec<_>>().join(", "));
    }
    let rows = id
        .violations
        .iter()
        .map(|v| vec![v.location.to_string(), format!("({},{})", v.row + 1, v.col + 1), format_rational(&v.expected), format_rational(&v.found)])
        .collect::<Vec<_>>();
    if !rows.is_empty() {
        r.table("violation", &["where", "entry", "expected", "found"], rows);
    }
    match &psd {
        PsdWitness::Psd { decomposition } => {
            r.kv("psd", "PSD").kv("psd_rank", decomposition.len());
        }
        PsdWitness::NotPsd { counterexample, value } => {
            r.kv("psd", "NOT_PSD")
                .kv("witness_value", format_rational(value))
                .kv("witness", join(counterexample.iter().map(format_rational)));
        }
    }
    let passed = id.holds && psd.is_psd();
    r.kv("verdict", if passed { "PASS" } else { "FAIL" });
    Ok(Outcome { report: r, passed })
}

pub fn cmd_compound(echo: &str, a: &CompoundArgs) -> ssc_core::Result<Outcome> {
    let m = parse_matrix(&read(&a.file)?)?;
    let c = ssc_core::compound::additive_compound(&m, a.k)?;
    let trace = (0..c.len()).fold(Rational::from_integer(0.into()), |acc, i| acc + &c[i][i]);
    let mut r = Report::new(echo);
    r.kv("n", m.len()).kv("k", a.k).kv("dim", c.len()).kv("trace", format_rational(&trace));
    for (i, row) in c.iter().enumerate() {
        r.kv(&format!("row{}", i + 1), join(row.iter().map(format_rational)));
    }
    if let Some(path) = &a.out {
        std::fs::write(path, write_matrix(&c))?;
        r.kv("out", path.display());
    }
    Ok(Outcome::pass(r))
}

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssc_core::certify::{assemble, certify, sdp_solve, verify_identity, verify_psd, CertifyConfig, SolverConfig};
use ssc_core::compound::psi;
use ssc_core::exactq::rational_approx;
use ssc_core::graphs::{search_extremal, SearchMode};
use ssc_core::numerics::eigh;
use ssc_core::{Candidate, Rational, SymMatF};
use std::hint::black_box;

fn random_sym(n: usize, seed: u64) -> SymMatF {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SymMatF::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

fn bench_eigh(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigh");
    for n in [6, 15, 45, 105] {
        let m = random_sym(n, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| eigh(black_box(m)).unwrap()));
    }
    g.finish();
}

fn bench_psi(c: &mut Criterion) {
    let m = random_sym(6, 1);
    c.bench_function("psi/6", |b| b.iter(|| psi(black_box(&m))));
}

fn bench_rational_approx(c: &mut Criterion) {
    c.bench_function("rational_approx/pi", |b| b.iter(|| rational_approx(black_box(std::f64::consts::PI), 10_000)));
}

fn bench_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search_max");
    g.sample_size(10);
    for n in [5, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| search_extremal(n, SearchMode::Max, 1).unwrap()));
    }
    g.finish();
}

fn bench_certificate(c: &mut Criterion) {
    let bound = Rational::new(8.into(), 7.into());
    let problem = assemble(&Candidate::H6.graph(), bound.clone(), true);
    let cert = certify(Candidate::H6, bound, &CertifyConfig::default()).expect("H6 certifies").certificate;

    let mut g = c.benchmark_group("h6");
    g.sample_size(10);
    g.bench_function("sdp_solve", |b| b.iter(|| sdp_solve(black_box(&problem), &SolverConfig::default()).unwrap()));
    g.bench_function("verify_identity", |b| b.iter(|| verify_identity(black_box(&cert))));
    g.bench_function("verify_psd", |b| b.iter(|| verify_psd(black_box(&cert))));
    g.finish();
}

criterion_group!(benches, bench_eigh, bench_psi, bench_rational_approx, bench_search, bench_certificate);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wdconc::ensemble::{monte_carlo_functional, sample_matrix, stream_rng, EnsembleCensus};
use wdconc::exponents::{acr_general, acr_random};
use wdconc::gf2::{rank, syndrome_weight_counts, weight_counts};
use wdconc::{EnsembleParams, EnumerationLimit, ExponentProfile, ExtReal, LinearFunctional, SupOptions};

fn random_matrix(n: usize, m: usize) -> wdconc::BitMatrix {
    sample_matrix(EnsembleParams::new(n, m).unwrap(), &mut stream_rng(1, 0))
}

fn weight_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("weight_counts");
    for (n, m) in [(32, 16), (40, 20), (64, 48)] {
        let h = random_matrix(n, m);
        group.bench_with_input(BenchmarkId::new("gray", format!("{n}x{m}")), &h, |b, h| {
            b.iter(|| weight_counts(black_box(h), EnumerationLimit::DEFAULT).unwrap())
        });
    }
    let h = random_matrix(24, 12);
    group.bench_function("syndrome_table/24x12", |b| {
        b.iter(|| syndrome_weight_counts(black_box(&h)))
    });
    group.finish();
}

fn gaussian_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    for (n, m) in [(128, 64), (1024, 512)] {
        let h = random_matrix(n, m);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{m}x{n}")), &h, |b, h| {
            b.iter(|| rank(black_box(h)))
        });
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for (n, m) in [(8, 2), (4, 4), (16, 1)] {
        let params = EnsembleParams::new(n, m).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_m{m}")), &params, |b, &p| {
            b.iter(|| EnsembleCensus::enumerate(p).unwrap())
        });
    }
    group.finish();
}

fn concentration_rate(c: &mut Criterion) {
    let phi = |t: f64| ExtReal::Finite(t * 0.3f64.log2());
    let opts = SupOptions::default();
    let profile = ExponentProfile::random(0.5).unwrap();
    c.bench_function("acr/random", |b| {
        b.iter(|| acr_random(&phi, black_box(0.5), opts).unwrap())
    });
    c.bench_function("acr/general", |b| {
        b.iter(|| acr_general(&phi, black_box(&profile), opts).unwrap())
    });
}

fn sampling(c: &mut Criterion) {
    let params = EnsembleParams::new(20, 10).unwrap();
    let f = LinearFunctional::codeword_count(20);
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    group.bench_function("count_20x10_1000", |b| {
        b.iter(|| monte_carlo_functional(params, &f, 1000, black_box(7), &[0.5], EnumerationLimit::DEFAULT).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    weight_enumeration,
    gaussian_rank,
    census,
    concentration_rate,
    sampling
);
criterion_main!(benches);

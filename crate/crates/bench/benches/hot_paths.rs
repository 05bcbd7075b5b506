//! Criterion benchmarks for the expensive kernels: exact big-integer
//! Krawtchouk tables, the interrogation error-count distribution, the
//! exact majority-vote failure sum, the classical conditional sums, the
//! crossover solvers, and the Monte Carlo trial loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use promiselab::classical::classical_failure;
use promiselab::crossover::{solve_crossover_dj_classical, solve_crossover_dj_wvd};
use promiselab::dj::dj_majority_failure;
use promiselab::krawtchouk::KrawtchoukTable;
use promiselab::montecarlo::{simulate_dj, simulate_wvd, WvdSamplingMode};
use promiselab::wvd::{error_count_distribution, wvd_failure_reduced_model, InferenceRule};
use promiselab::{ProblemInstance, SamplingModel};
use std::hint::black_box;

fn bench_krawtchouk_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("krawtchouk_table_build");
    for big_n in [64u64, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(big_n), &big_n, |b, &big_n| {
            b.iter(|| KrawtchoukTable::build_up_to(black_box(big_n), big_n.min(32)));
        });
    }
    group.finish();
}

fn bench_error_count_distribution(c: &mut Criterion) {
    let mut group = c.benchmark_group("error_count_distribution");
    for (big_n, k) in [(256u64, 16u64), (1024, 16), (1024, 64)] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("N{big_n}_k{k}")),
            &(big_n, k),
            |b, &(big_n, k)| b.iter(|| error_count_distribution(black_box(big_n), k).unwrap()),
        );
    }
    group.finish();
}

fn bench_exact_failures(c: &mut Criterion) {
    let inst = ProblemInstance::new(10, 10, 0.5).unwrap();
    let mut group = c.benchmark_group("exact_failure");
    for k in [25u64, 101, 401] {
        group.bench_with_input(BenchmarkId::new("dj_majority", k), &k, |b, &k| {
            b.iter(|| dj_majority_failure(black_box(&inst), k).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("classical", k), &k, |b, &k| {
            b.iter(|| {
                classical_failure(black_box(&inst), k, SamplingModel::WithReplacement).unwrap()
            });
        });
    }
    let rule = InferenceRule::optimal(inst.u());
    group.bench_function("wvd_reduced_model_N1024_k25", |b| {
        b.iter(|| wvd_failure_reduced_model(black_box(&inst), 25, &rule).unwrap());
    });
    group.finish();
}

fn bench_crossover(c: &mut Criterion) {
    c.bench_function("crossover_dj_classical", |b| {
        b.iter(|| solve_crossover_dj_classical().unwrap());
    });
    c.bench_function("crossover_dj_wvd", |b| {
        b.iter(|| solve_crossover_dj_wvd().unwrap());
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let inst = ProblemInstance::new(10, 10, 0.5).unwrap();
    let rule = InferenceRule::optimal(inst.u());
    let mut group = c.benchmark_group("monte_carlo_10k_trials");
    group.bench_function("dj_k101", |b| {
        b.iter(|| simulate_dj(black_box(&inst), 101, 10_000, 1).unwrap());
    });
    group.bench_function("wvd_k101", |b| {
        b.iter(|| {
            simulate_wvd(
                black_box(&inst),
                101,
                &rule,
                WvdSamplingMode::SampledT,
                10_000,
                1,
            )
            .unwrap()
        });
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_krawtchouk_table,
    bench_error_count_distribution,
    bench_exact_failures,
    bench_crossover,
    bench_monte_carlo
);
criterion_main!(benches);

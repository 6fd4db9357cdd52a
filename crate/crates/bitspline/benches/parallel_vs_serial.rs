//! Benchmark comparing the sequential and data-parallel Monte Carlo drivers.
//!
//! The replication loop is embarrassingly parallel and deterministic (each
//! replication owns an independent RNG stream), so the parallel driver must
//! return bit-identical rows; this benchmark measures how much wall time the
//! parallelism actually buys at different problem sizes.
//!
//! Run with: cargo bench --bench parallel_vs_serial

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use bitspline::simulation::{
    run, ExperimentConfig, LambdaRule, Parallelism, Scenario,
};

fn size_config(n: usize, replications: usize) -> ExperimentConfig {
    ExperimentConfig {
        scenario: Scenario::Size,
        n_list: vec![n],
        b_list: vec![3],
        r_list: vec![0.0],
        alpha_signal: 2,
        noise_sd: 1.0,
        replications,
        seed: 20240810,
        alpha_level: 0.1,
        m: 2,
        lambda_rule: LambdaRule::GcvOverLogN,
    }
}

fn mse_config(n: usize, replications: usize) -> ExperimentConfig {
    ExperimentConfig {
        scenario: Scenario::Mse,
        n_list: vec![n],
        b_list: vec![5],
        r_list: vec![0.0],
        alpha_signal: 2,
        noise_sd: 1.0,
        replications,
        seed: 20240810,
        alpha_level: 0.1,
        m: 2,
        lambda_rule: LambdaRule::Gcv,
    }
}

fn bench_size_scenario(c: &mut Criterion) {
    let mut group = c.benchmark_group("size_scenario");
    group.measurement_time(Duration::from_secs(10));
    group.sample_size(10);

    for n in [256usize, 1024] {
        let replications = 64;
        let config = size_config(n, replications);
        group.throughput(Throughput::Elements(replications as u64));

        group.bench_with_input(BenchmarkId::new("sequential", n), &config, |b, cfg| {
            b.iter(|| run(black_box(cfg), Parallelism::Sequential).unwrap());
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", n), &config, |b, cfg| {
            b.iter(|| run(black_box(cfg), Parallelism::Parallel).unwrap());
        });
    }

    group.finish();
}

fn bench_mse_scenario(c: &mut Criterion) {
    let mut group = c.benchmark_group("mse_scenario");
    group.measurement_time(Duration::from_secs(10));
    group.sample_size(10);

    let n = 512;
    let replications = 32;
    let config = mse_config(n, replications);
    group.throughput(Throughput::Elements(replications as u64));

    group.bench_with_input(BenchmarkId::new("sequential", n), &config, |b, cfg| {
        b.iter(|| run(black_box(cfg), Parallelism::Sequential).unwrap());
    });
    #[cfg(feature = "parallel")]
    group.bench_with_input(BenchmarkId::new("parallel", n), &config, |b, cfg| {
        b.iter(|| run(black_box(cfg), Parallelism::Parallel).unwrap());
    });

    group.finish();
}

criterion_group!(benches, bench_size_scenario, bench_mse_scenario);
criterion_main!(benches);

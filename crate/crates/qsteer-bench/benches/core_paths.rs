//! Timings of the hot library paths: the sign enumeration behind the LHS
//! bound, the quantum value, a visibility scan, window bisection, and one
//! small multistart optimization.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qsteer::functionals::{lhs_bound, lhs_bound_oracle};
use qsteer::optimizer::{optimize_directions, OptimizerConfig};
use qsteer::presets;
use qsteer::quantum::{evaluate, quantum_value};
use qsteer::scan::{scan_theta, threshold_angles, uniform_grid};
use qsteer::{Family, StateFamily, SteeringFunctional, Strategy};

fn bench_lhs_bound(c: &mut Criterion) {
    let mut group = c.benchmark_group("lhs_bound");
    for n in [4usize, 8, 12, 16] {
        let f = SteeringFunctional::new(Family::Chained, n).unwrap();
        let b = presets::chained_reference(n).unwrap();
        group.bench_with_input(BenchmarkId::new("chained", n), &n, |bench, _| {
            bench.iter(|| lhs_bound(black_box(&f), black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn bench_quantum_value(c: &mut Criterion) {
    let mut group = c.benchmark_group("quantum_value");
    let state = StateFamily::werner().state(1.0).unwrap();
    for n in [4usize, 10] {
        let f = SteeringFunctional::new(Family::Chained, n).unwrap();
        let b = presets::chained_reference(n).unwrap();
        group.bench_with_input(BenchmarkId::new("werner", n), &n, |bench, _| {
            bench.iter(|| {
                quantum_value(
                    black_box(&f),
                    black_box(&b),
                    black_box(&state),
                    Strategy::General,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_evaluate_published_set(c: &mut Criterion) {
    let b = presets::preset_by_name("paper-eq18-0").unwrap();
    let f = SteeringFunctional::new(Family::Chained, b.len()).unwrap();
    let family = StateFamily::werner();
    c.bench_function("evaluate/paper-eq18-0", |bench| {
        bench.iter(|| evaluate(black_box(&f), black_box(&b), &family, Strategy::General).unwrap())
    });
}

fn bench_scan(c: &mut Criterion) {
    let b = presets::preset_by_name("paper-eq15").unwrap();
    let f = SteeringFunctional::new(Family::Chained, b.len()).unwrap();
    let grid = uniform_grid(101).unwrap();
    c.bench_function("scan_theta/grid-101", |bench| {
        bench.iter(|| scan_theta(black_box(&f), black_box(&b), &grid, Strategy::General).unwrap())
    });
}

fn bench_threshold_bisection(c: &mut Criterion) {
    let b = presets::preset_by_name("paper-eq17").unwrap();
    let f = SteeringFunctional::new(Family::Chained, b.len()).unwrap();
    c.bench_function("threshold_angles/paper-eq17", |bench| {
        bench.iter(|| threshold_angles(black_box(&f), black_box(&b), Strategy::General).unwrap())
    });
}

fn bench_sampled_oracle(c: &mut Criterion) {
    let f = SteeringFunctional::new(Family::Chained, 4).unwrap();
    let b = presets::chained_reference(4).unwrap();
    c.bench_function("lhs_bound_oracle/2000-samples", |bench| {
        bench.iter(|| lhs_bound_oracle(black_box(&f), black_box(&b), 2000).unwrap())
    });
}

fn bench_small_multistart(c: &mut Criterion) {
    let f = SteeringFunctional::new(Family::Chained, 3).unwrap();
    let family = StateFamily::werner();
    let cfg = OptimizerConfig {
        restarts: 2,
        max_iters: 200,
        ..OptimizerConfig::default()
    };
    let mut group = c.benchmark_group("optimizer");
    group.sample_size(10);
    group.bench_function("multistart/n-3-2-restarts", |bench| {
        bench.iter(|| optimize_directions(black_box(&f), &family, &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_lhs_bound,
    bench_quantum_value,
    bench_evaluate_published_set,
    bench_scan,
    bench_threshold_bisection,
    bench_sampled_oracle,
    bench_small_multistart
);
criterion_main!(benches);

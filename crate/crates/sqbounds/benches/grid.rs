use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::f64::consts::FRAC_PI_4;

use sqbounds::bounds::{qfim_closed, scalar_bounds, uhlmann_closed};
use sqbounds::fock::info_matrices_fock;
use sqbounds::params::{default_numerics, ModelParams, NumericsConfig};
use sqbounds::report::{BoundReport, ReportOptions};
use sqbounds::{par_map, seq_map};

fn grid(n: usize) -> Vec<ModelParams> {
    (0..n)
        .map(|i| {
            let l1 = 1.5 * i as f64 / (n - 1) as f64;
            ModelParams::new(l1, 0.2, 1.0, FRAC_PI_4, FRAC_PI_4).unwrap()
        })
        .collect()
}

fn closed_form_reports(c: &mut Criterion) {
    let cfg = default_numerics();
    let opts = ReportOptions::default();
    let mut group = c.benchmark_group("closed_form_reports");
    for &n in &[256usize, 4096] {
        let points = grid(n);
        group.bench_with_input(BenchmarkId::new("parallel", n), &points, |b, pts| {
            b.iter(|| par_map(pts, |p| BoundReport::compute(p, &cfg, &opts).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &points, |b, pts| {
            b.iter(|| seq_map(pts, |p| BoundReport::compute(p, &cfg, &opts).unwrap()))
        });
    }
    group.finish();
}

fn oracle_grid(c: &mut Criterion) {
    let cfg = NumericsConfig {
        fock_dim: 64,
        ..default_numerics()
    };
    let points = grid(8);
    let mut group = c.benchmark_group("fock_oracle_grid");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| par_map(&points, |p| info_matrices_fock(p, &cfg).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| seq_map(&points, |p| info_matrices_fock(p, &cfg).unwrap()))
    });
    group.finish();
}

fn scalar_pipeline(c: &mut Criterion) {
    let p = ModelParams::new(0.7, 0.2, 1.0, FRAC_PI_4, FRAC_PI_4).unwrap();
    c.bench_function("scalar_bounds_single_point", |b| {
        b.iter(|| {
            let q = qfim_closed(&p);
            let u = uhlmann_closed(&p);
            scalar_bounds(&q, &u, 1e-12)
        })
    });
}

criterion_group!(benches, closed_form_reports, oracle_grid, scalar_pipeline);
criterion_main!(benches);

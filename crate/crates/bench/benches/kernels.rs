use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use fracvar::fracops::{gl_left_derivative, product_trapezoid_left};
use fracvar::solutions::{example_b_solution, ExampleBConstants};
use fracvar::varsolve::solve;
use fracvar::FracOrder;
use fracvar_bench::{pinned_example_b, smooth_samples, unit_grid};

fn grid_schemes(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_schemes");
    let half = FracOrder::new(0.5).unwrap();
    for n in [256, 1024, 4096] {
        let f = smooth_samples(n);
        let h = 1.0 / n as f64;
        group.bench_with_input(BenchmarkId::new("gl_left_derivative", n), &f, |b, f| {
            b.iter(|| gl_left_derivative(black_box(f.values()), half, h))
        });
        group.bench_with_input(BenchmarkId::new("product_trapezoid_left", n), &f, |b, f| {
            b.iter(|| product_trapezoid_left(black_box(f.values()), half, h))
        });
    }
    group.finish();
}

fn solutions(c: &mut Criterion) {
    let mut group = c.benchmark_group("solutions");
    let constants = ExampleBConstants::new(1.0, 1.0, 1.0, 1.0);
    for n in [512, 2048] {
        let g = unit_grid(n);
        group.bench_with_input(BenchmarkId::new("example_b_solution", n), &g, |b, g| {
            b.iter(|| example_b_solution(&constants, FracOrder::new(0.6).unwrap(), black_box(g)))
        });
    }
    group.finish();
}

fn varsolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("varsolve");
    group.sample_size(20);
    for n in [256, 1024] {
        let system = pinned_example_b(0.5, n);
        group.bench_with_input(BenchmarkId::new("solve", n), &system, |b, s| {
            b.iter(|| solve(black_box(s)))
        });
    }
    group.finish();
}

criterion_group!(benches, grid_schemes, solutions, varsolve);
criterion_main!(benches);

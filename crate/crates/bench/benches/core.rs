use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;
use num_complex::Complex64;

use ncg_core::abelian::{pseudoinverse, Mat, ScalarRing, DEFAULT_EPS_RANK};
use ncg_core::algebra::{build_two_point_space, check_dga_axioms, graded_center};
use ncg_core::torus::{center_crosscheck, pi1_descriptor, TorusPresentation};
use ncg_core::transport::{path_ordered_exp, MatrixPath, Method, TransportOptions};
use ncg_core::Exact;

fn algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("algebra");
    for d in [4usize, 6, 8] {
        let a = build_two_point_space::<Exact>(d).unwrap();
        g.bench_with_input(BenchmarkId::new("two_point_center", d), &a, |b, a| {
            b.iter(|| graded_center(a))
        });
        g.bench_with_input(BenchmarkId::new("two_point_axioms", d), &a, |b, a| {
            b.iter(|| check_dga_axioms(a))
        });
    }
    g.finish();
}

fn torus(c: &mut Criterion) {
    let mut g = c.benchmark_group("torus");
    g.sample_size(10);
    let t = TorusPresentation::rational_2d(1, 3, 4).unwrap();
    g.bench_function("pi1_1_3", |b| b.iter(|| pi1_descriptor(&t)));
    g.bench_function("crosscheck_1_3_r4", |b| {
        b.iter(|| center_crosscheck(&t, 4, 2).unwrap())
    });
    g.finish();
}

fn pinv(c: &mut Criterion) {
    let mut g = c.benchmark_group("pseudoinverse");
    let ring = ScalarRing::<Complex64>::new();
    for n in [2usize, 4, 6] {
        // rank n − 1: last row repeats the first
        let phi = Mat::from_fn(n, n, |i, j| {
            let i = if i == n - 1 { 0 } else { i };
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64)
        });
        g.bench_with_input(BenchmarkId::new("numeric", n), &phi, |b, phi| {
            b.iter(|| pseudoinverse(&ring, phi, DEFAULT_EPS_RANK).unwrap())
        });
    }
    g.finish();
}

fn transport(c: &mut Criterion) {
    let mut g = c.benchmark_group("transport");
    g.sample_size(10);
    let a = DMatrix::from_fn(3, 3, |i, j| {
        Complex64::new(0.2 * (i as f64 - j as f64), 0.1 * (i * j) as f64)
    });
    let b = DMatrix::from_fn(3, 3, |i, j| Complex64::new(0.1 * ((i + j) % 2) as f64, 0.0));
    let omega = MatrixPath::polynomial(vec![a, b]).unwrap();
    for (name, method) in [("picard", Method::Picard), ("rk4", Method::Rk4)] {
        let opts = TransportOptions::default()
            .with_method(method)
            .with_steps(1024);
        g.bench_function(name, |bch| {
            bch.iter(|| path_ordered_exp(&omega, &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, algebra, torus, pinv, transport);
criterion_main!(benches);

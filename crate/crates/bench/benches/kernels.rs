use char3_bench::{dense_matrix, tensor};
use char3_core::check::{Mode, DEFAULT_SEED};
use char3_core::lie::{build_kantor, KantorVariant};
use char3_core::linalg::rref;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_rref(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref");
    for n in [64, 256, 1024] {
        let m = dense_matrix(n, 7);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| rref(black_box(m))));
    }
    g.finish();
}

fn bench_jacobi(c: &mut Criterion) {
    let mut g = c.benchmark_group("jacobi");
    g.sample_size(10);
    let f4 = build_kantor(&tensor(8, 1), KantorVariant::V1).unwrap().lie;
    g.bench_function("exhaustive 52", |b| b.iter(|| f4.alg.check_lie(Mode::Exhaustive)));
    let e8 = build_kantor(&tensor(8, 8), KantorVariant::V1).unwrap().lie;
    let sampled = Mode::Random { seed: DEFAULT_SEED, samples: 10_000 };
    g.bench_function("10^4 samples 248", |b| b.iter(|| e8.alg.check_lie(sampled)));
    g.finish();
}

fn bench_instrl(c: &mut Criterion) {
    let mut g = c.benchmark_group("instrl");
    g.sample_size(10);
    for d in [1, 2, 4, 8] {
        let a = tensor(8, d);
        g.bench_with_input(BenchmarkId::from_parameter(format!("C8 x C{d}")), &a, |b, a| b.iter(|| a.instrl()));
    }
    g.finish();
}

criterion_group!(kernels, bench_rref, bench_jacobi, bench_instrl);
criterion_main!(kernels);

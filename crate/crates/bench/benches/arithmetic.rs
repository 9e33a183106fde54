use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exscaf_bench::{dense_element, dense_series, family_params, family_tower};
use exscaf_core::detval::{tval_valuation, FrobMatrix};
use exscaf_core::oracle::verify;
use exscaf_core::planner::plan;
use exscaf_core::{PlanMode, ResidueField, Variant};

fn series(c: &mut Criterion) {
    let f = ResidueField::new(3, 2).unwrap();
    let mut g = c.benchmark_group("series");
    for len in [64usize, 256, 1024] {
        let a = dense_series(f, -5, len, 1);
        let b = dense_series(f, 2, len, 2);
        g.bench_with_input(BenchmarkId::new("mul", len), &len, |bch, _| bch.iter(|| black_box(&a) * black_box(&b)));
        g.bench_with_input(BenchmarkId::new("inv", len), &len, |bch, &len| {
            bch.iter(|| black_box(&a).inv_with_window(len as i64).unwrap())
        });
    }
    g.finish();
}

fn tower(c: &mut Criterion) {
    let t = family_tower(3, 1, 1, 1, Variant::H);
    let alg = t.alg();
    let x = dense_element(&t, 10);
    let y = dense_element(&t, 50);
    let gens = t.galois_generators().unwrap();
    let mut g = c.benchmark_group("tower");
    g.bench_function("mul", |b| b.iter(|| alg.mul(black_box(&x), black_box(&y))));
    g.bench_function("norm", |b| b.iter(|| alg.norm(black_box(&x)).unwrap()));
    g.bench_function("galois_apply", |b| b.iter(|| gens[2].apply(alg, black_box(&x))));
    g.finish();
}

fn planner(c: &mut Criterion) {
    let params = family_params(3, 1, 1, 1, Variant::H);
    c.bench_function("plan", |b| b.iter(|| plan(black_box(&params), PlanMode::Full).unwrap()));
    let f = ResidueField::new(3, 3).unwrap();
    let betas = vec![dense_series(f, -2, 4, 3), dense_series(f, -5, 4, 4), dense_series(f, -7, 4, 5)];
    let fm = FrobMatrix::new(betas).unwrap();
    c.bench_function("tval_formula", |b| b.iter(|| tval_valuation(black_box(&fm))));
    c.bench_function("tval_brute_force", |b| b.iter(|| black_box(&fm).brute_force_det()));
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for variant in [Variant::H, Variant::M] {
        let params = family_params(3, 1, 1, 1, variant);
        g.bench_function(format!("verify_{variant}1"), |b| b.iter(|| verify(black_box(&params), None).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, series, tower, planner, oracle);
criterion_main!(benches);

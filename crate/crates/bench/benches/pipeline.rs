use std::hint::black_box;

use airy_resurgence::airy_oracle::{airy_zero, OracleConfig};
use airy_resurgence::factorial_sum::FactorialEngine;
use airy_resurgence::hyperasymptotics::{f1, optimal_plan, Hyperterminant1Args, Sigma};
use airy_resurgence::mp_numerics::BigComplex;
use airy_resurgence::resurgent_airy::{build_table, x_series};
use airy_resurgence_bench::{hyper_config, hyper_engine, t_for};
use criterion::{criterion_group, criterion_main, Criterion};
use rug::{Float, Rational};

fn exact_series(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    g.bench_function("x_series_64", |b| b.iter(|| x_series(black_box(64)).unwrap()));
    g.bench_function("alien_table_40", |b| b.iter(|| build_table(black_box(40)).unwrap()));
    g.finish();
}

fn factorial(c: &mut Criterion) {
    let engine = FactorialEngine::new(&Rational::from((6, 5)), 61).unwrap();
    c.bench_function("factorial_k3_n61_256", |b| b.iter(|| engine.zero(black_box(3), 61, 256).unwrap()));
}

fn hyperterminants(c: &mut Criterion) {
    let cfg = hyper_config(128, 1e-25);
    let t = BigComplex::from_real(Float::with_val(128, 10));
    c.bench_function("f1_m5_omega1_128", |b| {
        b.iter(|| f1(&Hyperterminant1Args { t: t.clone(), m: 5, sigma: Sigma::Omega1 }, &cfg).unwrap())
    });

    let engine = hyper_engine();
    let mut g = c.benchmark_group("hyper");
    g.sample_size(10);
    for level in [0usize, 1] {
        let plan = optimal_plan(level, &t_for(3, 128)).unwrap();
        g.bench_function(format!("k3_level{level}_128"), |b| b.iter(|| engine.zero(3, &plan, &cfg).unwrap()));
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let cfg = OracleConfig::new(256).unwrap();
    c.bench_function("oracle_k3_256", |b| b.iter(|| airy_zero(black_box(3), &cfg).unwrap()));
}

criterion_group!(benches, exact_series, factorial, hyperterminants, oracle);
criterion_main!(benches);

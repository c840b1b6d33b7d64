//! Each workload runs twice: on rayon's global pool and inside a one-thread
//! pool, which is what the sequential fallback amounts to. Build with
//! `--no-default-features` to time the plain-iterator path itself.

use std::hint::black_box;

use boolelab::algebra::holds;
use boolelab::catalog::hailperin_sigma;
use boolelab::classes::{build_pu, semantic_consequence};
use boolelab::derivation::certify_consequence;
use boolelab::horn::search_total_model;
use boolelab::polynomial::boole_oracle;
use boolelab::terms::parse_equation;
use boolelab::{Argument, HornSentence};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

/// `x1 ⊆ x2 ⊆ ... ⊆ xm ⊢ x1 ⊆ xm`, written multiplicatively. Valid, so the
/// oracle has to visit every vertex.
fn chain(m: usize) -> Argument {
    let premisses = (1..m)
        .map(|i| parse_equation(&format!("x{i}*x{} = x{i}", i + 1)).unwrap())
        .collect();
    Argument::new(premisses, parse_equation(&format!("x1*x{m} = x1")).unwrap())
}

fn compare(c: &mut Criterion, group: &str, work: impl Fn() + Sync) {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut g = c.benchmark_group(group);
    let backend = if boolelab::par::is_parallel() { "rayon" } else { "sequential" };
    let threads = rayon::current_num_threads();
    g.bench_function(BenchmarkId::new(format!("{backend}_global_pool"), threads), |b| b.iter(&work));
    g.bench_function(BenchmarkId::new(format!("{backend}_one_thread"), 1), |b| {
        b.iter(|| single.install(&work))
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let arg = chain(16);
    compare(c, "oracle_16_vars", || {
        black_box(boole_oracle(&arg, 20).unwrap());
    });
}

fn certificate(c: &mut Criterion) {
    let arg = chain(10);
    compare(c, "certify_10_vars", || {
        black_box(certify_consequence(&arg, 20).unwrap());
    });
}

fn semantic(c: &mut Criterion) {
    let arg = chain(4);
    compare(c, "semantic_4_vars_u3", || {
        black_box(semantic_consequence(&arg, 3, 5).unwrap());
    });
}

fn class_algebra(c: &mut Criterion) {
    let pu = build_pu(4, 5).unwrap();
    let s = HornSentence::identity(parse_equation("x*(y + z) = x*y + x*z").unwrap());
    compare(c, "holds_distributive_u4", || {
        black_box(holds(pu.algebra(), &s).unwrap());
    });
}

fn model_search(c: &mut Criterion) {
    let sigma = hailperin_sigma(3);
    compare(c, "model_search_size_3", || {
        black_box(search_total_model(&sigma, 3, 4).unwrap());
    });
}

criterion_group!(benches, oracle, certificate, semantic, class_algebra, model_search);
criterion_main!(benches);

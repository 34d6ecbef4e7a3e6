use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tropants_core::mf::{e_sum, verify_mf, verify_phi3, RingSpec};
use tropants_core::periodic::{
    genus5_fixture, node_fixture, periodic_subdivision_check, quotient_multiply,
    ring_presentation_mod_t, QuotientGradedPoint,
};
use tropants_core::rat::{frac, rat, Rat};
use tropants_core::tropical::{induced_subdivision, legendre_transform, LiftFunction};

fn genus2_lift() -> LiftFunction {
    let support: Vec<Vec<i64>> = vec![
        vec![1, 0],
        vec![0, 1],
        vec![1, 1],
        vec![2, 1],
        vec![1, 2],
        vec![2, 2],
        vec![3, 2],
        vec![2, 3],
    ];
    let values = vec![2, 2, 0, 1, 1, 0, 2, 2];
    LiftFunction::new(2, support.into_iter().zip(values)).unwrap()
}

fn bench_subdivision(c: &mut Criterion) {
    let lift = genus2_lift();
    c.bench_function("induced_subdivision/genus2", |b| {
        b.iter(|| induced_subdivision(black_box(&lift)).unwrap())
    });
}

fn bench_legendre(c: &mut Criterion) {
    let lift = genus2_lift();
    c.bench_function("legendre_transform/genus2", |b| {
        b.iter(|| legendre_transform(black_box(&lift), None).unwrap())
    });
}

fn bench_periodic_check(c: &mut Criterion) {
    let (lift, tri) = genus5_fixture();
    c.bench_function("periodic_subdivision_check/genus5", |b| {
        b.iter(|| periodic_subdivision_check(black_box(&lift), black_box(&tri)).unwrap())
    });
}

fn bench_quotient_multiply(c: &mut Criterion) {
    let (lift, tri) = node_fixture();
    let a = QuotientGradedPoint {
        degree: 1,
        nums: vec![0, 0],
        height: rat(0),
    };
    let b_cls = QuotientGradedPoint {
        degree: 2,
        nums: vec![1, 1],
        height: rat(0),
    };
    let trunc: Rat = frac(1, 3);
    c.bench_function("quotient_multiply/node_ab", |b| {
        b.iter(|| quotient_multiply(&lift, &tri, black_box(&a), black_box(&b_cls), &trunc).unwrap())
    });
}

fn bench_presentation(c: &mut Criterion) {
    let (lift, tri) = node_fixture();
    c.bench_function("ring_presentation_mod_t/node_deg6", |b| {
        b.iter(|| ring_presentation_mod_t(black_box(&lift), black_box(&tri), 6).unwrap())
    });
}

fn bench_mf(c: &mut Criterion) {
    let spec = RingSpec::invertible(4, 6);
    c.bench_function("verify_mf/D4N6", |b| {
        b.iter(|| verify_mf(&e_sum::<Rat>(black_box(&spec)).unwrap(), &spec))
    });
    c.bench_function("verify_phi3/D4N6", |b| {
        b.iter(|| verify_phi3(black_box(&spec)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_subdivision,
    bench_legendre,
    bench_periodic_check,
    bench_quotient_multiply,
    bench_presentation,
    bench_mf
);
criterion_main!(benches);

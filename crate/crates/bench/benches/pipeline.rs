//! Timings for the expensive stages: coset enumeration, integral homology,
//! symbolic tau-functions, Smith normal form and the ODE.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use toda_core::complex::{homology, smith_normal_form, ZMatrix};
use toda_core::lie::{standard_datum, CosetTable};
use toda_core::tau::tau_system;
use toda_core::toda::integrate;
use toda_core::{CartanType, Coefficients, Family, SubsetJ, TodaState};

fn cosets(c: &mut Criterion) {
    let e8 = standard_datum(CartanType::new(Family::E, 8).unwrap());
    c.bench_function("cosets E8 single node", |b| {
        b.iter(|| CosetTable::build(&e8, black_box(SubsetJ::single(7))).len())
    });
}

fn homology_a8(c: &mut Criterion) {
    let a8 = standard_datum(CartanType::new(Family::A, 8).unwrap());
    let mut g = c.benchmark_group("homology");
    g.sample_size(10);
    g.bench_function("A8 over Z", |b| {
        b.iter(|| homology(&a8, black_box(Coefficients::Z)).unwrap())
    });
    g.finish();
}

fn tau_a5(c: &mut Criterion) {
    let mut g = c.benchmark_group("tau");
    g.sample_size(10);
    g.bench_function("A5 system", |b| {
        b.iter(|| tau_system(Family::A, black_box(5)).unwrap())
    });
    g.finish();
}

fn snf(c: &mut Criterion) {
    // A fixed dense 40 x 40 matrix with small entries.
    let rows: Vec<Vec<i64>> = (0..40)
        .map(|i| {
            (0..40)
                .map(|j| ((i * 7 + j * 13 + i * j) % 11) as i64 - 5)
                .collect()
        })
        .collect();
    let m = ZMatrix::from_rows(&rows);
    c.bench_function("smith normal form 40x40", |b| {
        b.iter(|| smith_normal_form(black_box(&m)))
    });
}

fn flow(c: &mut Criterion) {
    let cartan = CartanType::new(Family::A, 4).unwrap().cartan_matrix();
    let s = TodaState::new(vec![0.5, 0.3, 0.2, 0.4], vec![0.1, -0.2, 0.3, 0.0], 0.0);
    c.bench_function("rk4 A4 1000 steps", |b| {
        b.iter(|| integrate(&cartan, black_box(&s), 1.0, 1e-3).unwrap())
    });
}

criterion_group!(benches, cosets, homology_a8, tau_a5, snf, flow);
criterion_main!(benches);

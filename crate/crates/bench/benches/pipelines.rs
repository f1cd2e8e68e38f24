use criterion::{criterion_group, criterion_main, Criterion};
use quadchi::gw::form_from_gram;
use quadchi::k0var::orbit_chi;
use quadchi::linalg::{congruence_diagonalize, rank_kernel_image, rat, RatMatrix};
use quadchi::pairing::chi_a1;
use quadchi::sheaf::{cech_cohomology, cotangent, CechOpts};
use quadchi::Fan;
use std::hint::black_box;

fn dense_rational_matrix(n: usize) -> RatMatrix {
    // deterministic small-height entries
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let p = ((i * 7 + j * 3) % 19) as i64 - 9;
            let q = ((i + 2 * j) % 4) as i64 + 1;
            m[(i, j)] = rat(p, q);
        }
    }
    m
}

fn symmetric_rational_matrix(n: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = rat(((i * 5 + j) % 9) as i64 - 4, 1 + ((i + j) % 3) as i64);
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

fn bench_linalg(c: &mut Criterion) {
    let m = dense_rational_matrix(24);
    c.bench_function("rank_kernel_image 24x24", |b| {
        b.iter(|| rank_kernel_image(black_box(&m)))
    });
    let s = symmetric_rational_matrix(16);
    c.bench_function("congruence_diagonalize 16x16", |b| {
        b.iter(|| congruence_diagonalize(black_box(&s)).unwrap())
    });
}

fn bench_gw(c: &mut Criterion) {
    let s = symmetric_rational_matrix(6);
    c.bench_function("form_from_gram 6x6", |b| {
        b.iter(|| form_from_gram(black_box(&s)).unwrap())
    });
}

fn bench_cech(c: &mut Criterion) {
    let p2 = Fan::builtin("P2").unwrap();
    let omega = cotangent(&p2);
    c.bench_function("cech Ω¹ on P2", |b| {
        b.iter(|| cech_cohomology(black_box(&omega), &CechOpts::default()).unwrap())
    });
}

fn bench_chi(c: &mut Criterion) {
    let p2 = Fan::builtin("P2").unwrap();
    c.bench_function("chi_a1 P2", |b| {
        b.iter(|| chi_a1(black_box(&p2), &CechOpts::default()).unwrap())
    });
    let f1 = Fan::builtin("hirzebruch:1").unwrap();
    c.bench_function("chi_a1 hirzebruch:1", |b| {
        b.iter(|| chi_a1(black_box(&f1), &CechOpts::default()).unwrap())
    });
    c.bench_function("orbit_chi hirzebruch:3", |b| {
        let f3 = Fan::builtin("hirzebruch:3").unwrap();
        b.iter(|| orbit_chi(black_box(&f3)))
    });
}

criterion_group!(benches, bench_linalg, bench_gw, bench_cech, bench_chi);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use singular_weyl::operators::{recover_e_coefficients, Sign};
use singular_weyl::sampling::compact_points;
use singular_weyl::special::hyp1f1;
use singular_weyl::{canonical_harmonic, harmonic_basis, make_ktype, FdConfig, ParameterSet, SPreset};

fn hypergeometric(c: &mut Criterion) {
    let (a, b) = (Complex64::new(7.75, 0.0), Complex64::new(13.5, 0.0));
    c.bench_function("hyp1f1 real z", |bench| {
        bench.iter(|| hyp1f1(black_box(a), black_box(b), black_box(Complex64::new(-3.2, 0.0))))
    });
    c.bench_function("hyp1f1 imaginary z", |bench| {
        bench.iter(|| hyp1f1(black_box(a), black_box(b), black_box(Complex64::new(0.0, 1.6))))
    });
}

fn ktype_value(c: &mut Criterion) {
    let p = ParameterSet::with_preset(3, 0, SPreset::Schrodinger).unwrap();
    let low = make_ktype(p, 2, 2, 1, canonical_harmonic(3, 1).unwrap()).unwrap();
    let high = make_ktype(p, 0, 1, 26, canonical_harmonic(3, 26).unwrap()).unwrap();
    let y = [0.4, -0.7, 0.3];
    c.bench_function("ktype value k=1", |bench| bench.iter(|| low.value(black_box(0.3), black_box(&y))));
    c.bench_function("ktype value k=26", |bench| bench.iter(|| high.value(black_box(0.3), black_box(&y))));
}

fn harmonics(c: &mut Criterion) {
    c.bench_function("harmonic basis n=4 k=6", |bench| bench.iter(|| harmonic_basis(black_box(4), black_box(6))));
}

fn recovery(c: &mut Criterion) {
    let p = ParameterSet::with_preset(3, 0, SPreset::Schrodinger).unwrap();
    let f = make_ktype(p, 4, 2, 6, canonical_harmonic(3, 6).unwrap()).unwrap();
    let points = compact_points(3, 40, 7);
    let cfg = FdConfig::default();
    c.bench_function("recover E_1+ coefficients", |bench| {
        bench.iter(|| recover_e_coefficients(&f, 1, Sign::Plus, &points, &cfg, 1e-7))
    });
}

criterion_group!(benches, hypergeometric, ktype_value, harmonics, recovery);
criterion_main!(benches);

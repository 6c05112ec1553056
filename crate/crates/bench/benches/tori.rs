use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::hint::black_box;
use tori_core::contfrac::{convergents, expand_surd};
use tori_core::correspondence::torus_to_nctorus;
use tori_core::lattice::reduce;
use tori_core::spectrum::enumerate;
use tori_core::weierstrass::{eisenstein, wp};
use tori_core::{Lattice, Modulus, QuadraticIrrational, SpectrumMode};

fn spectrum(c: &mut Criterion) {
    let l = Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.3, 1.7)).unwrap();
    let mut g = c.benchmark_group("enumerate");
    for cutoff in [10.0, 40.0] {
        g.bench_function(format!("full/{cutoff}"), |b| {
            b.iter(|| enumerate(black_box(&l), cutoff, SpectrumMode::Full).unwrap())
        });
        g.bench_function(format!("primitive/{cutoff}"), |b| {
            b.iter(|| enumerate(black_box(&l), cutoff, SpectrumMode::Primitive).unwrap())
        });
    }
    g.finish();
}

fn continued_fractions(c: &mut Criterion) {
    // √991 has period 60.
    let long = QuadraticIrrational::sqrt(991).unwrap();
    let x = QuadraticIrrational::new(3, 2, 7, 13).unwrap();
    c.bench_function("expand_surd/sqrt991", |b| b.iter(|| expand_surd(black_box(&long)).unwrap()));
    c.bench_function("expand_surd/(3+2√13)/7", |b| b.iter(|| expand_surd(black_box(&x)).unwrap()));
    let cf = expand_surd(&long).unwrap();
    c.bench_function("convergents/200", |b| b.iter(|| convergents(black_box(&cf), 200).unwrap()));
}

fn analytic(c: &mut Criterion) {
    let l = Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.2, 1.1)).unwrap();
    let mut g = c.benchmark_group("weierstrass");
    g.sample_size(10);
    g.bench_function("eisenstein/k2/box64", |b| b.iter(|| eisenstein(black_box(&l), 2, 64).unwrap()));
    g.bench_function("wp/box128", |b| b.iter(|| wp(Complex64::new(0.31, 0.17), black_box(&l), 128).unwrap()));
    g.finish();
}

fn modular(c: &mut Criterion) {
    let tau = Modulus::from_parts(137.25, 0.0031).unwrap();
    c.bench_function("reduce/deep", |b| b.iter(|| reduce(black_box(tau))));
    let t = Modulus::from_parts(0.3, 1.7).unwrap();
    c.bench_function("torus_to_nctorus/cutoff8", |b| b.iter(|| torus_to_nctorus(black_box(t), 8.0, 16).unwrap()));
}

criterion_group!(benches, spectrum, continued_fractions, analytic, modular);
criterion_main!(benches);

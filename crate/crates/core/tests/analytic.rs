use num_complex::Complex64;
use proptest::prelude::*;
use tori_core::cm::{endomorphism_ring, multiplier_candidates, EndomorphismRing, ExactModulus};
use tori_core::contfrac::{ContinuedFraction, UnimodularMatrix};
use tori_core::correspondence::{curvature_extract, torus_to_nctorus, w_map};
use tori_core::lattice::{apply_automorphism, Lattice, Modulus};
use tori_core::spectrum::{enumerate, LengthSpectrum, SpectrumMode, DEFAULT_LENGTH_TOL};
use tori_core::weierstrass::{cubic_of_lattice, eisenstein, wp};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn reduced_lattice() -> impl Strategy<Value = Lattice> {
    (-0.5f64..0.5, 0.0f64..1.5, 0.7f64..1.5).prop_map(|(re, extra, scale)| {
        let im = (1.0 - re * re).sqrt() + extra;
        Lattice::new(Complex64::new(scale, 0.0), Complex64::new(re, im) * scale).unwrap()
    })
}

/// A point of the fundamental parallelogram kept away from its corners.
fn interior_point(l: &Lattice, s: f64, t: f64) -> Complex64 {
    l.w1() * s + l.w2() * t
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn wp_is_even_periodic_and_on_the_curve(l in reduced_lattice(), s in 0.1f64..0.9, t in 0.1f64..0.9) {
        let z = interior_point(&l, s, t);
        let curve = cubic_of_lattice(&l, 64).unwrap();
        let v = wp(z, &l, 128).unwrap();
        let minus = wp(-z, &l, 128).unwrap();
        prop_assert!((v.p - minus.p).norm() < 1e-8 * v.p.norm().max(1.0));
        let shifted = wp(z + l.w1(), &l, 128).unwrap();
        prop_assert!((shifted.p - v.p).norm() < 1e-6 * v.p.norm().max(1.0));
        let r = curve.residual(v.p, v.p_prime_half);
        prop_assert!(r.norm() < 1e-6, "residual {}", r);
    }

    #[test]
    fn eisenstein_is_homogeneous(l in reduced_lattice(), r in 0.5f64..2.0, phi in 0.0f64..6.3) {
        let alpha = Complex64::from_polar(r, phi);
        let la = l.scaled(alpha).unwrap();
        for k in [2u32, 3] {
            let g = eisenstein(&l, k, 64).unwrap();
            let ga = eisenstein(&la, k, 64).unwrap();
            let want = g * alpha.powi(-2 * k as i32);
            let scale = want.norm().max(1e-3 * r.powi(-2 * k as i32));
            prop_assert!((ga - want).norm() < 1e-8 * scale);
        }
    }

    #[test]
    fn cubic_is_basis_independent(l in reduced_lattice(), a in -3i64..=3, k in -3i64..=3) {
        let m = UnimodularMatrix::from_i64(1, 0, a, 1).unwrap();
        let n = UnimodularMatrix::from_i64(1, k, 0, 1).unwrap();
        let other = apply_automorphism(&l, &(&m * &n)).unwrap();
        let c1 = cubic_of_lattice(&l, 64).unwrap();
        let c2 = cubic_of_lattice(&other, 64).unwrap();
        prop_assert!((c1.a - c2.a).norm() < 1e-8 * c1.a.norm().max(1.0));
        prop_assert!((c1.b - c2.b).norm() < 1e-8 * c1.b.norm().max(1.0));
    }
}

/// `l₁ = 1`, `l₂ = μ₁ + f`, `l_ν = l_{ν−2} + μ_ν l_{ν−1}` for `ν ≥ 3`.
fn recurrence_lengths(mu: &[u64], f: f64) -> Vec<f64> {
    let mut l = vec![1.0, mu[0] as f64 + f];
    for nu in 3..=mu.len() {
        l.push(l[nu - 3] + mu[nu - 1] as f64 * l[nu - 2]);
    }
    l
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn curvature_round_trip(
        pre in prop::collection::vec(1u64..9, 0..4),
        period in prop::collection::vec(1u64..9, 1..4),
        f in 0.05f64..0.95,
    ) {
        let cf = ContinuedFraction::periodic(1, pre, period).unwrap();
        let mu: Vec<u64> = cf.quotients(26).unwrap().iter().map(|&q| q as u64).collect();
        let lengths = recurrence_lengths(&mu, f);
        let sp = LengthSpectrum::from_lengths(&lengths, lengths[lengths.len() - 1] * 2.0).unwrap();
        let r = curvature_extract(&sp, 26).unwrap();
        prop_assert_eq!(&r.quotients()[2..], &mu[2..]);
        for e in &r.diagnostics[2..] {
            prop_assert!(!e.flagged);
        }
    }

    #[test]
    fn w_map_is_modular_invariant(re in -2.0f64..2.0, im in 0.4f64..2.5, n in -3i64..=3) {
        let tau = Modulus::from_parts(re, im).unwrap();
        let base = w_map(tau, 6.0, SpectrumMode::Full).unwrap();
        for m in [UnimodularMatrix::translation(n), UnimodularMatrix::inversion()] {
            let image = w_map(tau.act(&m).unwrap(), 6.0, SpectrumMode::Full).unwrap();
            prop_assert!(base.equal(&image, 1e-8).unwrap());
        }
    }
}

#[test]
fn pipeline_is_deterministic() {
    let tau = Modulus::from_parts(0.3, 1.7).unwrap();
    let a = torus_to_nctorus(tau, 8.0, 16).unwrap();
    let b = torus_to_nctorus(tau, 8.0, 16).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
    assert_eq!(a, b);
}

#[test]
fn cm_spectra_are_closed_under_multipliers() {
    for tau in [ExactModulus::gaussian(), ExactModulus::eisenstein()] {
        let EndomorphismRing::Order(order) = endomorphism_ring(&tau).unwrap() else {
            panic!("expected CM");
        };
        let t = tau.to_complex();
        let l = Lattice::new(Complex64::new(1.0, 0.0), t).unwrap();
        let sp = enumerate(&l, 12.0, SpectrumMode::Full).unwrap();
        let candidates = multiplier_candidates(&order, 5);
        assert!(!candidates.is_empty());
        for m in candidates {
            let rho = m.alpha.to_complex().norm();
            let report = sp.alpha_multiplicative(rho, DEFAULT_LENGTH_TOL).unwrap();
            assert!(report.submultiset, "alpha = {}", m.alpha);
        }
    }
}

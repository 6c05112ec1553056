use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use tori_core::cm::{
    endomorphism_ring, is_endomorphism, is_endomorphism_approx, multiplier_candidates,
    EndomorphismRing, ExactModulus,
};
use tori_core::contfrac::{
    an_matrices, convergents, expand_surd, klein_check, mobius_apply, ContinuedFraction,
    QuadraticIrrational, UnimodularMatrix,
};
use tori_core::lattice::{apply_automorphism, isomorphic, modulus, reduce, Lattice, Modulus};
use tori_core::nctorus::{
    dimension_group_step, morita_equivalent, scale_action, v_map, FFamily, NcTorus, StateScale,
};
use tori_core::spectrum::{enumerate, SpectrumMode, DEFAULT_LENGTH_TOL};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn nonsquare() -> impl Strategy<Value = i64> {
    (2i64..60).prop_filter("not a square", |d| {
        let r = (*d as f64).sqrt().round() as i64;
        r * r != *d
    })
}

fn real_surd() -> impl Strategy<Value = QuadraticIrrational> {
    (-20i64..20, 1i64..6, 1i64..8, nonsquare(), any::<bool>()).prop_map(|(p, q, r, d, neg)| {
        let q = if neg { -q } else { q };
        QuadraticIrrational::new(p, q, r, d).unwrap()
    })
}

/// Matrices with entries at most 10 in absolute value and determinant ±1.
fn unimodular() -> impl Strategy<Value = UnimodularMatrix> {
    (-10i64..=10, -10i64..=10, any::<bool>()).prop_filter_map("no unimodular completion", |(a, c, flip)| {
        let (g, x, y) = {
            let e = a.extended_gcd(&c);
            (e.gcd, e.x, e.y)
        };
        if g != 1 {
            return None;
        }
        // a·x + c·y = 1, so [[a, −y], [c, x]] has determinant 1.
        let (b, d) = (-y, x);
        if b.abs() > 10 || d.abs() > 10 {
            return None;
        }
        let m = if flip {
            UnimodularMatrix::from_i64(b, a, d, c)
        } else {
            UnimodularMatrix::from_i64(a, b, c, d)
        };
        m.ok()
    })
}

fn sl2() -> impl Strategy<Value = UnimodularMatrix> {
    unimodular().prop_filter("determinant +1", |m| m.det() == 1)
}

fn upper_half() -> impl Strategy<Value = Modulus> {
    (-3.0f64..3.0, 0.3f64..3.0).prop_map(|(re, im)| Modulus::from_parts(re, im).unwrap())
}

fn lattice() -> impl Strategy<Value = Lattice> {
    (0.5f64..2.0, 0.0f64..std::f64::consts::TAU, upper_half()).prop_map(|(r, phi, tau)| {
        let w1 = Complex64::from_polar(r, phi);
        Lattice::new(w1, w1 * tau.tau()).unwrap()
    })
}

/// Independent oracle for `A_n`: the product of the quotient factors,
/// computed with plain 2×2 integer arithmetic.
fn product_oracle(q: &[i64]) -> [BigInt; 4] {
    let mut m = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    for &a in q {
        let a = BigInt::from(a);
        m = [
            &m[0] * &a + &m[1],
            m[0].clone(),
            &m[2] * &a + &m[3],
            m[2].clone(),
        ];
    }
    m
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn convergents_are_matrix_columns(a0 in 1i64..20, tail in prop::collection::vec(1u64..=20, 1..30)) {
        let cf = ContinuedFraction::finite(a0, tail.clone()).unwrap();
        let n = tail.len() + 1;
        let conv = convergents(&cf, n).unwrap();
        let quotients = cf.quotients(n).unwrap();
        for k in 1..=n {
            let m = product_oracle(&quotients[..k]);
            prop_assert_eq!(&conv[k + 1].p, &m[0]);
            prop_assert_eq!(&conv[k + 1].q, &m[2]);
            prop_assert!(klein_check(&cf, k).unwrap().holds);
        }
        // Consecutive convergents are unimodular pairs.
        for k in 1..conv.len() {
            let det = &conv[k].p * &conv[k - 1].q - &conv[k - 1].p * &conv[k].q;
            prop_assert_eq!(det.abs(), BigInt::one());
        }
    }

    #[test]
    fn surd_expansion_round_trips(x in real_surd()) {
        let cf = expand_surd(&x).unwrap();
        prop_assert!(cf.is_periodic());
        prop_assert_eq!(cf.to_surd().unwrap(), x.clone());
        let v = cf.value_f64(40);
        prop_assert!((v - x.to_f64()).abs() < 1e-9 * x.to_f64().abs().max(1.0));
    }

    #[test]
    fn morita_soundness(x in real_surd(), m in unimodular()) {
        let t = NcTorus::exact(x.clone()).unwrap();
        let image = NcTorus::exact(mobius_apply(&m, &x).unwrap()).unwrap();
        let w = morita_equivalent(&t, &image).unwrap();
        let tori_core::nctorus::Theta::Exact(y) = image.theta() else { unreachable!() };
        prop_assert_eq!(&mobius_apply(&w.matrix, &x).unwrap(), y);
        // symmetry
        prop_assert!(morita_equivalent(&image, &t).is_some());
    }

    #[test]
    fn morita_transitivity(x in real_surd(), m1 in unimodular(), m2 in unimodular()) {
        let a = NcTorus::exact(x.clone()).unwrap();
        let b = a.transform(&m1).unwrap();
        let c = b.transform(&m2).unwrap();
        prop_assert!(morita_equivalent(&a, &b).is_some());
        prop_assert!(morita_equivalent(&b, &c).is_some());
        prop_assert!(morita_equivalent(&a, &c).is_some());
        prop_assert!(morita_equivalent(&a, &a).is_some());
    }

    #[test]
    fn morita_separates_fields(x in real_surd(), y in real_surd()) {
        prop_assume!(x.d() != y.d());
        let a = NcTorus::exact(x).unwrap();
        let b = NcTorus::exact(y).unwrap();
        prop_assert!(morita_equivalent(&a, &b).is_none());
    }

    #[test]
    fn dimension_group_traces_increase(x in real_surd()) {
        let t = NcTorus::exact(x).unwrap();
        prop_assume!(t.cf().a0() >= 1);
        let traces: Vec<BigInt> = an_matrices(t.cf(), 25).unwrap().iter().map(|m| m.trace()).collect();
        for k in 2..traces.len() {
            prop_assert!(traces[k] > traces[k - 1]);
        }
        let last = dimension_group_step(&t, 25).unwrap();
        prop_assert_eq!(last.trace(), traces[25].clone());
        let v = v_map(&t, StateScale::new(1.0).unwrap(), 25, FFamily::Identity).unwrap();
        let v3 = v_map(&t, StateScale::new(3.0).unwrap(), 25, FFamily::Identity).unwrap();
        for k in 1..v.len() {
            prop_assert!(k < 2 || v[k] > v[k - 1]);
            prop_assert!((v3[k] - 3.0 * v[k]).abs() <= 1e-12 * v3[k].abs().max(1.0));
        }
    }

    #[test]
    fn scale_action_cocycle(x in real_surd(), m1 in unimodular(), m2 in unimodular(), omega in 0.1f64..10.0) {
        let t = NcTorus::exact(x).unwrap();
        let s = StateScale::new(omega).unwrap();
        let t1 = t.transform(&m1).unwrap();
        let step = scale_action(scale_action(s, &m1, &t).unwrap(), &m2, &t1).unwrap();
        let direct = scale_action(s, &(&m2 * &m1), &t).unwrap();
        prop_assert!((step.omega() - direct.omega()).abs() <= 1e-12 * direct.omega().max(1.0) * 10.0);
    }

    #[test]
    fn reduction_lands_in_fundamental_domain(tau in upper_half()) {
        let r = reduce(tau);
        let z = r.modulus.tau();
        prop_assert!(z.re >= -0.5 - 1e-12 && z.re < 0.5 + 1e-12);
        prop_assert!(z.norm() >= 1.0 - 1e-12);
        prop_assert_eq!(r.matrix.det(), 1);
        let image = tau.act(&r.matrix).unwrap().tau();
        prop_assert!((image - z).norm() < 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn isomorphism_detects_orbits(tau in upper_half(), m in sl2()) {
        let image = tau.act(&m).unwrap();
        prop_assume!(image.tau().im > 1e-3);
        let w = isomorphic(tau, image, 1e-9).unwrap();
        let mapped = if w.matrix.det() == 1 {
            tau.act(&w.matrix).unwrap().tau()
        } else {
            w.matrix.apply_complex(tau.tau().conj()).unwrap()
        };
        prop_assert!((mapped - image.tau()).norm() < 1e-7 * (1.0 + image.tau().norm()));
    }
}

proptest! {
    #![proptest_config(config(30))]

    #[test]
    fn enumeration_matches_brute_force(l in lattice(), cutoff in 1.0f64..10.0, primitive in any::<bool>()) {
        let mode = if primitive { SpectrumMode::Primitive } else { SpectrumMode::Full };
        let sp = enumerate(&l, cutoff, mode).unwrap();
        let reduced = l.gauss_reduced();
        // The reduced basis has |m|, |n| ≤ cutoff / (systole · sin 60°) + 1.
        let range = (cutoff / (reduced.w1().norm() * 0.86)).ceil() as i64 + 1;
        let mut brute: Vec<f64> = Vec::new();
        for m in 0..=range {
            for n in -range..=range {
                if m == 0 && n <= 0 {
                    continue;
                }
                if primitive && m.gcd(&n) != 1 {
                    continue;
                }
                let v = reduced.point(m, n).norm();
                if v <= cutoff - 1e-9 {
                    brute.push(v);
                }
            }
        }
        let effective: usize = sp.entries().iter().filter(|e| e.length <= cutoff - 1e-9).map(|e| e.multiplicity).sum();
        prop_assert_eq!(effective, brute.len());
        for e in sp.entries() {
            prop_assert_eq!(e.classes.len(), e.multiplicity);
            for &(m, n) in &e.classes {
                prop_assert!((l.point(m, n).norm() - e.length).abs() < 1e-9);
                if primitive {
                    prop_assert_eq!(m.gcd(&n), 1);
                }
            }
        }
        for w in sp.entries().windows(2) {
            prop_assert!(w[0].length < w[1].length);
        }
    }

    #[test]
    fn scaling_commutes_with_enumeration(l in lattice(), r in 0.3f64..3.0, phi in 0.0f64..6.3) {
        let alpha = Complex64::from_polar(r, phi);
        let scaled = enumerate(&l, 8.0, SpectrumMode::Full).unwrap().scale(r).unwrap();
        let direct = enumerate(&l.scaled(alpha).unwrap(), 8.0 * r, SpectrumMode::Full).unwrap();
        prop_assert!(scaled.equal(&direct, DEFAULT_LENGTH_TOL).unwrap());
    }

    #[test]
    fn spectra_are_automorphism_invariant(l in lattice(), m in unimodular()) {
        let a = enumerate(&l, 6.0, SpectrumMode::Full).unwrap();
        let b = enumerate(&apply_automorphism(&l, &m).unwrap(), 6.0, SpectrumMode::Full).unwrap();
        prop_assert!(a.equal(&b, DEFAULT_LENGTH_TOL).unwrap());
        let tau = modulus(&l);
        prop_assert!(tau.tau().im > 0.0);
    }

    #[test]
    fn cm_generators_are_endomorphisms(a in 1i64..8, b in -8i64..8, c in 1i64..12) {
        let disc = b * b - 4 * a * c;
        prop_assume!(disc < 0 && a.gcd(&b).gcd(&c) == 1);
        let tau = ExactModulus::quadratic(QuadraticIrrational::new(-b, 1, 2 * a, disc).unwrap()).unwrap();
        let EndomorphismRing::Order(order) = endomorphism_ring(&tau).unwrap() else {
            panic!("quadratic modulus without CM");
        };
        prop_assert_eq!(order.discriminant.to_i64().unwrap(), disc);
        prop_assert!(is_endomorphism(&order.generator, &tau).unwrap());
        for cand in multiplier_candidates(&order, 10) {
            prop_assert!(is_endomorphism(&cand.alpha, &order.modulus()).unwrap());
        }
    }

    #[test]
    fn generic_moduli_admit_only_integers(tau in upper_half(), x in -3i64..=3, y in -3i64..=3) {
        let t = tau.tau();
        prop_assert_eq!(endomorphism_ring(&ExactModulus::generic(t).unwrap()).unwrap(), EndomorphismRing::Integers);
        let gaussian = Complex64::new(x as f64, y as f64);
        let eisenstein = Complex64::new(x as f64 + 0.5 * y as f64, 0.75f64.sqrt() * y as f64);
        for alpha in [gaussian, eisenstein] {
            if y == 0 {
                prop_assert!(is_endomorphism_approx(alpha, t, 1e-9));
            } else {
                prop_assert!(!is_endomorphism_approx(alpha, t, 1e-9));
            }
        }
    }
}

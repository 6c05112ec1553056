//! Eisenstein series, the Weierstrass `℘` function and the cubic of a lattice.
//!
//! Lattice sums run over the box `|m|, |n| ≤ B` in the coordinates of a
//! Gauss-reduced basis.
//! Points on the boundary of the box get trapezoid weights and the sum over
//! the rest of the lattice is replaced by the integral of the summand over the
//! complement of the box, which has a closed form for powers of `z`. With
//! both corrections the truncation error falls like `B^{-2k}` rather than
//! `B^{2-2k}`, and [`eisenstein`] removes that term by extrapolation.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Smallest accepted box.
pub const MIN_BOX: usize = 8;

/// Relative agreement required between boxes `B` and `2B`.
pub const CERTIFICATE_TOL: f64 = 1e-8;

/// Minimum distance from `z` to the lattice accepted by [`wp`].
pub const POLE_DISTANCE: f64 = 1e-6;

/// Number of Laurent terms used for the tail of `℘`.
const WP_TAIL_TERMS: i32 = 8;

/// The curve `y² = x³ + ax + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCurve {
    pub a: Complex64,
    pub b: Complex64,
}

impl CubicCurve {
    /// `4a³ + 27b²`.
    pub fn discriminant(&self) -> Complex64 {
        4.0 * self.a.powi(3) + 27.0 * self.b.powi(2)
    }

    /// Whether the discriminant is negligible against `|a|³ + |b|²`.
    pub fn is_degenerate(&self, tol: f64) -> bool {
        let scale = self.a.norm().powi(3) + self.b.norm().powi(2);
        self.discriminant().norm() <= tol * scale.max(f64::MIN_POSITIVE)
    }

    /// `y² − (x³ + ax + b)`.
    pub fn residual(&self, x: Complex64, y: Complex64) -> Complex64 {
        y * y - (x * x * x + self.a * x + self.b)
    }
}

/// `℘(z)` and `½℘′(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WpValue {
    pub p: Complex64,
    pub p_prime_half: Complex64,
}

fn check_box(box_size: usize) -> Result<()> {
    if box_size < MIN_BOX {
        return Err(Error::InvalidArgument(format!("box must be at least {MIN_BOX}")));
    }
    if box_size > 1 << 14 {
        return Err(Error::ResourceLimit { limit: 1 << 14 });
    }
    Ok(())
}

/// Trapezoid weight of the point `(m, n)` in the box of half-width `b`.
fn weight(m: i64, n: i64, b: i64) -> f64 {
    let edge = |x: i64| if x.abs() == b { 0.5 } else { 1.0 };
    edge(m) * edge(n)
}

/// `(1/A) ∫ z^{-2k} dA` over the complement of the box of half-width `b`.
///
/// Green's theorem turns the area integral into `−(1/2i)∮ z̄ z^{-2k} dz` over
/// the boundary parallelogram; on each edge `z̄` is affine in `z`, which
/// integrates in closed form.
fn tail_integral(lattice: &Lattice, k: i32, b: f64) -> Complex64 {
    let (w1, w2) = (lattice.w1(), lattice.w2());
    let corners = [w1 + w2, -w1 + w2, -w1 - w2, w1 - w2];
    let orientation = (w1.conj() * w2).im.signum();
    let e1 = 1 - 2 * k;
    let e2 = 2 - 2 * k;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        let (z0, z1) = (corners[i], corners[(i + 1) % 4]);
        let e = z1 - z0;
        let ratio = e.conj() / e;
        let lin = z0.conj() - z0 * ratio;
        let prim = |z: Complex64| lin * z.powi(e1) / e1 as f64 + ratio * z.powi(e2) / e2 as f64;
        total += prim(z1) - prim(z0);
    }
    let unit = total * orientation / Complex64::new(0.0, -2.0);
    unit * b.powi(e2) / lattice.covolume()
}

/// Corrected lattice sum of `ω^{-2k}` over the box of half-width `b`.
fn eisenstein_box(lattice: &Lattice, k: i32, b: usize) -> (Complex64, f64) {
    let lattice = &lattice.gauss_reduced();
    let bi = b as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    // ω and −ω contribute equally; visit one of each pair.
    for m in 0..=bi {
        for n in -bi..=bi {
            if m == 0 && n <= 0 {
                continue;
            }
            let w = weight(m, n, bi);
            let term = lattice.point(m, n).powi(-2 * k);
            sum += term * w;
            abs_sum += term.norm() * w;
        }
    }
    (2.0 * sum + tail_integral(lattice, k, b as f64), 2.0 * abs_sum)
}

/// `Σ ω^{-2k}` over the box of half-width `box_size`, without certificate.
pub fn eisenstein_truncated(lattice: &Lattice, k: u32, box_size: usize) -> Result<Complex64> {
    if k < 2 {
        return Err(Error::InvalidArgument("Eisenstein index must be at least 2".into()));
    }
    check_box(box_size)?;
    Ok(eisenstein_box(lattice, k as i32, box_size).0)
}

/// `G_k(L) = Σ_{ω ≠ 0} ω^{-2k}` for `k ≥ 2`.
///
/// Evaluated at boxes `B` and `2B`, which must agree to [`CERTIFICATE_TOL`]
/// relative to `Σ |ω|^{-2k}`, the natural scale when symmetry makes the sum
/// itself vanish. The two values are then combined by one Richardson step.
pub fn eisenstein(lattice: &Lattice, k: u32, box_size: usize) -> Result<Complex64> {
    if k < 2 {
        return Err(Error::InvalidArgument("Eisenstein index must be at least 2".into()));
    }
    check_box(box_size)?;
    check_box(2 * box_size)?;
    let (coarse, _) = eisenstein_box(lattice, k as i32, box_size);
    let (fine, scale) = eisenstein_box(lattice, k as i32, 2 * box_size);
    let change = (fine - coarse).norm();
    if change > CERTIFICATE_TOL * scale.max(fine.norm()) {
        return Err(Error::NotConverged { box_size, change });
    }
    // The corrected sums still differ from the limit by c·B^{-2k}.
    let factor = 4f64.powi(k as i32) - 1.0;
    Ok(fine + (fine - coarse) / factor)
}

/// `y² = x³ − 15G₂(L)x − 35G₃(L)`, the curve parametrized by `(℘, ½℘′)`.
pub fn cubic_of_lattice(lattice: &Lattice, box_size: usize) -> Result<CubicCurve> {
    let g4 = eisenstein(lattice, 2, box_size)?;
    let g6 = eisenstein(lattice, 3, box_size)?;
    Ok(CubicCurve { a: -15.0 * g4, b: -35.0 * g6 })
}

/// Distance from `z` to the nearest lattice point.
fn lattice_distance(lattice: &Lattice, z: Complex64) -> f64 {
    let (s, t) = lattice.coordinates(z);
    let (m0, n0) = (s.round() as i64, t.round() as i64);
    let mut best = f64::INFINITY;
    for dm in -1..=1 {
        for dn in -1..=1 {
            best = best.min((z - lattice.point(m0 + dm, n0 + dn)).norm());
        }
    }
    best
}

/// `℘(z)` and `½℘′(z)` from the boxes of half-width `box_size` and twice
/// that, combined by one Richardson step.
///
/// `℘(z) = z^{-2} + Σ [(z + ω)^{-2} − ω^{-2}]` and `½℘′(z) = −Σ (z + ω)^{-3}`,
/// each with trapezoid weights on the box boundary. The remainder uses the
/// expansion `(z + ω)^{-2} − ω^{-2} = Σ_j (2j + 1) z^{2j} ω^{-2j-2} + (odd)`,
/// whose odd part cancels over the symmetric complement.
pub fn wp(z: Complex64, lattice: &Lattice, box_size: usize) -> Result<WpValue> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("z"));
    }
    check_box(box_size)?;
    check_box(2 * box_size)?;
    let dist = lattice_distance(lattice, z);
    if dist < POLE_DISTANCE {
        return Err(Error::NearLatticePoint(dist));
    }
    let lattice = &lattice.gauss_reduced();
    let coarse = wp_box(z, lattice, box_size);
    let fine = wp_box(z, lattice, 2 * box_size);
    // The leading remainder is the j = 1 tail term, of order B^{-4}.
    Ok(WpValue {
        p: fine.p + (fine.p - coarse.p) / 15.0,
        p_prime_half: fine.p_prime_half + (fine.p_prime_half - coarse.p_prime_half) / 15.0,
    })
}

fn wp_box(z: Complex64, lattice: &Lattice, box_size: usize) -> WpValue {
    let bi = box_size as i64;
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for m in -bi..=bi {
        for n in -bi..=bi {
            let w = weight(m, n, bi);
            let omega = lattice.point(m, n);
            let u = z + omega;
            let inv = u.inv();
            let inv2 = inv * inv;
            dp -= inv2 * inv * w;
            if m == 0 && n == 0 {
                p += inv2;
            } else {
                p += (inv2 - omega.powi(-2)) * w;
            }
        }
    }
    let b = box_size as f64;
    for j in 1..=WP_TAIL_TERMS {
        let t = tail_integral(lattice, j + 1, b);
        let c = (2 * j + 1) as f64;
        p += c * z.powi(2 * j) * t;
        dp += c * j as f64 * z.powi(2 * j - 1) * t;
    }
    WpValue { p, p_prime_half: dp }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetric_zeros() {
        let g6 = eisenstein(&Lattice::square(), 3, 64).unwrap();
        assert!(g6.norm() < 1e-10, "{g6}");
        let g4 = eisenstein(&Lattice::hexagonal(), 2, 64).unwrap();
        assert!(g4.norm() < 1e-10, "{g4}");
    }

    #[test]
    fn square_g4_is_positive_and_stable() {
        let g = eisenstein(&Lattice::square(), 2, 32).unwrap();
        assert!(g.re > 0.0 && g.im.abs() < 1e-12);
        let h = eisenstein(&Lattice::square(), 2, 64).unwrap();
        assert!((g - h).norm() < 1e-8 * h.norm());
    }

    #[test]
    fn square_g4_matches_closed_form() {
        // Σ' (m + ni)^{-4} = Γ(1/4)^8 / (960 π²)
        let gamma_quarter = 3.625_609_908_221_908_3_f64;
        let want = gamma_quarter.powi(8) / (960.0 * std::f64::consts::PI.powi(2));
        let g = eisenstein(&Lattice::square(), 2, 16).unwrap();
        assert!((g.re - want).abs() < 1e-9 * want, "{} vs {want}", g.re);
    }

    #[test]
    fn homogeneity() {
        let l = Lattice::new(c(1.0, 0.0), c(0.37, 1.21)).unwrap();
        let alpha = c(0.8, -1.3);
        let la = l.scaled(alpha).unwrap();
        for k in [2u32, 3] {
            let g = eisenstein(&l, k, 32).unwrap();
            let ga = eisenstein(&la, k, 32).unwrap();
            let want = g * alpha.powi(-2 * k as i32);
            assert!((ga - want).norm() < 1e-8 * want.norm());
        }
    }

    #[test]
    fn cubic_examples() {
        let sq = cubic_of_lattice(&Lattice::square(), 64).unwrap();
        assert!(sq.b.norm() < 1e-8);
        let hex = cubic_of_lattice(&Lattice::hexagonal(), 64).unwrap();
        assert!(hex.a.norm() < 1e-8);
        assert!(!sq.is_degenerate(1e-9));
    }

    #[test]
    fn wp_properties() {
        let l = Lattice::new(c(1.0, 0.0), c(0.2, 1.1)).unwrap();
        let curve = cubic_of_lattice(&l, 64).unwrap();
        for z in [c(0.31, 0.17), c(-0.4, 0.5), c(0.05, -0.33)] {
            let v = wp(z, &l, 128).unwrap();
            let minus = wp(-z, &l, 128).unwrap();
            assert!((v.p - minus.p).norm() < 1e-8 * v.p.norm().max(1.0));
            assert!((v.p_prime_half + minus.p_prime_half).norm() < 1e-8 * v.p_prime_half.norm().max(1.0));
            let shifted = wp(z + l.w1(), &l, 128).unwrap();
            assert!((shifted.p - v.p).norm() < 1e-6);
            let r = curve.residual(v.p, v.p_prime_half);
            assert!(r.norm() < 1e-6, "residual {r}");
        }
    }

    #[test]
    fn wp_rejects_poles_and_small_boxes() {
        let l = Lattice::square();
        assert!(matches!(wp(c(1.0, 1.0), &l, 16), Err(Error::NearLatticePoint(_))));
        assert!(eisenstein(&l, 2, 4).is_err());
        assert!(eisenstein(&l, 1, 16).is_err());
    }
}

//! Lattices `ω₁Z + ω₂Z` in the complex plane, their moduli, and the action of
//! the modular group.

use crate::contfrac::UnimodularMatrix;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

/// Default tolerance when comparing reduced moduli.
pub const DEFAULT_MODULUS_TOL: f64 = 1e-9;

const BOUNDARY_EPS: f64 = 1e-12;
const MAX_REDUCTION_STEPS: usize = 100_000;

/// A rank-two lattice in `C` given by a basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice", into = "RawLattice")]
pub struct Lattice {
    w1: Complex64,
    w2: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RawLattice {
    w1: Complex64,
    w2: Complex64,
}

impl TryFrom<RawLattice> for Lattice {
    type Error = Error;
    fn try_from(raw: RawLattice) -> Result<Self> {
        Lattice::new(raw.w1, raw.w2)
    }
}

impl From<Lattice> for RawLattice {
    fn from(l: Lattice) -> Self {
        RawLattice { w1: l.w1, w2: l.w2 }
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl Lattice {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        if !finite(w1) || !finite(w2) {
            return Err(Error::NonFinite("lattice basis"));
        }
        if w1.norm() == 0.0 || w2.norm() == 0.0 {
            return Err(Error::CollinearBasis);
        }
        let cross = (w1.conj() * w2).im;
        if cross.abs() <= 1e-12 * w1.norm() * w2.norm() {
            return Err(Error::CollinearBasis);
        }
        Ok(Self { w1, w2 })
    }

    /// `Z + τZ`.
    pub fn from_modulus(tau: Modulus) -> Self {
        Self { w1: Complex64::new(1.0, 0.0), w2: tau.tau }
    }

    /// The square lattice `Z + iZ`.
    pub fn square() -> Self {
        Self::from_modulus(Modulus { tau: Complex64::i() })
    }

    /// The hexagonal lattice `Z + e^{iπ/3}Z`.
    pub fn hexagonal() -> Self {
        Self::from_modulus(Modulus { tau: Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3) })
    }

    pub fn w1(&self) -> Complex64 {
        self.w1
    }

    pub fn w2(&self) -> Complex64 {
        self.w2
    }

    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        self.w1 * m as f64 + self.w2 * n as f64
    }

    /// Area of a fundamental parallelogram.
    pub fn covolume(&self) -> f64 {
        (self.w1.conj() * self.w2).im.abs()
    }

    /// Gram entries `(|ω₁|², Re(ω̄₁ω₂), |ω₂|²)`.
    pub fn gram(&self) -> (f64, f64, f64) {
        (self.w1.norm_sqr(), (self.w1.conj() * self.w2).re, self.w2.norm_sqr())
    }

    /// Real coordinates `(s, t)` of `z = s·ω₁ + t·ω₂`.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let det = (self.w1.conj() * self.w2).im;
        let s = (z.conj() * self.w2).im / det;
        let t = (self.w1.conj() * z).im / det;
        (s, t)
    }

    /// Whether `z` is within `tol` (in coordinates) of a lattice point.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let (s, t) = self.coordinates(z);
        (s - s.round()).abs() <= tol && (t - t.round()).abs() <= tol
    }

    /// `αL`.
    pub fn scaled(&self, alpha: Complex64) -> Result<Self> {
        Self::new(self.w1 * alpha, self.w2 * alpha)
    }

    /// Lagrange–Gauss reduced basis: `|ω₁| ≤ |ω₂| ≤ |ω₂ ± ω₁|`.
    pub fn gauss_reduced(&self) -> Self {
        let (mut u, mut v) = (self.w1, self.w2);
        if u.norm_sqr() > v.norm_sqr() {
            std::mem::swap(&mut u, &mut v);
        }
        for _ in 0..MAX_REDUCTION_STEPS {
            let mu = ((u.conj() * v).re / u.norm_sqr()).round();
            v -= u * mu;
            if v.norm_sqr() >= u.norm_sqr() {
                break;
            }
            std::mem::swap(&mut u, &mut v);
        }
        Self { w1: u, w2: v }
    }

    /// Length of a shortest nonzero vector.
    pub fn systole(&self) -> f64 {
        self.gauss_reduced().w1.norm()
    }
}

/// A complex modulus `τ` with `Im τ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct Modulus {
    tau: Complex64,
}

impl TryFrom<Complex64> for Modulus {
    type Error = Error;
    fn try_from(tau: Complex64) -> Result<Self> {
        Modulus::new(tau)
    }
}

impl From<Modulus> for Complex64 {
    fn from(m: Modulus) -> Self {
        m.tau
    }
}

impl Modulus {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !finite(tau) {
            return Err(Error::NonFinite("modulus"));
        }
        if !(tau.im > 0.0) {
            return Err(Error::InvalidArgument(format!("modulus {tau} is not in the upper half plane")));
        }
        Ok(Self { tau })
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// `(aτ + b)/(cτ + d)` for a determinant +1 matrix.
    pub fn act(&self, m: &UnimodularMatrix) -> Result<Self> {
        if m.det() != 1 {
            return Err(Error::InvalidArgument("only determinant +1 preserves the upper half plane".into()));
        }
        Self::new(m.apply_complex(self.tau)?)
    }
}

/// `τ = ω₂/ω₁`, with the basis swapped when that ratio falls in the lower half
/// plane.
pub fn modulus(lattice: &Lattice) -> Modulus {
    let tau = lattice.w2 / lattice.w1;
    let tau = if tau.im > 0.0 { tau } else { lattice.w1 / lattice.w2 };
    Modulus { tau }
}

/// A reduced modulus together with the matrix that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub modulus: Modulus,
    /// Determinant +1 matrix with `reduced = matrix · τ`.
    pub matrix: UnimodularMatrix,
}

/// Moves `τ` into the fundamental domain
/// `{−½ ≤ Re τ < ½, |τ| ≥ 1}` with points on the unit circle taken in the
/// closed left half.
pub fn reduce(tau: Modulus) -> Reduction {
    let mut z = tau.tau;
    let mut m = UnimodularMatrix::identity();
    for _ in 0..MAX_REDUCTION_STEPS {
        let shift = (z.re + 0.5).floor();
        if shift != 0.0 {
            z.re -= shift;
            let n = BigInt::from_f64(-shift).expect("finite shift");
            m = &UnimodularMatrix::translation(n) * &m;
        }
        if z.norm_sqr() < 1.0 - BOUNDARY_EPS {
            z = -z.inv();
            m = &UnimodularMatrix::inversion() * &m;
        } else {
            break;
        }
    }
    if (z.norm_sqr() - 1.0).abs() <= BOUNDARY_EPS && z.re > BOUNDARY_EPS {
        z = -z.inv();
        m = &UnimodularMatrix::inversion() * &m;
    }
    if z.re >= 0.5 - BOUNDARY_EPS {
        z.re -= 1.0;
        m = &UnimodularMatrix::translation(-1) * &m;
    }
    Reduction { modulus: Modulus { tau: z }, matrix: m }
}

/// Which orbit matched in [`isomorphic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `τ₂ = (aτ₁ + b)/(cτ₁ + d)` with determinant +1.
    Preserving,
    /// `τ₂ = (a·τ̄₁ + b)/(c·τ̄₁ + d)` with determinant −1: the mirror lattice.
    Reversing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isomorphism {
    pub matrix: UnimodularMatrix,
    pub orientation: Orientation,
}

fn boundary_images(z: Complex64) -> [(Complex64, UnimodularMatrix); 4] {
    [
        (z, UnimodularMatrix::identity()),
        (z + 1.0, UnimodularMatrix::translation(1)),
        (z - 1.0, UnimodularMatrix::translation(-1)),
        (-z.inv(), UnimodularMatrix::inversion()),
    ]
}

fn preserving_witness(t1: Modulus, t2: Modulus, tol: f64) -> Option<UnimodularMatrix> {
    let r1 = reduce(t1);
    let r2 = reduce(t2);
    let target = r2.modulus.tau;
    boundary_images(r1.modulus.tau)
        .into_iter()
        .find(|(z, _)| (z - target).norm() <= tol * (1.0 + target.norm()))
        .map(|(_, step)| &(&r2.matrix.inverse() * &step) * &r1.matrix)
}

/// Decides whether two moduli define isomorphic tori.
///
/// The determinant +1 orbit is tried first; failing that, the orbit of the
/// mirror image `−τ̄₁` realizes the determinant −1 case of the modular
/// relation.
pub fn isomorphic(t1: Modulus, t2: Modulus, tol: f64) -> Option<Isomorphism> {
    if let Some(matrix) = preserving_witness(t1, t2, tol) {
        return Some(Isomorphism { matrix, orientation: Orientation::Preserving });
    }
    let mirror = Modulus { tau: -t1.tau.conj() };
    preserving_witness(mirror, t2, tol).map(|w| {
        let flip = UnimodularMatrix::from_i64(-1, 0, 0, 1).expect("unimodular");
        Isomorphism { matrix: &w * &flip, orientation: Orientation::Reversing }
    })
}

/// The basis `(aω₁ + bω₂, cω₁ + dω₂)`, which spans the same lattice.
pub fn apply_automorphism(lattice: &Lattice, m: &UnimodularMatrix) -> Result<Lattice> {
    let [a, b, c, d] = m.to_f64();
    Lattice::new(lattice.w1 * a + lattice.w2 * b, lattice.w1 * c + lattice.w2 * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn m(re: f64, im: f64) -> Modulus {
        Modulus::from_parts(re, im).unwrap()
    }

    #[test]
    fn modulus_examples() {
        let sq = Lattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(modulus(&sq).tau(), c(0.0, 1.0));
        let l = Lattice::new(c(2.0, 0.0), c(2.0, 2.0)).unwrap();
        assert_eq!(modulus(&l).tau(), c(1.0, 1.0));
        let flipped = Lattice::new(c(1.0, 0.0), c(0.0, -1.0)).unwrap();
        assert_eq!(modulus(&flipped).tau(), c(0.0, 1.0));
        assert_eq!(Lattice::new(c(1.0, 0.0), c(2.0, 0.0)), Err(Error::CollinearBasis));
        assert_eq!(Lattice::new(c(1.0, 1.0), c(-3.0, -3.0)), Err(Error::CollinearBasis));
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(m(5.0, 1.0));
        assert_eq!(r.modulus.tau(), c(0.0, 1.0));
        assert_eq!(r.matrix, UnimodularMatrix::from_i64(1, -5, 0, 1).unwrap());
        let r = reduce(m(0.0, 0.5));
        assert!((r.modulus.tau() - c(0.0, 2.0)).norm() < 1e-15);
        let tau = m(2.3, 0.1);
        let r = reduce(tau);
        let z = r.modulus.tau();
        assert!(z.norm() >= 1.0 - 1e-12 && z.re >= -0.5 && z.re < 0.5);
        let back = r.matrix.apply_complex(tau.tau()).unwrap();
        assert!((back - z).norm() < 1e-12 * z.norm());
        assert_eq!(r.matrix.det(), 1);
    }

    #[test]
    fn reduce_boundary_convention() {
        let rho = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let r = reduce(Modulus::new(rho).unwrap());
        assert!((r.modulus.tau().re + 0.5).abs() < 1e-12);
        let r = reduce(m(0.5, 2.0));
        assert!((r.modulus.tau() - c(-0.5, 2.0)).norm() < 1e-15);
        let arc = Complex64::from_polar(1.0, 1.3);
        let r = reduce(Modulus::new(arc).unwrap());
        assert!(r.modulus.tau().re <= 0.0);
    }

    #[test]
    fn isomorphic_examples() {
        let iso = isomorphic(m(0.0, 1.0), m(5.0, 1.0), DEFAULT_MODULUS_TOL).unwrap();
        assert_eq!(iso.orientation, Orientation::Preserving);
        assert!((iso.matrix.apply_complex(c(0.0, 1.0)).unwrap() - c(5.0, 1.0)).norm() < 1e-12);
        assert_eq!(isomorphic(m(0.0, 1.0), m(0.0, 2.0), DEFAULT_MODULUS_TOL), None);
        let t = m(0.31, 1.7);
        assert_eq!(isomorphic(t, t, DEFAULT_MODULUS_TOL).unwrap().matrix, UnimodularMatrix::identity());
    }

    #[test]
    fn mirror_branch() {
        let t = m(0.3, 1.2);
        let iso = isomorphic(t, m(-0.3, 1.2), DEFAULT_MODULUS_TOL).unwrap();
        assert_eq!(iso.orientation, Orientation::Reversing);
        assert_eq!(iso.matrix.det(), -1);
        let image = iso.matrix.apply_complex(t.tau().conj()).unwrap();
        assert!((image - c(-0.3, 1.2)).norm() < 1e-12);
    }

    #[test]
    fn automorphism_examples() {
        let sq = Lattice::square();
        assert_eq!(apply_automorphism(&sq, &UnimodularMatrix::identity()).unwrap(), sq);
        let t = apply_automorphism(&sq, &UnimodularMatrix::from_i64(1, 1, 0, 1).unwrap()).unwrap();
        assert_eq!((t.w1(), t.w2()), (c(1.0, 1.0), c(0.0, 1.0)));
        let l = Lattice::new(c(1.0, 0.0), c(0.2, 1.3)).unwrap();
        let s = apply_automorphism(&l, &UnimodularMatrix::from_i64(0, 1, 1, 0).unwrap()).unwrap();
        assert_eq!((s.w1(), s.w2()), (l.w2(), l.w1()));
        for mm in -4..=4 {
            for nn in -4..=4 {
                assert!(sq.contains(t.point(mm, nn), 1e-12));
            }
        }
    }

    #[test]
    fn systole_via_gauss_reduction() {
        assert!((Lattice::square().systole() - 1.0).abs() < 1e-15);
        assert!((Lattice::hexagonal().systole() - 1.0).abs() < 1e-15);
        let l = Lattice::new(c(2.0, 0.0), c(0.0, 2.0)).unwrap();
        assert!((l.systole() - 2.0).abs() < 1e-15);
        let skew = Lattice::new(c(1.0, 0.0), c(100.0, 0.01)).unwrap();
        assert!((skew.systole() - 0.01).abs() < 1e-9);
    }
}

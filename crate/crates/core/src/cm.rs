//! Endomorphism rings of lattices `Z + τZ` and complex multiplication.
//!
//! `End(L) = {α : αL ⊂ L}` is `Z` unless `τ` is an imaginary quadratic
//! irrationality, in which case it is the order `Z[Aτ]` of discriminant
//! `B² − 4AC` for the primitive relation `Aτ² + Bτ + C = 0`.

use crate::contfrac::{QuadElement, QuadraticIrrational};
use crate::error::{Error, Result};
use crate::int_serde;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A modulus given exactly, or declared to satisfy no quadratic relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactModulus {
    Quadratic(QuadraticIrrational),
    Generic(Complex64),
}

impl ExactModulus {
    /// An imaginary quadratic modulus with positive imaginary part.
    pub fn quadratic(tau: QuadraticIrrational) -> Result<Self> {
        if tau.is_real() {
            return Err(Error::RealQuadraticModulus);
        }
        if !tau.q().is_positive() {
            return Err(Error::InvalidArgument("modulus must lie in the upper half plane".into()));
        }
        Ok(Self::Quadratic(tau))
    }

    pub fn generic(tau: Complex64) -> Result<Self> {
        if !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::NonFinite("tau"));
        }
        if tau.im <= 0.0 {
            return Err(Error::InvalidArgument("modulus must lie in the upper half plane".into()));
        }
        Ok(Self::Generic(tau))
    }

    /// `i`.
    pub fn gaussian() -> Self {
        Self::Quadratic(QuadraticIrrational::sqrt(-1).expect("valid surd"))
    }

    /// `(1 + √−3)/2`.
    pub fn eisenstein() -> Self {
        Self::Quadratic(QuadraticIrrational::new(1, 1, 2, -3).expect("valid surd"))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Self::Quadratic(t) => t.to_complex(),
            Self::Generic(t) => *t,
        }
    }
}

/// The order `Z[Aτ]` of an imaginary quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticOrder {
    #[serde(with = "int_serde")]
    pub discriminant: BigInt,
    #[serde(with = "int_serde")]
    pub fundamental_discriminant: BigInt,
    #[serde(with = "int_serde")]
    pub conductor: BigInt,
    /// Primitive `(A, B, C)` with `Aτ² + Bτ + C = 0`, `A > 0`.
    pub polynomial: [int_serde::JsonInt; 3],
    /// `Aτ`.
    pub generator: QuadElement,
}

impl QuadraticOrder {
    /// Squarefree `d` with the order inside `Q(√d)`.
    pub fn field(&self) -> i64 {
        self.generator.d()
    }

    /// `(D + √D)/2`, so that the order is `Z + wZ`.
    pub fn standard_generator(&self) -> QuadElement {
        let d = &self.discriminant;
        QuadElement::with_big_radicand(d.clone(), BigInt::one(), BigInt::from(2), d)
            .expect("negative discriminant is not a square")
    }

    /// The modulus `(D + √D)/2` of the order viewed as a lattice.
    pub fn modulus(&self) -> ExactModulus {
        let w = QuadraticIrrational::try_from(self.standard_generator()).expect("irrational");
        ExactModulus::Quadratic(w)
    }

    /// Units of the order: sixth roots for `D = −3`, fourth roots for
    /// `D = −4`, otherwise `±1`.
    pub fn units(&self) -> Vec<QuadElement> {
        let d = self.field();
        let one = QuadElement::integer(1, d).expect("valid field");
        let gen = if self.discriminant == BigInt::from(-3) {
            QuadElement::new(1, 1, 2, -3).expect("valid")
        } else if self.discriminant == BigInt::from(-4) {
            QuadElement::new(0, 1, 1, -1).expect("valid")
        } else {
            QuadElement::integer(-1, d).expect("valid field")
        };
        let mut out = vec![one.clone()];
        let mut acc = gen.clone();
        while acc != one {
            out.push(acc.clone());
            acc = acc.mul(&gen).expect("same field");
        }
        out
    }
}

/// `End(L)` for `L = Z + τZ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EndomorphismRing {
    /// Only the rational integers act.
    Integers,
    Order(QuadraticOrder),
}

fn fundamental_discriminant(d: i64) -> BigInt {
    if d.rem_euclid(4) == 1 {
        BigInt::from(d)
    } else {
        BigInt::from(d) * 4
    }
}

pub fn endomorphism_ring(tau: &ExactModulus) -> Result<EndomorphismRing> {
    let t = match tau {
        ExactModulus::Generic(_) => return Ok(EndomorphismRing::Integers),
        ExactModulus::Quadratic(t) => t,
    };
    if t.is_real() {
        return Err(Error::RealQuadraticModulus);
    }
    let (p, q, r, d) = (t.p(), t.q(), t.r(), t.d());
    // (rτ − p)² = q²d
    let mut a = r * r;
    let mut b = -(p * r) * 2;
    let mut c = p * p - q * q * d;
    let g = a.gcd(&b).gcd(&c);
    a /= &g;
    b /= &g;
    c /= &g;
    let disc = &b * &b - (&a * &c) * 4;
    let fund = fundamental_discriminant(d);
    let ratio: BigInt = &disc / &fund;
    let conductor = Roots::sqrt(&ratio);
    debug_assert!(&conductor * &conductor * &fund == disc);
    let generator = t.element().mul_int(&a);
    Ok(EndomorphismRing::Order(QuadraticOrder {
        discriminant: disc,
        fundamental_discriminant: fund,
        conductor,
        polynomial: [int_serde::JsonInt(a), int_serde::JsonInt(b), int_serde::JsonInt(c)],
        generator,
    }))
}

/// Coordinates `(u, v)` with `x = u + vτ`, both in the field of `τ`.
fn coordinates(x: &QuadElement, tau: &QuadElement) -> (BigRational, BigRational) {
    let v = x.irrational_part() / tau.irrational_part();
    let u = x.rational_part() - &v * tau.rational_part();
    (u, v)
}

/// Whether `αL ⊂ L` for `L = Z + τZ`, decided exactly.
pub fn is_endomorphism(alpha: &QuadElement, tau: &ExactModulus) -> Result<bool> {
    match tau {
        ExactModulus::Generic(_) => {
            Ok(alpha.is_rational() && alpha.rational_part().is_integer())
        }
        ExactModulus::Quadratic(t) => {
            let t = t.element();
            if !alpha.is_rational() && alpha.d() != t.d() {
                return Err(Error::FieldMismatch(alpha.d(), t.d()));
            }
            let alpha = if alpha.is_rational() {
                QuadElement::new(alpha.p().clone(), 0, alpha.r().clone(), t.d())?
            } else {
                alpha.clone()
            };
            let image = alpha.mul(t)?;
            Ok([&alpha, &image].iter().all(|x| {
                let (u, v) = coordinates(x, t);
                u.is_integer() && v.is_integer()
            }))
        }
    }
}

/// Floating relaxation of [`is_endomorphism`]: `α` and `ατ` lie within
/// `tol` (in lattice coordinates) of `Z + τZ`.
pub fn is_endomorphism_approx(alpha: Complex64, tau: Complex64, tol: f64) -> bool {
    let near = |x: Complex64| {
        let v = x.im / tau.im;
        let u = x.re - v * tau.re;
        (u - u.round()).abs() <= tol && (v - v.round()).abs() <= tol
    };
    near(alpha) && near(alpha * tau)
}

/// A non-rational element of an order, listed by [`multiplier_candidates`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplier {
    pub alpha: QuadElement,
    #[serde(with = "int_serde")]
    pub norm: BigInt,
}

/// Sort key `(re, im)` for elements of an imaginary quadratic field.
fn position(x: &QuadElement) -> (BigRational, BigRational) {
    (x.rational_part(), x.irrational_part())
}

/// Elements `α` of the order with `1 < |α|² ≤ norm_bound`, one per class
/// under units and complex conjugation.
///
/// Classes containing a rational integer are skipped. Each class is
/// represented by its lexicographically least member `(Re α, Im α)` with
/// `Re α ≥ 0` and `Im α > 0`. The list is sorted by norm, then position.
pub fn multiplier_candidates(order: &QuadraticOrder, norm_bound: i64) -> Vec<Multiplier> {
    if norm_bound < 2 {
        return Vec::new();
    }
    let disc = &order.discriminant;
    let abs_disc = disc.abs();
    let bound = BigInt::from(norm_bound);
    let units = order.units();
    let w = order.standard_generator();
    let mut out: Vec<Multiplier> = Vec::new();

    // N(x + yw) = (x + yD/2)² + y²|D|/4, so 4N = (2x + yD)² + y²|D|.
    let y_max: BigInt = Roots::sqrt(&((&bound * 4) / &abs_disc));
    let mut y = -y_max.clone();
    while y <= y_max {
        if !y.is_zero() {
            let slack: BigInt = &bound * 4 - &y * &y * &abs_disc;
            if !slack.is_negative() {
                let s: BigInt = Roots::sqrt(&slack);
                // |2x + yD| ≤ s
                let yd = &y * disc;
                let lo = (-&s - &yd).div_ceil(&BigInt::from(2));
                let hi = (&s - &yd).div_floor(&BigInt::from(2));
                let mut x = lo;
                while x <= hi {
                    let alpha = w.mul_int(&y).add_int(&x);
                    let norm = alpha.norm().to_integer();
                    if norm > BigInt::one() && norm <= bound {
                        if let Some(rep) = representative(&alpha, &units) {
                            if !out.iter().any(|m| m.alpha == rep) {
                                out.push(Multiplier { alpha: rep, norm });
                            }
                        }
                    }
                    x += 1;
                }
            }
        }
        y += 1;
    }
    out.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| position(&a.alpha).cmp(&position(&b.alpha))));
    out
}

/// Canonical member of the class of `alpha`, or `None` when the class
/// contains a rational integer.
fn representative(alpha: &QuadElement, units: &[QuadElement]) -> Option<QuadElement> {
    let mut best: Option<QuadElement> = None;
    for base in [alpha.clone(), alpha.conjugate()] {
        for u in units {
            let x = base.mul(u).expect("same field");
            if x.is_rational() {
                return None;
            }
            let (re, im) = position(&x);
            if re.is_negative() || !im.is_positive() {
                continue;
            }
            if best.as_ref().is_none_or(|b| position(&x) < position(b)) {
                best = Some(x);
            }
        }
    }
    best
}

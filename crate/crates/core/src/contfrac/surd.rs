//! Exact arithmetic in quadratic fields `Q(√d)`.

use super::matrix::{big_to_f64, UnimodularMatrix};
use crate::error::{Error, Result};
use crate::int_serde;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// An element `(p + q·√d)/r` of the quadratic field `Q(√d)`.
///
/// Normalized on construction: `r > 0`, `gcd(p, q, r) = 1` and `d` squarefree,
/// with any square factor of the radicand folded into `q`. `q = 0` is allowed,
/// in which case the element is rational and `d` only labels the field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct QuadElement {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: i64,
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    #[serde(with = "int_serde")]
    p: BigInt,
    #[serde(with = "int_serde")]
    q: BigInt,
    #[serde(with = "int_serde")]
    r: BigInt,
    d: i64,
}

impl TryFrom<RawElement> for QuadElement {
    type Error = Error;
    fn try_from(raw: RawElement) -> Result<Self> {
        QuadElement::new(raw.p, raw.q, raw.r, raw.d)
    }
}

impl From<QuadElement> for RawElement {
    fn from(x: QuadElement) -> Self {
        RawElement {
            p: x.p,
            q: x.q,
            r: x.r,
            d: x.d,
        }
    }
}

impl QuadElement {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, r: impl Into<BigInt>, d: i64) -> Result<Self> {
        let (p, mut q, r) = (p.into(), q.into(), r.into());
        if r.is_zero() {
            return Err(Error::InvalidArgument("denominator r must be nonzero".into()));
        }
        if d == 0 || d == 1 {
            return Err(Error::InvalidArgument(format!("radicand d = {d} does not define a quadratic field")));
        }
        let (square_root, core) = squarefree_split(&BigInt::from(d))?;
        if core.is_one() {
            return Err(Error::PerfectSquare(d));
        }
        q *= square_root;
        let core = core.to_i64().ok_or(Error::Overflow("radicand"))?;
        Ok(Self::normalized(p, q, r, core))
    }

    /// Builds an element whose radicand may be a big integer.
    pub fn with_big_radicand(p: BigInt, q: BigInt, r: BigInt, radicand: &BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::InvalidArgument("denominator r must be nonzero".into()));
        }
        let (square_root, core) = squarefree_split(radicand)?;
        if core.is_one() || core.is_zero() {
            return Err(Error::PerfectSquare(radicand.to_i64().unwrap_or(i64::MAX)));
        }
        let core = core.to_i64().ok_or(Error::Overflow("radicand"))?;
        Ok(Self::normalized(p, q * square_root, r, core))
    }

    /// A rational integer viewed as an element of `Q(√d)`.
    pub fn integer(n: impl Into<BigInt>, d: i64) -> Result<Self> {
        Self::new(n, 0, 1, d)
    }

    fn normalized(mut p: BigInt, mut q: BigInt, mut r: BigInt, d: i64) -> Self {
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Self { p, q, r, d }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Rational part `p/r`.
    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.r.clone())
    }

    /// Coefficient of `√d`, namely `q/r`.
    pub fn irrational_part(&self) -> BigRational {
        BigRational::new(self.q.clone(), self.r.clone())
    }

    pub fn conjugate(&self) -> Self {
        Self::normalized(self.p.clone(), -&self.q, self.r.clone(), self.d)
    }

    /// Field norm `x·x̄ = (p² − q²d)/r²`.
    pub fn norm(&self) -> BigRational {
        let num = &self.p * &self.p - &self.q * &self.q * BigInt::from(self.d);
        BigRational::new(num, &self.r * &self.r)
    }

    /// Trace `x + x̄ = 2p/r`.
    pub fn trace(&self) -> BigRational {
        BigRational::new(BigInt::from(2) * &self.p, self.r.clone())
    }

    fn field_of(&self, other: &Self) -> Result<i64> {
        if self.d == other.d {
            Ok(self.d)
        } else if self.is_rational() {
            Ok(other.d)
        } else if other.is_rational() {
            Ok(self.d)
        } else {
            Err(Error::FieldMismatch(self.d, other.d))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.field_of(other)?;
        Ok(Self::normalized(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.r * &other.r,
            d,
        ))
    }

    pub fn neg(&self) -> Self {
        Self::normalized(-&self.p, -&self.q, self.r.clone(), self.d)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.field_of(other)?;
        let bd = BigInt::from(d);
        Ok(Self::normalized(
            &self.p * &other.p + &self.q * &other.q * &bd,
            &self.p * &other.q + &other.p * &self.q,
            &self.r * &other.r,
            d,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let d = self.field_of(other)?;
        let bd = BigInt::from(d);
        // x/y = x·ȳ·r_y / (p_y² − q_y² d)
        let n = &other.p * &other.p - &other.q * &other.q * &bd;
        if n.is_zero() {
            return Err(Error::DegenerateDenominator);
        }
        let num_p = &self.p * &other.p - &self.q * &other.q * &bd;
        let num_q = &self.q * &other.p - &self.p * &other.q;
        Ok(Self::normalized(
            num_p * &other.r,
            num_q * &other.r,
            &self.r * n,
            d,
        ))
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::normalized(&self.p * k, &self.q * k, self.r.clone(), self.d)
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        Self::normalized(&self.p + k * &self.r, self.q.clone(), self.r.clone(), self.d)
    }

    /// Numeric value for real fields (`d > 0`).
    pub fn to_f64(&self) -> f64 {
        debug_assert!(self.d > 0 || self.is_rational());
        let p = big_to_f64(&self.p);
        let r = big_to_f64(&self.r);
        if self.q.is_zero() {
            return p / r;
        }
        let qs = big_to_f64(&self.q) * (self.d.abs() as f64).sqrt();
        if self.p.is_zero() || self.p.sign() == self.q.sign() {
            (p + qs) / r
        } else {
            // Opposite signs cancel; use the conjugate form instead.
            let n = &self.p * &self.p - &self.q * &self.q * BigInt::from(self.d);
            big_to_f64(&n) / (r * (p - qs))
        }
    }

    /// Numeric value as a complex number (imaginary for `d < 0`).
    pub fn to_complex(&self) -> Complex64 {
        if self.d > 0 || self.is_rational() {
            return Complex64::new(self.to_f64(), 0.0);
        }
        let r = big_to_f64(&self.r);
        Complex64::new(
            big_to_f64(&self.p) / r,
            big_to_f64(&self.q) * ((-self.d) as f64).sqrt() / r,
        )
    }

    /// Exact floor of a real element.
    pub fn floor(&self) -> Result<BigInt> {
        if self.d < 0 && !self.is_rational() {
            return Err(Error::InvalidArgument("floor of a non-real number".into()));
        }
        if self.q.is_zero() {
            return Ok(self.p.div_floor(&self.r));
        }
        // floor((p + x)/r) = floor((p + floor x)/r) for integer p and r > 0.
        let s = &self.q * &self.q * BigInt::from(self.d);
        let root = s.sqrt();
        let floor_qs = if self.q.is_positive() {
            root
        } else {
            -root - 1
        };
        Ok((&self.p + floor_qs).div_floor(&self.r))
    }

    /// Exact sign of a real element.
    pub fn signum(&self) -> Ordering {
        // sign of p + q√d
        let ps = self.p.sign();
        let qs = self.q.sign();
        use num_bigint::Sign::*;
        match (ps, qs) {
            (NoSign, NoSign) => Ordering::Equal,
            (_, NoSign) => to_ord(ps),
            (NoSign, _) => to_ord(qs),
            _ if ps == qs => to_ord(ps),
            _ => {
                // |p| vs |q|√d
                let lhs = &self.p * &self.p;
                let rhs = &self.q * &self.q * BigInt::from(self.d);
                match lhs.cmp(&rhs) {
                    Ordering::Greater => to_ord(ps),
                    _ => to_ord(qs),
                }
            }
        }
    }
}

fn to_ord(s: num_bigint::Sign) -> Ordering {
    match s {
        num_bigint::Sign::Minus => Ordering::Less,
        num_bigint::Sign::NoSign => Ordering::Equal,
        num_bigint::Sign::Plus => Ordering::Greater,
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            };
        }
        let sign = if self.q.is_negative() { '-' } else { '+' };
        let body = format!("{} {} {}·√{}", self.p, sign, self.q.abs(), self.d);
        if self.r.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.r)
        }
    }
}

/// A quadratic irrational `(p + q·√d)/r` with `q ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadElement", into = "QuadElement")]
pub struct QuadraticIrrational(QuadElement);

impl TryFrom<QuadElement> for QuadraticIrrational {
    type Error = Error;
    fn try_from(x: QuadElement) -> Result<Self> {
        if x.is_rational() {
            Err(Error::NotIrrational)
        } else {
            Ok(Self(x))
        }
    }
}

impl From<QuadraticIrrational> for QuadElement {
    fn from(x: QuadraticIrrational) -> Self {
        x.0
    }
}

impl QuadraticIrrational {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, r: impl Into<BigInt>, d: i64) -> Result<Self> {
        QuadElement::new(p, q, r, d)?.try_into()
    }

    /// `√d`.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::new(0, 1, 1, d)
    }

    /// `(1 + √5)/2`.
    pub fn golden() -> Self {
        Self::new(1, 1, 2, 5).expect("valid surd")
    }

    pub fn element(&self) -> &QuadElement {
        &self.0
    }

    pub fn p(&self) -> &BigInt {
        &self.0.p
    }
    pub fn q(&self) -> &BigInt {
        &self.0.q
    }
    pub fn r(&self) -> &BigInt {
        &self.0.r
    }
    pub fn d(&self) -> i64 {
        self.0.d
    }

    pub fn is_real(&self) -> bool {
        self.0.d > 0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.0.to_complex()
    }

    pub fn floor(&self) -> Result<BigInt> {
        self.0.floor()
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `(a·x + b)/(c·x + d)` computed exactly.
pub fn mobius_apply(m: &UnimodularMatrix, x: &QuadraticIrrational) -> Result<QuadraticIrrational> {
    let e = x.element();
    let num = e.mul_int(m.a()).add_int(m.b());
    let den = e.mul_int(m.c()).add_int(m.d());
    if den.p.is_zero() && den.q.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    num.div(&den)?.try_into()
}

const TRIAL_BOUND: u64 = 1 << 16;

/// Splits `n ≠ 0` as `s²·core` with `core` squarefree (sign kept in `core`).
///
/// Trial division removes every prime below 2¹⁶; a leftover cofactor is then
/// squarefree unless it is a perfect square or exceeds 2⁴⁸, in which case the
/// split is not attempted.
pub(crate) fn squarefree_split(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("zero radicand".into()));
    }
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut root = BigInt::one();
    let mut core = BigInt::one();
    let mut p = 2u64;
    while p < TRIAL_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            root *= bp.pow(e / 2);
            if e % 2 == 1 {
                core *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let s = m.sqrt();
        if &s * &s == m {
            root *= s;
        } else {
            let bound = BigInt::from(TRIAL_BOUND).pow(3);
            if m >= bound && (BigInt::from(p) * BigInt::from(p)) <= m {
                return Err(Error::Overflow("radicand too large to test for squarefreeness"));
            }
            core *= m;
        }
    }
    Ok((root, core * sign))
}

use crate::error::{Error, Result};
use crate::int_serde::JsonInt;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::Mul;

/// A 2×2 integer matrix `[[a, b], [c, d]]` with determinant ±1.
///
/// Entries are arbitrary precision: products of partial-quotient factors grow
/// exponentially and overflow machine words after a few dozen steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl UnimodularMatrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// `[[q, 1], [1, 0]]`, the factor contributed by one partial quotient.
    pub fn quotient_factor(q: impl Into<BigInt>) -> Self {
        Self {
            a: q.into(),
            b: BigInt::one(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    /// `τ ↦ τ + n`.
    pub fn translation(n: impl Into<BigInt>) -> Self {
        Self {
            a: BigInt::one(),
            b: n.into(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// `τ ↦ −1/τ`.
    pub fn inversion() -> Self {
        Self {
            a: BigInt::zero(),
            b: -BigInt::one(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Determinant, always +1 or −1.
    pub fn det(&self) -> i32 {
        if &self.a * &self.d - &self.b * &self.c == BigInt::one() {
            1
        } else {
            -1
        }
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        // det = ±1, so the adjugate divided by det stays integral.
        let s = BigInt::from(self.det());
        Self {
            a: &self.d * &s,
            b: -&self.b * &s,
            c: -&self.c * &s,
            d: &self.a * &s,
        }
    }

    /// First column `(a, c)`.
    pub fn first_column(&self) -> (BigInt, BigInt) {
        (self.a.clone(), self.c.clone())
    }

    /// Entries as `f64`, `[a, b, c, d]`.
    pub fn to_f64(&self) -> [f64; 4] {
        [
            big_to_f64(&self.a),
            big_to_f64(&self.b),
            big_to_f64(&self.c),
            big_to_f64(&self.d),
        ]
    }

    /// Entries as `i64` when they all fit.
    pub fn to_i64(&self) -> Option<[i64; 4]> {
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    /// Fractional-linear action `(aτ + b)/(cτ + d)` on a complex number.
    pub fn apply_complex(&self, z: Complex64) -> Result<Complex64> {
        let [a, b, c, d] = self.to_f64();
        let den = z * c + d;
        if den.norm() == 0.0 {
            return Err(Error::DegenerateDenominator);
        }
        Ok((z * a + b) / den)
    }

    /// Fractional-linear action on a real number.
    pub fn apply_real(&self, x: f64) -> Result<f64> {
        let [a, b, c, d] = self.to_f64();
        let den = c * x + d;
        if den == 0.0 {
            return Err(Error::DegenerateDenominator);
        }
        Ok((a * x + b) / den)
    }
}

pub(crate) fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(if v.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl Mul for &UnimodularMatrix {
    type Output = UnimodularMatrix;

    fn mul(self, rhs: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for UnimodularMatrix {
    type Output = UnimodularMatrix;

    fn mul(self, rhs: UnimodularMatrix) -> UnimodularMatrix {
        &self * &rhs
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for UnimodularMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [
            [JsonInt(self.a.clone()), JsonInt(self.b.clone())],
            [JsonInt(self.c.clone()), JsonInt(self.d.clone())],
        ];
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnimodularMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [[a, b], [c, d]] = <[[JsonInt; 2]; 2]>::deserialize(deserializer)?;
        UnimodularMatrix::new(a.0, b.0, c.0, d.0).map_err(serde::de::Error::custom)
    }
}

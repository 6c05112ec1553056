//! Noncommutative tori `T_θ` up to Morita equivalence.
//!
//! A torus is carried by its rotation number `θ`, either as an exact real
//! quadratic irrational or as a double, together with its continued fraction.
//! Morita equivalence is decided on continued-fraction tails.

use crate::contfrac::{
    an_matrices, expand_real, expand_surd, mobius_apply, tail_equivalent_with, ContinuedFraction,
    HeuristicConfig, MatchMode, QuadraticIrrational, UnimodularMatrix, DEFAULT_REAL_EPS,
    REAL_QUOTIENT_CAP,
};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theta {
    Exact(QuadraticIrrational),
    Approx(f64),
}

impl Theta {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(x) => x.to_f64(),
            Self::Approx(x) => *x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NcTorus {
    theta: Theta,
    cf: ContinuedFraction,
}

impl NcTorus {
    /// Torus of an exact real quadratic irrational.
    pub fn exact(theta: QuadraticIrrational) -> Result<Self> {
        if !theta.is_real() {
            return Err(Error::InvalidArgument("rotation number must be real".into()));
        }
        let cf = expand_surd(&theta)?;
        Ok(Self { theta: Theta::Exact(theta), cf })
    }

    /// Torus of a floating rotation number, expanded to `depth` quotients.
    /// Fails when the expansion terminates early, i.e. `θ` looks rational.
    pub fn approx(theta: f64, depth: usize) -> Result<Self> {
        let depth = depth.min(REAL_QUOTIENT_CAP);
        let cf = expand_real(theta, depth, DEFAULT_REAL_EPS)?;
        if cf.len().is_some_and(|l| l < depth) {
            return Err(Error::NotIrrational);
        }
        Ok(Self { theta: Theta::Approx(theta), cf })
    }

    /// Torus with the given expansion; exact when the expansion is periodic.
    pub fn from_cf(cf: ContinuedFraction) -> Result<Self> {
        if cf.is_periodic() {
            let theta = cf.to_surd()?;
            return Ok(Self { theta: Theta::Exact(theta), cf });
        }
        if cf.len().unwrap_or(0) < 2 {
            return Err(Error::NotIrrational);
        }
        let value = cf.value_f64(cf.len().unwrap_or(0));
        Ok(Self { theta: Theta::Approx(value), cf })
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn theta_f64(&self) -> f64 {
        self.theta.to_f64()
    }

    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.theta, Theta::Exact(_))
    }

    /// The torus of `(aθ + b)/(cθ + d)`.
    pub fn transform(&self, m: &UnimodularMatrix) -> Result<Self> {
        match &self.theta {
            Theta::Exact(x) => Self::exact(mobius_apply(m, x)?),
            Theta::Approx(x) => {
                let depth = self.cf.len().unwrap_or(REAL_QUOTIENT_CAP);
                Self::approx(m.apply_real(*x)?, depth)
            }
        }
    }
}

/// Positive multiple `ω` of the normalized trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateScale {
    omega: f64,
}

impl StateScale {
    pub fn new(omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::NonFinite("omega"));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidArgument("state scale must be positive".into()));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Evidence that `θ' = (aθ + b)/(cθ + d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoritaWitness {
    /// `k` with `a_{m+k} = b_m` for large `m`.
    pub shift: i64,
    pub matrix: UnimodularMatrix,
    pub mode: MatchMode,
}

/// Product of the factors `[[a_i, 1], [1, 0]]` for `i < k`, so that
/// `θ = M·x_k` with `x_k` the `k`-th complete quotient.
fn head_matrix(cf: &ContinuedFraction, k: usize) -> UnimodularMatrix {
    cf.prefix(k)
        .into_iter()
        .fold(UnimodularMatrix::identity(), |acc, a| &acc * &UnimodularMatrix::quotient_factor(a))
}

/// Morita equivalence with the default heuristic limits.
pub fn morita_equivalent(t1: &NcTorus, t2: &NcTorus) -> Option<MoritaWitness> {
    morita_equivalent_with(t1, t2, HeuristicConfig::default())
}

/// Decides whether the expansions of `t1` and `t2` share a tail and, if so,
/// returns a matrix carrying `θ₁` to `θ₂`.
///
/// With `x_{m+k} = y_m` the matrix is `B_m · A_{m+k}⁻¹`, where `A_j`, `B_j`
/// are the head matrices of the two expansions. Verdicts involving a floating
/// `θ` are heuristic.
pub fn morita_equivalent_with(t1: &NcTorus, t2: &NcTorus, cfg: HeuristicConfig) -> Option<MoritaWitness> {
    let hit = tail_equivalent_with(&t1.cf, &t2.cf, cfg)?;
    let m = hit.from;
    let j = usize::try_from(m as i64 + hit.shift).ok()?;
    let matrix = &head_matrix(&t2.cf, m) * &head_matrix(&t1.cf, j).inverse();
    let mode = if t1.is_exact() && t2.is_exact() { hit.mode } else { MatchMode::Heuristic };
    if let (Theta::Exact(a), Theta::Exact(b)) = (&t1.theta, &t2.theta) {
        if mobius_apply(&matrix, a).ok().as_ref() != Some(b) {
            return None;
        }
    }
    Some(MoritaWitness { shift: hit.shift, matrix, mode })
}

/// `φ_n = A_n`, the `n`-th connecting matrix of the dimension group.
pub fn dimension_group_step(t: &NcTorus, n: usize) -> Result<UnimodularMatrix> {
    let mut all = an_matrices(&t.cf, n)?;
    Ok(all.pop().expect("n + 1 matrices"))
}

/// Monotone weights `f_k` in the map `(T_θ, ω) ↦ {f_k(ω) ln tr A_k}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FFamily {
    /// `f_k(ω) = ω`.
    #[default]
    Identity,
    /// `f_k(ω) = ω ρᵏ` for a fixed `ρ > 0`.
    Geometric(f64),
}

impl FFamily {
    pub fn geometric(rho: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidArgument("geometric ratio must be positive".into()));
        }
        Ok(Self::Geometric(rho))
    }

    pub fn apply(&self, k: usize, omega: f64) -> f64 {
        match *self {
            Self::Identity => omega,
            Self::Geometric(rho) => omega * rho.powi(k as i32),
        }
    }
}

impl std::str::FromStr for FFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "default" || s == "identity" {
            return Ok(Self::Identity);
        }
        let rho = s
            .strip_prefix("geometric:")
            .and_then(|r| r.parse::<f64>().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown f family {s:?}")))?;
        Self::geometric(rho)
    }
}

/// Natural log of a positive big integer without overflowing `f64`.
pub(crate) fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `f_k(ω) ln tr A_k` for `k = 0 … n`.
pub fn v_map(t: &NcTorus, s: StateScale, n: usize, family: FFamily) -> Result<Vec<f64>> {
    an_matrices(&t.cf, n)?
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let tr = a.trace();
            if !tr.is_positive() {
                return Err(Error::InvalidArgument(format!("trace of A_{k} is not positive")));
            }
            Ok(family.apply(k, s.omega) * ln_big(&tr))
        })
        .collect()
}

/// `ω ↦ ω·|cθ + d|`.
pub fn scale_action(s: StateScale, m: &UnimodularMatrix, t: &NcTorus) -> Result<StateScale> {
    let [_, _, c, d] = m.to_f64();
    let factor = (c * t.theta_f64() + d).abs();
    if factor == 0.0 || !factor.is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    StateScale::new(s.omega * factor)
}

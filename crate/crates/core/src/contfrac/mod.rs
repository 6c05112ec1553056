//! Continued fractions: exact and floating expansion, convergents, the
//! partial-quotient matrix products, Klein's segment identity and the length
//! recurrences built on it.

mod matrix;
mod surd;

pub use matrix::UnimodularMatrix;
pub use surd::{mobius_apply, QuadElement, QuadraticIrrational};

use crate::error::{Error, Result};
use crate::int_serde;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Default rational-detection threshold for [`expand_real`].
pub const DEFAULT_REAL_EPS: f64 = 1e-10;

/// Hard cap on quotients drawn from a double; later ones are noise.
pub const REAL_QUOTIENT_CAP: usize = 20;

/// Guard band for rounding length ratios to quotients.
pub const ROUNDING_BAND: f64 = 0.25;

/// A simple continued fraction `[a0; a1, a2, ...]`.
///
/// Finite when `period` is empty, in which case `preperiod` holds the whole
/// tail. Otherwise the tail is `preperiod` followed by `period` repeated
/// forever. Every tail entry is at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCf", into = "RawCf")]
pub struct ContinuedFraction {
    a0: i64,
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawCf {
    a0: i64,
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl TryFrom<RawCf> for ContinuedFraction {
    type Error = Error;
    fn try_from(raw: RawCf) -> Result<Self> {
        if raw.period.is_empty() {
            ContinuedFraction::finite(raw.a0, raw.preperiod)
        } else {
            ContinuedFraction::periodic(raw.a0, raw.preperiod, raw.period)
        }
    }
}

impl From<ContinuedFraction> for RawCf {
    fn from(cf: ContinuedFraction) -> Self {
        RawCf {
            a0: cf.a0,
            preperiod: cf.preperiod,
            period: cf.period,
        }
    }
}

fn check_positive(terms: &[u64]) -> Result<()> {
    match terms.iter().position(|&t| t == 0) {
        Some(i) => Err(Error::InvalidArgument(format!("partial quotient at tail position {i} is zero"))),
        None => Ok(()),
    }
}

impl ContinuedFraction {
    pub fn finite(a0: i64, tail: Vec<u64>) -> Result<Self> {
        check_positive(&tail)?;
        Ok(Self {
            a0,
            preperiod: tail,
            period: Vec::new(),
        })
    }

    /// Eventually periodic fraction, normalized to the shortest period and
    /// the shortest preperiod.
    pub fn periodic(a0: i64, preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("period must be nonempty".into()));
        }
        check_positive(&preperiod)?;
        check_positive(&period)?;
        let mut cf = Self {
            a0,
            preperiod,
            period: shortest_period(period),
        };
        // Absorb preperiod entries that already follow the period pattern.
        while let Some(&last) = cf.preperiod.last() {
            if Some(&last) != cf.period.last() {
                break;
            }
            cf.preperiod.pop();
            cf.period.rotate_right(1);
        }
        Ok(cf)
    }

    pub fn a0(&self) -> i64 {
        self.a0
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of quotients including `a0`, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        if self.is_periodic() {
            None
        } else {
            Some(1 + self.preperiod.len())
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quotient `a_i` (`a_0` first).
    pub fn quotient(&self, i: usize) -> Option<i64> {
        if i == 0 {
            return Some(self.a0);
        }
        let j = i - 1;
        if j < self.preperiod.len() {
            return self.preperiod[j].to_i64();
        }
        if self.period.is_empty() {
            return None;
        }
        self.period[(j - self.preperiod.len()) % self.period.len()].to_i64()
    }

    /// The first `n` quotients `a_0 … a_{n−1}`.
    pub fn quotients(&self, n: usize) -> Result<Vec<i64>> {
        if let Some(len) = self.len() {
            if n > len {
                return Err(Error::InsufficientQuotients { needed: n, available: len });
            }
        }
        (0..n)
            .map(|i| self.quotient(i).ok_or(Error::Overflow("partial quotient")))
            .collect()
    }

    /// Up to `n` quotients, fewer when the fraction is shorter.
    pub fn prefix(&self, n: usize) -> Vec<i64> {
        let n = self.len().map_or(n, |len| len.min(n));
        (0..n).filter_map(|i| self.quotient(i)).collect()
    }

    /// Value of a finite fraction, or of the first `depth` quotients.
    pub fn value_f64(&self, depth: usize) -> f64 {
        let q = self.prefix(depth);
        let mut x = *q.last().unwrap_or(&self.a0) as f64;
        for &a in q.iter().rev().skip(1) {
            x = a as f64 + 1.0 / x;
        }
        x
    }

    /// Product of partial-quotient factors over `quotients`.
    fn product(quotients: impl IntoIterator<Item = i64>) -> UnimodularMatrix {
        quotients
            .into_iter()
            .fold(UnimodularMatrix::identity(), |acc, a| &acc * &UnimodularMatrix::quotient_factor(a))
    }

    /// Exact value of an eventually periodic fraction.
    ///
    /// The purely periodic part is the fixed point of its period matrix; the
    /// preperiod matrix then carries it back to the full value.
    pub fn to_surd(&self) -> Result<QuadraticIrrational> {
        self.to_surd_checked(None)
    }

    /// As [`Self::to_surd`], with the field `Q(√d)` known in advance; avoids
    /// factoring the discriminant of the period matrix.
    pub fn to_surd_in_field(&self, d: i64) -> Result<QuadraticIrrational> {
        self.to_surd_checked(Some(d))
    }

    fn to_surd_checked(&self, field: Option<i64>) -> Result<QuadraticIrrational> {
        if !self.is_periodic() {
            return Err(Error::InvalidArgument("finite continued fraction is rational".into()));
        }
        let m = Self::product(self.period.iter().map(|&a| a as i64));
        // Fixed point y > 1 of y = (Ay + B)/(Cy + D):  C y² + (D − A) y − B = 0.
        let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
        let disc = (a - d) * (a - d) + BigInt::from(4) * c * b;
        let lin = a - d;
        let den = BigInt::from(2) * c;
        let tail = match field {
            None => QuadElement::with_big_radicand(lin, BigInt::one(), den, &disc)?,
            Some(f) => {
                let fb = BigInt::from(f);
                if f <= 1 || !(&disc % &fb).is_zero() {
                    return Err(Error::InvalidArgument(format!("period does not lie in Q(√{f})")));
                }
                let sq = &disc / &fb;
                let root = num_integer::Roots::sqrt(&sq);
                if &root * &root != sq {
                    return Err(Error::InvalidArgument(format!("period does not lie in Q(√{f})")));
                }
                QuadElement::new(lin, root, den, f)?
            }
        };
        let tail = QuadraticIrrational::try_from(tail)?;
        let pre = Self::product(std::iter::once(self.a0).chain(self.preperiod.iter().map(|&a| a as i64)));
        mobius_apply(&pre, &tail)
    }
}

fn shortest_period(period: Vec<u64>) -> Vec<u64> {
    let n = period.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| period[i] == period[i - p]) {
            return period[..p].to_vec();
        }
    }
    period
}

/// Lexicographically least rotation of a period, with its offset.
fn least_rotation(period: &[u64]) -> (Vec<u64>, usize) {
    let n = period.len();
    (0..n)
        .map(|r| {
            let rot: Vec<u64> = (0..n).map(|i| period[(i + r) % n]).collect();
            (rot, r)
        })
        .min()
        .expect("nonempty period")
}

/// Floor/reciprocal expansion of a double.
///
/// Stops after `n` quotients (capped at [`REAL_QUOTIENT_CAP`]) or as soon as
/// the fractional part drops below `eps`.
pub fn expand_real(x: f64, n: usize, eps: f64) -> Result<ContinuedFraction> {
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one quotient".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if x.abs() >= 9.0e18 {
        return Err(Error::Overflow("a0 does not fit in i64"));
    }
    let n = n.min(REAL_QUOTIENT_CAP);
    let a0 = x.floor();
    let mut frac = x - a0;
    let mut tail = Vec::new();
    while tail.len() + 1 < n && frac >= eps {
        let y = 1.0 / frac;
        let a = y.floor();
        if a >= 9.0e18 {
            break;
        }
        tail.push(a.max(1.0) as u64);
        frac = y - a;
    }
    ContinuedFraction::finite(a0 as i64, tail)
}

/// Exact eventually periodic expansion of a real quadratic irrational.
///
/// Runs the classical `(P + √D)/Q` iteration in integers; the first repeated
/// state closes the period, which is therefore already the shortest.
pub fn expand_surd(x: &QuadraticIrrational) -> Result<ContinuedFraction> {
    if !x.is_real() {
        return Err(Error::InvalidArgument("imaginary surd has no real continued fraction".into()));
    }
    let (p, q, r) = (x.p().clone(), x.q().clone(), x.r().clone());
    let mut big_d = &q * &q * BigInt::from(x.d());
    let (mut pp, mut qq) = if q > BigInt::zero() { (p, r) } else { (-p, -r) };
    if !((&big_d - &pp * &pp) % &qq).is_zero() {
        let qa = if qq < BigInt::zero() { -qq.clone() } else { qq.clone() };
        pp *= &qa;
        big_d *= &qq * &qq;
        qq *= &qa;
    }
    let root = num_integer::Roots::sqrt(&big_d);
    let floor_state = |pp: &BigInt, qq: &BigInt| -> BigInt {
        use num_integer::Integer;
        if qq > &BigInt::zero() {
            (pp + &root).div_floor(qq)
        } else {
            (-pp - &root - BigInt::one()).div_floor(&-qq)
        }
    };

    let a0 = floor_state(&pp, &qq);
    let a0 = a0.to_i64().ok_or(Error::Overflow("a0 does not fit in i64"))?;
    let mut a = BigInt::from(a0);
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut tail: Vec<u64> = Vec::new();
    const MAX_STEPS: usize = 1_000_000;
    loop {
        let next_p = &a * &qq - &pp;
        let next_q = (&big_d - &next_p * &next_p) / &qq;
        pp = next_p;
        qq = next_q;
        if let Some(&start) = seen.get(&(pp.clone(), qq.clone())) {
            let period = tail.split_off(start);
            return ContinuedFraction::periodic(a0, tail, period);
        }
        if tail.len() >= MAX_STEPS {
            return Err(Error::Overflow("period search exceeded step limit"));
        }
        seen.insert((pp.clone(), qq.clone()), tail.len());
        a = floor_state(&pp, &qq);
        tail.push(a.to_u64().ok_or(Error::Overflow("partial quotient"))?);
    }
}

/// Convergent `p_ν / q_ν` under the seeds `p₋₁/q₋₁ = 0/1`, `p₀/q₀ = 1/0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub index: i64,
    #[serde(with = "int_serde")]
    pub p: BigInt,
    #[serde(with = "int_serde")]
    pub q: BigInt,
}

/// Convergents for `ν = −1 … n`, where `μ_ν = a_{ν−1}`.
pub fn convergents(cf: &ContinuedFraction, n: usize) -> Result<Vec<Convergent>> {
    let mu = cf.quotients(n)?;
    let mut out = vec![
        Convergent { index: -1, p: BigInt::zero(), q: BigInt::one() },
        Convergent { index: 0, p: BigInt::one(), q: BigInt::zero() },
    ];
    for (k, &m) in mu.iter().enumerate() {
        let m = BigInt::from(m);
        let (prev2, prev1) = (&out[k], &out[k + 1]);
        let next = Convergent {
            index: k as i64 + 1,
            p: &m * &prev1.p + &prev2.p,
            q: &m * &prev1.q + &prev2.q,
        };
        out.push(next);
    }
    Ok(out)
}

/// `A_0 … A_n`, with `A_k` the product of the factors `[[a_i, 1], [1, 0]]`
/// for `i ≤ k`. Requires `a_0 ≥ 1`.
pub fn an_matrices(cf: &ContinuedFraction, n: usize) -> Result<Vec<UnimodularMatrix>> {
    if cf.a0() <= 0 {
        return Err(Error::NonPositiveQuotient(cf.a0()));
    }
    let q = cf.quotients(n + 1)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = UnimodularMatrix::identity();
    for a in q {
        acc = &acc * &UnimodularMatrix::quotient_factor(a);
        out.push(acc.clone());
    }
    Ok(out)
}

/// Outcome of checking Klein's identity at one index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinWitness {
    pub index: usize,
    pub mu: i64,
    /// `(p_ν − p_{ν−2}, q_ν − q_{ν−2})`, the segment I.
    pub segment_i: (int_serde::JsonInt, int_serde::JsonInt),
    /// `μ_ν · (p_{ν−1}, q_{ν−1})`, the scaled segment J.
    pub scaled_j: (int_serde::JsonInt, int_serde::JsonInt),
    pub holds: bool,
}

/// Checks `(p_ν − p_{ν−2}, q_ν − q_{ν−2}) = μ_ν (p_{ν−1}, q_{ν−1})` exactly.
pub fn klein_check(cf: &ContinuedFraction, nu: usize) -> Result<KleinWitness> {
    if nu == 0 {
        return Err(Error::InvalidArgument("Klein index must be at least 1".into()));
    }
    let conv = convergents(cf, nu)?;
    // conv[k] holds index k − 1.
    let (c2, c1, c0) = (&conv[nu - 1], &conv[nu], &conv[nu + 1]);
    let mu = cf.quotient(nu - 1).ok_or(Error::Overflow("partial quotient"))?;
    let m = BigInt::from(mu);
    let seg_i = (&c0.p - &c2.p, &c0.q - &c2.q);
    let seg_j = (&m * &c1.p, &m * &c1.q);
    let holds = seg_i == seg_j;
    Ok(KleinWitness {
        index: nu,
        mu,
        segment_i: (int_serde::JsonInt(seg_i.0), int_serde::JsonInt(seg_i.1)),
        scaled_j: (int_serde::JsonInt(seg_j.0), int_serde::JsonInt(seg_j.1)),
        holds,
    })
}

// Length sequences below are 1-based: `lengths[ν − 1] = |ω_ν|` and
// `quotients[ν − 1] = μ_ν`.

fn at(seq: &[f64], nu: usize) -> Result<f64> {
    nu.checked_sub(1)
        .and_then(|i| seq.get(i).copied())
        .ok_or(Error::IndexOutOfRange { index: nu, len: seq.len() })
}

/// `|ω_ν| − (|ω_{ν−2}| + μ_ν |ω_{ν−1}|)`.
pub fn length_recurrence_residual(lengths: &[f64], quotients: &[i64], nu: usize) -> Result<f64> {
    if nu < 3 {
        return Err(Error::InvalidArgument("recurrence residual needs ν ≥ 3".into()));
    }
    let mu = quotients
        .get(nu - 1)
        .copied()
        .ok_or(Error::IndexOutOfRange { index: nu, len: quotients.len() })?;
    Ok(at(lengths, nu)? - (at(lengths, nu - 2)? + mu as f64 * at(lengths, nu - 1)?))
}

/// Quotient recovered from three consecutive lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientEstimate {
    /// The index `ν` of `μ_ν`.
    pub index: usize,
    /// `(|ω_ν| − |ω_{ν−2}|) / |ω_{ν−1}|` before rounding.
    pub raw: f64,
    pub value: u64,
    /// `raw − value`.
    pub residual: f64,
    /// Set when the raw ratio sits outside the rounding band.
    pub flagged: bool,
}

pub(crate) fn estimate(index: usize, raw: f64) -> QuotientEstimate {
    let value = raw.round().max(1.0);
    let residual = raw - value;
    QuotientEstimate {
        index,
        raw,
        value: value as u64,
        residual,
        flagged: residual.abs() > ROUNDING_BAND,
    }
}

/// Inverts the length recurrence: `μ_ν ≈ (|ω_ν| − |ω_{ν−2}|)/|ω_{ν−1}|` for
/// `ν ≥ 3`, rounded to the nearest positive integer.
pub fn quotients_from_lengths(lengths: &[f64]) -> Result<Vec<QuotientEstimate>> {
    if lengths.len() < 3 {
        return Err(Error::TooFewLengths { needed: 3, available: lengths.len() });
    }
    check_lengths(lengths)?;
    Ok((3..=lengths.len())
        .map(|nu| estimate(nu, (lengths[nu - 1] - lengths[nu - 3]) / lengths[nu - 2]))
        .collect())
}

pub(crate) fn check_lengths(lengths: &[f64]) -> Result<()> {
    for (i, l) in lengths.iter().enumerate() {
        if !l.is_finite() {
            return Err(Error::NonFinite("length"));
        }
        if i > 0 && *l <= lengths[i - 1] {
            return Err(Error::NonMonotone(i));
        }
    }
    Ok(())
}

/// `|ω_{ν+N}| / |ω_ν|`.
pub fn window_ratio(lengths: &[f64], nu: usize, window: usize) -> Result<f64> {
    let lo = at(lengths, nu)?;
    let hi = at(lengths, nu + window)?;
    if lo == 0.0 {
        return Err(Error::ZeroLength(nu));
    }
    if hi == 0.0 {
        return Err(Error::ZeroLength(nu + window));
    }
    Ok(hi / lo)
}

/// How a tail-equivalence verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// Canonical period comparison; complete and sound.
    Exact,
    /// Finite-prefix comparison; neither complete nor sound.
    Heuristic,
}

/// A shift `k` with `a_{m+k} = b_m` for all large `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailMatch {
    pub shift: i64,
    pub mode: MatchMode,
    /// First index of the second fraction from which the tails agree.
    pub from: usize,
}

/// Limits for prefix-based tail comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicConfig {
    pub depth: usize,
    pub max_shift: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self { depth: 40, max_shift: 10 }
    }
}

/// Tail equivalence with the default heuristic limits.
pub fn tail_equivalent(a: &ContinuedFraction, b: &ContinuedFraction) -> Option<TailMatch> {
    tail_equivalent_with(a, b, HeuristicConfig::default())
}

/// Decides whether the two fractions agree after a shift.
///
/// Two periodic fractions are compared through the least rotation of their
/// shortest periods, which is exact. Anything else falls back to comparing
/// the second half of every overlapping window of the first `depth`
/// quotients, at shifts `|k| ≤ max_shift`, smallest `|k|` first.
pub fn tail_equivalent_with(
    a: &ContinuedFraction,
    b: &ContinuedFraction,
    cfg: HeuristicConfig,
) -> Option<TailMatch> {
    if a.is_periodic() && b.is_periodic() {
        return exact_tail_match(a, b);
    }
    let sa = a.prefix(cfg.depth);
    let sb = b.prefix(cfg.depth);
    let shifts = std::iter::once(0i64)
        .chain((1..=cfg.max_shift as i64).flat_map(|k| [k, -k]));
    for k in shifts {
        let lo = 0.max(-k) as usize;
        let hi = (sb.len() as i64).min(sa.len() as i64 - k);
        if hi - (lo as i64) < 2 {
            continue;
        }
        let hi = hi as usize;
        let start = lo + (hi - lo) / 2;
        if (start..hi).all(|m| sa[(m as i64 + k) as usize] == sb[m]) {
            return Some(TailMatch { shift: k, mode: MatchMode::Heuristic, from: start });
        }
    }
    None
}

fn exact_tail_match(a: &ContinuedFraction, b: &ContinuedFraction) -> Option<TailMatch> {
    if a.period.len() != b.period.len() {
        return None;
    }
    let (ra, oa) = least_rotation(&a.period);
    let (rb, ob) = least_rotation(&b.period);
    if ra != rb {
        return None;
    }
    let len = a.period.len() as i64;
    let start_a = 1 + a.preperiod.len() as i64;
    let start_b = 1 + b.preperiod.len() as i64;
    // b's period read from offset ob equals a's read from offset oa.
    let base = start_a - start_b + oa as i64 - ob as i64;
    let shift = (-len..=len)
        .map(|j| base + j * len)
        .min_by_key(|k| (k.abs(), -k.signum()))
        .expect("nonempty range");
    let from = start_b.max(start_a - shift).max(0) as usize;
    Some(TailMatch { shift, mode: MatchMode::Exact, from })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn cf(a0: i64, tail: &[u64]) -> ContinuedFraction {
        ContinuedFraction::finite(a0, tail.to_vec()).unwrap()
    }

    fn periodic(a0: i64, pre: &[u64], per: &[u64]) -> ContinuedFraction {
        ContinuedFraction::periodic(a0, pre.to_vec(), per.to_vec()).unwrap()
    }

    /// Independent oracle: expand a rational exactly with big-rational floors.
    fn rational_cf(num: i64, den: i64, n: usize) -> Vec<i64> {
        let mut x = BigRational::new(num.into(), den.into());
        let mut out = Vec::new();
        while out.len() < n {
            let a = x.floor();
            out.push(a.to_integer().to_i64().unwrap());
            let frac = &x - &a;
            if frac.is_zero() {
                break;
            }
            x = frac.recip();
        }
        out
    }

    #[test]
    fn expand_real_examples() {
        // The double 3.14159265358979 is the rational 314159265358979/10^14.
        assert_eq!(rational_cf(314159265358979, 100_000_000_000_000, 4), vec![3, 7, 15, 1]);
        assert_eq!(expand_real(3.14159265358979, 4, 1e-12).unwrap(), cf(3, &[7, 15, 1]));
        assert_eq!(expand_real(5.0, 4, 1e-12).unwrap(), cf(5, &[]));
        assert_eq!(expand_real(1.61803398874989, 6, 1e-12).unwrap(), cf(1, &[1, 1, 1, 1, 1]));
    }

    #[test]
    fn expand_real_errors_and_cap() {
        assert_eq!(expand_real(f64::NAN, 3, 1e-10), Err(Error::NonFinite("x")));
        assert!(expand_real(1.0, 0, 1e-10).is_err());
        assert!(expand_real(1.0, 3, 0.0).is_err());
        let long = expand_real(std::f64::consts::E, 100, 1e-16).unwrap();
        assert!(long.len().unwrap() <= REAL_QUOTIENT_CAP);
    }

    #[test]
    fn expand_real_convergent_bound() {
        let x = std::f64::consts::PI;
        let c = expand_real(x, 8, DEFAULT_REAL_EPS).unwrap();
        let conv = convergents(&c, c.len().unwrap()).unwrap();
        for cv in &conv[2..] {
            let (p, q) = (cv.p.to_f64().unwrap(), cv.q.to_f64().unwrap());
            assert!((p / q - x).abs() < 1.0 / (q * q) + 1e-15);
        }
    }

    #[test]
    fn expand_surd_examples() {
        let s2 = expand_surd(&QuadraticIrrational::sqrt(2).unwrap()).unwrap();
        assert_eq!(s2, periodic(1, &[], &[2]));
        let g = expand_surd(&QuadraticIrrational::golden()).unwrap();
        assert_eq!(g, periodic(1, &[], &[1]));
        let s3 = expand_surd(&QuadraticIrrational::sqrt(3).unwrap()).unwrap();
        assert_eq!(s3, periodic(1, &[], &[1, 2]));
        assert!((s2.value_f64(30) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn expand_surd_negative_and_reduced() {
        let x = QuadraticIrrational::new(-7, 3, 5, 11).unwrap();
        let c = expand_surd(&x).unwrap();
        assert!((c.value_f64(40) - x.to_f64()).abs() < 1e-12);
        assert_eq!(c.to_surd().unwrap(), x);
        let y = QuadraticIrrational::new(3, -1, 2, 13).unwrap();
        let c = expand_surd(&y).unwrap();
        assert_eq!(c.to_surd_in_field(13).unwrap(), y);
    }

    #[test]
    fn periodic_normalization() {
        assert_eq!(periodic(1, &[2, 2], &[2, 2]), periodic(1, &[], &[2]));
        assert_eq!(periodic(3, &[1, 2], &[1, 2]), periodic(3, &[], &[1, 2]));
        assert_eq!(periodic(0, &[5, 1, 2], &[1, 2]).preperiod(), &[5]);
    }

    #[test]
    fn convergents_examples() {
        let pairs = |c: &ContinuedFraction, n| {
            convergents(c, n)
                .unwrap()
                .into_iter()
                .map(|c| (c.p.to_i64().unwrap(), c.q.to_i64().unwrap()))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            pairs(&cf(3, &[7, 15, 1]), 4),
            vec![(0, 1), (1, 0), (3, 1), (22, 7), (333, 106), (355, 113)]
        );
        assert_eq!(pairs(&periodic(1, &[], &[1]), 3), vec![(0, 1), (1, 0), (1, 1), (2, 1), (3, 2)]);
        assert_eq!(pairs(&cf(5, &[]), 1), vec![(0, 1), (1, 0), (5, 1)]);
        assert!(convergents(&cf(5, &[]), 2).is_err());
    }

    #[test]
    fn an_matrix_examples() {
        let g = an_matrices(&periodic(1, &[], &[1]), 1).unwrap();
        assert_eq!(g[0], UnimodularMatrix::from_i64(1, 1, 1, 0).unwrap());
        assert_eq!(g[1], UnimodularMatrix::from_i64(2, 1, 1, 1).unwrap());
        assert_eq!(g[1].trace(), BigInt::from(3));
        let a = an_matrices(&cf(4, &[2]), 0).unwrap();
        assert_eq!(a[0], UnimodularMatrix::from_i64(4, 1, 1, 0).unwrap());
        assert_eq!(a[0].det(), -1);
        let s = an_matrices(&periodic(1, &[], &[2]), 2).unwrap();
        assert_eq!(s[2], UnimodularMatrix::from_i64(7, 3, 5, 2).unwrap());
        assert_eq!(s[2].trace(), BigInt::from(9));
        assert_eq!(an_matrices(&cf(0, &[2, 3]), 1), Err(Error::NonPositiveQuotient(0)));
    }

    #[test]
    fn klein_examples() {
        let w = klein_check(&cf(3, &[7, 15, 1]), 3).unwrap();
        assert!(w.holds);
        assert_eq!(w.segment_i, (int_serde::JsonInt(330.into()), int_serde::JsonInt(105.into())));
        assert_eq!(w.mu, 15);
        let w = klein_check(&periodic(1, &[], &[1]), 2).unwrap();
        assert!(w.holds);
        assert_eq!(w.segment_i, (int_serde::JsonInt(1.into()), int_serde::JsonInt(1.into())));
        let w = klein_check(&cf(4, &[1, 1]), 1).unwrap();
        assert!(w.holds);
        assert_eq!(w.scaled_j, (int_serde::JsonInt(4.into()), int_serde::JsonInt(0.into())));
        assert!(klein_check(&cf(4, &[]), 0).is_err());
    }

    #[test]
    fn residual_examples() {
        let l = [2f64.sqrt(), 13f64.sqrt(), 74f64.sqrt()];
        let r = length_recurrence_residual(&l, &[1, 2, 2], 3).unwrap();
        assert!(r.abs() < 0.03, "{r}");
        assert_eq!(length_recurrence_residual(&[1.0, 1.0, 2.0], &[1, 1, 1], 3).unwrap(), 0.0);
        assert!(length_recurrence_residual(&l, &[1, 2, 2], 4).is_err());
    }

    #[test]
    fn residual_small_for_golden_norms() {
        let g = periodic(1, &[], &[1]);
        let conv = convergents(&g, 12).unwrap();
        let norms: Vec<f64> = conv[2..]
            .iter()
            .map(|c| c.p.to_f64().unwrap().hypot(c.q.to_f64().unwrap()))
            .collect();
        let r = length_recurrence_residual(&norms, &g.quotients(12).unwrap(), 10).unwrap();
        assert!(r.abs() / norms[9] < 0.01);
    }

    #[test]
    fn quotients_from_lengths_examples() {
        let est = quotients_from_lengths(&[1.0, 2.0, 5.0, 12.0]).unwrap();
        assert_eq!(est.iter().map(|e| e.value).collect::<Vec<_>>(), vec![2, 2]);
        assert!(est.iter().all(|e| e.residual.abs() < 1e-12 && !e.flagged));
        assert_eq!(quotients_from_lengths(&[1.0, 3.0, 2.0]), Err(Error::NonMonotone(2)));
        assert!(quotients_from_lengths(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn quotients_from_convergent_norms() {
        let s2 = periodic(1, &[], &[2]);
        let conv = convergents(&s2, 12).unwrap();
        let norms: Vec<f64> = conv[2..]
            .iter()
            .map(|c| c.p.to_f64().unwrap().hypot(c.q.to_f64().unwrap()))
            .collect();
        let est = quotients_from_lengths(&norms).unwrap();
        assert!(est.iter().all(|e| e.value == 2), "{est:?}");
    }

    #[test]
    fn window_ratio_examples() {
        let l = [1.0, 2.0, 5.0];
        assert_eq!(window_ratio(&l, 2, 0).unwrap(), 1.0);
        assert_eq!(window_ratio(&l, 1, 2).unwrap(), 5.0);
        assert!(window_ratio(&l, 2, 2).is_err());
        assert_eq!(window_ratio(&[0.0, 1.0], 1, 1), Err(Error::ZeroLength(1)));
    }

    #[test]
    fn tail_examples() {
        let a = periodic(1, &[], &[2]);
        let b = periodic(3, &[2], &[2]);
        let m = tail_equivalent(&a, &b).unwrap();
        assert_eq!(m.mode, MatchMode::Exact);
        for i in m.from..m.from + 10 {
            assert_eq!(a.quotient((i as i64 + m.shift) as usize), b.quotient(i));
        }
        assert_eq!(tail_equivalent(&a, &a).unwrap().shift, 0);
        assert_eq!(tail_equivalent(&periodic(1, &[], &[1]), &a), None);
    }

    #[test]
    fn tail_shift_is_consistent_for_rotations() {
        let a = periodic(2, &[7], &[1, 3, 5]);
        let b = periodic(0, &[4, 4], &[5, 1, 3]);
        let m = tail_equivalent(&a, &b).unwrap();
        for i in m.from..m.from + 12 {
            assert_eq!(a.quotient((i as i64 + m.shift) as usize), b.quotient(i), "{m:?}");
        }
    }

    #[test]
    fn heuristic_tail_match() {
        let a = cf(0, &[3, 1, 1, 1, 1, 1, 1, 1, 1]);
        let b = cf(2, &[5, 1, 1, 1, 1, 1, 1, 1, 1]);
        let m = tail_equivalent(&a, &b).unwrap();
        assert_eq!(m.mode, MatchMode::Heuristic);
        let c = cf(0, &[1, 2, 3, 4, 5, 6, 7, 8]);
        let d = cf(0, &[9, 9, 9, 9, 9, 9, 9, 9]);
        assert_eq!(tail_equivalent(&c, &d), None);
    }
}

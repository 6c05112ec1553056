//! From a complex torus to a noncommutative torus with a state scale.
//!
//! The lattice `Z + τZ` is read through its systole-normalized length
//! spectrum. Successive distinct lengths are inverted through the recurrence
//! `|ω_ν| ≈ |ω_{ν−2}| + μ_ν |ω_{ν−1}|` into partial quotients `μ_ν`, which
//! define `θ = [μ₁; μ₂, …]`.
//!
//! The state scale is the systole of the unit-covolume lattice spanned by
//! `1` and the reduced modulus `τ*`, i.e. `(Im τ*)^{-1/2}`. It depends only on
//! the isomorphism class of the torus.

use crate::contfrac::{
    estimate, quotients_from_lengths, tail_equivalent_with, ContinuedFraction, HeuristicConfig,
    QuotientEstimate, TailMatch, UnimodularMatrix,
};
use crate::cm::{endomorphism_ring, EndomorphismRing, ExactModulus, QuadraticOrder};
use crate::error::{Error, Result};
use crate::lattice::{reduce, Lattice, Modulus};
use crate::nctorus::{NcTorus, StateScale};
use crate::spectrum::{enumerate, LengthSpectrum, SpectrumMode};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Relative tolerance when matching state scales along an orbit.
pub const OMEGA_TOL: f64 = 1e-6;

/// Largest `|c|, |d|` tried when searching for `ω'/ω = |cθ + d|`.
pub const ORBIT_SEARCH: i64 = 10;

/// A repeating block found at the end of a quotient stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicHint {
    /// Position in the stream (0 for `μ₁`) where the repetition starts.
    pub start: usize,
    pub period: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureResult {
    /// `[μ₁; μ₂, …, μ_n]`.
    pub theta_cf: ContinuedFraction,
    pub theta_value: f64,
    pub omega: f64,
    /// One estimate per quotient, `μ₁` first.
    pub diagnostics: Vec<QuotientEstimate>,
    pub periodic_hint: Option<PeriodicHint>,
}

impl CurvatureResult {
    /// `μ₁, μ₂, …` as extracted.
    pub fn quotients(&self) -> Vec<u64> {
        self.diagnostics.iter().map(|q| q.value).collect()
    }
}

/// Output of [`torus_to_nctorus`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub reduced: Modulus,
    pub nctorus: NcTorus,
    pub scale: StateScale,
    pub curvature: CurvatureResult,
}

/// `Z + τ*Z` for the reduced modulus `τ*`; its systole is 1.
fn reduced_lattice(tau: Modulus) -> (Modulus, Lattice) {
    let reduced = reduce(tau).modulus;
    (reduced, Lattice::from_modulus(reduced))
}

/// Length spectrum of `Z + τZ` scaled to systole 1.
///
/// The reduced representative is enumerated, so isomorphic moduli give the
/// same spectrum, computed from the same basis.
pub fn w_map(tau: Modulus, cutoff: f64, mode: SpectrumMode) -> Result<LengthSpectrum> {
    let (_, lattice) = reduced_lattice(tau);
    let sp = enumerate(&lattice, cutoff * lattice.systole(), mode)?;
    sp.scale(1.0 / lattice.systole())
}

/// State scale of `τ`: `(Im τ*)^{-1/2}`.
pub fn state_scale(tau: Modulus) -> StateScale {
    let (reduced, _) = reduced_lattice(tau);
    StateScale::new(reduced.tau().im.sqrt().recip()).expect("positive imaginary part")
}

/// Smallest `p` such that the last half of `s` repeats with period `p` at
/// least twice, extended backwards as far as the repetition holds.
pub fn detect_period(s: &[u64]) -> Option<PeriodicHint> {
    let n = s.len();
    let half = n / 2;
    (1..=(n - half) / 2).find_map(|p| {
        if !(half..n - p).all(|i| s[i] == s[i + p]) {
            return None;
        }
        let mut start = half;
        while start > 0 && s[start - 1] == s[start - 1 + p] {
            start -= 1;
        }
        Some(PeriodicHint { start, period: s[start..start + p].to_vec() })
    })
}

/// Reads `θ` off a spectrum.
///
/// Distinct lengths `l₁ < l₂ < …` are divided by `l₁`. For `ν ≥ 3` the
/// quotients come from `(l_ν − l_{ν−2})/l_{ν−1}`; `μ₁` and `μ₂` use virtual
/// seeds `l₋₁ = l₀ = 1`, giving `μ₁ ≈ l₁ − 1` and `μ₂ ≈ (l₂ − 1)/l₁`. These
/// two are the least reliable. `omega` is `l₁` before normalization.
pub fn curvature_extract(sp: &LengthSpectrum, max_quotients: usize) -> Result<CurvatureResult> {
    let lengths = sp.distinct_lengths();
    if lengths.len() < 4 {
        return Err(Error::TooFewLengths { needed: 4, available: lengths.len() });
    }
    let n = max_quotients.min(lengths.len());
    if n < 4 {
        return Err(Error::InvalidArgument("at least 4 quotients are required".into()));
    }
    let systole = lengths[0];
    let d: Vec<f64> = lengths[..n].iter().map(|l| l / systole).collect();
    let mut diagnostics = vec![estimate(1, d[0] - 1.0), estimate(2, (d[1] - 1.0) / d[0])];
    diagnostics.extend(quotients_from_lengths(&d)?);

    let stream: Vec<u64> = diagnostics.iter().map(|q| q.value).collect();
    let a0 = i64::try_from(stream[0]).map_err(|_| Error::Overflow("quotient"))?;
    let theta_cf = ContinuedFraction::finite(a0, stream[1..].to_vec())?;
    let theta_value = theta_cf.value_f64(n);
    Ok(CurvatureResult {
        theta_cf,
        theta_value,
        omega: systole,
        diagnostics,
        periodic_hint: detect_period(&stream),
    })
}

/// `w_map` followed by `curvature_extract` in full mode.
///
/// `θ` is packaged as a floating torus built from the extracted expansion and
/// the state scale is [`state_scale`].
pub fn torus_to_nctorus(tau: Modulus, cutoff: f64, max_quotients: usize) -> Result<Correspondence> {
    let sp = w_map(tau, cutoff, SpectrumMode::Full)?;
    let mut curvature = curvature_extract(&sp, max_quotients)?;
    let scale = state_scale(tau);
    curvature.omega = scale.omega();
    let nctorus = NcTorus::from_cf(curvature.theta_cf.clone())?;
    Ok(Correspondence { reduced: reduce(tau).modulus, nctorus, scale, curvature })
}

/// `(c, d)` with `ω' = ω·|cθ + d|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitWitness {
    pub c: i64,
    pub d: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivarianceReport {
    pub original: Correspondence,
    pub image: Correspondence,
    pub tail: Option<TailMatch>,
    pub tail_equivalent: bool,
    /// Always set: the streams are finite prefixes.
    pub heuristic: bool,
    pub omega_ratio: f64,
    pub orbit_witness: Option<OrbitWitness>,
    pub omega_on_orbit: bool,
}

/// Searches `|c|, |d| ≤ ORBIT_SEARCH`, `gcd(c, d) = 1`, for
/// `|cθ + d| = ratio`, trying `preferred` first.
fn orbit_witness(theta: f64, ratio: f64, preferred: Option<(i64, i64)>) -> Option<OrbitWitness> {
    let fits = |c: i64, d: i64| ((c as f64 * theta + d as f64).abs() - ratio).abs() <= OMEGA_TOL * ratio;
    if let Some((c, d)) = preferred {
        if c.gcd(&d) == 1 && fits(c, d) {
            return Some(OrbitWitness { c, d });
        }
    }
    for c in 0..=ORBIT_SEARCH {
        for d in -ORBIT_SEARCH..=ORBIT_SEARCH {
            if c.gcd(&d) == 1 && fits(c, d) {
                return Some(OrbitWitness { c, d });
            }
        }
    }
    None
}

/// Runs the pipeline on `τ` and on `(aτ + b)/(cτ + d)` and compares.
pub fn equivariance_check(
    tau: Modulus,
    m: &UnimodularMatrix,
    cutoff: f64,
    depth: usize,
) -> Result<EquivarianceReport> {
    let image_tau = tau.act(m)?;
    let original = torus_to_nctorus(tau, cutoff, depth)?;
    let image = torus_to_nctorus(image_tau, cutoff, depth)?;
    let cfg = HeuristicConfig { depth, ..HeuristicConfig::default() };
    let tail = tail_equivalent_with(&original.curvature.theta_cf, &image.curvature.theta_cf, cfg);
    let omega_ratio = image.scale.omega() / original.scale.omega();
    let preferred = m.to_i64().map(|[_, _, c, d]| (c, d));
    let orbit = orbit_witness(original.nctorus.theta_f64(), omega_ratio, preferred);
    Ok(EquivarianceReport {
        original,
        image,
        tail_equivalent: tail.is_some(),
        tail,
        heuristic: true,
        omega_ratio,
        omega_on_orbit: orbit.is_some(),
        orbit_witness: orbit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmReport {
    pub order: QuadraticOrder,
    pub correspondence: Correspondence,
    pub quotients_examined: usize,
    /// Eventual repetition in the extracted stream, if any. Evidence only.
    pub periodic_hint: Option<PeriodicHint>,
}

/// Runs the pipeline on a CM modulus and reports any eventual period.
pub fn cm_curvature_check(tau: &ExactModulus, cutoff: f64, max_quotients: usize) -> Result<CmReport> {
    let order = match endomorphism_ring(tau)? {
        EndomorphismRing::Order(o) => o,
        EndomorphismRing::Integers => return Err(Error::NotCm),
    };
    let modulus = Modulus::new(tau.to_complex())?;
    let correspondence = torus_to_nctorus(modulus, cutoff, max_quotients)?;
    let periodic_hint = correspondence.curvature.periodic_hint.clone();
    Ok(CmReport {
        order,
        quotients_examined: correspondence.curvature.diagnostics.len(),
        correspondence,
        periodic_hint,
    })
}

//! Serializable results, one per subcommand.

use crate::args::parse_complex;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use tori_core::cm::{EndomorphismRing, Multiplier};
use tori_core::contfrac::{KleinWitness, QuotientEstimate, TailMatch};
use tori_core::correspondence::{OrbitWitness, PeriodicHint};
use tori_core::lattice::Orientation;
use tori_core::{ContinuedFraction, Convergent, JsonInt, SpectrumEntry, SpectrumMode, UnimodularMatrix};

pub const SCHEMA: u32 = 1;

/// A complex number written as `RE+IMi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx(pub Complex64);

fn fmt_real(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

impl std::fmt::Display for Cx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.0.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", fmt_real(self.0.re), sign, fmt_real(self.0.im.abs()))
    }
}

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_complex(&s).map(Cx).map_err(serde::de::Error::custom)
    }
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx(z)
    }
}

/// Top-level JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: u32,
    #[serde(flatten)]
    pub report: Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Spectrum(SpectrumReport),
    Reduce(ReduceReport),
    Iso(IsoReport),
    Cf(CfReport),
    Convergents(ConvergentsReport),
    Klein(KleinReport),
    Morita(MoritaReport),
    Dimgroup(DimgroupReport),
    Vmap(VmapReport),
    Curvature(CurvatureReport),
    Cm(CmReport),
    Weierstrass(WeierstrassReport),
    Plot(PlotReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub tau: Cx,
    pub cutoff: f64,
    pub mode: SpectrumMode,
    /// Geodesics counted with multiplicity.
    pub total: usize,
    pub entries: Vec<SpectrumEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub input: Cx,
    pub tau: Cx,
    pub matrix: UnimodularMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoReport {
    pub tau1: Cx,
    pub tau2: Cx,
    pub isomorphic: bool,
    pub matrix: Option<UnimodularMatrix>,
    pub orientation: Option<Orientation>,
}

/// How `θ` was given on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ThetaSource {
    Surd { p: i64, q: i64, r: i64, d: i64 },
    Real { x: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfReport {
    pub input: ThetaSource,
    pub value: f64,
    pub exact: bool,
    pub a0: i64,
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
    /// The first `depth` quotients, fewer when the expansion is shorter.
    pub quotients: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergentsReport {
    pub input: ThetaSource,
    pub convergents: Vec<Convergent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KleinReport {
    pub input: ThetaSource,
    pub all_hold: bool,
    pub rows: Vec<KleinWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoritaReport {
    pub theta1: ThetaSource,
    pub theta2: ThetaSource,
    pub equivalent: bool,
    pub shift: Option<i64>,
    /// Set when the verdict is a decision rather than a prefix comparison.
    pub exact: bool,
    pub matrix: Option<UnimodularMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimgroupRow {
    pub n: usize,
    pub matrix: UnimodularMatrix,
    pub trace: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimgroupReport {
    pub input: ThetaSource,
    pub rows: Vec<DimgroupRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VmapReport {
    pub input: ThetaSource,
    pub omega: f64,
    pub f_family: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivarianceOut {
    pub matrix: UnimodularMatrix,
    pub image_tau: Cx,
    pub image_quotients: Vec<u64>,
    pub tail: Option<TailMatch>,
    pub tail_equivalent: bool,
    pub heuristic: bool,
    pub omega_ratio: f64,
    pub orbit_witness: Option<OrbitWitness>,
    pub omega_on_orbit: bool,
    /// The `ω` action is a reading, not a derived formula.
    pub omega_action: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub tau: Cx,
    pub reduced: Cx,
    pub cutoff: f64,
    pub theta: f64,
    pub omega: f64,
    pub cf: ContinuedFraction,
    pub quotients: Vec<u64>,
    pub flagged: usize,
    pub diagnostics: Vec<QuotientEstimate>,
    pub periodic_hint: Option<PeriodicHint>,
    pub equivariance: Option<EquivarianceOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmEvidence {
    pub quotients: Vec<u64>,
    pub periodic_hint: Option<PeriodicHint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmReport {
    pub tau: Cx,
    pub ring: EndomorphismRing,
    pub multipliers: Vec<Multiplier>,
    pub evidence: Option<CmEvidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassReport {
    pub tau: Cx,
    #[serde(rename = "box")]
    pub box_size: usize,
    pub g4: Cx,
    pub g6: Cx,
    /// `y² = x³ + a x + b` with `x = ℘`, `y = ½℘′`.
    pub a: Cx,
    pub b: Cx,
    pub discriminant: Cx,
    pub z: Cx,
    pub wp: Cx,
    pub wp_prime_half: Cx,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKindOut {
    Lattice,
    Klein,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotReport {
    pub kind: PlotKindOut,
    pub svg: String,
}

//! Command-line syntax.

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Debug, Clone, Parser)]
#[command(name = "tori", version, about = "Complex tori, length spectra and noncommutative tori")]
pub struct Cli {
    /// Output format. Defaults to json, or svg for `plot`.
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Primitive,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Lattice,
    Klein,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Enumerate the length spectrum of Z + τZ.
    Spectrum(SpectrumArgs),
    /// Move τ into the fundamental domain.
    Reduce(TauArgs),
    /// Decide whether two moduli give isomorphic tori.
    Iso(IsoArgs),
    /// Continued fraction of a real number or quadratic surd.
    Cf(ThetaArgs),
    /// Convergents p_ν/q_ν.
    Convergents(ThetaArgs),
    /// Table of Klein's identity checks.
    Klein(ThetaArgs),
    /// Morita equivalence of two noncommutative tori.
    Morita(MoritaArgs),
    /// Dimension-group matrices φ_n with traces.
    Dimgroup(ThetaArgs),
    /// The sequence f_k(ω) ln tr A_k.
    Vmap(VmapArgs),
    /// Torus to noncommutative torus pipeline.
    Curvature(CurvatureArgs),
    /// Endomorphism ring of Z + τZ.
    Cm(CmArgs),
    /// Eisenstein series, cubic and ℘ at a point.
    Weierstrass(WeierstrassArgs),
    /// SVG figure of a lattice or of Klein's segments.
    Plot(PlotArgs),
}

/// Parses `RE+IMi`, `RE-IMi`, `IMi` or `RE`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim().replace(' ', "");
    let bad = || format!("cannot parse {s:?} as RE+IMi");
    let Some(body) = t.strip_suffix('i') else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        return finite(Complex64::new(re, 0.0), s);
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    finite(Complex64::new(re, im), s)
}

fn finite(z: Complex64, s: &str) -> Result<Complex64, String> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{s:?} must be a positive finite number"))
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct TauArgs {
    /// Modulus τ as RE+IMi, with IM > 0.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0+1i")]
    pub tau: Complex64,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub tau: TauArgs,
    /// Largest geodesic length.
    #[arg(long, value_parser = parse_positive, default_value = "3")]
    pub cutoff: f64,
    #[arg(long, value_enum, default_value = "full")]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Args)]
pub struct IsoArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub tau1: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub tau2: Complex64,
    /// Tolerance on reduced moduli.
    #[arg(long, value_parser = parse_positive, default_value = "1e-9")]
    pub tol: f64,
}

/// A rotation number, exact or floating.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ThetaInput {
    /// Exact surd (P + Q√D)/R.
    #[arg(long, num_args = 4, value_names = ["P", "Q", "R", "D"], allow_negative_numbers = true)]
    pub surd: Option<Vec<i64>>,
    /// Floating real number.
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub x: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ThetaArgs {
    #[command(flatten)]
    pub theta: ThetaInput,
    /// Number of quotients or indices to report.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=500))]
    pub depth: u32,
}

#[derive(Debug, Clone, Args)]
pub struct MoritaArgs {
    #[arg(long, num_args = 4, value_names = ["P", "Q", "R", "D"], allow_negative_numbers = true, conflicts_with = "x1")]
    pub surd1: Option<Vec<i64>>,
    #[arg(long, num_args = 4, value_names = ["P", "Q", "R", "D"], allow_negative_numbers = true, conflicts_with = "x2")]
    pub surd2: Option<Vec<i64>>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true, required_unless_present = "surd1")]
    pub x1: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true, required_unless_present = "surd2")]
    pub x2: Option<f64>,
    /// Quotients compared for floating input.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(4..=20))]
    pub depth: u32,
}

#[derive(Debug, Clone, Args)]
pub struct VmapArgs {
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// State scale ω.
    #[arg(long, value_parser = parse_positive, default_value = "1")]
    pub omega: f64,
    /// Weight family: `default` or `geometric:RHO`.
    #[arg(long, default_value = "default")]
    pub f_family: String,
}

#[derive(Debug, Clone, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub tau: TauArgs,
    #[arg(long, value_parser = parse_positive, default_value = "8")]
    pub cutoff: f64,
    /// Number of quotients to extract.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(4..=500))]
    pub depth: u32,
    /// Also compare with the image of τ under this determinant +1 matrix.
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
    pub matrix: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("modulus").required(true).args(["surd", "tau"])))]
pub struct CmArgs {
    /// Imaginary quadratic modulus (P + Q√D)/R, D < 0.
    #[arg(long, num_args = 4, value_names = ["P", "Q", "R", "D"], allow_negative_numbers = true)]
    pub surd: Option<Vec<i64>>,
    /// Floating modulus, treated as satisfying no quadratic relation.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub tau: Option<Complex64>,
    /// Largest norm of listed multipliers.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(i64).range(0..=10_000))]
    pub norm_bound: i64,
    /// Also run the pipeline and report periodicity evidence.
    #[arg(long)]
    pub evidence: bool,
    #[arg(long, value_parser = parse_positive, default_value = "10")]
    pub cutoff: f64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(4..=500))]
    pub depth: u32,
}

#[derive(Debug, Clone, Args)]
pub struct WeierstrassArgs {
    #[command(flatten)]
    pub tau: TauArgs,
    /// Half-width of the summation box.
    #[arg(long = "box", default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..=4096))]
    pub box_size: u32,
    /// Evaluation point for ℘.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "seed")]
    pub z: Option<Complex64>,
    /// Seed for a random evaluation point inside the fundamental cell.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum, default_value = "lattice")]
    pub kind: PlotKind,
    #[command(flatten)]
    pub tau: TauArgs,
    #[arg(long, value_parser = parse_positive, default_value = "3")]
    pub cutoff: f64,
    #[arg(long, value_enum, default_value = "primitive")]
    pub mode: ModeArg,
    /// Rotation number for the Klein plot (P + Q√D)/R.
    #[arg(long, num_args = 4, value_names = ["P", "Q", "R", "D"], allow_negative_numbers = true, conflicts_with = "x")]
    pub surd: Option<Vec<i64>>,
    /// Floating rotation number for the Klein plot.
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Klein index ν.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=60))]
    pub depth: u32,
}

//! The `tori` command line: argument parsing, dispatch to `tori-core`, and
//! JSON, text or SVG rendering of the results.

pub mod args;
pub mod report;
pub mod svg;
mod text;

use args::{Cli, Command, ModeArg, OutputFormat, PlotKind, ThetaInput};
use clap::Parser;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use report::*;
use serde::Serialize;
use tori_core::cm::{endomorphism_ring, multiplier_candidates, EndomorphismRing};
use tori_core::contfrac::{
    an_matrices, convergents, expand_real, expand_surd, klein_check, HeuristicConfig, MatchMode, DEFAULT_REAL_EPS,
};
use tori_core::correspondence::{cm_curvature_check, equivariance_check, torus_to_nctorus};
use tori_core::lattice::{isomorphic, reduce};
use tori_core::nctorus::{morita_equivalent_with, v_map, FFamily};
use tori_core::spectrum::{enumerate_with_limit, DEFAULT_MAX_ENTRIES};
use tori_core::weierstrass::{eisenstein, wp, CubicCurve};
use tori_core::{
    ContinuedFraction, Error, ExactModulus, Lattice, LengthSpectrum, Modulus, NcTorus, QuadraticIrrational,
    SpectrumMode, StateScale, UnimodularMatrix,
};

/// Environment variable overriding the enumeration limit.
pub const MAX_ENTRIES_VAR: &str = "TORI_MAX_ENTRIES";

/// Exit status and the two output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    /// Usage errors exit 2, domain errors exit 1.
    pub usage: bool,
    pub code: String,
    pub message: String,
}

impl Failure {
    fn usage(code: &str, message: impl Into<String>) -> Self {
        Self { usage: true, code: code.into(), message: message.into() }
    }

    fn exit_code(&self) -> i32 {
        if self.usage {
            2
        } else {
            1
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { usage: false, code: e.code().into(), message: e.to_string() }
    }
}

/// A core error raised while checking a flag value.
fn bad_flag(flag: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::usage(e.code(), format!("--{flag}: {e}"))
}

type Run<T> = std::result::Result<T, Failure>;

/// What a subcommand produced, before formatting.
enum Produced {
    Report(Report),
    /// A report whose natural rendering is an SVG document.
    Figure(Report, String),
}

/// Parses `argv` (program name first), runs it and captures the output.
pub fn run_args<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let text_errors = argv.windows(2).any(|w| w[0] == "--output" && w[1] == "text")
        || argv.iter().any(|a| a == "--output=text");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let failure = Failure::usage("usage", rendered.trim_end());
                failure_outcome(&failure, text_errors)
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    run(&cli)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let format = cli.output.unwrap_or(match cli.command {
        Command::Plot(_) => OutputFormat::Svg,
        _ => OutputFormat::Json,
    });
    let text_errors = format == OutputFormat::Text;
    match dispatch(&cli.command).and_then(|p| render(p, format)) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(f) => failure_outcome(&f, text_errors),
    }
}

fn failure_outcome(f: &Failure, text: bool) -> Outcome {
    let stderr = if text {
        format!("error [{}]: {}\n", f.code, f.message)
    } else {
        let body = serde_json::json!({ "error": f.code, "message": f.message });
        format!("{body}\n")
    };
    Outcome { code: f.exit_code(), stdout: String::new(), stderr }
}

fn render(p: Produced, format: OutputFormat) -> Run<String> {
    let (report, figure) = match p {
        Produced::Report(r) => (r, None),
        Produced::Figure(r, svg) => (r, Some(svg)),
    };
    match format {
        OutputFormat::Json => Ok(to_json(&Envelope { schema: SCHEMA, report })),
        OutputFormat::Text => {
            let value = serde_json::to_value(Envelope { schema: SCHEMA, report }).expect("reports serialize");
            Ok(text::render(&value))
        }
        OutputFormat::Svg => {
            figure.ok_or_else(|| Failure::usage("usage", "--output svg is available for plot, spectrum and klein"))
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn max_entries() -> Run<usize> {
    match std::env::var(MAX_ENTRIES_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::usage("usage", format!("{MAX_ENTRIES_VAR}={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_ENTRIES),
    }
}

fn modulus(flag: &str, tau: Complex64) -> Run<Modulus> {
    Modulus::new(tau).map_err(|_| Failure::usage("invalid_argument", format!("--{flag}: Im τ must be positive")))
}

fn mode(m: ModeArg) -> SpectrumMode {
    match m {
        ModeArg::Primitive => SpectrumMode::Primitive,
        ModeArg::Full => SpectrumMode::Full,
    }
}

fn surd(flag: &str, v: &[i64]) -> Run<(QuadraticIrrational, ThetaSource)> {
    let [p, q, r, d] = <[i64; 4]>::try_from(v).map_err(|_| Failure::usage("usage", format!("--{flag} takes P Q R D")))?;
    let x = QuadraticIrrational::new(p, q, r, d).map_err(bad_flag(flag))?;
    Ok((x, ThetaSource::Surd { p, q, r, d }))
}

fn real_surd(flag: &str, v: &[i64]) -> Run<(QuadraticIrrational, ThetaSource)> {
    let (x, src) = surd(flag, v)?;
    if !x.is_real() {
        return Err(Failure::usage("invalid_argument", format!("--{flag}: rotation number must be real (D > 0)")));
    }
    Ok((x, src))
}

/// The expansion of `θ`: exact for a surd, `depth` floating quotients otherwise.
fn theta_cf(input: &ThetaInput, depth: usize) -> Run<(ContinuedFraction, ThetaSource, f64, bool)> {
    match (&input.surd, input.x) {
        (Some(v), _) => {
            let (x, src) = real_surd("surd", v)?;
            Ok((expand_surd(&x)?, src, x.to_f64(), true))
        }
        (None, Some(x)) => Ok((expand_real(x, depth, DEFAULT_REAL_EPS)?, ThetaSource::Real { x }, x, false)),
        (None, None) => Err(Failure::usage("usage", "give --surd or --x")),
    }
}

fn nctorus(flag_surd: &str, flag_x: &str, s: Option<&Vec<i64>>, x: Option<f64>, depth: usize) -> Run<(NcTorus, ThetaSource)> {
    match (s, x) {
        (Some(v), _) => {
            let (x, src) = real_surd(flag_surd, v)?;
            Ok((NcTorus::exact(x)?, src))
        }
        (None, Some(x)) => Ok((NcTorus::approx(x, depth).map_err(bad_flag(flag_x))?, ThetaSource::Real { x })),
        (None, None) => Err(Failure::usage("usage", format!("give --{flag_surd} or --{flag_x}"))),
    }
}

/// Number of quotients available, at most `n`.
fn available(cf: &ContinuedFraction, n: usize) -> usize {
    cf.len().map_or(n, |l| l.min(n))
}

fn matrix_flag(flag: &str, v: &[i64]) -> Run<UnimodularMatrix> {
    let [a, b, c, d] = <[i64; 4]>::try_from(v).map_err(|_| Failure::usage("usage", format!("--{flag} takes A B C D")))?;
    let m = UnimodularMatrix::from_i64(a, b, c, d).map_err(bad_flag(flag))?;
    if m.det() != 1 {
        return Err(Failure::usage("not_unimodular", format!("--{flag}: determinant must be +1")));
    }
    Ok(m)
}

fn dispatch(cmd: &Command) -> Run<Produced> {
    use Produced::Report as R;
    Ok(match cmd {
        Command::Spectrum(a) => {
            let tau = modulus("tau", a.tau.tau)?;
            let lattice = Lattice::from_modulus(tau);
            let sp = enumerate_with_limit(&lattice, a.cutoff, mode(a.mode), max_entries()?)?;
            let figure = lattice_figure(&lattice, &sp)?;
            let report = Report::Spectrum(SpectrumReport {
                tau: a.tau.tau.into(),
                cutoff: a.cutoff,
                mode: sp.mode(),
                total: sp.total_count(),
                entries: sp.entries().to_vec(),
            });
            Produced::Figure(report, figure)
        }
        Command::Reduce(a) => {
            let r = reduce(modulus("tau", a.tau)?);
            R(Report::Reduce(ReduceReport { input: a.tau.into(), tau: r.modulus.tau().into(), matrix: r.matrix }))
        }
        Command::Iso(a) => {
            let hit = isomorphic(modulus("tau1", a.tau1)?, modulus("tau2", a.tau2)?, a.tol);
            R(Report::Iso(IsoReport {
                tau1: a.tau1.into(),
                tau2: a.tau2.into(),
                isomorphic: hit.is_some(),
                orientation: hit.as_ref().map(|h| h.orientation),
                matrix: hit.map(|h| h.matrix),
            }))
        }
        Command::Cf(a) => {
            let depth = a.depth as usize;
            let (cf, input, value, exact) = theta_cf(&a.theta, depth)?;
            R(Report::Cf(CfReport {
                input,
                value,
                exact,
                a0: cf.a0(),
                preperiod: cf.preperiod().to_vec(),
                period: cf.period().to_vec(),
                quotients: cf.prefix(depth),
            }))
        }
        Command::Convergents(a) => {
            let (cf, input, ..) = theta_cf(&a.theta, a.depth as usize)?;
            let n = available(&cf, a.depth as usize);
            R(Report::Convergents(ConvergentsReport { input, convergents: convergents(&cf, n)? }))
        }
        Command::Klein(a) => {
            let (cf, input, ..) = theta_cf(&a.theta, a.depth as usize)?;
            let n = available(&cf, a.depth as usize);
            let rows = (1..=n).map(|nu| klein_check(&cf, nu)).collect::<Result<Vec<_>, _>>()?;
            let figure = svg::klein_plot(&convergents(&cf, n)?, n);
            let report = Report::Klein(KleinReport { input, all_hold: rows.iter().all(|r| r.holds), rows });
            Produced::Figure(report, figure)
        }
        Command::Morita(a) => {
            let depth = a.depth as usize;
            let (t1, theta1) = nctorus("surd1", "x1", a.surd1.as_ref(), a.x1, depth)?;
            let (t2, theta2) = nctorus("surd2", "x2", a.surd2.as_ref(), a.x2, depth)?;
            let cfg = HeuristicConfig { depth, ..HeuristicConfig::default() };
            let w = morita_equivalent_with(&t1, &t2, cfg);
            let exact = match &w {
                Some(w) => w.mode == MatchMode::Exact,
                None => t1.is_exact() && t2.is_exact(),
            };
            R(Report::Morita(MoritaReport {
                theta1,
                theta2,
                equivalent: w.is_some(),
                shift: w.as_ref().map(|w| w.shift),
                exact,
                matrix: w.map(|w| w.matrix),
            }))
        }
        Command::Dimgroup(a) => {
            let (cf, input, ..) = theta_cf(&a.theta, a.depth as usize + 1)?;
            let n = available(&cf, a.depth as usize + 1) - 1;
            let rows = an_matrices(&cf, n)?
                .into_iter()
                .enumerate()
                .map(|(n, m)| DimgroupRow { n, trace: tori_core::JsonInt(m.trace()), matrix: m })
                .collect();
            R(Report::Dimgroup(DimgroupReport { input, rows }))
        }
        Command::Vmap(a) => {
            let family: FFamily = a.f_family.parse().map_err(bad_flag("f-family"))?;
            let scale = StateScale::new(a.omega).map_err(bad_flag("omega"))?;
            let depth = a.theta.depth as usize + 1;
            let (t, input) = nctorus("surd", "x", a.theta.theta.surd.as_ref(), a.theta.theta.x, depth)?;
            let n = available(t.cf(), depth) - 1;
            R(Report::Vmap(VmapReport {
                input,
                omega: a.omega,
                f_family: a.f_family.clone(),
                values: v_map(&t, scale, n, family)?,
            }))
        }
        Command::Curvature(a) => R(Report::Curvature(curvature(a)?)),
        Command::Cm(a) => R(Report::Cm(cm(a)?)),
        Command::Weierstrass(a) => R(Report::Weierstrass(weierstrass(a)?)),
        Command::Plot(a) => {
            let svg = match a.kind {
                PlotKind::Lattice => {
                    let lattice = Lattice::from_modulus(modulus("tau", a.tau.tau)?);
                    let sp = enumerate_with_limit(&lattice, a.cutoff, mode(a.mode), max_entries()?)?;
                    lattice_figure(&lattice, &sp)?
                }
                PlotKind::Klein => {
                    let input = ThetaInput { surd: a.surd.clone(), x: a.x };
                    let nu = a.depth as usize;
                    let (cf, ..) = theta_cf(&input, nu.max(2))?;
                    let n = available(&cf, nu);
                    svg::klein_plot(&convergents(&cf, n)?, n)
                }
            };
            let kind = match a.kind {
                PlotKind::Lattice => PlotKindOut::Lattice,
                PlotKind::Klein => PlotKindOut::Klein,
            };
            Produced::Figure(Report::Plot(PlotReport { kind, svg: svg.clone() }), svg)
        }
    })
}

/// Lattice figure with segments from `segments` and dots for every point.
fn lattice_figure(lattice: &Lattice, segments: &LengthSpectrum) -> Run<String> {
    let points = if segments.mode() == SpectrumMode::Full {
        segments.clone()
    } else {
        enumerate_with_limit(lattice, segments.cutoff(), SpectrumMode::Full, max_entries()?)?
    };
    Ok(svg::lattice_plot(lattice, &points, segments))
}

/// Label carried by every report that mentions the `ω` action.
pub const OMEGA_ACTION: &str = "interpretation: omega' = omega * |c*theta + d|";

fn curvature(a: &args::CurvatureArgs) -> Run<CurvatureReport> {
    let tau = modulus("tau", a.tau.tau)?;
    let depth = a.depth as usize;
    let matrix = a.matrix.as_deref().map(|v| matrix_flag("matrix", v)).transpose()?;
    let (c, equivariance) = match matrix {
        Some(m) => {
            let r = equivariance_check(tau, &m, a.cutoff, depth)?;
            let out = EquivarianceOut {
                image_tau: r.image.reduced.tau().into(),
                image_quotients: r.image.curvature.quotients(),
                matrix: m,
                tail: r.tail,
                tail_equivalent: r.tail_equivalent,
                heuristic: r.heuristic,
                omega_ratio: r.omega_ratio,
                orbit_witness: r.orbit_witness,
                omega_on_orbit: r.omega_on_orbit,
                omega_action: OMEGA_ACTION.into(),
            };
            (r.original, Some(out))
        }
        None => (torus_to_nctorus(tau, a.cutoff, depth)?, None),
    };
    let cv = c.curvature;
    Ok(CurvatureReport {
        tau: a.tau.tau.into(),
        reduced: c.reduced.tau().into(),
        cutoff: a.cutoff,
        theta: cv.theta_value,
        omega: cv.omega,
        quotients: cv.diagnostics.iter().map(|d| d.value).collect(),
        flagged: cv.diagnostics.iter().filter(|d| d.flagged).count(),
        cf: cv.theta_cf,
        diagnostics: cv.diagnostics,
        periodic_hint: cv.periodic_hint,
        equivariance,
    })
}

fn cm(a: &args::CmArgs) -> Run<CmReport> {
    let tau = match (&a.surd, a.tau) {
        (Some(v), _) => {
            let (x, _) = surd("surd", v)?;
            ExactModulus::quadratic(x).map_err(bad_flag("surd"))?
        }
        (None, Some(t)) => ExactModulus::generic(t).map_err(bad_flag("tau"))?,
        (None, None) => return Err(Failure::usage("usage", "give --surd or --tau")),
    };
    let ring = endomorphism_ring(&tau)?;
    let (multipliers, evidence) = match &ring {
        EndomorphismRing::Order(order) => {
            let evidence = if a.evidence {
                let r = cm_curvature_check(&tau, a.cutoff, a.depth as usize)?;
                Some(CmEvidence { quotients: r.correspondence.curvature.quotients(), periodic_hint: r.periodic_hint })
            } else {
                None
            };
            (multiplier_candidates(order, a.norm_bound), evidence)
        }
        EndomorphismRing::Integers => (Vec::new(), None),
    };
    Ok(CmReport { tau: tau.to_complex().into(), ring, multipliers, evidence })
}

fn weierstrass(a: &args::WeierstrassArgs) -> Run<WeierstrassReport> {
    let lattice = Lattice::from_modulus(modulus("tau", a.tau.tau)?);
    let box_size = a.box_size as usize;
    let g4 = eisenstein(&lattice, 2, box_size)?;
    let g6 = eisenstein(&lattice, 3, box_size)?;
    let curve = CubicCurve { a: -15.0 * g4, b: -35.0 * g6 };
    let (s, t) = match (a.z, a.seed) {
        (Some(z), _) => lattice.coordinates(z),
        (None, Some(seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (rng.random_range(0.1..0.9), rng.random_range(0.1..0.9))
        }
        (None, None) => (0.3, 0.4),
    };
    let z = a.z.unwrap_or_else(|| lattice.w1() * s + lattice.w2() * t);
    let v = wp(z, &lattice, box_size)?;
    Ok(WeierstrassReport {
        tau: a.tau.tau.into(),
        box_size,
        g4: g4.into(),
        g6: g6.into(),
        a: curve.a.into(),
        b: curve.b.into(),
        discriminant: curve.discriminant().into(),
        z: z.into(),
        wp: v.p.into(),
        wp_prime_half: v.p_prime_half.into(),
        residual: curve.residual(v.p, v.p_prime_half).norm(),
    })
}

/// Entry point shared by the binary.
pub fn main_with_args() -> i32 {
    let out = run_args(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

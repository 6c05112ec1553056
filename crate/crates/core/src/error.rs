use thiserror::Error;

/// Errors raised by every operation in this crate.
///
/// Each variant maps to a stable machine-readable code through [`Error::code`],
/// which front ends use when reporting failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is not finite: {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("radicand {0} is a perfect square, value is rational")]
    PerfectSquare(i64),
    #[error("surd has zero irrational part")]
    NotIrrational,
    #[error("partial quotient a0 = {0} must be positive")]
    NonPositiveQuotient(i64),
    #[error("need {needed} partial quotients, only {available} available")]
    InsufficientQuotients { needed: usize, available: usize },
    #[error("matrix determinant {0} is not +1 or -1")]
    NotUnimodular(String),
    #[error("fractional-linear denominator vanishes")]
    DegenerateDenominator,
    #[error("lattice basis vectors are linearly dependent over the reals")]
    CollinearBasis,
    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("lengths are not strictly increasing at position {0}")]
    NonMonotone(usize),
    #[error("zero length at position {0}")]
    ZeroLength(usize),
    #[error("enumeration would exceed the entry limit ({limit})")]
    ResourceLimit { limit: usize },
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("spectra are not comparable: {0}")]
    IncompatibleSpectra(String),
    #[error("cannot drop {drop} geodesics from a spectrum holding {available}")]
    TailTooLong { drop: usize, available: usize },
    #[error("lattice sum did not converge at box {box_size} (relative change {change:e})")]
    NotConverged { box_size: usize, change: f64 },
    #[error("point lies at distance {0:e} from the lattice, inside the pole guard")]
    NearLatticePoint(f64),
    #[error("elements live in different quadratic fields (d = {0} vs d = {1})")]
    FieldMismatch(i64, i64),
    #[error("real quadratic number is not a torus modulus")]
    RealQuadraticModulus,
    #[error("modulus has no complex multiplication")]
    NotCm,
    #[error("need at least {needed} lengths, got {available}")]
    TooFewLengths { needed: usize, available: usize },
    #[error("integer overflow: {0}")]
    Overflow(&'static str),
}

impl Error {
    /// Stable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "non_finite",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::PerfectSquare(_) => "perfect_square",
            Error::NotIrrational => "not_irrational",
            Error::NonPositiveQuotient(_) => "non_positive_quotient",
            Error::InsufficientQuotients { .. } => "insufficient_quotients",
            Error::NotUnimodular(_) => "not_unimodular",
            Error::DegenerateDenominator => "degenerate_denominator",
            Error::CollinearBasis => "collinear_basis",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::NonMonotone(_) => "non_monotone",
            Error::ZeroLength(_) => "zero_length",
            Error::ResourceLimit { .. } => "resource_limit",
            Error::EmptySpectrum => "empty_spectrum",
            Error::IncompatibleSpectra(_) => "incompatible_spectra",
            Error::TailTooLong { .. } => "tail_too_long",
            Error::NotConverged { .. } => "not_converged",
            Error::NearLatticePoint(_) => "near_lattice_point",
            Error::FieldMismatch(..) => "field_mismatch",
            Error::RealQuadraticModulus => "real_quadratic_modulus",
            Error::NotCm => "not_cm",
            Error::TooFewLengths { .. } => "too_few_lengths",
            Error::Overflow(_) => "overflow",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

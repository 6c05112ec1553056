//! Complex tori, noncommutative tori and the bridge between them.
//!
//! A lattice `L ⊂ C` is read through its length spectrum; successive lengths
//! are turned into partial quotients of a continued fraction, giving an
//! irrational rotation number `θ` and a scale `ω`. The modules here supply the
//! pieces: exact quadratic arithmetic and continued fractions ([`contfrac`]),
//! lattices and the modular group ([`lattice`]), length spectra
//! ([`spectrum`]), noncommutative-torus invariants ([`nctorus`]), complex
//! multiplication ([`cm`]), Weierstrass functions ([`weierstrass`]) and the
//! end-to-end pipeline ([`correspondence`]).

pub mod cm;
pub mod contfrac;
pub mod correspondence;
pub mod error;
mod int_serde;
pub mod lattice;
pub mod nctorus;
pub mod spectrum;
pub mod weierstrass;

pub use contfrac::{
    ContinuedFraction, Convergent, QuadElement, QuadraticIrrational, UnimodularMatrix,
};
pub use error::{Error, Result};
pub use int_serde::JsonInt;
pub use cm::{ExactModulus, QuadraticOrder};
pub use lattice::{Lattice, Modulus};
pub use nctorus::{NcTorus, StateScale};
pub use spectrum::{LengthSpectrum, SpectrumEntry, SpectrumMode};

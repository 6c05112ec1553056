//! Length spectra of flat tori.
//!
//! Closed geodesics of `C/L` through a base point correspond to nonzero
//! lattice vectors up to sign; a geodesic's length is the vector's modulus.
//! Spectra are kept as sorted multisets of lengths, each entry carrying the
//! homotopy classes `(m, n)` realizing it.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Entry limit for [`enumerate`].
pub const DEFAULT_MAX_ENTRIES: usize = 1_000_000;

/// Default tolerance on lengths.
pub const DEFAULT_LENGTH_TOL: f64 = 1e-9;

/// Lengths closer than this (relative) are treated as one entry.
const MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMode {
    /// Only primitive classes, `gcd(|m|, |n|) = 1`.
    Primitive,
    /// Every nonzero lattice vector.
    #[default]
    Full,
}

impl std::str::FromStr for SpectrumMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primitive" => Ok(Self::Primitive),
            "full" => Ok(Self::Full),
            other => Err(Error::InvalidArgument(format!("unknown spectrum mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub length: f64,
    pub multiplicity: usize,
    /// Classes `(m, n)` with `|mω₁ + nω₂| = length`, one per sign pair.
    /// Empty for synthetic spectra.
    pub classes: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSpectrum {
    entries: Vec<SpectrumEntry>,
    cutoff: f64,
    mode: SpectrumMode,
}

/// Lists every geodesic of length at most `cutoff`.
pub fn enumerate(lattice: &Lattice, cutoff: f64, mode: SpectrumMode) -> Result<LengthSpectrum> {
    enumerate_with_limit(lattice, cutoff, mode, DEFAULT_MAX_ENTRIES)
}

/// [`enumerate`] with an explicit bound on the number of geodesics.
///
/// For `ω = mω₁ + nω₂` the dual basis gives `|m| ≤ |ω|·|ω₂|/A` with `A` the
/// covolume, so scanning `m` over that range and solving the quadratic
/// inequality for `n` is complete.
pub fn enumerate_with_limit(
    lattice: &Lattice,
    cutoff: f64,
    mode: SpectrumMode,
    limit: usize,
) -> Result<LengthSpectrum> {
    if !cutoff.is_finite() {
        return Err(Error::NonFinite("cutoff"));
    }
    if cutoff <= 0.0 {
        return Err(Error::InvalidArgument("cutoff must be positive".into()));
    }
    let area = lattice.covolume();
    let m_max = (cutoff * lattice.w2().norm() / area).floor() + 1.0;
    // Rough count of half the lattice points in the disc.
    let estimate = std::f64::consts::PI * cutoff * cutoff / area / 2.0;
    if estimate > 2.0 * limit as f64 + 16.0 || m_max > 1e9 {
        return Err(Error::ResourceLimit { limit });
    }
    let m_max = m_max as i64;
    let (ga, gb, gc) = lattice.gram();
    let r2 = cutoff * cutoff;

    let mut raw: Vec<(f64, i64, i64)> = Vec::new();
    for m in 0..=m_max {
        let mf = m as f64;
        // gc n² + 2 gb m n + ga m² − r² ≤ 0
        let disc = (gb * mf).powi(2) - gc * (ga * mf * mf - r2);
        if disc < 0.0 {
            continue;
        }
        let root = disc.sqrt();
        let lo = ((-gb * mf - root) / gc).floor() as i64 - 1;
        let hi = ((-gb * mf + root) / gc).ceil() as i64 + 1;
        for n in lo..=hi {
            if m == 0 && n <= 0 {
                continue;
            }
            if mode == SpectrumMode::Primitive && m.gcd(&n) != 1 {
                continue;
            }
            let nf = n as f64;
            let q = ga * mf * mf + 2.0 * gb * mf * nf + gc * nf * nf;
            if q <= r2 {
                raw.push((q, m, n));
                if raw.len() > limit {
                    return Err(Error::ResourceLimit { limit });
                }
            }
        }
    }
    raw.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for (q, m, n) in raw {
        let length = q.sqrt();
        match entries.last_mut() {
            Some(e) if length - e.length <= MERGE_TOL * e.length.max(1.0) => {
                e.multiplicity += 1;
                e.classes.push((m, n));
            }
            _ => entries.push(SpectrumEntry { length, multiplicity: 1, classes: vec![(m, n)] }),
        }
    }
    for e in &mut entries {
        e.classes.sort_unstable();
    }
    Ok(LengthSpectrum { entries, cutoff, mode })
}

/// Result of [`LengthSpectrum::alpha_multiplicative`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicativityReport {
    /// Every length `l` with `ρl` below the cutoff reappears at `ρl` with at
    /// least the same multiplicity.
    pub submultiset: bool,
    /// The spectrum is exactly `B ∪ ρB ∪ ρ²B ∪ …` for its first block `B`.
    pub strict_blocks: bool,
    /// Number of geodesics in the first block when `strict_blocks` holds.
    pub block_size: Option<usize>,
}

impl LengthSpectrum {
    /// A spectrum assembled from explicit entries, e.g. a synthetic one.
    pub fn from_entries(entries: Vec<SpectrumEntry>, cutoff: f64, mode: SpectrumMode) -> Result<Self> {
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Error::InvalidArgument("cutoff must be positive".into()));
        }
        for (i, e) in entries.iter().enumerate() {
            if !(e.length > 0.0) || !e.length.is_finite() {
                return Err(Error::InvalidArgument(format!("entry {i} has non-positive length")));
            }
            if i > 0 && e.length <= entries[i - 1].length {
                return Err(Error::NonMonotone(i));
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidArgument(format!("entry {i} has zero multiplicity")));
            }
            if !e.classes.is_empty() && e.classes.len() != e.multiplicity {
                return Err(Error::InvalidArgument(format!("entry {i} lists {} classes for multiplicity {}", e.classes.len(), e.multiplicity)));
            }
        }
        Ok(Self { entries, cutoff, mode })
    }

    /// A spectrum with the given lengths, each of multiplicity one.
    pub fn from_lengths(lengths: &[f64], cutoff: f64) -> Result<Self> {
        let entries = lengths
            .iter()
            .map(|&length| SpectrumEntry { length, multiplicity: 1, classes: Vec::new() })
            .collect();
        Self::from_entries(entries, cutoff, SpectrumMode::Full)
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn mode(&self) -> SpectrumMode {
        self.mode
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of geodesics, counted with multiplicity.
    pub fn total_count(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Distinct lengths in increasing order.
    pub fn distinct_lengths(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.length).collect()
    }

    /// `a·Sp`: every length and the cutoff multiplied by `a`.
    pub fn scale(&self, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| SpectrumEntry { length: e.length * a, ..e.clone() })
            .collect();
        Ok(Self { entries, cutoff: self.cutoff * a, mode: self.mode })
    }

    /// `Sp_m`: drops the first `m − 1` geodesics, counted with multiplicity.
    /// Partially dropped entries lose their smallest classes first.
    pub fn tail(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("tail index starts at 1".into()));
        }
        let drop = m - 1;
        let available = self.total_count();
        if drop >= available && drop > 0 {
            return Err(Error::TailTooLong { drop, available });
        }
        let mut left = drop;
        let mut entries = Vec::new();
        for e in &self.entries {
            if left >= e.multiplicity {
                left -= e.multiplicity;
                continue;
            }
            let mut e = e.clone();
            e.multiplicity -= left;
            if !e.classes.is_empty() {
                e.classes.drain(..left);
            }
            left = 0;
            entries.push(e);
        }
        Ok(Self { entries, cutoff: self.cutoff, mode: self.mode })
    }

    pub fn systole(&self) -> Result<f64> {
        self.entries.first().map(|e| e.length).ok_or(Error::EmptySpectrum)
    }

    fn effective(&self, tol: f64) -> &[SpectrumEntry] {
        let end = self.entries.partition_point(|e| e.length < self.cutoff - tol);
        &self.entries[..end]
    }

    /// Multiset equality of `(length, multiplicity)` within `tol`.
    ///
    /// Entries within `tol` of the common cutoff are ignored on both sides,
    /// since rounding decides whether they were enumerated at all.
    pub fn equal(&self, other: &Self, tol: f64) -> Result<bool> {
        if self.mode != other.mode {
            return Err(Error::IncompatibleSpectra("modes differ".into()));
        }
        if (self.cutoff - other.cutoff).abs() > tol * self.cutoff.max(1.0) {
            return Err(Error::IncompatibleSpectra(format!(
                "cutoffs differ: {} vs {}",
                self.cutoff, other.cutoff
            )));
        }
        let (a, b) = (self.effective(tol), other.effective(tol));
        Ok(a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| {
                x.multiplicity == y.multiplicity && (x.length - y.length).abs() <= tol
            }))
    }

    fn find_length(&self, target: f64, tol: f64) -> Option<&SpectrumEntry> {
        let i = self.entries.partition_point(|e| e.length < target - tol);
        self.entries.get(i).filter(|e| (e.length - target).abs() <= tol)
    }

    /// Tests self-similarity of the spectrum under scaling by `rho > 1`.
    pub fn alpha_multiplicative(&self, rho: f64, tol: f64) -> Result<MultiplicativityReport> {
        if !(rho > 1.0) || !rho.is_finite() {
            return Err(Error::InvalidArgument("scaling ratio must exceed 1".into()));
        }
        let eff = self.effective(tol);
        let submultiset = eff
            .iter()
            .filter(|e| rho * e.length < self.cutoff - tol)
            .all(|e| {
                let target = rho * e.length;
                self.find_length(target, tol * target.max(1.0))
                    .is_some_and(|hit| hit.multiplicity >= e.multiplicity)
            });

        let strict = self.strict_block_size(eff, rho, tol);
        Ok(MultiplicativityReport {
            submultiset,
            strict_blocks: strict.is_some(),
            block_size: strict,
        })
    }

    fn strict_block_size(&self, eff: &[SpectrumEntry], rho: f64, tol: f64) -> Option<usize> {
        let first = eff.first()?.length;
        let block: Vec<&SpectrumEntry> = eff.iter().take_while(|e| e.length < rho * first - tol).collect();
        let limit = self.cutoff - tol;
        let mut expected: Vec<(f64, usize)> = Vec::new();
        let mut scale = 1.0;
        while first * scale < limit {
            for e in &block {
                let l = e.length * scale;
                if l < limit {
                    expected.push((l, e.multiplicity));
                }
            }
            scale *= rho;
        }
        expected.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, usize)> = Vec::new();
        for (l, m) in expected {
            match merged.last_mut() {
                Some(last) if (l - last.0).abs() <= tol * l.max(1.0) => last.1 += m,
                _ => merged.push((l, m)),
            }
        }
        let matches = merged.len() == eff.len()
            && merged
                .iter()
                .zip(eff)
                .all(|(x, e)| x.1 == e.multiplicity && (x.0 - e.length).abs() <= tol * x.0.max(1.0));
        matches.then(|| block.iter().map(|e| e.multiplicity).sum())
    }
}

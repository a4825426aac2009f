//! The material system: level energies, per-level linewidths, dipole matrix.
//!
//! Energies are angular frequencies (hbar = 1), so level energies and mode
//! frequencies share one unit. Phenomenological damping enters as a complex
//! level energy `E_b - i*gamma_b` inside resolvents; a global broadening
//! `eps` (an evaluation parameter, not a system property) adds to `gamma_b`
//! in every denominator.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::output;

/// A finite-level system with a Hermitian dipole operator.
///
/// Immutable after construction; all constructors validate the invariants
/// (Hermitian dipole, nonnegative linewidths, at least two levels).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSystem {
    labels: Vec<String>,
    energies: Vec<f64>,
    linewidths: Vec<f64>,
    dipole: Array2<C64>,
}

/// Dipole entries in spec documents are either plain numbers or `[re, im]`.
#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrPair {
    Num(f64),
    Pair([f64; 2]),
}

impl NumOrPair {
    fn to_c64(&self) -> C64 {
        match self {
            NumOrPair::Num(x) => C64::new(*x, 0.0),
            NumOrPair::Pair([re, im]) => C64::new(*re, *im),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    #[serde(default)]
    labels: Option<Vec<String>>,
    energies: Vec<f64>,
    #[serde(default)]
    linewidths: Option<Vec<f64>>,
    dipole: Vec<Vec<NumOrPair>>,
}

/// Default state labels: a, b, c, ... then s26, s27, ... past the alphabet.
fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("s{i}")
            }
        })
        .collect()
}

impl LevelSystem {
    /// Build and validate a system from its parts.
    pub fn new(
        labels: Option<Vec<String>>,
        energies: Vec<f64>,
        linewidths: Option<Vec<f64>>,
        dipole: Array2<C64>,
    ) -> Result<Self> {
        let n = energies.len();
        let labels = labels.unwrap_or_else(|| default_labels(n));
        let linewidths = linewidths.unwrap_or_else(|| vec![0.0; n]);
        LevelSystem {
            labels,
            energies,
            linewidths,
            dipole,
        }
        .validate()
    }

    /// Parse a system spec document (JSON).
    ///
    /// Keys: `labels` (optional), `energies`, `linewidths` (optional),
    /// `dipole` (N x N, entries either numbers or `[re, im]` pairs).
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemDoc = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("system spec: {e}")))?;
        let n = doc.energies.len();
        if doc.dipole.len() != n || doc.dipole.iter().any(|row| row.len() != n) {
            return Err(Error::Format(format!(
                "system spec: dipole must be {n}x{n} to match {n} energies"
            )));
        }
        let mut dipole = Array2::zeros((n, n));
        for (i, row) in doc.dipole.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                dipole[[i, j]] = entry.to_c64();
            }
        }
        LevelSystem::new(doc.labels, doc.energies, doc.linewidths, dipole)
    }

    /// Check all invariants, returning the system unchanged when they hold.
    ///
    /// Hermiticity is checked exactly: spec documents carry exact values.
    pub fn validate(self) -> Result<Self> {
        let n = self.energies.len();
        if n < 2 {
            return Err(Error::Invalid(format!(
                "system must have at least 2 levels, got {n}"
            )));
        }
        if self.labels.len() != n {
            return Err(Error::Invalid(format!(
                "{} labels for {} levels",
                self.labels.len(),
                n
            )));
        }
        if self.linewidths.len() != n {
            return Err(Error::Invalid(format!(
                "{} linewidths for {} levels",
                self.linewidths.len(),
                n
            )));
        }
        if let Some((i, g)) = self
            .linewidths
            .iter()
            .enumerate()
            .find(|(_, g)| !g.is_finite() || **g < 0.0)
        {
            return Err(Error::Invalid(format!(
                "negative linewidth {g} at level {i}"
            )));
        }
        if self.dipole.dim() != (n, n) {
            return Err(Error::Invalid(format!(
                "dipole shape {:?} does not match {n} levels",
                self.dipole.dim()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if self.dipole[[i, j]] != self.dipole[[j, i]].conj() {
                    return Err(Error::Invalid(format!(
                        "dipole not Hermitian: V[{i}][{j}] = {} but V[{j}][{i}] = {}",
                        self.dipole[[i, j]],
                        self.dipole[[j, i]]
                    )));
                }
            }
        }
        Ok(self)
    }

    /// Number of levels.
    pub fn num_levels(&self) -> usize {
        self.energies.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn linewidths(&self) -> &[f64] {
        &self.linewidths
    }

    pub fn energy(&self, level: usize) -> f64 {
        self.energies[level]
    }

    pub fn linewidth(&self, level: usize) -> f64 {
        self.linewidths[level]
    }

    pub fn dipole(&self) -> &Array2<C64> {
        &self.dipole
    }

    /// Largest |E_b| over the levels; sets the scale for singularity checks.
    pub fn max_abs_energy(&self) -> f64 {
        self.energies.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    /// Index of the lowest-energy level.
    pub fn ground_state(&self) -> usize {
        let mut idx = 0;
        for (i, e) in self.energies.iter().enumerate() {
            if *e < self.energies[idx] {
                idx = i;
            }
        }
        idx
    }

    /// Smallest nonzero spacing between level energies.
    pub fn min_level_gap(&self) -> f64 {
        let n = self.num_levels();
        let mut gap = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (self.energies[i] - self.energies[j]).abs();
                if d > 0.0 {
                    gap = gap.min(d);
                }
            }
        }
        gap
    }

    /// Render back to the spec-document schema with full float precision,
    /// so `from_json(to_json(sys))` reproduces the system exactly.
    pub fn to_json(&self) -> String {
        let n = self.num_levels();
        let labels = self
            .labels
            .iter()
            .map(|l| output::json_string(l))
            .collect::<Vec<_>>()
            .join(",");
        let energies = output::json_f64_array(&self.energies);
        let linewidths = output::json_f64_array(&self.linewidths);
        let rows = (0..n)
            .map(|i| {
                let entries = (0..n)
                    .map(|j| output::json_complex(self.dipole[[i, j]]))
                    .collect::<Vec<_>>()
                    .join(",");
                format!("[{entries}]")
            })
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{{\"labels\":[{labels}],\"energies\":{energies},\"linewidths\":{linewidths},\"dipole\":[{rows}]}}"
        )
    }
}

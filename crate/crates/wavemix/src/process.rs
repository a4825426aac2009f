//! The wave-mixing process: signed mode frequencies, photon occupations,
//! initial state, the on-shell constraint, and the field-strength prefactor.
//!
//! A process with `n + 1` modes describes an n-th order mixing signal. By
//! convention the last mode is the signal mode; in the canonical
//! sum-frequency process the first `n` modes are absorbed and the signal is
//! emitted with frequency equal to the sum of the incoming ones. Other sign
//! patterns (difference-frequency variants, several emitted modes) are
//! allowed; the canonical tests use exactly one emitted signal mode.

use serde::Deserialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::output;

/// Whether a mode's photon is absorbed (`+`) or emitted (`-`).
///
/// An absorbed photon contributes `+omega` to every energy argument it
/// enters; an emitted photon contributes `-omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One radiation mode taking part in the process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    /// Mode frequency, strictly positive (the sign is carried separately).
    pub omega: f64,
    /// Absorbed or emitted.
    pub sign: Sign,
    /// Initial photon occupation number.
    pub occupation: u64,
}

impl ModeSpec {
    pub fn absorbed(omega: f64, occupation: u64) -> Self {
        ModeSpec {
            omega,
            sign: Sign::Plus,
            occupation,
        }
    }

    pub fn emitted(omega: f64, occupation: u64) -> Self {
        ModeSpec {
            omega,
            sign: Sign::Minus,
            occupation,
        }
    }

    /// The signed frequency `sign * omega`.
    pub fn signed_omega(&self) -> f64 {
        self.sign.as_f64() * self.omega
    }
}

/// A complete wave-mixing process definition.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSpec {
    modes: Vec<ModeSpec>,
    initial_state: usize,
    quantization_volume: f64,
}

#[derive(Deserialize)]
struct ModeDoc {
    omega: f64,
    sign: String,
    n: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProcessDoc {
    modes: Vec<ModeDoc>,
    initial_state: usize,
    #[serde(default)]
    omega_quant_volume: Option<f64>,
}

impl ProcessSpec {
    /// Build and validate a process from its parts.
    ///
    /// The on-shell condition is *not* enforced here; it is checked by
    /// [`ProcessSpec::check_on_shell`] wherever evaluation requires it, so
    /// that scan templates may hold intermediate off-shell states.
    pub fn new(
        modes: Vec<ModeSpec>,
        initial_state: usize,
        quantization_volume: Option<f64>,
    ) -> Result<Self> {
        let quantization_volume = quantization_volume.unwrap_or(1.0);
        if modes.len() < 2 {
            return Err(Error::Invalid(format!(
                "process needs at least 2 modes, got {}",
                modes.len()
            )));
        }
        for (j, mode) in modes.iter().enumerate() {
            if !mode.omega.is_finite() || mode.omega <= 0.0 {
                return Err(Error::Invalid(format!(
                    "mode {j}: frequency must be positive, got {}",
                    mode.omega
                )));
            }
            if mode.sign == Sign::Plus && mode.occupation == 0 {
                return Err(Error::Invalid(format!(
                    "mode {j}: no photons to absorb (occupation 0 on an absorbed mode)"
                )));
            }
        }
        if !quantization_volume.is_finite() || quantization_volume <= 0.0 {
            return Err(Error::Invalid(format!(
                "quantization volume must be positive, got {quantization_volume}"
            )));
        }
        Ok(ProcessSpec {
            modes,
            initial_state,
            quantization_volume,
        })
    }

    /// Parse a process spec document (JSON).
    ///
    /// Keys: `modes` (array of `{omega, sign: "+"|"-", n}`), `initial_state`,
    /// `omega_quant_volume` (optional, default 1).
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProcessDoc = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("process spec: {e}")))?;
        let mut modes = Vec::with_capacity(doc.modes.len());
        for (j, m) in doc.modes.iter().enumerate() {
            let sign = match m.sign.as_str() {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                other => {
                    return Err(Error::Format(format!(
                        "process spec: mode {j}: sign must be \"+\" or \"-\", got {other:?}"
                    )))
                }
            };
            modes.push(ModeSpec {
                omega: m.omega,
                sign,
                occupation: m.n,
            });
        }
        ProcessSpec::new(modes, doc.initial_state, doc.omega_quant_volume)
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn initial_state(&self) -> usize {
        self.initial_state
    }

    pub fn quantization_volume(&self) -> f64 {
        self.quantization_volume
    }

    /// The mixing order `n` (one less than the number of modes).
    pub fn order(&self) -> usize {
        self.modes.len() - 1
    }

    /// Index of the signal mode (the last one, by convention).
    pub fn signal_index(&self) -> usize {
        self.modes.len() - 1
    }

    /// The signed frequencies `sign_j * omega_j` in mode order.
    pub fn signed_frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(ModeSpec::signed_omega).collect()
    }

    /// The energy-shell residual `sum_j sign_j * omega_j`.
    pub fn shell_residual(&self) -> f64 {
        self.modes.iter().map(ModeSpec::signed_omega).sum()
    }

    /// Default on-shell tolerance: 1e-9 relative to the largest frequency,
    /// absorbing rounding in user-entered values.
    pub fn default_shell_tol(&self) -> f64 {
        let max_omega = self.modes.iter().fold(0.0_f64, |m, x| m.max(x.omega));
        1e-9 * max_omega
    }

    /// Check the energy-conserving constraint `|sum_j sign_j omega_j| <= tol`.
    pub fn check_on_shell(&self, tol: f64) -> Result<()> {
        let residual = self.shell_residual();
        if residual.abs() <= tol {
            Ok(())
        } else {
            Err(Error::OffShell { residual, tol })
        }
    }

    /// The field-strength prefactor `A_fi`.
    ///
    /// Product of `sqrt(n_j)` over absorbed modes and `sqrt(n_j + 1)` over
    /// emitted modes, times `sqrt(prod_j omega_j)`, times
    /// `(2 pi / volume)^(count/2)` with hbar = 1. For four modes in unit
    /// volume this is `(2 pi)^2 sqrt(n1 n2 n3 (n4+1)) sqrt(w1 w2 w3 w4)`.
    pub fn amplitude_prefactor(&self) -> Result<f64> {
        let mut occ = 1.0;
        for (j, mode) in self.modes.iter().enumerate() {
            match mode.sign {
                Sign::Plus => {
                    if mode.occupation == 0 {
                        return Err(Error::Invalid(format!(
                            "mode {j}: no photons to absorb"
                        )));
                    }
                    occ *= mode.occupation as f64;
                }
                Sign::Minus => {
                    occ *= (mode.occupation + 1) as f64;
                }
            }
        }
        let freq: f64 = self.modes.iter().map(|m| m.omega).product();
        let field = (2.0 * PI / self.quantization_volume)
            .powf(self.modes.len() as f64 / 2.0);
        Ok(field * occ.sqrt() * freq.sqrt())
    }

    /// Render back to the spec-document schema with full float precision.
    pub fn to_json(&self) -> String {
        let modes = self
            .modes
            .iter()
            .map(|m| {
                format!(
                    "{{\"omega\":{},\"sign\":\"{}\",\"n\":{}}}",
                    output::fmt_f64(m.omega),
                    m.sign.glyph(),
                    m.occupation
                )
            })
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{{\"modes\":[{modes}],\"initial_state\":{},\"omega_quant_volume\":{}}}",
            self.initial_state,
            output::fmt_f64(self.quantization_volume)
        )
    }

}

/// The canonical sum-frequency process: `order` absorbed unit-occupation
/// modes followed by one emitted signal mode at the frequency sum.
pub fn sum_frequency_process(incoming: &[f64], initial_state: usize) -> Result<ProcessSpec> {
    let mut modes: Vec<ModeSpec> = incoming
        .iter()
        .map(|&w| ModeSpec::absorbed(w, 1))
        .collect();
    modes.push(ModeSpec::emitted(incoming.iter().sum(), 0));
    ProcessSpec::new(modes, initial_state, None)
}

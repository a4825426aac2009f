//! Error taxonomy shared across the crate.
//!
//! Validation and format problems map to process exit code 2 at the CLI;
//! numerical singularities (resolvent poles hit at zero broadening) map to
//! exit code 3.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A spec document could not be parsed (malformed JSON, wrong shape).
    #[error("format error: {0}")]
    Format(String),

    /// Input passed parsing but violates an invariant.
    #[error("{0}")]
    Invalid(String),

    /// The signed mode frequencies do not sum to zero within tolerance.
    #[error("off-shell residual {residual:.6e} exceeds tolerance {tol:.6e}")]
    OffShell { residual: f64, tol: f64 },

    /// A resolvent denominator fell below the singularity threshold.
    #[error(
        "singular resolvent at level {level} (|denominator| = {denom_abs:.3e}{})",
        singular_context(*term, *slot)
    )]
    Singular {
        level: usize,
        denom_abs: f64,
        slot: Option<usize>,
        term: Option<usize>,
    },

    /// Several terms of a sum hit poles at zero broadening.
    #[error("resonant terms at zero broadening: {terms:?}")]
    Resonant { terms: Vec<usize> },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn singular_context(term: Option<usize>, slot: Option<usize>) -> String {
    match (term, slot) {
        (Some(t), Some(s)) => format!(", term {t}, slot {s}"),
        (None, Some(s)) => format!(", slot {s}"),
        (Some(t), None) => format!(", term {t}"),
        (None, None) => String::new(),
    }
}

impl Error {
    /// Process exit code for the CLI: 2 for validation/format errors, 3 for
    /// numerical singularities.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Singular { .. } | Error::Resonant { .. } => 3,
            _ => 2,
        }
    }

    /// Attach slot provenance to a singularity error.
    pub(crate) fn with_slot(self, new_slot: usize) -> Self {
        match self {
            Error::Singular {
                level,
                denom_abs,
                term,
                ..
            } => Error::Singular {
                level,
                denom_abs,
                slot: Some(new_slot),
                term,
            },
            other => other,
        }
    }

}

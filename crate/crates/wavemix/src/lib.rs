//! Frequency-domain nonlinear wave mixing in finite-level quantum systems.
//!
//! This crate builds and evaluates the two closed Green's-function forms of an
//! n-wave mixing signal:
//!
//! - the *causal* susceptibility `chi(n)`, in which the signal interaction is
//!   chronologically last and the expansion mixes retarded and advanced
//!   resolvents (forward and backward branches of the closed time loop), and
//! - the *noncausal* scattering amplitude `S(n+1)`, in which all modes are
//!   treated symmetrically, every time ordering is summed, and only retarded
//!   resolvents appear.
//!
//! Both expansions contain `(n+1)!` terms; they agree off resonance when the
//! broadening is switched off, and differ by the sign of the damping in the
//! antiresonant denominators otherwise (the "constant sign" vs "opposite
//! sign" prescriptions of the linear Kramers-Heisenberg formula are the
//! `n = 1` special case).
//!
//! The main entry points:
//!
//! - [`system::LevelSystem`]: levels, linewidths, and the dipole matrix.
//! - [`process::ProcessSpec`]: signed mode frequencies, occupations, and the
//!   on-shell constraint.
//! - [`terms`]: symbolic expansion of both quantities into resolvent chains.
//! - [`eval`]: numeric evaluation of terms and totals.
//! - [`spectra`]: frequency scans, the two-level comparator, pole tables.
//! - [`oracle`]: an independent time-domain propagation cross-check.
//!
//! Runnable demonstrations of each capability live in `examples/`; the
//! `wavemix` binary exposes the same operations as subcommands.

pub mod cli;
pub mod error;
pub mod eval;
pub mod oracle;
pub mod output;
pub mod process;
pub mod sample;
pub mod spectra;
pub mod system;
pub mod terms;

pub use error::{Error, Result};
pub use eval::{eval_chi, eval_s, EvalParams, EvalResult};
pub use process::{ModeSpec, ProcessSpec, Sign};
pub use spectra::{kh_pair, pole_table, scan, PoleReport, ScanRecord};
pub use system::LevelSystem;
pub use terms::{expand_scattering, expand_susceptibility, Term, TermKind, TermList};

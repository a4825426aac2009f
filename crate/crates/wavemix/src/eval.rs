//! Numeric evaluation of terms and term lists: diagonal resolvents, dipole
//! chains `<a| V G(..) V ... V |a>`, and the assembled susceptibility and
//! scattering-amplitude values.
//!
//! Damping enters every denominator as `eps + gamma_b` where `eps` is the
//! global broadening from [`EvalParams`] and `gamma_b` the per-level
//! linewidth. The advanced resolvent flips the sign of the *full* damping,
//! keeping it the exact conjugate structure of the retarded one; this is
//! what produces the opposite-sign prescription in the causal expansion.

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::process::ProcessSpec;
use crate::system::LevelSystem;
use crate::terms::{cached_terms, FreqCombo, GreenKind, Term, TermKind, TermList};

/// Relative scale below which a resolvent denominator counts as singular.
const SINGULARITY_RELATIVE: f64 = 1e-14;

/// Evaluation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalParams {
    /// Global broadening added to every level linewidth inside resolvents.
    pub epsilon: f64,
    /// On-shell tolerance; `None` uses 1e-9 relative to the largest mode
    /// frequency.
    pub on_shell_tol: Option<f64>,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams {
            epsilon: 0.0,
            on_shell_tol: None,
        }
    }
}

impl EvalParams {
    pub fn with_epsilon(epsilon: f64) -> Self {
        EvalParams {
            epsilon,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::Invalid(format!(
                "broadening epsilon must be >= 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    fn shell_tol(&self, proc: &ProcessSpec) -> f64 {
        self.on_shell_tol.unwrap_or_else(|| proc.default_shell_tol())
    }
}

/// The value of an assembled quantity, with term-by-term provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    /// Sum of the per-term values, accumulated in ascending term id order.
    pub total: C64,
    /// `(term id, value)` pairs, ascending id.
    pub per_term: Vec<(usize, C64)>,
    /// The field-strength prefactor `A_fi`, reported separately and never
    /// multiplied into `total`.
    pub prefactor: f64,
}

/// The energy argument of a factor: `E_a` plus the included signed
/// frequencies, summed in ascending mode order for reproducibility.
pub fn argument_energy(sys: &LevelSystem, proc: &ProcessSpec, combo: &FreqCombo) -> f64 {
    let signed = proc.signed_frequencies();
    let mut arg = sys.energy(proc.initial_state());
    for mode in combo.modes() {
        arg += signed[mode];
    }
    arg
}

/// Apply the diagonal resolvent `1 / (E - H +/- i(eps + gamma))` to a vector.
///
/// Component b of the result is `vec_b / (e_arg - E_b +/- i(eps + gamma_b))`
/// with `+` for retarded and `-` for advanced. Errors when any denominator
/// has modulus below `1e-14 * max(|E_b|, |e_arg|)`.
pub fn resolvent_apply(
    sys: &LevelSystem,
    e_arg: f64,
    kind: GreenKind,
    eps: f64,
    vec: &Array1<C64>,
) -> Result<Array1<C64>> {
    if vec.len() != sys.num_levels() {
        return Err(Error::Invalid(format!(
            "vector length {} does not match {} levels",
            vec.len(),
            sys.num_levels()
        )));
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Invalid(format!("broadening must be >= 0, got {eps}")));
    }
    let scale = sys.max_abs_energy().max(e_arg.abs());
    let threshold = SINGULARITY_RELATIVE * if scale > 0.0 { scale } else { 1.0 };
    let damping_sign = match kind {
        GreenKind::Retarded => 1.0,
        GreenKind::Advanced => -1.0,
    };
    let mut out = Array1::zeros(vec.len());
    for (b, component) in vec.iter().enumerate() {
        let denom = C64::new(
            e_arg - sys.energy(b),
            damping_sign * (eps + sys.linewidth(b)),
        );
        if denom.norm() < threshold {
            return Err(Error::Singular {
                level: b,
                denom_abs: denom.norm(),
                slot: None,
                term: None,
            });
        }
        out[b] = component / denom;
    }
    Ok(out)
}

fn basis_vector(n: usize, index: usize) -> Array1<C64> {
    let mut v = Array1::zeros(n);
    v[index] = C64::new(1.0, 0.0);
    v
}

fn check_process(sys: &LevelSystem, proc: &ProcessSpec) -> Result<()> {
    if proc.initial_state() >= sys.num_levels() {
        return Err(Error::Invalid(format!(
            "initial state {} out of range for {} levels",
            proc.initial_state(),
            sys.num_levels()
        )));
    }
    Ok(())
}

fn eval_term_raw(
    sys: &LevelSystem,
    proc: &ProcessSpec,
    term: &Term,
    eps: f64,
) -> Result<C64> {
    let a = proc.initial_state();
    let dipole = sys.dipole();
    let mut state = dipole.dot(&basis_vector(sys.num_levels(), a));
    for (slot, factor) in term.factors.iter().enumerate() {
        let e_arg = argument_energy(sys, proc, &factor.argument);
        state = resolvent_apply(sys, e_arg, factor.kind, eps, &state)
            .map_err(|e| e.with_slot(slot))?;
        state = dipole.dot(&state);
    }
    Ok(state[a])
}

/// Evaluate a single term for a given system and on-shell process.
///
/// The chain runs right to left: the basis vector of the initial state,
/// alternating dipole applications and resolvents, one final dipole
/// application, then projection back onto the initial state.
pub fn eval_term(
    sys: &LevelSystem,
    proc: &ProcessSpec,
    term: &Term,
    params: &EvalParams,
) -> Result<C64> {
    params.validate()?;
    check_process(sys, proc)?;
    proc.check_on_shell(params.shell_tol(proc))?;
    if term.factors.len() != proc.order() {
        return Err(Error::Invalid(format!(
            "term of order {} does not match process of order {}",
            term.factors.len(),
            proc.order()
        )));
    }
    eval_term_raw(sys, proc, term, params.epsilon)
}

fn eval_list(
    sys: &LevelSystem,
    proc: &ProcessSpec,
    list: &TermList,
    params: &EvalParams,
) -> Result<EvalResult> {
    params.validate()?;
    check_process(sys, proc)?;
    proc.check_on_shell(params.shell_tol(proc))?;
    let mut per_term = Vec::with_capacity(list.terms.len());
    let mut resonant = Vec::new();
    for (id, term) in list.terms.iter().enumerate() {
        match eval_term_raw(sys, proc, term, params.epsilon) {
            Ok(value) => per_term.push((id, value)),
            Err(Error::Singular { .. }) => resonant.push(id),
            Err(other) => return Err(other),
        }
    }
    if !resonant.is_empty() {
        return Err(Error::Resonant { terms: resonant });
    }
    let total = per_term
        .iter()
        .fold(C64::new(0.0, 0.0), |acc, (_, v)| acc + v);
    Ok(EvalResult {
        total,
        per_term,
        prefactor: proc.amplitude_prefactor()?,
    })
}

/// Evaluate the causal susceptibility chi(n) for an on-shell process.
pub fn eval_chi(sys: &LevelSystem, proc: &ProcessSpec, params: &EvalParams) -> Result<EvalResult> {
    let list = cached_terms(TermKind::Causal, proc.order());
    eval_list(sys, proc, &list, params)
}

/// Evaluate the noncausal scattering amplitude S(n+1) for an on-shell
/// process.
pub fn eval_s(sys: &LevelSystem, proc: &ProcessSpec, params: &EvalParams) -> Result<EvalResult> {
    let list = cached_terms(TermKind::Noncausal, proc.order());
    eval_list(sys, proc, &list, params)
}

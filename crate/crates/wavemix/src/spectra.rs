//! Frequency sweeps, the two-level Kramers-Heisenberg comparator, and pole
//! tabulation.
//!
//! `kh_pair` is written straight from the explicit two-level formulas and
//! deliberately bypasses the term-expansion machinery, so it serves as an
//! independent cross-check of the generic pipeline in the linear limit.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::eval::{argument_energy, eval_chi, eval_s, EvalParams};
use crate::process::{ModeSpec, ProcessSpec, Sign};
use crate::system::LevelSystem;
use crate::terms::{cached_terms, GreenKind, TermKind};

/// One grid point of a frequency sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    /// The varied value at this grid point.
    pub grid: f64,
    /// Causal susceptibility total (NaN when flagged).
    pub chi: C64,
    /// Noncausal scattering-amplitude total (NaN when flagged).
    pub s: C64,
    /// `chi - s`, exactly as evaluated.
    pub diff: C64,
    /// The broadening used.
    pub eps: f64,
    /// Set when this grid point hit an exact resolvent pole instead of
    /// producing values.
    pub flagged: bool,
}

/// What a scan grid varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Varied {
    /// Grid values replace the frequency of one mode.
    Mode(usize),
    /// Grid values are a common detuning added to every incoming mode's
    /// template frequency.
    Detuning,
}

/// Which mode is re-solved to keep the process on shell at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveFor {
    /// Recompute the signal frequency (the last mode). Matches scanning a
    /// sum-frequency experiment.
    Signal,
    /// Hold the signal fixed and recompute one input mode instead.
    Mode(usize),
}

fn solved_process(
    template: &ProcessSpec,
    varied: Varied,
    value: f64,
    solve: SolveFor,
) -> Result<ProcessSpec> {
    let mut modes = template.modes().to_vec();
    match varied {
        Varied::Mode(k) => {
            if k >= modes.len() {
                return Err(Error::Invalid(format!(
                    "varied mode {k} out of range for {} modes",
                    modes.len()
                )));
            }
            modes[k].omega = value;
        }
        Varied::Detuning => {
            let signal = template.signal_index();
            for (j, mode) in modes.iter_mut().enumerate() {
                if j != signal {
                    mode.omega += value;
                }
            }
        }
    }
    let target = match solve {
        SolveFor::Signal => template.signal_index(),
        SolveFor::Mode(k) => k,
    };
    if target >= modes.len() {
        return Err(Error::Invalid(format!(
            "solve target {target} out of range for {} modes",
            modes.len()
        )));
    }
    if let (Varied::Mode(k), SolveFor::Mode(t)) = (varied, solve) {
        if k == t {
            return Err(Error::Invalid(format!(
                "cannot both vary and solve for mode {k}"
            )));
        }
    }
    let others: f64 = modes
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != target)
        .map(|(_, m)| m.signed_omega())
        .sum();
    let solved_omega = modes[target].sign.as_f64() * (-others);
    if !solved_omega.is_finite() || solved_omega <= 0.0 {
        return Err(Error::Invalid(format!(
            "grid value {value} forces mode {target} to nonpositive frequency {solved_omega}"
        )));
    }
    modes[target].omega = solved_omega;
    ProcessSpec::new(
        modes,
        template.initial_state(),
        Some(template.quantization_volume()),
    )
}

/// Sweep a frequency grid, evaluating both quantities at every point.
///
/// At each grid point the varied frequency is substituted and the `solve`
/// target re-solved so the process stays exactly on shell. Points that hit
/// a resolvent pole (possible at zero broadening) are flagged rather than
/// fatal; their values are NaN.
pub fn scan(
    sys: &LevelSystem,
    template: &ProcessSpec,
    varied: Varied,
    grid: &[f64],
    params: &EvalParams,
    solve: SolveFor,
) -> Result<Vec<ScanRecord>> {
    let nan = C64::new(f64::NAN, f64::NAN);
    let mut records = Vec::with_capacity(grid.len());
    for &value in grid {
        let proc = solved_process(template, varied, value, solve)?;
        proc.check_on_shell(params.on_shell_tol.unwrap_or_else(|| proc.default_shell_tol()))?;
        let chi = eval_chi(sys, &proc, params);
        let s = eval_s(sys, &proc, params);
        let record = match (chi, s) {
            (Ok(chi), Ok(s)) => ScanRecord {
                grid: value,
                chi: chi.total,
                s: s.total,
                diff: chi.total - s.total,
                eps: params.epsilon,
                flagged: false,
            },
            (Err(Error::Singular { .. }) | Err(Error::Resonant { .. }), _)
            | (_, Err(Error::Singular { .. }) | Err(Error::Resonant { .. })) => ScanRecord {
                grid: value,
                chi: nan,
                s: nan,
                diff: nan,
                eps: params.epsilon,
                flagged: true,
            },
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        records.push(record);
    }
    Ok(records)
}

/// The explicit two-level Kramers-Heisenberg pair.
///
/// Returns `(s_value, chi_value)`:
///
/// ```text
/// s_value   = |V01|^2 [ 1/(E0 + w - E1 + i eps) + 1/(E0 - w - E1 + i eps) ]
/// chi_value = |V01|^2 [ 1/(E0 + w - E1 + i eps) + 1/(E0 - w - E1 - i eps) ]
/// ```
///
/// the "constant sign" and "opposite sign" prescriptions respectively.
/// Level 0 is the ground state, level 1 the excited state; diagonal dipole
/// elements do not enter these textbook formulas.
pub fn kh_pair(sys: &LevelSystem, omega: f64, eps: f64) -> Result<(C64, C64)> {
    if sys.num_levels() != 2 {
        return Err(Error::Invalid(format!(
            "kh_pair needs a two-level system, got {} levels",
            sys.num_levels()
        )));
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Invalid(format!("broadening must be >= 0, got {eps}")));
    }
    let v2 = sys.dipole()[[0, 1]].norm_sqr();
    let e0 = sys.energy(0);
    let e1 = sys.energy(1);
    let resonant = C64::new(e0 + omega - e1, eps);
    let anti_plus = C64::new(e0 - omega - e1, eps);
    let anti_minus = C64::new(e0 - omega - e1, -eps);
    let s_value = v2 * (1.0 / resonant + 1.0 / anti_plus);
    let chi_value = v2 * (1.0 / resonant + 1.0 / anti_minus);
    Ok((s_value, chi_value))
}

/// Which half of the complex frequency plane a pole sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

/// One pole of one factor: the factor at `slot` hits level `level` when the
/// newly added mode's signed frequency equals `pole`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleEntry {
    pub slot: usize,
    pub level: usize,
    pub pole: C64,
    pub half_plane: HalfPlane,
}

/// Pole locations for every term of an expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleReport {
    pub kind: TermKind,
    pub order: usize,
    /// One entry list per term, term id ascending.
    pub terms: Vec<Vec<PoleEntry>>,
}

/// Tabulate the poles of every factor of every term.
///
/// Each slot adds exactly one mode to the cumulative argument; solving the
/// affine argument for that mode's signed frequency at each level energy
/// gives one pole family per (slot, level):
///
/// ```text
/// s_pole = (E_b -/+ i(eps + gamma_b)) - (argument without the new mode)
/// ```
///
/// Retarded factors put every pole in the lower half-plane of the varied
/// signed frequency, advanced factors (the backward branch of the time
/// loop) in the upper half-plane. Requires nonzero damping so no pole sits
/// on the real axis.
pub fn pole_table(
    kind: TermKind,
    sys: &LevelSystem,
    proc: &ProcessSpec,
    eps: f64,
) -> Result<PoleReport> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Invalid(format!("broadening must be >= 0, got {eps}")));
    }
    let damped = eps > 0.0 || sys.linewidths().iter().all(|g| *g > 0.0);
    if !damped {
        return Err(Error::Invalid(
            "pole classification needs eps > 0 or all linewidths > 0".into(),
        ));
    }
    if proc.initial_state() >= sys.num_levels() {
        return Err(Error::Invalid(format!(
            "initial state {} out of range for {} levels",
            proc.initial_state(),
            sys.num_levels()
        )));
    }
    let order = proc.order();
    let list = cached_terms(kind, order);
    let signed = proc.signed_frequencies();
    let mut terms = Vec::with_capacity(list.terms.len());
    for term in &list.terms {
        let mut entries = Vec::with_capacity(term.factors.len() * sys.num_levels());
        for (slot, factor) in term.factors.iter().enumerate() {
            // The argument minus the newly added mode's signed frequency.
            let new_mode = term.permutation[slot];
            let rest = argument_energy(sys, proc, &factor.argument) - signed[new_mode];
            let damping_sign = match factor.kind {
                GreenKind::Retarded => -1.0,
                GreenKind::Advanced => 1.0,
            };
            for level in 0..sys.num_levels() {
                let pole = C64::new(
                    sys.energy(level) - rest,
                    damping_sign * (eps + sys.linewidth(level)),
                );
                let half_plane = if pole.im > 0.0 {
                    HalfPlane::Upper
                } else {
                    HalfPlane::Lower
                };
                entries.push(PoleEntry {
                    slot,
                    level,
                    pole,
                    half_plane,
                });
            }
        }
        terms.push(entries);
    }
    Ok(PoleReport {
        kind,
        order,
        terms,
    })
}

impl PoleReport {
    /// Number of slots of one term whose pole family lies in the upper
    /// half-plane.
    pub fn upper_slot_count(&self, term: usize) -> usize {
        let mut slots: Vec<usize> = self.terms[term]
            .iter()
            .filter(|e| e.half_plane == HalfPlane::Upper)
            .map(|e| e.slot)
            .collect();
        slots.sort_unstable();
        slots.dedup();
        slots.len()
    }
}

/// Build the two-level Rayleigh process (one absorbed, one emitted photon
/// at the same frequency).
pub fn rayleigh_process(omega: f64) -> Result<ProcessSpec> {
    ProcessSpec::new(
        vec![
            ModeSpec {
                omega,
                sign: Sign::Plus,
                occupation: 1,
            },
            ModeSpec {
                omega,
                sign: Sign::Minus,
                occupation: 0,
            },
        ],
        0,
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level() -> LevelSystem {
        LevelSystem::from_json(r#"{"energies":[0,1],"dipole":[[0,1],[1,0]]}"#).unwrap()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn kh_values_match_direct_arithmetic() {
        let sys = two_level();
        let (s, chi) = kh_pair(&sys, 0.5, 0.1).unwrap();
        assert!(close(s, C64::new(-2.586794, -0.428863), 1e-5), "{s}");
        assert!(close(chi, C64::new(-2.586794, -0.340367), 1e-5), "{chi}");
    }

    #[test]
    fn kh_at_zero_frequency_is_real() {
        let sys = two_level();
        let (_, chi) = kh_pair(&sys, 0.0, 0.1).unwrap();
        assert!(chi.im.abs() < 1e-15);
        assert!((chi.re - (-1.980198)).abs() < 1e-5, "{chi}");
    }

    #[test]
    fn kh_zero_dipole_gives_zero_pair() {
        let sys = LevelSystem::from_json(r#"{"energies":[0,1],"dipole":[[0,0],[0,0]]}"#).unwrap();
        let (s, chi) = kh_pair(&sys, 0.5, 0.1).unwrap();
        assert_eq!(s, C64::new(0.0, 0.0));
        assert_eq!(chi, C64::new(0.0, 0.0));
    }

    #[test]
    fn kh_rejects_other_sizes() {
        let sys = LevelSystem::from_json(
            r#"{"energies":[0,1,2],"dipole":[[0,1,0],[1,0,1],[0,1,0]]}"#,
        )
        .unwrap();
        assert!(kh_pair(&sys, 0.5, 0.1).is_err());
    }

    #[test]
    fn kh_agrees_with_generic_pipeline_to_machine_precision() {
        let sys = two_level();
        for &(omega, eps) in &[(0.5, 0.1), (0.3, 0.05), (0.9, 0.2), (1.7, 0.01)] {
            let (s_direct, chi_direct) = kh_pair(&sys, omega, eps).unwrap();
            let proc = rayleigh_process(omega).unwrap();
            let params = EvalParams::with_epsilon(eps);
            let s = eval_s(&sys, &proc, &params).unwrap().total;
            let chi = eval_chi(&sys, &proc, &params).unwrap().total;
            assert!(
                (s - s_direct).norm() <= 1e-14 * s_direct.norm(),
                "omega {omega}: {s} vs {s_direct}"
            );
            assert!(
                (chi - chi_direct).norm() <= 1e-14 * chi_direct.norm(),
                "omega {omega}: {chi} vs {chi_direct}"
            );
        }
    }

    #[test]
    fn scan_reproduces_the_rayleigh_point() {
        let sys = two_level();
        let template = rayleigh_process(0.4).unwrap();
        let records = scan(
            &sys,
            &template,
            Varied::Mode(0),
            &[0.5],
            &EvalParams::with_epsilon(0.1),
            SolveFor::Signal,
        )
        .unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert!(!r.flagged);
        assert!(close(r.chi, C64::new(-2.586794, -0.340367), 1e-5));
        assert!(close(r.s, C64::new(-2.586794, -0.428863), 1e-5));
        assert_eq!(r.diff, r.chi - r.s);
    }

    #[test]
    fn scan_diff_vanishes_at_zero_broadening() {
        let sys = two_level();
        let template = rayleigh_process(0.4).unwrap();
        let records = scan(
            &sys,
            &template,
            Varied::Mode(0),
            &[0.3, 0.5, 0.7],
            &EvalParams::default(),
            SolveFor::Signal,
        )
        .unwrap();
        for r in &records {
            assert!(r.diff.norm() <= 1e-12 * r.s.norm(), "{:?}", r);
        }
    }

    #[test]
    fn scan_flags_pole_points_instead_of_failing() {
        let sys = two_level();
        let template = rayleigh_process(0.4).unwrap();
        let records = scan(
            &sys,
            &template,
            Varied::Mode(0),
            &[0.5, 1.0, 1.5],
            &EvalParams::default(),
            SolveFor::Signal,
        )
        .unwrap();
        assert!(!records[0].flagged);
        assert!(records[1].flagged, "grid point on the level gap");
        assert!(records[1].chi.re.is_nan());
        assert!(!records[2].flagged);
    }

    #[test]
    fn scan_diff_decreases_with_broadening() {
        let sys = two_level();
        let template = rayleigh_process(0.4).unwrap();
        let mut norms = Vec::new();
        for eps in [1e-1, 1e-2, 1e-3] {
            let records = scan(
                &sys,
                &template,
                Varied::Mode(0),
                &[0.5],
                &EvalParams::with_epsilon(eps),
                SolveFor::Signal,
            )
            .unwrap();
            norms.push(records[0].diff.norm());
        }
        assert!(norms[0] > norms[1] && norms[1] > norms[2], "{norms:?}");
    }

    #[test]
    fn scan_can_solve_an_input_mode_instead() {
        let sys = two_level();
        // Fixed signal at 0.9; varying mode 0 re-solves mode 1.
        let template = ProcessSpec::new(
            vec![
                ModeSpec::absorbed(0.4, 1),
                ModeSpec::absorbed(0.5, 1),
                ModeSpec::emitted(0.9, 0),
            ],
            0,
            None,
        )
        .unwrap();
        let records = scan(
            &sys,
            &template,
            Varied::Mode(0),
            &[0.3],
            &EvalParams::with_epsilon(0.05),
            SolveFor::Mode(1),
        )
        .unwrap();
        assert!(!records[0].flagged);

        let err = scan(
            &sys,
            &template,
            Varied::Mode(0),
            &[1.0], // would force mode 1 to frequency -0.1
            &EvalParams::with_epsilon(0.05),
            SolveFor::Mode(1),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invalid(_)), "{err}");
    }

    #[test]
    fn linear_pole_table_splits_half_planes() {
        let sys = two_level();
        let proc = rayleigh_process(0.5).unwrap();
        let report = pole_table(TermKind::Causal, &sys, &proc, 0.1).unwrap();
        assert_eq!(report.terms.len(), 2);
        // m = 0 term: retarded, poles at E_b - rest - i eps (lower).
        let resonant_pole = report.terms[0]
            .iter()
            .find(|e| e.level == 1)
            .unwrap();
        assert_eq!(resonant_pole.half_plane, HalfPlane::Lower);
        assert!(close(resonant_pole.pole, C64::new(1.0, -0.1), 1e-12));
        // m = 1 term: advanced, pole in the upper half-plane.
        let anti_pole = report.terms[1]
            .iter()
            .find(|e| e.level == 1)
            .unwrap();
        assert_eq!(anti_pole.half_plane, HalfPlane::Upper);
        assert!(close(anti_pole.pole, C64::new(1.0, 0.1), 1e-12));

        let s_report = pole_table(TermKind::Noncausal, &sys, &proc, 0.1).unwrap();
        for term in &s_report.terms {
            for entry in term {
                assert_eq!(entry.half_plane, HalfPlane::Lower);
            }
        }
    }

    #[test]
    fn pole_table_requires_damping() {
        let sys = two_level();
        let proc = rayleigh_process(0.5).unwrap();
        assert!(pole_table(TermKind::Causal, &sys, &proc, 0.0).is_err());
    }

    #[test]
    fn upper_slot_counts_equal_basic_index() {
        let sys = two_level();
        let proc = ProcessSpec::new(
            vec![
                ModeSpec::absorbed(0.31, 1),
                ModeSpec::absorbed(0.47, 1),
                ModeSpec::absorbed(0.62, 1),
                ModeSpec::emitted(1.4, 0),
            ],
            0,
            None,
        )
        .unwrap();
        let report = pole_table(TermKind::Causal, &sys, &proc, 0.05).unwrap();
        let list = cached_terms(TermKind::Causal, 3);
        for (id, term) in list.terms.iter().enumerate() {
            assert_eq!(report.upper_slot_count(id), term.basic_index.unwrap());
        }
    }
}

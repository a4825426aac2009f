//! Cross-checking the evaluator against driven time-domain dynamics.
//!
//! Propagates the wavefunction under weak classical cosine drives with
//! per-level damping, projects the polarization onto the signal frequency,
//! and compares the normalized estimate against the frequency-domain
//! susceptibility. Drive frequencies sit on a 0.01 grid and the window is
//! a whole number of beat periods, so the projection is exact up to
//! discretization.
//!
//! Run with `cargo run --release -p wavemix --example time_domain_check`.

use std::f64::consts::PI;

use wavemix::eval::{eval_chi, EvalParams};
use wavemix::oracle::{oracle_chi, ClassicalField, OracleParams};
use wavemix::process::ProcessSpec;
use wavemix::spectra::rayleigh_process;
use wavemix::system::LevelSystem;

/// Round dt so the window is a whole number of steps and the transient a
/// whole number of dt.
fn grid_params(dt_target: f64, t_transient: f64, t_window: f64) -> OracleParams {
    let steps = (t_window / dt_target).round();
    let dt = t_window / steps;
    OracleParams {
        dt,
        t_transient: (t_transient / dt).round() * dt,
        t_window,
        integrator_order: 4,
    }
}

fn main() {
    // Linear response of a damped two-level system.
    let sys = LevelSystem::from_json(include_str!("data/twolevel_damped.json")).unwrap();
    let proc = rayleigh_process(0.5).unwrap();
    let fields = [ClassicalField {
        amplitude: 2e-3,
        omega: 0.5,
    }];
    let params = grid_params(0.02, 300.0, 90.0 * PI);
    let estimate = oracle_chi(&sys, &proc, &fields, &params).unwrap();
    let reference = eval_chi(&sys, &proc, &EvalParams::default()).unwrap().total;
    let rel = (estimate - reference).norm() / reference.norm();
    println!("linear, two-level, gamma = 0.1, omega = 0.5:");
    println!("  time-domain estimate  {estimate:.6}");
    println!("  frequency-domain chi  {reference:.6}");
    println!("  relative difference   {rel:.3e}");
    assert!(rel <= 0.01);

    // Third-order sum-frequency mixing on a three-level ladder.
    let sys3 = LevelSystem::from_json(include_str!("data/ladder.json")).unwrap();
    let proc3 = ProcessSpec::from_json(include_str!("data/sum_frequency.json")).unwrap();
    let fields3: Vec<ClassicalField> = proc3.modes()[..3]
        .iter()
        .map(|m| ClassicalField {
            amplitude: 2e-3,
            omega: m.omega,
        })
        .collect();
    let params3 = grid_params(0.02, 1250.0, 200.0 * PI);
    let estimate = oracle_chi(&sys3, &proc3, &fields3, &params3).unwrap();
    let reference = eval_chi(&sys3, &proc3, &EvalParams::default()).unwrap().total;
    let rel = (estimate - reference).norm() / reference.norm();
    println!("\nsum-frequency mixing, three-level ladder, order 3:");
    println!("  time-domain estimate  {estimate:.6}");
    println!("  frequency-domain chi  {reference:.6}");
    println!("  relative difference   {rel:.3e}");
    assert!(rel <= 0.02);

    // Step-halving certificate on the linear case.
    let halved = grid_params(params.dt / 2.0, params.t_transient, params.t_window);
    let estimate_h = oracle_chi(&sys, &proc, &fields, &halved).unwrap();
    let step_shift = (estimate_h - oracle_chi(&sys, &proc, &fields, &params).unwrap()).norm()
        / estimate_h.norm();
    println!("\nstep-halving shift (linear case): {step_shift:.3e}");
    assert!(step_shift <= 1e-3);
}

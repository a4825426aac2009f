//! Frequency sweep across a resonance.
//!
//! Scans the incoming frequency of the two-level Rayleigh process through
//! the level gap, re-solving the signal frequency at every point so the
//! process stays on shell, and writes the causal/noncausal pair per grid
//! point as CSV. At zero broadening the on-resonance point is flagged
//! instead of evaluated.
//!
//! Run with `cargo run -p wavemix --example detuning_scan`.

use wavemix::eval::EvalParams;
use wavemix::spectra::{rayleigh_process, scan, SolveFor, Varied};
use wavemix::system::LevelSystem;

fn main() {
    let sys = LevelSystem::from_json(include_str!("data/twolevel.json")).unwrap();
    let template = rayleigh_process(0.5).unwrap();
    let grid: Vec<f64> = (0..21).map(|i| 0.5 + 0.05 * i as f64).collect();

    let params = EvalParams::with_epsilon(0.05);
    let records = scan(&sys, &template, Varied::Mode(0), &grid, &params, SolveFor::Signal).unwrap();

    println!("omega,chi_re,chi_im,s_re,s_im,diff_im");
    for r in &records {
        println!(
            "{:.3},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.grid, r.chi.re, r.chi.im, r.s.re, r.s.im, r.diff.im
        );
    }

    // At eps = 0 the pole itself cannot be evaluated; the scan flags it.
    let bare = scan(
        &sys,
        &template,
        Varied::Mode(0),
        &[0.9, 1.0, 1.1],
        &EvalParams::default(),
        SolveFor::Signal,
    )
    .unwrap();
    println!("\neps = 0 near resonance:");
    for r in &bare {
        if r.flagged {
            println!("  omega = {:.2}: flagged (exact pole)", r.grid);
        } else {
            println!("  omega = {:.2}: chi = {:.4}", r.grid, r.chi);
        }
    }
}

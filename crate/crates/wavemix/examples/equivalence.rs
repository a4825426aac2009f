//! Off-resonance equivalence of the causal and noncausal expansions.
//!
//! With the broadening switched off and every cumulative energy argument
//! away from every level spacing, the susceptibility and the scattering
//! amplitude are identical, term for term: each causal term (m, sigma)
//! pairs with the noncausal permutation that places the signal interaction
//! at position n - m + 1.
//!
//! Run with `cargo run -p wavemix --example equivalence`.

use wavemix::eval::{eval_chi, eval_s, EvalParams};
use wavemix::sample;

fn main() {
    let params = EvalParams::default();
    let mut worst: f64 = 0.0;
    let systems = 50;
    for seed in 0..systems {
        let mut rng = sample::rng(seed);
        let levels = if seed % 2 == 0 { 3 } else { 4 };
        let sys = sample::random_system(&mut rng, levels);
        for order in 1..=3 {
            let proc = sample::random_offresonant_process(&mut rng, &sys, order, 0.1);
            let chi = eval_chi(&sys, &proc, &params).unwrap().total;
            let s = eval_s(&sys, &proc, &params).unwrap().total;
            let rel = (chi - s).norm() / s.norm();
            worst = worst.max(rel);
        }
    }
    println!("{systems} random systems x orders 1..3, eps = 0:");
    println!("  worst |chi - S| / |S| = {worst:.3e}");
    assert!(worst <= 1e-12);

    // With broadening on, the two separate at order eps.
    let mut rng = sample::rng(1);
    let sys = sample::random_system(&mut rng, 3);
    let proc = sample::random_offresonant_process(&mut rng, &sys, 2, 0.1);
    println!("\nsame point with broadening on (order-2 mixing):");
    for eps in [1e-1, 1e-2, 1e-3] {
        let p = EvalParams::with_epsilon(eps);
        let chi = eval_chi(&sys, &proc, &p).unwrap().total;
        let s = eval_s(&sys, &proc, &p).unwrap().total;
        println!("  eps = {eps:>5}: |chi - S| = {:.6e}", (chi - s).norm());
    }
}

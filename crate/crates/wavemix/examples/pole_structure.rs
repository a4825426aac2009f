//! Pole half-plane structure of the two expansions.
//!
//! Solving each factor's energy argument for the newly added mode's signed
//! frequency puts retarded poles below the real axis (forward propagation)
//! and advanced poles above it (backward propagation along the closed time
//! loop). The scattering amplitude is all-retarded, so every pole family
//! sits in the lower half-plane; the susceptibility's basic shape m carries
//! exactly m upper-half-plane slots.
//!
//! Run with `cargo run -p wavemix --example pole_structure`.

use wavemix::process::ProcessSpec;
use wavemix::spectra::{pole_table, rayleigh_process, HalfPlane};
use wavemix::system::LevelSystem;
use wavemix::terms::{cached_terms, TermKind};

fn main() {
    let sys = LevelSystem::from_json(include_str!("data/twolevel.json")).unwrap();
    let eps = 0.1;

    println!("linear case (two-level, eps = {eps}):");
    let proc = rayleigh_process(0.5).unwrap();
    let chi = pole_table(TermKind::Causal, &sys, &proc, eps).unwrap();
    for (id, entries) in chi.terms.iter().enumerate() {
        for e in entries.iter().filter(|e| e.level == 1) {
            println!(
                "  chi term {id}, slot {}: pole at {:.3} ({})",
                e.slot,
                e.pole,
                match e.half_plane {
                    HalfPlane::Upper => "upper",
                    HalfPlane::Lower => "lower",
                }
            );
        }
    }

    let proc4 = ProcessSpec::from_json(include_str!("data/sum_frequency.json")).unwrap();
    let s4 = pole_table(TermKind::Noncausal, &sys, &proc4, eps).unwrap();
    let all_lower = s4
        .terms
        .iter()
        .flatten()
        .all(|e| e.half_plane == HalfPlane::Lower);
    println!("\nfour-wave mixing (order 3):");
    println!(
        "  all {} S-term pole entries in the lower half-plane: {all_lower}",
        s4.terms.iter().map(Vec::len).sum::<usize>()
    );
    assert!(all_lower);

    let chi4 = pole_table(TermKind::Causal, &sys, &proc4, eps).unwrap();
    let list = cached_terms(TermKind::Causal, 3);
    println!("  chi terms: upper-half-plane slots per basic shape m:");
    for m in 0..=3 {
        let counts: Vec<usize> = list
            .terms
            .iter()
            .enumerate()
            .filter(|(_, t)| t.basic_index == Some(m))
            .map(|(id, _)| chi4.upper_slot_count(id))
            .collect();
        println!("    m = {m}: {counts:?}");
        assert!(counts.iter().all(|c| *c == m));
    }
}

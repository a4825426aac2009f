//! Symbolic expansion of both quantities.
//!
//! Prints the complete term lists for low orders, showing the (n+1)!
//! factorial growth, the grouping of the susceptibility into n+1 basic
//! shapes of n! permutations each, and the canonical text rendering.
//!
//! Run with `cargo run -p wavemix --example expand_terms`.

use wavemix::terms::{
    default_mode_names, expand_scattering, expand_susceptibility, term_to_text, GreenKind,
};

fn main() {
    for n in 1..=3 {
        let s = expand_scattering(n);
        let chi = expand_susceptibility(n);
        println!(
            "order {n}: S({}) has {} terms, chi({n}) has {} terms",
            n + 1,
            s.terms.len(),
            chi.terms.len()
        );
    }

    println!("\nchi(2), grouped by basic shape (m = number of advanced factors):");
    let chi = expand_susceptibility(2);
    let names = default_mode_names(2);
    let mut last_m = None;
    for term in &chi.terms {
        if term.basic_index != last_m {
            last_m = term.basic_index;
            println!("  m = {}:", term.basic_index.unwrap());
        }
        println!("    {}", term_to_text(term, &names));
    }

    println!("\nS(3): every factor retarded, all 3! orderings of the three modes:");
    let s = expand_scattering(2);
    for term in &s.terms {
        assert!(term.factors.iter().all(|f| f.kind == GreenKind::Retarded));
        println!("    {}", term_to_text(term, &names));
    }

    // The m = 0 susceptibility terms coincide with the scattering terms
    // whose permutation leaves the signal interaction last.
    let m0: Vec<_> = chi
        .terms
        .iter()
        .filter(|t| t.basic_index == Some(0))
        .map(|t| term_to_text(t, &names))
        .collect();
    let s_last: Vec<_> = s
        .terms
        .iter()
        .filter(|t| *t.permutation.last().unwrap() == 2)
        .map(|t| term_to_text(t, &names))
        .collect();
    assert_eq!(m0, s_last);
    println!("\nm = 0 susceptibility terms equal the signal-last scattering terms.");
}

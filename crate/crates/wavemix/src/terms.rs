//! Symbolic expansion of the causal susceptibility and the noncausal
//! scattering amplitude into complete term lists.
//!
//! A term is an ordered product of resolvent factors sandwiched between
//! dipole operators, `<a| V G(..) V G(..) ... V |a>`, with each factor's
//! energy argument a cumulative sum `E_a + (signed frequencies interacted so
//! far)`. Both expansions are generated from one loop-ordering rule:
//!
//! - noncausal, order n: one basic shape, summed over all `(n+1)!`
//!   permutations of the `n + 1` signed frequencies; every factor is
//!   retarded and the k-th factor (innermost first) accumulates the first k
//!   entries of the permutation.
//! - causal, order n: `n + 1` basic shapes indexed by `m` (the number of
//!   advanced factors), each summed over the `n!` permutations of the
//!   incoming modes. The interaction sequence is `n - m` incoming
//!   absorptions, then the signal interaction, then the remaining `m`
//!   absorptions; factors after the signal interaction are advanced.
//!
//! Both lists therefore hold exactly `(n+1)!` terms, and on the energy shell
//! with the broadening switched off they coincide term by term: the causal
//! term `(m, sigma)` pairs with the noncausal permutation that places the
//! signal in position `n - m + 1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;

/// Hard cap on the expansion order; `(n+1)!` terms get unwieldy past this.
pub const MAX_EXPANSION_ORDER: usize = 7;

/// Retarded (`+i eps`) or advanced (`-i eps`) resolvent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GreenKind {
    Retarded,
    Advanced,
}

/// Which kind of quantity a term list expands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermKind {
    /// The susceptibility chi(n) (response function, signal interaction last).
    Causal,
    /// The scattering amplitude S(n+1) (all time orderings summed).
    Noncausal,
}

/// A linear-combination energy argument: `E_a` plus the signed frequencies
/// of an included subset of modes (each with coefficient one).
///
/// The initial-state energy is always part of the argument; only the mode
/// subset needs storing. Modes are identified by their index bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FreqCombo {
    mask: u32,
}

impl FreqCombo {
    pub fn empty() -> Self {
        FreqCombo { mask: 0 }
    }

    pub fn with(self, mode: usize) -> Self {
        FreqCombo {
            mask: self.mask | (1 << mode),
        }
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.mask & (1 << mode) != 0
    }

    /// Number of included modes.
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Included mode indices in ascending order.
    pub fn modes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(|m| self.contains(*m))
    }

    /// True when `self`'s modes are a subset of `other`'s.
    pub fn is_subset_of(&self, other: &FreqCombo) -> bool {
        self.mask & !other.mask == 0
    }
}

/// One resolvent factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GreenFactor {
    pub kind: GreenKind,
    pub argument: FreqCombo,
}

/// One term of an expansion: n factors, innermost (rightmost in the written
/// matrix element) first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub factors: Vec<GreenFactor>,
    /// The loop-ordered interaction sequence that generated this term
    /// (mode indices; length n + 1).
    pub permutation: Vec<usize>,
    /// For causal terms, the basic-shape index m = number of advanced
    /// factors; absent for noncausal terms.
    pub basic_index: Option<usize>,
}

/// A complete expansion: `(n+1)!` terms in deterministic order.
#[derive(Debug, Clone, PartialEq)]
pub struct TermList {
    pub kind: TermKind,
    pub order: usize,
    pub terms: Vec<Term>,
}

fn term_from_sequence(
    sequence: &[usize],
    signal: Option<usize>,
    basic_index: Option<usize>,
) -> Term {
    let n = sequence.len() - 1;
    let mut factors = Vec::with_capacity(n);
    let mut argument = FreqCombo::empty();
    for &mode in &sequence[..n] {
        argument = argument.with(mode);
        let kind = match signal {
            Some(s) if argument.contains(s) => GreenKind::Advanced,
            _ => GreenKind::Retarded,
        };
        factors.push(GreenFactor { kind, argument });
    }
    Term {
        factors,
        permutation: sequence.to_vec(),
        basic_index,
    }
}

/// Expand the noncausal scattering amplitude of order n.
///
/// Modes are `0..=n` with mode n the signal. One term per permutation of
/// the `n + 1` signed frequencies, in lexicographic order; every factor is
/// retarded regardless of whether the signal frequency has entered the
/// cumulative argument.
pub fn expand_scattering(n: usize) -> TermList {
    assert!(
        (1..=MAX_EXPANSION_ORDER).contains(&n),
        "expansion order must be in 1..={MAX_EXPANSION_ORDER}, got {n}"
    );
    let terms = (0..=n)
        .permutations(n + 1)
        .map(|seq| term_from_sequence(&seq, None, None))
        .collect();
    TermList {
        kind: TermKind::Noncausal,
        order: n,
        terms,
    }
}

/// Expand the causal susceptibility of order n.
///
/// For each basic shape m (ascending) and each permutation of the incoming
/// modes (lexicographic): the signal interaction is inserted after `n - m`
/// absorptions, and every factor whose cumulative argument contains the
/// signal frequency is advanced. The advanced block is contiguous and
/// outermost by construction.
pub fn expand_susceptibility(n: usize) -> TermList {
    assert!(
        (1..=MAX_EXPANSION_ORDER).contains(&n),
        "expansion order must be in 1..={MAX_EXPANSION_ORDER}, got {n}"
    );
    let signal = n;
    let mut terms = Vec::new();
    for m in 0..=n {
        for sigma in (0..n).permutations(n) {
            let mut sequence = Vec::with_capacity(n + 1);
            sequence.extend_from_slice(&sigma[..n - m]);
            sequence.push(signal);
            sequence.extend_from_slice(&sigma[n - m..]);
            let term = term_from_sequence(&sequence, Some(signal), Some(m));
            debug_assert_eq!(
                term.factors
                    .iter()
                    .filter(|f| f.kind == GreenKind::Advanced)
                    .count(),
                m
            );
            terms.push(term);
        }
    }
    TermList {
        kind: TermKind::Causal,
        order: n,
        terms,
    }
}

/// Default mode names `w1 .. w{n+1}` for an order-n expansion.
pub fn default_mode_names(order: usize) -> Vec<String> {
    (1..=order + 1).map(|i| format!("w{i}")).collect()
}

/// Canonical text rendering of a term, outermost factor first, e.g.
/// `V G†(Ea+w1+w2-w4) V G(Ea+w1+w2) V G(Ea+w1) V`.
///
/// Signs follow the canonical process (incoming modes absorbed, signal
/// emitted): the last mode prints with a minus.
pub fn term_to_text(term: &Term, mode_names: &[String]) -> String {
    let signal = mode_names.len() - 1;
    let mut pieces = vec!["V".to_string()];
    for factor in term.factors.iter().rev() {
        let glyph = match factor.kind {
            GreenKind::Retarded => "G",
            GreenKind::Advanced => "G†",
        };
        let mut arg = "Ea".to_string();
        for mode in factor.argument.modes() {
            arg.push(if mode == signal { '-' } else { '+' });
            arg.push_str(&mode_names[mode]);
        }
        pieces.push(format!("{glyph}({arg})"));
        pieces.push("V".to_string());
    }
    pieces.join(" ")
}

type Cache = Mutex<HashMap<(TermKind, usize), Arc<TermList>>>;

static TERM_CACHE: OnceLock<Cache> = OnceLock::new();

/// Shared, lazily built term lists keyed by (kind, order).
pub fn cached_terms(kind: TermKind, order: usize) -> Arc<TermList> {
    let cache = TERM_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("term cache poisoned");
    map.entry((kind, order))
        .or_insert_with(|| {
            Arc::new(match kind {
                TermKind::Causal => expand_susceptibility(order),
                TermKind::Noncausal => expand_scattering(order),
            })
        })
        .clone()
}

//! Independent verification oracles. These trade speed for simplicity: word
//! enumeration in shortlex order, a product automaton tracking arch progress
//! per state, and a breadth-first word search over determinized
//! configurations. The universality algorithms are cross-checked against
//! them on every test run.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::nfa::{remove_epsilon, Nfa, NormalizedNfa, StateId};
use crate::scc::{decompose, has_unbounded_universality};
use crate::word::{arch_step, Word};
use crate::MaxUniversality;

const MAX_SIGMA: u32 = 24;

fn sigma_checked(a: &Nfa) -> Result<u32> {
    let sigma = a.alphabet().sigma();
    if sigma > MAX_SIGMA {
        return Err(Error::capacity(format!(
            "alphabet size {sigma} exceeds the oracle bound {MAX_SIGMA}"
        )));
    }
    Ok(sigma)
}

/// All accepted words of length at most `max_len`, in shortlex order and
/// without duplicates. Exponential in `max_len`; a test-scale tool.
pub fn enumerate_language(a: &Nfa, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut queue: VecDeque<(Vec<u32>, BTreeSet<StateId>)> = VecDeque::new();
    queue.push_back((Vec::new(), a.closed_initial()));
    while let Some((letters, set)) = queue.pop_front() {
        if a.contains_final(&set) {
            out.push(Word::new(letters.clone(), a.alphabet()).expect("letters in range"));
        }
        if letters.len() == max_len {
            continue;
        }
        for l in a.alphabet().letters() {
            let next = a.step_closed(&set, l);
            if next.is_empty() {
                continue;
            }
            let mut extended = letters.clone();
            extended.push(l);
            queue.push_back((extended, next));
        }
    }
    out
}

/// The product of an epsilon-free NFA with the arch/rest tracker: states
/// `(q, arches, rest)` with the arch counter capped at `cap`, restricted to
/// the part reachable from `(initial, 0, {})`.
#[derive(Debug)]
pub struct ProductAutomaton {
    pub cap: usize,
    pub reachable: HashSet<(StateId, usize, u32)>,
}

impl ProductAutomaton {
    /// Breadth-first reachability over the product of `a` (no epsilon
    /// transitions allowed) and the arch tracker.
    pub fn build(a: &Nfa, cap: usize) -> Result<ProductAutomaton> {
        if a.has_epsilon_transitions() {
            return Err(Error::input(
                "product automaton requires an epsilon-free NFA",
            ));
        }
        let sigma = sigma_checked(a)?;
        let full = (1u32 << sigma) - 1;
        let start = (a.initial(), 0usize, 0u32);
        let mut reachable = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((q, c, rest)) = queue.pop_front() {
            for t in a.outgoing(q) {
                let letter = t.label.letter().expect("epsilon-free");
                let (c2, rest2) = arch_step(c, rest, letter, full, cap);
                let next = (t.to, c2, rest2);
                if reachable.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        Ok(ProductAutomaton { cap, reachable })
    }
}

/// Maximum universality index over the language via the product automaton,
/// with the arch counter capped just above the state count: in the bounded
/// case no accepted word has more arches than states, so hitting the cap
/// would mean an internal inconsistency.
pub fn max_universality_product(a: &NormalizedNfa) -> Result<MaxUniversality> {
    let d = decompose(a);
    if has_unbounded_universality(&d, a.nfa().alphabet()) {
        return Ok(MaxUniversality::Unbounded);
    }
    let free = remove_epsilon(a.nfa());
    let cap = free.state_count() + 1;
    let product = ProductAutomaton::build(&free, cap)?;
    let mut best = 0usize;
    for &(q, c, _) in &product.reachable {
        if free.finals().contains(&q) {
            assert!(c < cap, "arch counter hit the cap on a bounded language");
            best = best.max(c);
        }
    }
    Ok(MaxUniversality::Finite(best))
}

/// Decides `k`-USU: every accepted word is `k`-universal iff no accepting
/// product state with fewer than `k` arches is reachable.
pub fn usu_decide(a: &NormalizedNfa, k: usize) -> Result<bool> {
    let free = remove_epsilon(a.nfa());
    let product = ProductAutomaton::build(&free, k)?;
    Ok(product
        .reachable
        .iter()
        .all(|&(q, c, _)| !free.finals().contains(&q) || c >= k))
}

/// Maximum universality index over the accepted words of length at most
/// `max_len`, or `None` when no word of that length is accepted.
///
/// Semantically this enumerates every word of length up to `max_len` and
/// takes the best accepted universality index; the search merges words with
/// equal reachable state set and arch state, which keeps it feasible on
/// dense languages.
pub fn bounded_max_universality(a: &Nfa, max_len: usize) -> Result<Option<usize>> {
    let sigma = sigma_checked(a)?;
    let full = (1u32 << sigma) - 1;
    // Arch counts are bounded by max_len / sigma; no cap is needed.
    let cap = max_len + 1;
    let start = (a.closed_initial(), 0usize, 0u32);
    let mut best: Option<usize> = None;
    let mut seen: HashSet<(Vec<StateId>, usize, u32)> = HashSet::new();
    let mut frontier = vec![start];
    for depth in 0..=max_len {
        let mut next_frontier = Vec::new();
        for (set, c, rest) in frontier {
            if a.contains_final(&set) && best.is_none_or(|b| c > b) {
                best = Some(c);
            }
            if depth == max_len {
                continue;
            }
            for l in a.alphabet().letters() {
                let stepped = a.step_closed(&set, l);
                if stepped.is_empty() {
                    continue;
                }
                let (c2, rest2) = arch_step(c, rest, l, full, cap);
                let key = (stepped.iter().copied().collect::<Vec<_>>(), c2, rest2);
                if seen.insert(key) {
                    next_frontier.push((stepped, c2, rest2));
                }
            }
        }
        frontier = next_frontier;
    }
    Ok(best)
}

/// The enumeration verdict for `k`-ESU within the completeness bound
/// `states * sigma * (k + 1)`: a `k`-universal accepted word exists iff one
/// exists within that length. Word search over determinized configurations
/// with the arch counter capped at `k`, stopping at the first witness.
pub fn esu_by_enumeration(a: &Nfa, k: usize) -> Result<bool> {
    let bound = a.state_count() * a.alphabet().sigma() as usize * (k + 1);
    let sigma = sigma_checked(a)?;
    let full = (1u32 << sigma) - 1;
    let start = (a.closed_initial(), 0usize, 0u32);
    let mut seen: HashSet<(Vec<StateId>, usize, u32)> = HashSet::new();
    let mut frontier = vec![start];
    for depth in 0..=bound {
        let mut next_frontier = Vec::new();
        for (set, c, rest) in frontier {
            if c >= k && a.contains_final(&set) {
                return Ok(true);
            }
            if depth == bound {
                continue;
            }
            for l in a.alphabet().letters() {
                let stepped = a.step_closed(&set, l);
                if stepped.is_empty() {
                    continue;
                }
                let (c2, rest2) = arch_step(c, rest, l, full, k);
                let key = (stepped.iter().copied().collect::<Vec<_>>(), c2, rest2);
                if seen.insert(key) {
                    next_frontier.push((stepped, c2, rest2));
                }
            }
        }
        frontier = next_frontier;
    }
    Ok(false)
}

/// Histogram of universality indices over the enumerated language, used by
/// the command-line oracle report.
pub fn iota_histogram(a: &Nfa, max_len: usize) -> Vec<(usize, usize)> {
    let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
    for w in enumerate_language(a, max_len) {
        *counts.entry(crate::word::universality_index(&w)).or_default() += 1;
    }
    counts.into_iter().collect()
}

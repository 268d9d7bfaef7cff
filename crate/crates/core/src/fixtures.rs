//! Shared test automata and generators for the unit-test suites.

use std::collections::BTreeSet;

use rand::Rng;

use crate::nfa::{parse_nfa, Label, Nfa, Transition};
use crate::word::Alphabet;

/// The three-state automaton with self-loops a,b on q0, a c-edge to q1, an
/// a-edge to the accepting q2, and self-loops b,c on q2. Its maximum
/// universality index is 2, witnessed by abcabc.
pub(crate) fn figure_a() -> Nfa {
    parse_nfa(
        "\
nfa
sigma 3
states 3
initial 0
final 2
0 1 0
0 2 0
0 3 1
1 1 2
2 2 2
2 3 2
end
",
    )
    .unwrap()
}

/// The sixteen-state automaton accepting exactly the six permutations of
/// abc; every accepted word has exactly one arch.
pub(crate) fn figure_b() -> Nfa {
    parse_nfa(
        "\
nfa
sigma 3
states 16
initial 0
final 3 5 8 10 13 15
0 1 1
0 2 6
0 3 11
1 2 2
1 3 4
2 3 3
4 2 5
6 1 7
6 3 9
7 3 8
9 1 10
11 1 12
11 2 14
12 2 13
14 1 15
end
",
    )
    .unwrap()
}

/// One state with a self-loop per letter, accepting; its language is all of
/// `Sigma*`.
pub(crate) fn full_automaton(sigma: u32) -> Nfa {
    let alphabet = Alphabet::new(sigma).unwrap();
    let transitions = (1..=sigma)
        .map(|l| Transition { from: 0, label: Label::Letter(l), to: 0 })
        .collect();
    Nfa::new(alphabet, 1, 0, BTreeSet::from([0]), transitions).unwrap()
}

/// A random NFA with `n` states over `sigma` letters. `density` scales the
/// expected number of transitions; `epsilon` admits epsilon edges.
pub(crate) fn random_nfa(
    rng: &mut impl Rng,
    n: usize,
    sigma: u32,
    density: f64,
    epsilon: bool,
) -> Nfa {
    let alphabet = Alphabet::new(sigma).unwrap();
    let mut transitions = Vec::new();
    let target = ((n as f64) * density).max(1.0).round() as usize;
    for _ in 0..target {
        let from = rng.gen_range(0..n);
        let to = rng.gen_range(0..n);
        let label = if epsilon && rng.gen_bool(0.15) {
            Label::Epsilon
        } else {
            Label::Letter(rng.gen_range(1..=sigma))
        };
        transitions.push(Transition { from, label, to });
    }
    let final_count = rng.gen_range(1..=n.min(3));
    let mut finals = BTreeSet::new();
    while finals.len() < final_count {
        finals.insert(rng.gen_range(0..n));
    }
    Nfa::new(alphabet, n, 0, finals, transitions).unwrap()
}

/// A random partial DFA over `sigma` letters: at most one target per
/// `(state, letter)` pair and no epsilon edges.
pub(crate) fn random_dfa(rng: &mut impl Rng, n: usize, sigma: u32, fill: f64) -> Nfa {
    let alphabet = Alphabet::new(sigma).unwrap();
    let mut transitions = Vec::new();
    for q in 0..n {
        for l in 1..=sigma {
            if rng.gen_bool(fill) {
                transitions.push(Transition {
                    from: q,
                    label: Label::Letter(l),
                    to: rng.gen_range(0..n),
                });
            }
        }
    }
    let final_count = rng.gen_range(1..=n.min(2));
    let mut finals = BTreeSet::new();
    while finals.len() < final_count {
        finals.insert(rng.gen_range(0..n));
    }
    Nfa::new(alphabet, n, 0, finals, transitions).unwrap()
}

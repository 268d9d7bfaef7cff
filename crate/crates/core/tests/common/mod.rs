//! Shared fixtures and generators for the integration suites.

use std::collections::BTreeSet;

use rand::Rng;

use usubseq::regex::{Ast, Regex};
use usubseq::word::Alphabet;
use usubseq::{Label, Nfa, Transition};

/// Figure automaton with maximum universality index 2: self-loops a,b on the
/// initial state, a c-edge, an a-edge into an accepting state with b,c
/// self-loops.
pub fn figure_a() -> Nfa {
    usubseq::parse_nfa(
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

/// Figure automaton accepting exactly the six permutations of abc.
pub fn figure_b() -> Nfa {
    usubseq::parse_nfa(
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

/// One accepting state with a self-loop per letter: the language is all of
/// `Sigma*`.
pub fn full_automaton(sigma: u32) -> Nfa {
    let alphabet = Alphabet::new(sigma).unwrap();
    let transitions = (1..=sigma)
        .map(|l| Transition { from: 0, label: Label::Letter(l), to: 0 })
        .collect();
    Nfa::new(alphabet, 1, 0, BTreeSet::from([0]), transitions).unwrap()
}

/// A random NFA over `sigma` letters with roughly `n * density` transitions.
pub fn random_nfa(rng: &mut impl Rng, n: usize, sigma: u32, density: f64, epsilon: bool) -> Nfa {
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

/// A random partial DFA (no epsilon, at most one target per state/letter).
pub fn random_dfa(rng: &mut impl Rng, n: usize, sigma: u32, fill: f64) -> Nfa {
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

/// A random regex AST of roughly `budget` nodes.
pub fn random_regex(rng: &mut impl Rng, budget: usize, alphabet: Alphabet) -> Regex {
    fn build(rng: &mut impl Rng, budget: usize, sigma: u32) -> (Ast, usize) {
        if budget <= 1 {
            let leaf = match rng.gen_range(0..8) {
                0 => Ast::Epsilon,
                1 => Ast::Empty,
                _ => Ast::Letter(rng.gen_range(1..=sigma)),
            };
            return (leaf, 1);
        }
        match rng.gen_range(0..10) {
            0..=3 => {
                let (l, ln) = build(rng, (budget - 1) / 2, sigma);
                let (r, rn) = build(rng, budget.saturating_sub(1 + ln), sigma);
                (Ast::Concat(Box::new(l), Box::new(r)), 1 + ln + rn)
            }
            4..=6 => {
                let (l, ln) = build(rng, (budget - 1) / 2, sigma);
                let (r, rn) = build(rng, budget.saturating_sub(1 + ln), sigma);
                (Ast::Alt(Box::new(l), Box::new(r)), 1 + ln + rn)
            }
            7 | 8 => {
                let (inner, n) = build(rng, budget - 1, sigma);
                (Ast::Star(Box::new(inner)), 1 + n)
            }
            _ => (Ast::Letter(rng.gen_range(1..=sigma)), 1),
        }
    }
    let (root, _) = build(rng, budget, alphabet.sigma());
    Regex::new(root, alphabet)
}

//! Subsequence-universality analysis of regular languages.
//!
//! A word is `k`-universal over an alphabet when every length-`k` word
//! appears in it as a subsequence. This crate decides, for a regular
//! language given as an NFA or a regular expression, whether it contains a
//! `k`-universal word (`k`-ESU), whether all of its words are `k`-universal
//! (`k`-USU), and computes the maximum universality index over the language.
//! It also counts and ranks the `k`-universal words (or accepting paths) of
//! a fixed length, of bounded length, or of the whole language, with exact
//! big-integer arithmetic.
//!
//! Three routes to the same answers are provided and cross-checked in the
//! test suites: a dynamic program over the condensation of the automaton
//! (exponential in the alphabet size), a subset-enumeration algorithm built
//! on bipartite matching (exponential in the state count), and a
//! product-automaton oracle (exponential in the alphabet, kept simple on
//! purpose).

pub mod counting;
pub mod error;
pub mod nfa;
pub mod oracle;
pub mod regex;
pub mod sat;
pub mod scc;
pub mod sigma;
pub mod states;
pub mod word;

#[cfg(test)]
pub(crate) mod fixtures;

pub use error::{Error, Result};
pub use nfa::{normalize, parse_nfa, remove_epsilon, Label, Nfa, NormalizedNfa, Transition};
pub use scc::{decompose, has_unbounded_universality, SccDecomposition};
pub use word::{
    arch_factorize, is_subsequence, subseq_set, universality_index, Alphabet, ArchFactorization,
    Word,
};

/// The maximum universality index over a language: a finite value, or
/// unbounded when the language contains words of every universality index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxUniversality {
    Finite(usize),
    Unbounded,
}

impl MaxUniversality {
    /// Whether the language contains a word of universality index at least
    /// `k`.
    pub fn at_least(&self, k: usize) -> bool {
        match self {
            MaxUniversality::Unbounded => true,
            MaxUniversality::Finite(max) => *max >= k,
        }
    }
}

impl std::fmt::Display for MaxUniversality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MaxUniversality::Finite(v) => write!(f, "{v}"),
            MaxUniversality::Unbounded => write!(f, "unbounded"),
        }
    }
}

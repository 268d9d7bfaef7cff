//! Regular expressions: parsing, unbounded-universality detection, the
//! star-free rewriting that preserves the maximum universality index, the
//! Thompson construction, and the regex front end for the `k`-ESU decision.
//!
//! Concrete syntax: letters `a..z` (mapped to `1..=26`), `|`, `*`, `(`,
//! `)`, `_` for the empty word, `#` for the empty language; whitespace is
//! ignored. Star binds tighter than concatenation, concatenation tighter
//! than alternation.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::nfa::{Label, Nfa, StateId, Transition};
use crate::sigma::k_esu_sigma;
use crate::word::Alphabet;

/// A regular expression tree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Empty,
    Epsilon,
    Letter(u32),
    Concat(Box<Ast>, Box<Ast>),
    Alt(Box<Ast>, Box<Ast>),
    Star(Box<Ast>),
}

impl Ast {
    fn node_count(&self) -> usize {
        match self {
            Ast::Empty | Ast::Epsilon | Ast::Letter(_) => 1,
            Ast::Concat(l, r) | Ast::Alt(l, r) => 1 + l.node_count() + r.node_count(),
            Ast::Star(inner) => 1 + inner.node_count(),
        }
    }

    /// Letters syntactically occurring in the tree.
    fn letters(&self, out: &mut BTreeSet<u32>) {
        match self {
            Ast::Empty | Ast::Epsilon => {}
            Ast::Letter(l) => {
                out.insert(*l);
            }
            Ast::Concat(l, r) | Ast::Alt(l, r) => {
                l.letters(out);
                r.letters(out);
            }
            Ast::Star(inner) => inner.letters(out),
        }
    }
}

/// A regular expression over an explicit alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regex {
    root: Ast,
    alphabet: Alphabet,
}

impl Regex {
    pub fn new(root: Ast, alphabet: Alphabet) -> Self {
        Regex { root, alphabet }
    }

    pub fn root(&self) -> &Ast {
        &self.root
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Tree size in nodes.
    pub fn size(&self) -> usize {
        self.root.node_count()
    }

    pub fn is_star_free(&self) -> bool {
        fn no_star(a: &Ast) -> bool {
            match a {
                Ast::Empty | Ast::Epsilon | Ast::Letter(_) => true,
                Ast::Concat(l, r) | Ast::Alt(l, r) => no_star(l) && no_star(r),
                Ast::Star(_) => false,
            }
        }
        no_star(&self.root)
    }
}

impl fmt::Display for Regex {
    /// Renders in the concrete syntax; requires `sigma <= 26`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Precedence levels: alternation 0, concatenation 1, star 2.
        fn go(a: &Ast, parent: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let level = match a {
                Ast::Alt(..) => 0,
                Ast::Concat(..) => 1,
                _ => 2,
            };
            let parens = level < parent;
            if parens {
                f.write_str("(")?;
            }
            match a {
                Ast::Empty => f.write_str("#")?,
                Ast::Epsilon => f.write_str("_")?,
                Ast::Letter(l) => write!(f, "{}", (b'a' + (l - 1) as u8) as char)?,
                // Concatenation and alternation are associative; nested
                // occurrences of the same operator print flat.
                Ast::Concat(l, r) => {
                    go(l, 1, f)?;
                    go(r, 1, f)?;
                }
                Ast::Alt(l, r) => {
                    go(l, 0, f)?;
                    f.write_str("|")?;
                    go(r, 0, f)?;
                }
                Ast::Star(inner) => {
                    go(inner, 2, f)?;
                    f.write_str("*")?;
                }
            }
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        go(&self.root, 0, f)
    }
}

/// A star-free regular expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarFreeRegex(Regex);

impl StarFreeRegex {
    pub fn regex(&self) -> &Regex {
        &self.0
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    alphabet: Alphabet,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        let position = self
            .chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.text.len());
        Error::RegexParse { position, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn alternation(&mut self) -> Result<Ast> {
        let mut node = self.concatenation()?;
        while self.peek() == Some('|') {
            self.bump();
            let rhs = self.concatenation()?;
            node = Ast::Alt(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn concatenation(&mut self) -> Result<Ast> {
        let mut factors = vec![self.repetition()?];
        while matches!(self.peek(), Some(c) if c == '(' || c == '_' || c == '#' || c.is_ascii_lowercase())
        {
            factors.push(self.repetition()?);
        }
        let mut node = factors.pop().expect("at least one factor");
        while let Some(prev) = factors.pop() {
            node = Ast::Concat(Box::new(prev), Box::new(node));
        }
        Ok(node)
    }

    fn repetition(&mut self) -> Result<Ast> {
        let mut node = self.atom()?;
        while self.peek() == Some('*') {
            self.bump();
            node = Ast::Star(Box::new(node));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some('_') => {
                self.bump();
                Ok(Ast::Epsilon)
            }
            Some('#') => {
                self.bump();
                Ok(Ast::Empty)
            }
            Some(c) if c.is_ascii_lowercase() => {
                let letter = c as u32 - 'a' as u32 + 1;
                if !self.alphabet.contains(letter) {
                    return Err(self.err(format!(
                        "letter '{c}' outside alphabet of size {}",
                        self.alphabet.sigma()
                    )));
                }
                self.bump();
                Ok(Ast::Letter(letter))
            }
            Some(c) => Err(self.err(format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses the concrete syntax into an AST.
pub fn parse_regex(text: &str, alphabet: Alphabet) -> Result<Regex> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|&(_, c)| !c.is_whitespace())
        .collect();
    let mut parser = Parser { chars, pos: 0, alphabet, text };
    let root = parser.alternation()?;
    if parser.pos != parser.chars.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(Regex { root, alphabet })
}

/// Removes empty-language subexpressions so that syntactic letter sets agree
/// with the described language: a concatenation with an empty factor is
/// empty, an empty alternative disappears, a starred empty language is the
/// empty word.
fn simplify_empty(a: &Ast) -> Ast {
    match a {
        Ast::Empty | Ast::Epsilon | Ast::Letter(_) => a.clone(),
        Ast::Concat(l, r) => {
            let (l, r) = (simplify_empty(l), simplify_empty(r));
            if l == Ast::Empty || r == Ast::Empty {
                Ast::Empty
            } else {
                Ast::Concat(Box::new(l), Box::new(r))
            }
        }
        Ast::Alt(l, r) => {
            let (l, r) = (simplify_empty(l), simplify_empty(r));
            match (l, r) {
                (Ast::Empty, r) => r,
                (l, Ast::Empty) => l,
                (l, r) => Ast::Alt(Box::new(l), Box::new(r)),
            }
        }
        Ast::Star(inner) => {
            let inner = simplify_empty(inner);
            if inner == Ast::Empty {
                Ast::Epsilon
            } else {
                Ast::Star(Box::new(inner))
            }
        }
    }
}

/// Whether the language contains words of every universality index: true
/// iff some starred subexpression syntactically covers the whole alphabet
/// (after empty-language elimination).
pub fn regex_unbounded(r: &Regex) -> bool {
    let sigma = r.alphabet.sigma() as usize;
    fn any_full_star(a: &Ast, sigma: usize) -> bool {
        match a {
            Ast::Empty | Ast::Epsilon | Ast::Letter(_) => false,
            Ast::Concat(l, r) | Ast::Alt(l, r) => {
                any_full_star(l, sigma) || any_full_star(r, sigma)
            }
            Ast::Star(inner) => {
                let mut letters = BTreeSet::new();
                inner.letters(&mut letters);
                letters.len() == sigma || any_full_star(inner, sigma)
            }
        }
    }
    any_full_star(&simplify_empty(&r.root), sigma)
}

/// Rewrites every starred subexpression `(U)*` into `u u`, where `u` lists
/// the letters of `U` in increasing order, producing a star-free expression
/// with the same maximum universality index. Innermost stars are rewritten
/// first; each rewrite depends only on the letter set of its body, so the
/// result matches the left-to-right rewriting order.
pub fn star_free_reduce(r: &Regex) -> Result<StarFreeRegex> {
    if regex_unbounded(r) {
        return Err(Error::input(
            "regex contains a starred subexpression covering the alphabet; \
             its universality is unbounded",
        ));
    }
    fn rewrite(a: &Ast) -> Ast {
        match a {
            Ast::Empty | Ast::Epsilon | Ast::Letter(_) => a.clone(),
            Ast::Concat(l, r) => Ast::Concat(Box::new(rewrite(l)), Box::new(rewrite(r))),
            Ast::Alt(l, r) => Ast::Alt(Box::new(rewrite(l)), Box::new(rewrite(r))),
            Ast::Star(inner) => {
                let mut letters = BTreeSet::new();
                inner.letters(&mut letters);
                let mut chain: Option<Ast> = None;
                for &l in letters.iter().chain(letters.iter()) {
                    chain = Some(match chain {
                        None => Ast::Letter(l),
                        Some(c) => Ast::Concat(Box::new(c), Box::new(Ast::Letter(l))),
                    });
                }
                chain.unwrap_or(Ast::Epsilon)
            }
        }
    }
    let root = rewrite(&simplify_empty(&r.root));
    let reduced = Regex { root, alphabet: r.alphabet };
    debug_assert!(reduced.is_star_free());
    Ok(StarFreeRegex(reduced))
}

/// The classical Thompson construction; the result has `O(size)` states and
/// transitions and uses epsilon moves.
pub fn thompson(r: &Regex) -> Nfa {
    struct Builder {
        next: StateId,
        transitions: Vec<Transition>,
    }
    impl Builder {
        fn fresh(&mut self) -> StateId {
            self.next += 1;
            self.next - 1
        }
        fn edge(&mut self, from: StateId, label: Label, to: StateId) {
            self.transitions.push(Transition { from, label, to });
        }
        fn build(&mut self, a: &Ast) -> (StateId, StateId) {
            let start = self.fresh();
            let accept = self.fresh();
            match a {
                Ast::Empty => {}
                Ast::Epsilon => self.edge(start, Label::Epsilon, accept),
                Ast::Letter(l) => self.edge(start, Label::Letter(*l), accept),
                Ast::Concat(l, r) => {
                    let (ls, la) = self.build(l);
                    let (rs, ra) = self.build(r);
                    self.edge(start, Label::Epsilon, ls);
                    self.edge(la, Label::Epsilon, rs);
                    self.edge(ra, Label::Epsilon, accept);
                }
                Ast::Alt(l, r) => {
                    let (ls, la) = self.build(l);
                    let (rs, ra) = self.build(r);
                    self.edge(start, Label::Epsilon, ls);
                    self.edge(start, Label::Epsilon, rs);
                    self.edge(la, Label::Epsilon, accept);
                    self.edge(ra, Label::Epsilon, accept);
                }
                Ast::Star(inner) => {
                    let (is, ia) = self.build(inner);
                    self.edge(start, Label::Epsilon, is);
                    self.edge(start, Label::Epsilon, accept);
                    self.edge(ia, Label::Epsilon, is);
                    self.edge(ia, Label::Epsilon, accept);
                }
            }
            (start, accept)
        }
    }
    let mut builder = Builder { next: 0, transitions: Vec::new() };
    let (start, accept) = builder.build(&r.root);
    Nfa::new(
        r.alphabet,
        builder.next,
        start,
        std::collections::BTreeSet::from([accept]),
        builder.transitions,
    )
    .expect("thompson construction is well-formed")
}

/// Decides `k`-ESU for a parsed regex: unbounded expressions are
/// `k`-universal for every `k`; bounded ones are rewritten star-free,
/// converted by the Thompson construction, normalized and handed to the
/// condensation DP.
pub fn k_esu(r: &Regex, k: usize) -> Result<bool> {
    if regex_unbounded(r) {
        return Ok(true);
    }
    let reduced = star_free_reduce(r)?;
    let nfa = thompson(reduced.regex());
    match crate::nfa::normalize(&nfa) {
        None => Ok(false),
        Some(norm) => k_esu_sigma(&norm, k),
    }
}

/// [`k_esu`] on the concrete syntax.
pub fn k_esu_regex(text: &str, alphabet: Alphabet, k: usize) -> Result<bool> {
    k_esu(&parse_regex(text, alphabet)?, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn alpha(sigma: u32) -> Alphabet {
        Alphabet::new(sigma).unwrap()
    }

    #[test]
    fn parse_paper_expressions() {
        let r = parse_regex("(a*b*c|bc)|a*", alpha(3)).unwrap();
        let expected = Ast::Alt(
            Box::new(Ast::Alt(
                Box::new(Ast::Concat(
                    Box::new(Ast::Star(Box::new(Ast::Letter(1)))),
                    Box::new(Ast::Concat(
                        Box::new(Ast::Star(Box::new(Ast::Letter(2)))),
                        Box::new(Ast::Letter(3)),
                    )),
                )),
                Box::new(Ast::Concat(Box::new(Ast::Letter(2)), Box::new(Ast::Letter(3)))),
            )),
            Box::new(Ast::Star(Box::new(Ast::Letter(1)))),
        );
        assert_eq!(r.root(), &expected);

        let r = parse_regex("a*b|_", alpha(2)).unwrap();
        let expected = Ast::Alt(
            Box::new(Ast::Concat(
                Box::new(Ast::Star(Box::new(Ast::Letter(1)))),
                Box::new(Ast::Letter(2)),
            )),
            Box::new(Ast::Epsilon),
        );
        assert_eq!(r.root(), &expected);
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(
            parse_regex("((", alpha(2)),
            Err(Error::RegexParse { .. })
        ));
        assert!(matches!(
            parse_regex("a|b)", alpha(2)),
            Err(Error::RegexParse { .. })
        ));
        assert!(matches!(
            parse_regex("d", alpha(3)),
            Err(Error::RegexParse { .. })
        ));
    }

    #[test]
    fn display_round_trips() {
        for text in ["(a*b*c|bc)|a*", "ab|ba", "(ab)*", "_", "#", "a(b|c)*a", "a|(b|c)"] {
            let r = parse_regex(text, alpha(3)).unwrap();
            let printed = r.to_string();
            let reparsed = parse_regex(&printed, alpha(3)).unwrap();
            // The printer flattens associative operators, so idempotence is
            // the stable property; the language never changes.
            assert_eq!(reparsed.to_string(), printed, "{text} vs {printed}");
        }
    }

    #[test]
    fn unbounded_detection() {
        assert!(regex_unbounded(&parse_regex("(abc)*", alpha(3)).unwrap()));
        assert!(!regex_unbounded(&parse_regex("(a*b*c|bc)|a*", alpha(3)).unwrap()));
        assert!(!regex_unbounded(&parse_regex("x(yz)*", alpha(26)).unwrap()));
        // x maps to letter 24 over sigma=26; with sigma=3 use letters a..c.
        assert!(!regex_unbounded(&parse_regex("a(bc)*", alpha(3)).unwrap()));
        // A starred body whose letters only occur inside an empty factor
        // does not make the language unbounded.
        assert!(!regex_unbounded(&parse_regex("(abc#)*", alpha(3)).unwrap()));
        assert!(regex_unbounded(&parse_regex("((ab)*c|a)*", alpha(3)).unwrap()));
    }

    #[test]
    fn star_free_reduction_examples() {
        let r = parse_regex("a(bc)*d", alpha(4)).unwrap();
        let reduced = star_free_reduce(&r).unwrap();
        assert_eq!(reduced.regex().to_string(), "abcbcd");

        let r = parse_regex("ab|ba", alpha(2)).unwrap();
        let reduced = star_free_reduce(&r).unwrap();
        assert_eq!(reduced.regex().root(), r.root());

        let r = parse_regex("a*", alpha(2)).unwrap();
        let reduced = star_free_reduce(&r).unwrap();
        assert_eq!(reduced.regex().to_string(), "aa");

        let r = parse_regex("(a*b)*", alpha(3)).unwrap();
        let reduced = star_free_reduce(&r).unwrap();
        assert_eq!(reduced.regex().to_string(), "abab");

        assert!(star_free_reduce(&parse_regex("(ab)*", alpha(2)).unwrap()).is_err());
    }

    #[test]
    fn thompson_small_languages() {
        let nfa = thompson(&parse_regex("a", alpha(1)).unwrap());
        assert_eq!(nfa.state_count(), 2);
        assert_eq!(nfa.transitions().len(), 1);

        let nfa = thompson(&parse_regex("ab|ba", alpha(2)).unwrap());
        let w = |t: &str| Word::parse(t, alpha(2)).unwrap();
        assert!(nfa.accepts(&w("ab")).unwrap());
        assert!(nfa.accepts(&w("ba")).unwrap());
        for bad in ["", "a", "b", "aa", "bb", "aba", "bab"] {
            assert!(!nfa.accepts(&w(bad)).unwrap(), "{bad}");
        }

        let nfa = thompson(&parse_regex("_", alpha(1)).unwrap());
        assert!(nfa.accepts(&Word::empty(alpha(1))).unwrap());
        assert!(!nfa.accepts(&Word::parse("a", alpha(1)).unwrap()).unwrap());

        let nfa = thompson(&parse_regex("#", alpha(1)).unwrap());
        assert!(!nfa.accepts(&Word::empty(alpha(1))).unwrap());
    }

    #[test]
    fn k_esu_regex_paper_example() {
        assert!(k_esu_regex("(a*b*c|bc)|a*", alpha(3), 1).unwrap());
        assert!(!k_esu_regex("(a*b*c|bc)|a*", alpha(3), 2).unwrap());
        assert!(k_esu_regex("(ab)*", alpha(2), 1000).unwrap());
        assert!(!k_esu_regex("#", alpha(2), 1).unwrap());
    }

    /// The regex decision agrees with the word-search oracle on the raw
    /// Thompson automaton (no star-free rewriting on the oracle side).
    #[test]
    fn k_esu_matches_enumeration_on_random_regexes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let mut checked = 0;
        while checked < 60 {
            let sigma = rng.gen_range(1..=3);
            let r = random_ast(&mut rng, 10, sigma);
            let r = Regex::new(r, alpha(sigma));
            if regex_unbounded(&r) {
                continue;
            }
            checked += 1;
            let nfa = thompson(&r);
            for k in 1..=3 {
                assert_eq!(
                    k_esu(&r, k).unwrap(),
                    crate::oracle::esu_by_enumeration(&nfa, k).unwrap(),
                    "regex {r} k={k}"
                );
            }
        }
    }

    fn random_ast(rng: &mut impl rand::Rng, budget: usize, sigma: u32) -> Ast {
        if budget <= 1 {
            return match rng.gen_range(0..6) {
                0 => Ast::Epsilon,
                1 => Ast::Empty,
                _ => Ast::Letter(rng.gen_range(1..=sigma)),
            };
        }
        match rng.gen_range(0..10) {
            0..=3 => {
                let l = random_ast(rng, (budget - 1) / 2, sigma);
                let r = random_ast(rng, (budget - 1) / 2, sigma);
                Ast::Concat(Box::new(l), Box::new(r))
            }
            4..=6 => {
                let l = random_ast(rng, (budget - 1) / 2, sigma);
                let r = random_ast(rng, (budget - 1) / 2, sigma);
                Ast::Alt(Box::new(l), Box::new(r))
            }
            7 | 8 => Ast::Star(Box::new(random_ast(rng, budget - 1, sigma))),
            _ => Ast::Letter(rng.gen_range(1..=sigma)),
        }
    }

    #[test]
    fn reduction_size_stays_linear() {
        for text in ["a(bc)*d", "((a*b)*c)|(ab)", "a*b*a*b*", "(((a)))*"] {
            let r = parse_regex(text, alpha(4)).unwrap();
            if regex_unbounded(&r) {
                continue;
            }
            let reduced = star_free_reduce(&r).unwrap();
            assert!(reduced.regex().size() <= 3 * r.size(), "{text}");
        }
    }
}

//! Words over integer alphabets, subsequence tests, the arch factorisation
//! and the universality index.
//!
//! Letters are the integers `1..=sigma`. A word always carries its alphabet
//! explicitly: the universality index of a word depends on which alphabet it
//! is measured against, so it is never inferred from the letters present.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// An integer alphabet `{1, 2, ..., sigma}` with `sigma >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    sigma: u32,
}

impl Alphabet {
    pub fn new(sigma: u32) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::input("alphabet size must be at least 1"));
        }
        Ok(Alphabet { sigma })
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn contains(&self, letter: u32) -> bool {
        letter >= 1 && letter <= self.sigma
    }

    /// All letters in increasing order.
    pub fn letters(&self) -> impl Iterator<Item = u32> {
        1..=self.sigma
    }
}

/// A finite sequence of letters over an explicit alphabet. The empty word is
/// allowed.
///
/// `Ord` is shortlex: shorter words first, lexicographic within a length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u32>,
    alphabet: Alphabet,
}

impl Word {
    pub fn new(letters: Vec<u32>, alphabet: Alphabet) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| !alphabet.contains(l)) {
            return Err(Error::input(format!(
                "letter {bad} outside alphabet of size {}",
                alphabet.sigma()
            )));
        }
        Ok(Word { letters, alphabet })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word { letters: Vec::new(), alphabet }
    }

    /// Parses the text encoding: comma-separated decimal letters
    /// (e.g. `2,1,1,2`), or the `a..z` shortcut (e.g. `baab`) when
    /// `sigma <= 26`. The empty string denotes the empty word.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty(alphabet));
        }
        if text.chars().all(|c| c.is_ascii_lowercase()) {
            if alphabet.sigma() > 26 {
                return Err(Error::input(
                    "letter shortcut a..z is only available for sigma <= 26",
                ));
            }
            let letters = text.chars().map(|c| c as u32 - 'a' as u32 + 1).collect();
            return Word::new(letters, alphabet);
        }
        let letters = text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::input(format!("invalid letter {tok:?} in word")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters, alphabet)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        check_same_alphabet(self, other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { letters, alphabet: self.alphabet })
    }

    /// Text encoding of the word: `a..z` when `sigma <= 26`, else
    /// comma-separated decimals. The empty word encodes as the empty string.
    pub fn to_text(&self) -> String {
        if self.alphabet.sigma() <= 26 {
            self.letters
                .iter()
                .map(|&l| (b'a' + (l - 1) as u8) as char)
                .collect()
        } else {
            self.letters
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

/// The greedy arch factorisation of a word: a sequence of arches (each
/// 1-universal, closed by the first position completing the alphabet) and a
/// rest whose alphabet is a strict subset of the word's alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchFactorization {
    pub arches: Vec<Word>,
    pub rest: Word,
}

impl ArchFactorization {
    /// Joins arches and rest back into the factored word.
    pub fn join(&self) -> Word {
        let alphabet = self.rest.alphabet();
        let mut letters = Vec::new();
        for arch in &self.arches {
            letters.extend_from_slice(arch.letters());
        }
        letters.extend_from_slice(self.rest.letters());
        Word { letters, alphabet }
    }
}

fn check_same_alphabet(u: &Word, w: &Word) -> Result<()> {
    if u.alphabet() != w.alphabet() {
        return Err(Error::input(format!(
            "mismatched alphabets: sigma {} vs {}",
            u.alphabet().sigma(),
            w.alphabet().sigma()
        )));
    }
    Ok(())
}

/// Tests whether `u` embeds into `w` order-preservingly. The greedy
/// left-to-right scan is correct for subsequence containment.
pub fn is_subsequence(u: &Word, w: &Word) -> Result<bool> {
    check_same_alphabet(u, w)?;
    let mut it = u.letters().iter();
    let mut next = it.next();
    for &c in w.letters() {
        match next {
            Some(&n) if n == c => next = it.next(),
            Some(_) => {}
            None => break,
        }
    }
    Ok(next.is_none())
}

/// Computes the unique greedy arch factorisation: scan left to right and
/// close an arch at the first position where all `sigma` letters have been
/// seen; the unfinished tail is the rest.
pub fn arch_factorize(w: &Word) -> ArchFactorization {
    let alphabet = w.alphabet();
    let sigma = alphabet.sigma() as usize;
    let mut arches = Vec::new();
    let mut seen = vec![false; sigma + 1];
    let mut seen_count = 0usize;
    let mut start = 0usize;
    for (i, &c) in w.letters().iter().enumerate() {
        if !seen[c as usize] {
            seen[c as usize] = true;
            seen_count += 1;
        }
        if seen_count == sigma {
            arches.push(Word {
                letters: w.letters()[start..=i].to_vec(),
                alphabet,
            });
            start = i + 1;
            seen.iter_mut().for_each(|s| *s = false);
            seen_count = 0;
        }
    }
    let rest = Word {
        letters: w.letters()[start..].to_vec(),
        alphabet,
    };
    ArchFactorization { arches, rest }
}

/// The universality index: the number of arches of the arch factorisation,
/// which equals the largest `k` with `Subseq_k(w) = Sigma^k`.
pub fn universality_index(w: &Word) -> usize {
    let sigma = w.alphabet().sigma() as usize;
    let mut seen = vec![false; sigma + 1];
    let mut seen_count = 0usize;
    let mut arches = 0usize;
    for &c in w.letters() {
        if !seen[c as usize] {
            seen[c as usize] = true;
            seen_count += 1;
        }
        if seen_count == sigma {
            arches += 1;
            seen.iter_mut().for_each(|s| *s = false);
            seen_count = 0;
        }
    }
    arches
}

/// The set of all length-`k` subsequences of `w`. A test-scale oracle:
/// output size can reach `C(|w|, k)`; keep the inputs small.
pub fn subseq_set(w: &Word, k: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    if k > w.len() {
        return out;
    }
    let alphabet = w.alphabet();
    let mut buf = Vec::with_capacity(k);
    fn go(
        letters: &[u32],
        from: usize,
        k: usize,
        buf: &mut Vec<u32>,
        alphabet: Alphabet,
        out: &mut BTreeSet<Word>,
    ) {
        if buf.len() == k {
            out.insert(Word { letters: buf.clone(), alphabet });
            return;
        }
        let need = k - buf.len();
        for i in from..=letters.len().saturating_sub(need) {
            buf.push(letters[i]);
            go(letters, i + 1, k, buf, alphabet, out);
            buf.pop();
        }
    }
    go(w.letters(), 0, k, &mut buf, alphabet, &mut out);
    out
}

/// One letter step of the arch/rest state `(arches_so_far, rest_alphabet)`,
/// with the arch counter saturating at `cap`: completing the alphabet closes
/// an arch and empties the rest, otherwise the letter joins the rest.
///
/// Rest alphabets are bitmasks with bit `l - 1` for letter `l`.
pub(crate) fn arch_step(c: usize, rest: u32, letter: u32, full: u32, cap: usize) -> (usize, u32) {
    let r = rest | (1 << (letter - 1));
    if r == full {
        (if c < cap { c + 1 } else { cap }, 0)
    } else {
        (c, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, sigma: u32) -> Word {
        Word::parse(text, Alphabet::new(sigma).unwrap()).unwrap()
    }

    #[test]
    fn subsequence_examples() {
        let sigma = 26;
        let big = w("automatauniversality", sigma);
        assert!(is_subsequence(&w("auto", sigma), &big).unwrap());
        assert!(is_subsequence(&w("", sigma), &big).unwrap());
        assert!(is_subsequence(&w("", sigma), &w("", sigma)).unwrap());
        assert!(!is_subsequence(&w("star", sigma), &big).unwrap());
        assert!(!is_subsequence(&w("alien", sigma), &big).unwrap());
    }

    #[test]
    fn subsequence_alphabet_mismatch_is_an_error() {
        let u = w("a", 2);
        let v = w("a", 3);
        assert!(is_subsequence(&u, &v).is_err());
    }

    #[test]
    fn arch_factorization_example() {
        let word = w("baaababb", 2);
        let f = arch_factorize(&word);
        let arches: Vec<String> = f.arches.iter().map(Word::to_text).collect();
        assert_eq!(arches, ["ba", "aab", "ab"]);
        assert_eq!(f.rest.to_text(), "b");
        assert_eq!(universality_index(&word), 3);
    }

    #[test]
    fn arch_factorization_empty_word() {
        let word = w("", 3);
        let f = arch_factorize(&word);
        assert!(f.arches.is_empty());
        assert!(f.rest.is_empty());
        assert_eq!(universality_index(&word), 0);
    }

    #[test]
    fn arch_factorization_complete_arches() {
        let word = w("abcabc", 3);
        let f = arch_factorize(&word);
        let arches: Vec<String> = f.arches.iter().map(Word::to_text).collect();
        assert_eq!(arches, ["abc", "abc"]);
        assert!(f.rest.is_empty());
    }

    #[test]
    fn unary_alphabet_every_letter_closes_an_arch() {
        let word = w("aaaaaaa", 1);
        assert_eq!(universality_index(&word), 7);
    }

    #[test]
    fn subseq_set_examples() {
        let word = w("baaababb", 2);
        let set = subseq_set(&word, 3);
        assert_eq!(set.len(), 8);

        assert_eq!(subseq_set(&w("ab", 2), 2).len(), 1);

        let set = subseq_set(&w("aba", 2), 2);
        let texts: Vec<String> = set.iter().map(Word::to_text).collect();
        assert_eq!(texts, ["aa", "ab", "ba"]);

        assert!(subseq_set(&w("ab", 2), 3).is_empty());
    }

    #[test]
    fn word_text_round_trip() {
        let a = Alphabet::new(30).unwrap();
        let word = Word::new(vec![2, 1, 29, 2], a).unwrap();
        assert_eq!(word.to_text(), "2,1,29,2");
        assert_eq!(Word::parse(&word.to_text(), a).unwrap(), word);
        let word = w("baab", 2);
        assert_eq!(word.to_text(), "baab");
        assert_eq!(word.letters(), &[2, 1, 1, 2]);
    }

    #[test]
    fn letters_out_of_range_rejected() {
        assert!(Word::new(vec![3], Alphabet::new(2).unwrap()).is_err());
        assert!(Word::parse("d", Alphabet::new(3).unwrap()).is_err());
        assert!(Word::parse("0", Alphabet::new(3).unwrap()).is_err());
    }

    /// Every word over sigma <= 3 up to a small length: iota equals the
    /// largest k such that all of Sigma^k embeds (and Sigma^(k+1) does not).
    #[test]
    fn universality_index_matches_subsequence_definition() {
        for sigma in 1u32..=3 {
            let alphabet = Alphabet::new(sigma).unwrap();
            let max_len = 10;
            for len in 0..=max_len {
                for_each_word(sigma, len, |letters| {
                    let word = Word::new(letters.to_vec(), alphabet).unwrap();
                    let iota = universality_index(&word);
                    assert!(all_words_embed(&word, iota));
                    assert!(!all_words_embed(&word, iota + 1));
                });
            }
        }
    }

    #[test]
    fn concatenation_superadditivity_and_monotonicity() {
        let sigma = 2;
        let alphabet = Alphabet::new(sigma).unwrap();
        for len_u in 0..=6usize {
            for_each_word(sigma, len_u, |u_letters| {
                let u = Word::new(u_letters.to_vec(), alphabet).unwrap();
                for len_v in 0..=4usize {
                    for_each_word(sigma, len_v, |v_letters| {
                        let v = Word::new(v_letters.to_vec(), alphabet).unwrap();
                        let uv = u.concat(&v).unwrap();
                        assert!(
                            universality_index(&uv)
                                >= universality_index(&u) + universality_index(&v)
                        );
                    });
                }
            });
        }
    }

    #[test]
    fn reconstruction_is_exact() {
        for sigma in 1u32..=3 {
            let alphabet = Alphabet::new(sigma).unwrap();
            for len in 0..=7usize {
                for_each_word(sigma, len, |letters| {
                    let word = Word::new(letters.to_vec(), alphabet).unwrap();
                    assert_eq!(arch_factorize(&word).join(), word);
                });
            }
        }
    }

    #[test]
    fn subsequence_implies_index_monotone() {
        let alphabet = Alphabet::new(2).unwrap();
        for len in 0..=7usize {
            for_each_word(2, len, |letters| {
                let word = Word::new(letters.to_vec(), alphabet).unwrap();
                for k in 0..=len {
                    for sub in subseq_set(&word, k) {
                        assert!(is_subsequence(&sub, &word).unwrap());
                        assert!(universality_index(&sub) <= universality_index(&word));
                    }
                }
            });
        }
    }

    mod properties {
        use proptest::prelude::*;

        use super::super::*;

        fn words(sigma: u32, max_len: usize) -> impl Strategy<Value = Word> {
            proptest::collection::vec(1u32..=sigma, 0..=max_len)
                .prop_map(move |letters| Word::new(letters, Alphabet::new(sigma).unwrap()).unwrap())
        }

        proptest! {
            #[test]
            fn reconstruction(w in words(4, 48)) {
                prop_assert_eq!(arch_factorize(&w).join(), w);
            }

            #[test]
            fn superadditive_concatenation(u in words(3, 24), v in words(3, 24)) {
                let uv = u.concat(&v).unwrap();
                prop_assert!(
                    universality_index(&uv)
                        >= universality_index(&u) + universality_index(&v)
                );
            }

            #[test]
            fn arches_are_one_universal_and_rest_is_partial(w in words(3, 32)) {
                let f = arch_factorize(&w);
                for arch in &f.arches {
                    prop_assert_eq!(universality_index(arch), 1);
                    let last = *arch.letters().last().unwrap();
                    prop_assert!(!arch.letters()[..arch.len() - 1].contains(&last));
                }
                let mut rest_letters: Vec<u32> = f.rest.letters().to_vec();
                rest_letters.sort_unstable();
                rest_letters.dedup();
                prop_assert!(rest_letters.len() < 3);
            }
        }
    }

    fn for_each_word(sigma: u32, len: usize, mut f: impl FnMut(&[u32])) {
        let mut letters = vec![1u32; len];
        loop {
            f(&letters);
            let mut i = len;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if letters[i] < sigma {
                    letters[i] += 1;
                    letters[i + 1..].iter_mut().for_each(|l| *l = 1);
                    break;
                }
            }
        }
    }

    fn all_words_embed(w: &Word, k: usize) -> bool {
        let sigma = w.alphabet().sigma();
        let mut probe = vec![1u32; k];
        loop {
            let u = Word::new(probe.clone(), w.alphabet()).unwrap();
            if !is_subsequence(&u, w).unwrap() {
                return false;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                if probe[i] < sigma {
                    probe[i] += 1;
                    probe[i + 1..].iter_mut().for_each(|l| *l = 1);
                    break;
                }
            }
        }
    }
}

//! Exact counting and ranking of k-universal accepting paths (words, for
//! deterministic automata) with arbitrary-precision arithmetic.
//!
//! The workhorse is a layered table indexed by state, path length, arch
//! count and rest alphabet. The arch counter saturates at `k`; saturated
//! cells keep tracking the rest alphabet so that perfect universality
//! (`k`-universal with empty rest) falls out of the same table. Counting a
//! language's total is done on a product automaton whose cycles witness
//! infinitude.
//!
//! All functions require an epsilon-free automaton: every table layer
//! equates path length with word length. Apply
//! [`crate::nfa::remove_epsilon`] first when needed (path counts then refer
//! to the converted automaton).

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::nfa::{Nfa, StateId};
use crate::word::{arch_factorize, arch_step, Word};

/// Largest alphabet for which the rest-alphabet dimension is materialized.
pub const MAX_SIGMA: u32 = 20;
const MAX_CELLS: usize = 1 << 27;

/// Exact-integer path tables over an epsilon-free NFA.
///
/// `t(q, l, c, rest)` counts the length-`l` paths from the initial state to
/// `q` whose word has exactly `c < k` arches and rest alphabet `rest`;
/// `u(q, l)` counts those whose word has at least `k` arches.
#[derive(Debug, Clone)]
pub struct PathTables {
    k: usize,
    m: usize,
    n: usize,
    width: usize,
    full: u32,
    // Layer-major storage: [length][state][arches 0..=k][rest mask].
    cells: Vec<BigUint>,
}

impl PathTables {
    fn idx(&self, l: usize, q: StateId, c: usize, rest: u32) -> usize {
        ((l * self.n + q) * (self.k + 1) + c) * self.width + rest as usize
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_length(&self) -> usize {
        self.m
    }

    /// Paths with exactly `c` arches (`c < k`) and rest alphabet `rest`.
    pub fn t(&self, q: StateId, l: usize, c: usize, rest: u32) -> &BigUint {
        assert!(c < self.k, "t is indexed by arch counts below k");
        &self.cells[self.idx(l, q, c, rest)]
    }

    /// Paths whose word is k-universal.
    pub fn u(&self, q: StateId, l: usize) -> BigUint {
        (0..self.width as u32)
            .map(|rest| &self.cells[self.idx(l, q, self.k, rest)])
            .sum()
    }

    /// Paths whose word is k-universal with an empty rest.
    pub fn perfect_u(&self, q: StateId, l: usize) -> &BigUint {
        &self.cells[self.idx(l, q, self.k, 0)]
    }
}

fn check_input(a: &Nfa, k: usize) -> Result<(u32, u32)> {
    if a.has_epsilon_transitions() {
        return Err(Error::input(
            "counting requires an epsilon-free automaton; apply remove_epsilon first",
        ));
    }
    if k == 0 {
        return Err(Error::input("universality target k must be at least 1"));
    }
    let sigma = a.alphabet().sigma();
    if sigma > MAX_SIGMA {
        return Err(Error::capacity(format!(
            "alphabet size {sigma} exceeds the counting bound {MAX_SIGMA}"
        )));
    }
    Ok((sigma, (1u32 << sigma) - 1))
}

fn table_shell(a: &Nfa, m: usize, k: usize) -> Result<PathTables> {
    let (sigma, full) = check_input(a, k)?;
    let n = a.state_count();
    let width = 1usize << sigma;
    let cells = (m + 1)
        .saturating_mul(n)
        .saturating_mul(k + 1)
        .saturating_mul(width);
    if cells > MAX_CELLS {
        return Err(Error::capacity(format!(
            "path table of {cells} cells exceeds the memory bound"
        )));
    }
    Ok(PathTables {
        k,
        m,
        n,
        width,
        full,
        cells: vec![BigUint::zero(); cells],
    })
}

fn fill_layers(tables: &mut PathTables, a: &Nfa) {
    for l in 1..=tables.m {
        for t in a.transitions() {
            let letter = t.label.letter().expect("epsilon-free");
            for c in 0..=tables.k {
                for rest in 0..tables.width as u32 {
                    let src = tables.idx(l - 1, t.from, c, rest);
                    if tables.cells[src].is_zero() {
                        continue;
                    }
                    let (c2, rest2) = arch_step(c, rest, letter, tables.full, tables.k);
                    let dst = tables.idx(l, t.to, c2, rest2);
                    let value = tables.cells[src].clone();
                    tables.cells[dst] += value;
                }
            }
        }
    }
}

/// Builds the path tables for lengths `0..=m`: the single empty path seeds
/// `t(initial, 0, 0, {})`, and each layer extends the previous one along
/// every transition, closing an arch exactly when the rest completes the
/// alphabet.
pub fn build_tables(a: &Nfa, m: usize, k: usize) -> Result<PathTables> {
    let mut tables = table_shell(a, m, k)?;
    let root = tables.idx(0, a.initial(), 0, 0);
    tables.cells[root] = BigUint::from(1u32);
    fill_layers(&mut tables, a);
    Ok(tables)
}

/// Builds prefix-restricted path tables: cells count only paths whose word
/// extends one of `prefixes` (which must be prefix-free and nonempty words).
/// Each prefix seeds every state it can reach, weighted by the number of
/// paths spelling it.
pub fn build_tables_with_prefixes(
    a: &Nfa,
    m: usize,
    k: usize,
    prefixes: &[Word],
) -> Result<PathTables> {
    let mut tables = table_shell(a, m, k)?;
    for p in prefixes {
        if p.is_empty() || p.len() > m {
            continue;
        }
        // Path-count vector along p, then the arch state of p itself.
        let mut counts = vec![BigUint::zero(); a.state_count()];
        counts[a.initial()] = BigUint::from(1u32);
        for &letter in p.letters() {
            let mut next = vec![BigUint::zero(); a.state_count()];
            for t in a.transitions() {
                if t.label.letter() == Some(letter) && !counts[t.from].is_zero() {
                    let add = counts[t.from].clone();
                    next[t.to] += add;
                }
            }
            counts = next;
        }
        let f = arch_factorize(p);
        let c = f.arches.len().min(k);
        let rest = f
            .rest
            .letters()
            .iter()
            .fold(0u32, |mask, &l| mask | (1 << (l - 1)));
        for (q, count) in counts.into_iter().enumerate() {
            if !count.is_zero() {
                let dst = tables.idx(p.len(), q, c, rest);
                tables.cells[dst] += count;
            }
        }
    }
    // Seeded cells already hold their base value; layer filling accumulates
    // extensions on top, and layer l is read only after its seeds are in.
    fill_layers(&mut tables, a);
    Ok(tables)
}

/// The number of k-universal accepting paths of length exactly `m`
/// (`perfect` restricts to paths whose word also has an empty rest). Zero
/// whenever `m < k * sigma`.
pub fn count_exact(a: &Nfa, m: usize, k: usize, perfect: bool) -> Result<BigUint> {
    let (sigma, _) = check_input(a, k)?;
    if m < k * sigma as usize {
        return Ok(BigUint::zero());
    }
    let tables = build_tables(a, m, k)?;
    Ok(sum_universal(&tables, a, m, perfect))
}

/// The number of k-universal accepting paths of length at most `m`.
pub fn count_at_most(a: &Nfa, m: usize, k: usize, perfect: bool) -> Result<BigUint> {
    let (sigma, _) = check_input(a, k)?;
    if m < k * sigma as usize {
        return Ok(BigUint::zero());
    }
    let tables = build_tables(a, m, k)?;
    let mut total = BigUint::zero();
    for l in 0..=m {
        total += sum_universal(&tables, a, l, perfect);
    }
    Ok(total)
}

fn sum_universal(tables: &PathTables, a: &Nfa, l: usize, perfect: bool) -> BigUint {
    a.finals()
        .iter()
        .map(|&q| {
            if perfect {
                tables.perfect_u(q, l).clone()
            } else {
                tables.u(q, l)
            }
        })
        .sum()
}

/// Whether counting refers to accepting paths of an NFA or to the words of
/// a deterministic automaton (where the two coincide).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountSemantics {
    Words,
    Paths,
}

/// A total count: finite with an exact value, or provably infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TotalCount {
    Finite(BigUint),
    Infinite,
}

fn require_semantics(a: &Nfa, semantics: CountSemantics) -> Result<()> {
    if semantics == CountSemantics::Words && !a.is_deterministic() {
        return Err(Error::input(
            "word counting requires a deterministic automaton; \
             use path semantics for NFAs",
        ));
    }
    Ok(())
}

/// The total number of k-universal accepting paths (words, for DFAs) over
/// all lengths. The universality product automaton, trimmed to its useful
/// part, has a cycle iff the count is infinite; otherwise the count is the
/// number of accepting paths of the resulting DAG.
pub fn count_total(a: &Nfa, k: usize, semantics: CountSemantics) -> Result<TotalCount> {
    let (_, full) = check_input(a, k)?;
    require_semantics(a, semantics)?;

    // Product state ids: (q, c, rest) packed densely.
    let width = (1usize << a.alphabet().sigma()) * (k + 1);
    let pack = |q: StateId, c: usize, rest: u32| q * width + c * (1 << a.alphabet().sigma()) + rest as usize;
    let total_states = a.state_count() * width;
    if total_states > MAX_CELLS {
        return Err(Error::capacity("product automaton exceeds the memory bound"));
    }

    let start = pack(a.initial(), 0, 0);
    let mut reachable = vec![false; total_states];
    reachable[start] = true;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::from([start]);
    let sigma_bits = a.alphabet().sigma() as usize;
    let unpack_q = |id: usize| id / width;
    let unpack_c = |id: usize| (id % width) >> sigma_bits;
    let unpack_rest = |id: usize| ((id % width) & ((1 << sigma_bits) - 1)) as u32;
    while let Some(id) = queue.pop_front() {
        let (q, c, rest) = (unpack_q(id), unpack_c(id), unpack_rest(id));
        for t in a.outgoing(q) {
            let letter = t.label.letter().expect("epsilon-free");
            let (c2, rest2) = arch_step(c, rest, letter, full, k);
            let next = pack(t.to, c2, rest2);
            edges.push((id, next));
            if !reachable[next] {
                reachable[next] = true;
                queue.push_back(next);
            }
        }
    }

    let accepting = |id: usize| a.finals().contains(&unpack_q(id)) && unpack_c(id) == k;

    // Co-reachability from accepting states over the discovered edges.
    let mut rev: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v) in &edges {
        rev.entry(v).or_default().push(u);
    }
    let mut useful = vec![false; total_states];
    let mut queue: VecDeque<usize> = (0..total_states)
        .filter(|&id| reachable[id] && accepting(id))
        .collect();
    queue.iter().for_each(|&id| useful[id] = true);
    while let Some(id) = queue.pop_front() {
        if let Some(preds) = rev.get(&id) {
            for &p in preds {
                if reachable[p] && !useful[p] {
                    useful[p] = true;
                    queue.push_back(p);
                }
            }
        }
    }
    if !useful[start] {
        return Ok(TotalCount::Finite(BigUint::zero()));
    }

    // Kahn's algorithm on the trimmed product; leftovers witness a cycle.
    let trimmed: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(u, v)| useful[u] && useful[v])
        .collect();
    let mut indegree: HashMap<usize, usize> = HashMap::new();
    for id in 0..total_states {
        if useful[id] {
            indegree.entry(id).or_insert(0);
        }
    }
    let mut fwd: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v) in &trimmed {
        *indegree.entry(v).or_insert(0) += 1;
        fwd.entry(u).or_default().push(v);
    }
    let mut order: Vec<usize> = Vec::with_capacity(indegree.len());
    let mut queue: VecDeque<usize> = indegree
        .iter()
        .filter(|&(_, &d)| d == 0)
        .map(|(&id, _)| id)
        .collect();
    while let Some(id) = queue.pop_front() {
        order.push(id);
        if let Some(succs) = fwd.get(&id) {
            for &v in succs {
                let d = indegree.get_mut(&v).expect("known vertex");
                *d -= 1;
                if *d == 0 {
                    queue.push_back(v);
                }
            }
        }
    }
    if order.len() < indegree.len() {
        return Ok(TotalCount::Infinite);
    }

    // DAG path counting from the start state.
    let mut count: HashMap<usize, BigUint> = HashMap::new();
    count.insert(start, BigUint::from(1u32));
    let mut total = BigUint::zero();
    for &id in &order {
        let Some(c) = count.get(&id).cloned() else { continue };
        if accepting(id) {
            total += &c;
        }
        if let Some(succs) = fwd.get(&id) {
            for &v in succs {
                *count.entry(v).or_insert_with(BigUint::zero) += &c;
            }
        }
    }
    Ok(TotalCount::Finite(total))
}

/// Which set of k-universal paths/words a rank is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    /// Words of length exactly `m` (requires `|w| = m`), ordered
    /// lexicographically.
    Exact { m: usize },
    /// Words of length at most `m`, ordered shortlex.
    AtMost { m: usize },
    /// The whole language, ordered shortlex; requires a finite total.
    Total,
}

/// The set of smaller-prefix extensions of `w`: every `w[..i]x` with the
/// letter `x` strictly below `w[i]`. Prefix-free by construction; a word `v`
/// of length `|w|` is lexicographically smaller than `w` iff it extends
/// exactly one of them.
fn smaller_prefixes(w: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        for x in 1..w.letters()[i] {
            let mut letters = w.letters()[..i].to_vec();
            letters.push(x);
            out.push(Word::new(letters, w.alphabet()).expect("letters in range"));
        }
    }
    out
}

/// The number of k-universal accepted paths labelled by words strictly
/// smaller than `w` in the chosen set. For deterministic automata this is
/// the rank of `w` among k-universal words; for NFAs under path semantics,
/// paths labelled by `w` itself are not counted.
pub fn rank(
    a: &Nfa,
    w: &Word,
    k: usize,
    mode: RankMode,
    semantics: CountSemantics,
) -> Result<BigUint> {
    check_input(a, k)?;
    require_semantics(a, semantics)?;
    if w.alphabet() != a.alphabet() {
        return Err(Error::input(format!(
            "word alphabet sigma {} does not match automaton sigma {}",
            w.alphabet().sigma(),
            a.alphabet().sigma()
        )));
    }

    match mode {
        RankMode::Exact { m } => {
            if w.len() != m {
                return Err(Error::input(format!(
                    "exact-length rank requires |w| = {m}, got {}",
                    w.len()
                )));
            }
            rank_same_length(a, w, k)
        }
        RankMode::AtMost { m } => {
            if w.len() > m {
                // Everything in the set is shortlex-smaller than w.
                return count_at_most(a, m, k, false);
            }
            let mut total = rank_shorter(a, w, k)?;
            total += rank_same_length(a, w, k)?;
            Ok(total)
        }
        RankMode::Total => {
            if let TotalCount::Infinite = count_total(a, k, semantics)? {
                return Err(Error::input(
                    "rank over the whole language requires a finite total count",
                ));
            }
            let mut total = rank_shorter(a, w, k)?;
            total += rank_same_length(a, w, k)?;
            Ok(total)
        }
    }
}

/// k-universal accepted paths with length below `|w|`.
fn rank_shorter(a: &Nfa, w: &Word, k: usize) -> Result<BigUint> {
    if w.is_empty() {
        return Ok(BigUint::zero());
    }
    count_at_most(a, w.len() - 1, k, false)
}

/// k-universal accepted paths of length `|w|` with a lexicographically
/// smaller word.
fn rank_same_length(a: &Nfa, w: &Word, k: usize) -> Result<BigUint> {
    let m = w.len();
    if m < k * a.alphabet().sigma() as usize {
        return Ok(BigUint::zero());
    }
    let prefixes = smaller_prefixes(w);
    let tables = build_tables_with_prefixes(a, m, k, &prefixes)?;
    Ok(a.finals().iter().map(|&q| tables.u(q, m)).sum())
}

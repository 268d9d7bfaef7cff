//! NFA data model, the line-oriented text format, and normalization
//! (trimming, fresh single final state, epsilon removal).

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

pub type StateId = usize;

/// A transition label: a real letter or the empty word. In the text format
/// epsilon is encoded as label `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Epsilon,
    Letter(u32),
}

impl Label {
    pub fn letter(self) -> Option<u32> {
        match self {
            Label::Epsilon => None,
            Label::Letter(l) => Some(l),
        }
    }

    fn code(self) -> u32 {
        match self {
            Label::Epsilon => 0,
            Label::Letter(l) => l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub label: Label,
    pub to: StateId,
}

/// A nondeterministic finite automaton over an integer alphabet, with
/// epsilon transitions allowed. States are `0..state_count`; the transition
/// set is kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    state_count: usize,
    initial: StateId,
    finals: BTreeSet<StateId>,
    transitions: Vec<Transition>,
    // outgoing_index[q]..outgoing_index[q+1] delimits transitions from q.
    outgoing_index: Vec<usize>,
}

impl Nfa {
    pub fn new(
        alphabet: Alphabet,
        state_count: usize,
        initial: StateId,
        finals: BTreeSet<StateId>,
        mut transitions: Vec<Transition>,
    ) -> Result<Self> {
        if state_count == 0 {
            return Err(Error::input("automaton must have at least one state"));
        }
        if initial >= state_count {
            return Err(Error::input(format!("initial state {initial} out of range")));
        }
        if finals.is_empty() {
            return Err(Error::input("automaton must have at least one final state"));
        }
        if let Some(&bad) = finals.iter().find(|&&q| q >= state_count) {
            return Err(Error::input(format!("final state {bad} out of range")));
        }
        for t in &transitions {
            if t.from >= state_count || t.to >= state_count {
                return Err(Error::input(format!(
                    "transition ({}, {}, {}) out of range",
                    t.from,
                    t.label.code(),
                    t.to
                )));
            }
            if let Label::Letter(l) = t.label {
                if !alphabet.contains(l) {
                    return Err(Error::input(format!(
                        "transition letter {l} outside alphabet of size {}",
                        alphabet.sigma()
                    )));
                }
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        let outgoing_index = build_outgoing_index(state_count, &transitions);
        Ok(Nfa { alphabet, state_count, initial, finals, transitions, outgoing_index })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, q: StateId) -> &[Transition] {
        &self.transitions[self.outgoing_index[q]..self.outgoing_index[q + 1]]
    }

    pub fn has_epsilon_transitions(&self) -> bool {
        self.transitions.iter().any(|t| t.label == Label::Epsilon)
    }

    /// At most one target per `(state, letter)` pair and no epsilon moves.
    /// Partial transition functions count as deterministic.
    pub fn is_deterministic(&self) -> bool {
        !self.has_epsilon_transitions()
            && self
                .transitions
                .windows(2)
                .all(|w| (w[0].from, w[0].label) != (w[1].from, w[1].label))
    }

    /// The epsilon closure of a state set, in place.
    fn close(&self, set: &mut BTreeSet<StateId>) {
        let mut queue: VecDeque<StateId> = set.iter().copied().collect();
        while let Some(q) = queue.pop_front() {
            for t in self.outgoing(q) {
                if t.label == Label::Epsilon && set.insert(t.to) {
                    queue.push_back(t.to);
                }
            }
        }
    }

    pub(crate) fn closed_initial(&self) -> BTreeSet<StateId> {
        let mut set = BTreeSet::from([self.initial]);
        self.close(&mut set);
        set
    }

    pub(crate) fn step_closed(&self, set: &BTreeSet<StateId>, letter: u32) -> BTreeSet<StateId> {
        let mut next = BTreeSet::new();
        for &q in set {
            for t in self.outgoing(q) {
                if t.label == Label::Letter(letter) {
                    next.insert(t.to);
                }
            }
        }
        self.close(&mut next);
        next
    }

    pub(crate) fn contains_final(&self, set: &BTreeSet<StateId>) -> bool {
        set.iter().any(|q| self.finals.contains(q))
    }

    /// Tests acceptance by the on-the-fly subset construction with epsilon
    /// closures.
    pub fn accepts(&self, w: &Word) -> Result<bool> {
        if w.alphabet() != self.alphabet {
            return Err(Error::input(format!(
                "mismatched alphabets: word sigma {} vs automaton sigma {}",
                w.alphabet().sigma(),
                self.alphabet.sigma()
            )));
        }
        let mut set = self.closed_initial();
        for &c in w.letters() {
            set = self.step_closed(&set, c);
            if set.is_empty() {
                return Ok(false);
            }
        }
        Ok(self.contains_final(&set))
    }

    /// Serializes to the text format accepted by [`parse_nfa`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("nfa\n");
        let _ = writeln!(out, "sigma {}", self.alphabet.sigma());
        let _ = writeln!(out, "states {}", self.state_count);
        let _ = writeln!(out, "initial {}", self.initial);
        let finals: Vec<String> = self.finals.iter().map(|q| q.to_string()).collect();
        let _ = writeln!(out, "final {}", finals.join(" "));
        for t in &self.transitions {
            let _ = writeln!(out, "{} {} {}", t.from, t.label.code(), t.to);
        }
        out.push_str("end\n");
        out
    }
}

fn build_outgoing_index(state_count: usize, transitions: &[Transition]) -> Vec<usize> {
    let mut index = vec![0usize; state_count + 1];
    for t in transitions {
        index[t.from + 1] += 1;
    }
    for q in 0..state_count {
        index[q + 1] += index[q];
    }
    index
}

/// Parses the line-oriented NFA format:
///
/// ```text
/// nfa
/// sigma 3
/// states 3
/// initial 0
/// final 2
/// 0 1 0
/// 1 3 2
/// end
/// ```
///
/// `#` starts a comment; tokens are whitespace-separated. Transition lines
/// are `from label to` with label `0` denoting epsilon. Exactly one
/// `initial`; `final` lists one or more state ids.
pub fn parse_nfa(text: &str) -> Result<Nfa> {
    let mut sigma: Option<u32> = None;
    let mut states: Option<usize> = None;
    let mut initial: Option<StateId> = None;
    let mut finals: Option<BTreeSet<StateId>> = None;
    let mut transitions: Vec<Transition> = Vec::new();
    let mut saw_magic = false;
    let mut saw_end = false;

    let err = |line: usize, message: &str| Error::NfaParse {
        line,
        message: message.to_string(),
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if saw_end {
            return Err(err(line_no, "content after end"));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !saw_magic {
            if tokens == ["nfa"] {
                saw_magic = true;
                continue;
            }
            return Err(err(line_no, "expected header line 'nfa'"));
        }
        match tokens[0] {
            "sigma" | "states" | "initial" => {
                if tokens.len() != 2 {
                    return Err(err(line_no, "expected a single value"));
                }
                let value: usize = tokens[1]
                    .parse()
                    .map_err(|_| err(line_no, "invalid number"))?;
                let slot_taken = match tokens[0] {
                    "sigma" => sigma.replace(value as u32).is_some(),
                    "states" => states.replace(value).is_some(),
                    _ => initial.replace(value).is_some(),
                };
                if slot_taken {
                    return Err(err(line_no, "duplicate header"));
                }
            }
            "final" => {
                if tokens.len() < 2 {
                    return Err(err(line_no, "final requires at least one state id"));
                }
                let ids = tokens[1..]
                    .iter()
                    .map(|t| t.parse::<usize>().map_err(|_| err(line_no, "invalid state id")))
                    .collect::<Result<BTreeSet<_>>>()?;
                if finals.replace(ids).is_some() {
                    return Err(err(line_no, "duplicate header"));
                }
            }
            "end" => {
                if tokens.len() != 1 {
                    return Err(err(line_no, "unexpected tokens after end"));
                }
                saw_end = true;
            }
            _ => {
                if tokens.len() != 3 {
                    return Err(err(line_no, "expected transition 'from label to'"));
                }
                let parse =
                    |t: &str| t.parse::<usize>().map_err(|_| err(line_no, "invalid number"));
                let (from, code, to) = (parse(tokens[0])?, parse(tokens[1])?, parse(tokens[2])?);
                let sigma = sigma.ok_or_else(|| err(line_no, "transition before sigma header"))?;
                let states =
                    states.ok_or_else(|| err(line_no, "transition before states header"))?;
                if from >= states || to >= states {
                    return Err(err(line_no, "state out of range"));
                }
                if code as u32 > sigma {
                    return Err(err(line_no, "letter out of range"));
                }
                let label = if code == 0 { Label::Epsilon } else { Label::Letter(code as u32) };
                transitions.push(Transition { from, label, to });
            }
        }
    }

    if !saw_magic {
        return Err(err(text.lines().count().max(1), "missing header"));
    }
    if !saw_end {
        return Err(err(text.lines().count().max(1), "missing end"));
    }
    let sigma = sigma.ok_or_else(|| err(1, "missing sigma header"))?;
    let states = states.ok_or_else(|| err(1, "missing states header"))?;
    let initial = initial.ok_or_else(|| err(1, "missing initial header"))?;
    let finals = finals.ok_or_else(|| err(1, "missing final header"))?;
    let alphabet = Alphabet::new(sigma)?;
    Nfa::new(alphabet, states, initial, finals, transitions)
}

/// An NFA in the normal form assumed by the universality algorithms: every
/// state is accessible and co-accessible, there is exactly one final state,
/// and the final state has no outgoing transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedNfa {
    nfa: Nfa,
    final_state: StateId,
}

impl NormalizedNfa {
    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    pub fn final_state(&self) -> StateId {
        self.final_state
    }
}

/// Normalizes an NFA: appends a fresh sink final state reached by epsilon
/// from each original final, trims non-accessible and non-co-accessible
/// states, and renumbers densely. Returns `None` when the language is empty.
pub fn normalize(a: &Nfa) -> Option<NormalizedNfa> {
    let fresh = a.state_count;
    let n = a.state_count + 1;
    let mut transitions: Vec<Transition> = a.transitions.clone();
    for &f in &a.finals {
        transitions.push(Transition { from: f, label: Label::Epsilon, to: fresh });
    }

    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for t in &transitions {
        forward[t.from].push(t.to);
        backward[t.to].push(t.from);
    }
    let accessible = reach(&forward, a.initial, n);
    let coaccessible = reach(&backward, fresh, n);

    let mut renumber = vec![usize::MAX; n];
    let mut kept = 0usize;
    for q in 0..n {
        if accessible[q] && coaccessible[q] {
            renumber[q] = kept;
            kept += 1;
        }
    }
    if renumber[fresh] == usize::MAX || renumber[a.initial] == usize::MAX {
        return None;
    }

    let transitions = transitions
        .into_iter()
        .filter(|t| renumber[t.from] != usize::MAX && renumber[t.to] != usize::MAX)
        .map(|t| Transition { from: renumber[t.from], label: t.label, to: renumber[t.to] })
        .collect();
    let final_state = renumber[fresh];
    let nfa = Nfa::new(
        a.alphabet,
        kept,
        renumber[a.initial],
        BTreeSet::from([final_state]),
        transitions,
    )
    .expect("renumbered automaton is well-formed");
    debug_assert!(nfa.outgoing(final_state).is_empty());
    Some(NormalizedNfa { nfa, final_state })
}

fn reach(adj: &[Vec<StateId>], start: StateId, n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for &r in &adj[q] {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    seen
}

/// Builds a language-equivalent NFA without epsilon transitions (standard
/// epsilon-closure construction) and trims it.
///
/// The result generally has several final states: a single sink final cannot
/// represent a language that contains the empty word alongside others, so the
/// counting routines work with a final-state set instead.
pub fn remove_epsilon(a: &Nfa) -> Nfa {
    let n = a.state_count;
    let closures: Vec<BTreeSet<StateId>> = (0..n)
        .map(|q| {
            let mut set = BTreeSet::from([q]);
            a.close(&mut set);
            set
        })
        .collect();

    let mut transitions: Vec<Transition> = Vec::new();
    for q in 0..n {
        for &s in &closures[q] {
            for t in a.outgoing(s) {
                if t.label != Label::Epsilon {
                    transitions.push(Transition { from: q, label: t.label, to: t.to });
                }
            }
        }
    }
    let finals: BTreeSet<StateId> = (0..n)
        .filter(|&q| closures[q].iter().any(|s| a.finals.contains(s)))
        .collect();

    if finals.is_empty() {
        return empty_language_nfa(a.alphabet);
    }

    // Trim: accepting-path counts are unaffected, dead states just vanish.
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for t in &transitions {
        forward[t.from].push(t.to);
        backward[t.to].push(t.from);
    }
    let accessible = reach(&forward, a.initial, n);
    let mut coaccessible = vec![false; n];
    {
        let mut queue: VecDeque<StateId> = finals.iter().copied().collect();
        finals.iter().for_each(|&q| coaccessible[q] = true);
        while let Some(q) = queue.pop_front() {
            for &r in &backward[q] {
                if !coaccessible[r] {
                    coaccessible[r] = true;
                    queue.push_back(r);
                }
            }
        }
    }

    let mut renumber = vec![usize::MAX; n];
    let mut kept = 0usize;
    for q in 0..n {
        if accessible[q] && coaccessible[q] {
            renumber[q] = kept;
            kept += 1;
        }
    }
    if renumber[a.initial] == usize::MAX {
        return empty_language_nfa(a.alphabet);
    }

    let transitions = transitions
        .into_iter()
        .filter(|t| renumber[t.from] != usize::MAX && renumber[t.to] != usize::MAX)
        .map(|t| Transition { from: renumber[t.from], label: t.label, to: renumber[t.to] })
        .collect();
    let finals = finals
        .into_iter()
        .filter(|&q| renumber[q] != usize::MAX)
        .map(|q| renumber[q])
        .collect();
    Nfa::new(a.alphabet, kept, renumber[a.initial], finals, transitions)
        .expect("renumbered automaton is well-formed")
}

/// The canonical empty-language NFA: an unreachable final state.
fn empty_language_nfa(alphabet: Alphabet) -> Nfa {
    Nfa::new(alphabet, 2, 0, BTreeSet::from([1]), Vec::new()).expect("well-formed")
}

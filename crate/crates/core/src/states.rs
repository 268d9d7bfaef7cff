//! The state-count-parameterized algorithm for the maximum universality
//! index: enumerate anchor-state subsets, test 1-arch feasibility of each
//! component sequence through a bipartite matching, and chain arches
//! greedily.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nfa::{Label, NormalizedNfa, StateId};
use crate::scc::{decompose, has_unbounded_universality, SccDecomposition};
use crate::MaxUniversality;

/// Default ceiling on the state count for the subset enumeration.
pub const DEFAULT_MAX_SUBSET_STATES: usize = 24;
/// The per-sequence letter bookkeeping uses 64-bit masks.
const MAX_SIGMA: u32 = 64;

/// A sequence of anchor states with pairwise distinct components, sorted
/// consistently with the topological order of the condensation.
#[derive(Debug, Clone)]
pub struct ComponentSequence {
    states: Vec<StateId>,
}

impl ComponentSequence {
    pub fn new(states: Vec<StateId>, d: &SccDecomposition) -> Result<Self> {
        let comps: Vec<usize> = states.iter().map(|&q| d.component_of(q)).collect();
        if comps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input(
                "sequence states must have distinct components in topological order",
            ));
        }
        Ok(ComponentSequence { states })
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }
}

/// A bipartite matching instance: left vertices are the gaps between
/// consecutive sequence components, right vertices the letters still missing
/// from the component label sets.
#[derive(Debug, Clone)]
pub struct MatchingInstance {
    pub left_count: usize,
    pub right_count: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Maximum-cardinality bipartite matching (Hopcroft-Karp): alternating BFS
/// layers followed by DFS augmentation.
pub fn hopcroft_karp(inst: &MatchingInstance) -> Vec<(usize, usize)> {
    let n = inst.left_count;
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in &inst.edges {
        debug_assert!(i < n && j < inst.right_count);
        adj[i].push(j);
    }
    let mut match_left = vec![usize::MAX; n];
    let mut match_right = vec![usize::MAX; inst.right_count];

    loop {
        // BFS from free left vertices assigns layer depths.
        let mut dist = vec![usize::MAX; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (i, &m) in match_left.iter().enumerate() {
            if m == usize::MAX {
                dist[i] = 0;
                queue.push_back(i);
            }
        }
        let mut found_augmenting = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let i2 = match_right[j];
                if i2 == usize::MAX {
                    found_augmenting = true;
                } else if dist[i2] == usize::MAX {
                    dist[i2] = dist[i] + 1;
                    queue.push_back(i2);
                }
            }
        }
        if !found_augmenting {
            break;
        }
        fn augment(
            i: usize,
            adj: &[Vec<usize>],
            dist: &mut [usize],
            match_left: &mut [usize],
            match_right: &mut [usize],
        ) -> bool {
            for idx in 0..adj[i].len() {
                let j = adj[i][idx];
                let i2 = match_right[j];
                if i2 == usize::MAX
                    || (dist[i2] == dist[i] + 1
                        && augment(i2, adj, dist, match_left, match_right))
                {
                    match_left[i] = j;
                    match_right[j] = i;
                    return true;
                }
            }
            dist[i] = usize::MAX;
            false
        }
        for i in 0..n {
            if match_left[i] == usize::MAX && dist[i] == 0 {
                augment(i, &adj, &mut dist, &mut match_left, &mut match_right);
            }
        }
    }

    match_left
        .iter()
        .enumerate()
        .filter(|&(_, &j)| j != usize::MAX)
        .map(|(i, &j)| (i, j))
        .collect()
}

/// Whether some walk from the first to the last anchor state, visiting the
/// sequence components in order, is labelled by a 1-universal word.
///
/// Connectivity of every consecutive component pair is required (epsilon
/// counts as a connector but contributes no letter); letters not covered by
/// the component label sets must be matched injectively onto the gaps.
pub fn one_arch_feasible(seq: &ComponentSequence, d: &SccDecomposition) -> Result<bool> {
    feasible_slice(&seq.states, d)
}

fn feasible_slice(states: &[StateId], d: &SccDecomposition) -> Result<bool> {
    let sigma = d.alphabet().sigma();
    if sigma > MAX_SIGMA {
        return Err(Error::capacity(format!(
            "alphabet size {sigma} exceeds the sequence-analysis bound {MAX_SIGMA}"
        )));
    }
    let full: u64 = if sigma == 64 { u64::MAX } else { (1u64 << sigma) - 1 };
    let h = states.len();
    let comps: Vec<usize> = states.iter().map(|&q| d.component_of(q)).collect();

    // Letters on the h-1 connecting gaps; empty gap means no walk at all.
    let mut gap_masks = Vec::with_capacity(h.saturating_sub(1));
    for gap in 0..h.saturating_sub(1) {
        let labels = d.labels_between(comps[gap], comps[gap + 1]);
        if labels.is_empty() {
            return Ok(false);
        }
        let mask = labels
            .iter()
            .filter_map(|&(_, l)| match l {
                Label::Epsilon => None,
                Label::Letter(x) => Some(1u64 << (x - 1)),
            })
            .fold(0u64, |m, b| m | b);
        gap_masks.push(mask);
    }

    let covered = comps
        .iter()
        .flat_map(|&c| d.v_set(c).iter())
        .fold(0u64, |m, &l| m | (1u64 << (l - 1)));
    if covered == full {
        return Ok(true);
    }
    let missing_mask = full & !covered;
    let missing_count = missing_mask.count_ones() as usize;
    if missing_count > h.saturating_sub(1) {
        return Ok(false);
    }

    let missing: Vec<u32> = (0..sigma).filter(|&b| missing_mask >> b & 1 == 1).collect();
    let mut edges = Vec::new();
    for (gap, &mask) in gap_masks.iter().enumerate() {
        for (j, &bit) in missing.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                edges.push((gap, j));
            }
        }
    }
    let inst = MatchingInstance {
        left_count: h - 1,
        right_count: missing_count,
        edges,
    };
    Ok(hopcroft_karp(&inst).len() == missing_count)
}

/// The greedy arch chain over a sequence ending at the final state: find the
/// shortest 1-arch-feasible prefix, restart from its endpoint, and count the
/// completed arches.
pub fn max_arches_for_sequence(seq: &ComponentSequence, d: &SccDecomposition) -> Result<usize> {
    max_arches_slice(&seq.states, d)
}

fn max_arches_slice(states: &[StateId], d: &SccDecomposition) -> Result<usize> {
    let h = states.len();
    let mut anchor = 0usize;
    let mut arches = 0usize;
    'chain: while anchor + 1 < h {
        for end in anchor + 1..h {
            if feasible_slice(&states[anchor..=end], d)? {
                arches += 1;
                anchor = end;
                continue 'chain;
            }
        }
        break;
    }
    Ok(arches)
}

/// Options for the subset-enumeration driver.
#[derive(Debug, Clone, Copy)]
pub struct StatesOptions {
    /// Hard cap on the state count (the driver is exponential in it).
    pub max_subset_states: usize,
    /// Worker threads for the subset loop; results are identical for any
    /// worker count.
    pub workers: usize,
}

impl Default for StatesOptions {
    fn default() -> Self {
        StatesOptions { max_subset_states: DEFAULT_MAX_SUBSET_STATES, workers: 1 }
    }
}

/// Computes the maximum universality index by enumerating all anchor-state
/// subsets containing the initial and final states, skipping subsets with
/// two states in one component, and maximizing the greedy arch count over
/// the induced component sequences.
pub fn max_universality_states(
    a: &NormalizedNfa,
    d: &SccDecomposition,
    opts: StatesOptions,
) -> Result<MaxUniversality> {
    if has_unbounded_universality(d, a.nfa().alphabet()) {
        return Ok(MaxUniversality::Unbounded);
    }
    let n = a.nfa().state_count();
    if n > opts.max_subset_states {
        return Err(Error::capacity(format!(
            "state count {n} exceeds the subset-enumeration bound {}",
            opts.max_subset_states
        )));
    }
    let q0 = a.nfa().initial();
    let f = a.final_state();
    let others: Vec<StateId> = (0..n).filter(|&q| q != q0 && q != f).collect();
    let subsets: u64 = 1 << others.len();

    let eval = |mask: u64| -> Result<usize> {
        let mut states: Vec<StateId> = Vec::with_capacity(others.len() + 2);
        states.push(q0);
        for (idx, &q) in others.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                states.push(q);
            }
        }
        states.push(f);
        let mut comps: Vec<usize> = states.iter().map(|&q| d.component_of(q)).collect();
        comps.sort_unstable();
        if comps.windows(2).any(|w| w[0] == w[1]) {
            return Ok(0);
        }
        states.sort_unstable_by_key(|&q| d.component_of(q));
        max_arches_slice(&states, d)
    };

    let best = if opts.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::input(format!("cannot build worker pool: {e}")))?;
        pool.install(|| {
            (0..subsets)
                .into_par_iter()
                .map(eval)
                .try_reduce(|| 0, |a, b| Ok(a.max(b)))
        })?
    } else {
        let mut best = 0usize;
        for mask in 0..subsets {
            best = best.max(eval(mask)?);
        }
        best
    };
    Ok(MaxUniversality::Finite(best))
}

/// Decides `k`-ESU through the subset-enumeration algorithm.
pub fn k_esu_states(a: &NormalizedNfa, k: usize, opts: StatesOptions) -> Result<bool> {
    let d = decompose(a);
    Ok(max_universality_states(a, &d, opts)?.at_least(k))
}

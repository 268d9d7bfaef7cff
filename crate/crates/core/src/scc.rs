//! Strongly connected components of the automaton graph, the condensation
//! DAG in topological order, and the per-component label sets that drive the
//! universality algorithms.

use std::collections::BTreeSet;

use crate::nfa::{Label, NormalizedNfa, StateId};
use crate::word::Alphabet;

/// The SCC decomposition of a normalized NFA.
///
/// Component ids are assigned so that the topological order of the
/// condensation is the identity: the initial state's component is `0` and
/// the final state's singleton component is `count - 1`.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    component_of: Vec<usize>,
    count: usize,
    condensation_edges: BTreeSet<(usize, usize)>,
    /// Letters labelling transitions internal to each component, with
    /// epsilon stripped.
    v_sets: Vec<BTreeSet<u32>>,
    /// For each component `j`, the deduplicated pairs `(i, label)` of
    /// cross-component transitions entering `j` (epsilon kept), sorted.
    cross_sets: Vec<Vec<(usize, Label)>>,
    alphabet: Alphabet,
}

impl SccDecomposition {
    pub fn component_of(&self, q: StateId) -> usize {
        self.component_of[q]
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn condensation_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.condensation_edges
    }

    /// Component ids in topological order (the identity by construction).
    pub fn topo_order(&self) -> impl Iterator<Item = usize> {
        0..self.count
    }

    pub fn v_set(&self, component: usize) -> &BTreeSet<u32> {
        &self.v_sets[component]
    }

    pub fn cross_set(&self, component: usize) -> &[(usize, Label)] {
        &self.cross_sets[component]
    }

    /// Labels of transitions from component `i` to component `j`.
    pub fn labels_between(&self, i: usize, j: usize) -> &[(usize, Label)] {
        let pairs = &self.cross_sets[j];
        let lo = pairs.partition_point(|&(h, _)| h < i);
        let hi = pairs.partition_point(|&(h, _)| h <= i);
        &pairs[lo..hi]
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
}

/// Decomposes the automaton graph into strongly connected components
/// (iterative Tarjan), relabels them topologically and collects the internal
/// and cross-component label sets. Linear in states plus transitions.
pub fn decompose(a: &NormalizedNfa) -> SccDecomposition {
    let nfa = a.nfa();
    let n = nfa.state_count();
    let mut adj = vec![Vec::new(); n];
    for t in nfa.transitions() {
        adj[t.from].push(t.to);
    }
    adj.iter_mut().for_each(|v| {
        v.sort_unstable();
        v.dedup();
    });
    let scc_of = tarjan(&adj);

    // Tarjan emits components in reverse topological order; flip the ids so
    // that component 0 is the source and iteration order is topological.
    let count = scc_of.iter().copied().max().unwrap_or(0) + 1;
    let component_of: Vec<usize> = scc_of.iter().map(|&c| count - 1 - c).collect();
    debug_assert_eq!(component_of[nfa.initial()], 0);
    debug_assert_eq!(component_of[a.final_state()], count - 1);

    let mut v_sets = vec![BTreeSet::new(); count];
    let mut renamed: Vec<(usize, Label, usize)> = Vec::with_capacity(nfa.transitions().len());
    for t in nfa.transitions() {
        let (ci, cj) = (component_of[t.from], component_of[t.to]);
        if ci == cj {
            if let Label::Letter(l) = t.label {
                v_sets[ci].insert(l);
            }
        } else {
            renamed.push((cj, t.label, ci));
        }
    }
    renamed.sort_unstable_by_key(|a| (a.0, a.2, a.1));
    renamed.dedup();

    let mut cross_sets = vec![Vec::new(); count];
    let mut condensation_edges = BTreeSet::new();
    for (to, label, from) in renamed {
        cross_sets[to].push((from, label));
        condensation_edges.insert((from, to));
    }

    SccDecomposition {
        component_of,
        count,
        condensation_edges,
        v_sets,
        cross_sets,
        alphabet: nfa.alphabet(),
    }
}

/// True iff some component's internal labels cover the whole alphabet, in
/// which case the language contains words of every universality index.
pub fn has_unbounded_universality(d: &SccDecomposition, alphabet: Alphabet) -> bool {
    let sigma = alphabet.sigma() as usize;
    d.v_sets.iter().any(|v| v.len() == sigma)
}

/// Iterative Tarjan; returns the component id per vertex, ids numbered in
/// reverse topological order (sinks get the smallest ids).
fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut next_comp = 0usize;
    // (vertex, neighbour cursor) call frames.
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));

        while let Some(&(v, cursor)) = frames.last() {
            if let Some(&w) = adj[v].get(cursor) {
                frames.last_mut().expect("frame exists").1 += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fixtures::{figure_a, random_nfa};
    use crate::nfa::{normalize, parse_nfa};

    #[test]
    fn chain_has_singleton_components() {
        let nfa = parse_nfa("nfa\nsigma 2\nstates 3\ninitial 0\nfinal 2\n0 1 1\n1 2 2\nend\n")
            .unwrap();
        let norm = normalize(&nfa).unwrap();
        let d = decompose(&norm);
        assert_eq!(d.count(), 4); // three originals plus the fresh final
        for c in 0..d.count() {
            assert!(d.v_set(c).is_empty());
        }
        assert!(!has_unbounded_universality(&d, norm.nfa().alphabet()));
    }

    #[test]
    fn figure_a_label_sets() {
        let norm = normalize(&figure_a()).unwrap();
        let d = decompose(&norm);
        assert_eq!(d.count(), 4);
        let c_q0 = d.component_of(norm.nfa().initial());
        assert_eq!(c_q0, 0);
        assert_eq!(d.v_set(c_q0), &BTreeSet::from([1, 2]));
        assert_eq!(d.component_of(norm.final_state()), 3);
        // One component carries {b, c}; the two remaining are trivial.
        let sets: Vec<_> = (0..4).map(|c| d.v_set(c).clone()).collect();
        assert!(sets.contains(&BTreeSet::from([2, 3])));
        assert!(!has_unbounded_universality(&d, norm.nfa().alphabet()));
    }

    #[test]
    fn self_loops_cover_alphabet() {
        let nfa = parse_nfa(
            "nfa\nsigma 2\nstates 2\ninitial 0\nfinal 1\n0 1 0\n0 2 0\n0 1 1\nend\n",
        )
        .unwrap();
        let norm = normalize(&nfa).unwrap();
        let d = decompose(&norm);
        let c = d.component_of(0);
        assert_eq!(d.v_set(c), &BTreeSet::from([1, 2]));
        assert!(has_unbounded_universality(&d, norm.nfa().alphabet()));
    }

    #[test]
    fn epsilon_never_joins_v_sets_but_crosses_components() {
        let nfa = parse_nfa(
            "nfa\nsigma 2\nstates 3\ninitial 0\nfinal 2\n0 0 0\n0 0 1\n1 1 2\nend\n",
        )
        .unwrap();
        let norm = normalize(&nfa).unwrap();
        let d = decompose(&norm);
        for c in 0..d.count() {
            assert!(!d.v_set(c).contains(&0));
        }
        let c0 = d.component_of(0);
        let c1 = d.component_of(1);
        assert!(d
            .labels_between(c0, c1)
            .iter()
            .any(|&(_, l)| l == Label::Epsilon));
    }

    /// component_of agrees with brute-force mutual reachability.
    #[test]
    fn components_match_mutual_reachability() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 60 {
            let nfa = random_nfa(&mut rng, 2 + (checked % 7), 2, 2.0, true);
            let Some(norm) = normalize(&nfa) else { continue };
            checked += 1;
            let d = decompose(&norm);
            let n = norm.nfa().state_count();
            let mut reach = vec![vec![false; n]; n];
            for q in 0..n {
                reach[q][q] = true;
            }
            for t in norm.nfa().transitions() {
                reach[t.from][t.to] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        reach[i][j] |= reach[i][k] && reach[k][j];
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let together = reach[i][j] && reach[j][i];
                    assert_eq!(together, d.component_of(i) == d.component_of(j));
                }
            }
            // Condensation edges respect the topological numbering.
            for &(i, j) in d.condensation_edges() {
                assert!(i < j);
            }
        }
    }
}

//! The alphabet-parameterized algorithm for the maximum universality index:
//! a dynamic program over the condensation, one table row per component and
//! one column per strict letter subset, linear in the transitions for fixed
//! alphabets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::nfa::{Label, NormalizedNfa};
use crate::scc::{decompose, has_unbounded_universality, SccDecomposition};
use crate::MaxUniversality;

/// Largest alphabet for which the subset table is built.
pub const MAX_SIGMA: u32 = 24;
const MAX_ENTRIES: usize = 1 << 26;

/// The DP table: `d[i][S]` is the largest universality index of a word
/// labelling a walk from the initial component that ends in component `i`
/// with rest alphabet exactly `S`, or `-1` when no such word exists.
///
/// Letter subsets are sigma-bit masks; rows store only the reachable
/// subsets, so alphabets near the cap stay affordable when few of the
/// `2^sigma` subsets ever occur.
#[derive(Debug, Clone)]
pub struct SigmaDpTable {
    rows: Vec<HashMap<u32, i64>>,
    entries: usize,
}

impl SigmaDpTable {
    pub fn get(&self, component: usize, subset: u32) -> i64 {
        self.rows[component].get(&subset).copied().unwrap_or(-1)
    }

    pub fn row(&self, component: usize) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.rows[component].iter().map(|(&s, &v)| (s, v))
    }

    fn relax(&mut self, component: usize, subset: u32, value: i64) -> Result<()> {
        use std::collections::hash_map::Entry;
        match self.rows[component].entry(subset) {
            Entry::Occupied(mut cell) => {
                if value > *cell.get() {
                    cell.insert(value);
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(value);
                self.entries += 1;
            }
        }
        if self.entries > MAX_ENTRIES {
            return Err(Error::capacity(
                "subset table exceeds the entry bound; the alphabet is too rich",
            ));
        }
        Ok(())
    }
}

/// Computes the maximum universality index over the language by the
/// condensation DP, or `Unbounded` when some component's labels cover the
/// whole alphabet.
pub fn max_universality_sigma(
    a: &NormalizedNfa,
    d: &SccDecomposition,
) -> Result<MaxUniversality> {
    let alphabet = a.nfa().alphabet();
    if has_unbounded_universality(d, alphabet) {
        return Ok(MaxUniversality::Unbounded);
    }
    let sigma = alphabet.sigma();
    if sigma > MAX_SIGMA {
        return Err(Error::capacity(format!(
            "alphabet size {sigma} exceeds the subset-table bound {MAX_SIGMA}"
        )));
    }
    let e = d.count();
    let full: u32 = (1u32 << sigma) - 1;

    let v_mask: Vec<u32> = (0..e)
        .map(|i| d.v_set(i).iter().map(|&l| 1u32 << (l - 1)).fold(0, |m, b| m | b))
        .collect();

    let mut table = SigmaDpTable { rows: vec![HashMap::new(); e], entries: 0 };
    table.relax(0, v_mask[0], 0)?;

    for i in 1..e {
        for &(h, label) in d.cross_set(i) {
            debug_assert!(h < i);
            let step = match label {
                Label::Epsilon => v_mask[i],
                Label::Letter(l) => v_mask[i] | (1 << (l - 1)),
            };
            let sources: Vec<(u32, i64)> = table.row(h).collect();
            for (s, value) in sources {
                let t = s | step;
                if t == full {
                    table.relax(i, v_mask[i], value + 1)?;
                } else {
                    table.relax(i, t, value)?;
                }
            }
        }
    }

    let best = table.row(e - 1).map(|(_, v)| v).max().unwrap_or(-1);
    // The language is nonempty, so some walk reaches the final component.
    debug_assert!(best >= 0);
    Ok(MaxUniversality::Finite(best.max(0) as usize))
}

/// Decides `k`-ESU through the condensation DP.
pub fn k_esu_sigma(a: &NormalizedNfa, k: usize) -> Result<bool> {
    let d = decompose(a);
    Ok(max_universality_sigma(a, &d)?.at_least(k))
}

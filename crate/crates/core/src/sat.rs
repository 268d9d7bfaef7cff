//! The 3-SAT-to-regex reduction as a generator of hard, structured test
//! instances: DIMACS parsing, clause-letter regexes, the assignment-to-word
//! translation, and a seeded random instance generator.
//!
//! Each clause becomes a letter; a variable contributes the block of clause
//! letters it satisfies when set true, or when set false. The formula is
//! satisfiable iff the concatenation of these per-variable alternatives
//! describes a 1-universal word over the clause alphabet.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::regex::{Ast, Regex};
use crate::word::{Alphabet, Word};

/// A CNF formula with at most three distinct literals per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(clauses.len());
        for clause in clauses {
            let set: BTreeSet<i32> = clause.into_iter().collect();
            if set.is_empty() {
                return Err(Error::input("empty clause"));
            }
            if set.len() > 3 {
                return Err(Error::input("clause with more than three literals"));
            }
            for &lit in &set {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::input(format!("literal {lit} out of range")));
                }
                if set.contains(&-lit) {
                    return Err(Error::input(format!(
                        "clause contains both {lit} and {}",
                        -lit
                    )));
                }
            }
            normalized.push(set.into_iter().collect());
        }
        Ok(CnfInstance { num_vars, clauses: normalized })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Whether the assignment (one bool per variable) satisfies every
    /// clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }

    /// Exhaustive satisfiability search, for test-scale instances.
    pub fn satisfying_assignment(&self) -> Option<Vec<bool>> {
        assert!(self.num_vars <= 20, "brute force is test-scale only");
        let mut assignment = vec![false; self.num_vars];
        for mask in 0u64..(1 << self.num_vars) {
            for (i, slot) in assignment.iter_mut().enumerate() {
                *slot = mask >> i & 1 == 1;
            }
            if self.satisfied_by(&assignment) {
                return Some(assignment);
            }
        }
        None
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then zero-terminated clauses (line breaks are not significant).
pub fn parse_dimacs(text: &str) -> Result<CnfInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::DimacsParse {
                    line: line_no,
                    message: "duplicate problem line".into(),
                });
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 4 || tokens[0] != "p" || tokens[1] != "cnf" {
                return Err(Error::DimacsParse {
                    line: line_no,
                    message: "malformed problem line, expected 'p cnf <vars> <clauses>'".into(),
                });
            }
            let vars = tokens[2].parse().map_err(|_| Error::DimacsParse {
                line: line_no,
                message: "invalid variable count".into(),
            })?;
            let count = tokens[3].parse().map_err(|_| Error::DimacsParse {
                line: line_no,
                message: "invalid clause count".into(),
            })?;
            header = Some((vars, count));
            continue;
        }
        if header.is_none() {
            return Err(Error::DimacsParse {
                line: line_no,
                message: "clause before problem line".into(),
            });
        }
        for token in line.split_whitespace() {
            let lit: i32 = token.parse().map_err(|_| Error::DimacsParse {
                line: line_no,
                message: format!("invalid literal {token:?}"),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }

    let Some((vars, declared)) = header else {
        return Err(Error::DimacsParse {
            line: text.lines().count().max(1),
            message: "missing problem line".into(),
        });
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared {
        return Err(Error::DimacsParse {
            line: text.lines().count().max(1),
            message: format!("expected {declared} clauses, found {}", clauses.len()),
        });
    }
    CnfInstance::new(vars, clauses)
}

/// The letter blocks per variable: clause letters satisfied by a true
/// assignment, and by a false one, both in increasing clause order.
fn letter_blocks(c: &CnfInstance) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut blocks = vec![(Vec::new(), Vec::new()); c.num_vars()];
    for (j, clause) in c.clauses().iter().enumerate() {
        let letter = j as u32 + 1;
        for &lit in clause {
            let var = lit.unsigned_abs() as usize - 1;
            if lit > 0 {
                blocks[var].0.push(letter);
            } else {
                blocks[var].1.push(letter);
            }
        }
    }
    blocks
}

fn concat_letters(letters: &[u32]) -> Ast {
    let mut chain: Option<Ast> = None;
    for &l in letters {
        chain = Some(match chain {
            None => Ast::Letter(l),
            Some(c) => Ast::Concat(Box::new(c), Box::new(Ast::Letter(l))),
        });
    }
    chain.unwrap_or(Ast::Epsilon)
}

/// Builds the reduction regex over the clause alphabet (letter `j` is
/// clause `j`): one alternative pair per variable, concatenated in order.
/// The formula is satisfiable iff the result is 1-existentially universal.
pub fn reduce_to_regex(c: &CnfInstance) -> Result<Regex> {
    if c.clauses().is_empty() {
        return Err(Error::input(
            "reduction needs at least one clause (alphabets must be nonempty)",
        ));
    }
    let alphabet = Alphabet::new(c.clauses().len() as u32)?;
    let mut root: Option<Ast> = None;
    for (true_block, false_block) in letter_blocks(c) {
        let choice = Ast::Alt(
            Box::new(concat_letters(&true_block)),
            Box::new(concat_letters(&false_block)),
        );
        root = Some(match root {
            None => choice,
            Some(r) => Ast::Concat(Box::new(r), Box::new(choice)),
        });
    }
    Ok(Regex::new(root.unwrap_or(Ast::Epsilon), alphabet))
}

/// The word matched by the reduction regex when each variable picks the
/// block of its assigned polarity; 1-universal exactly when the assignment
/// satisfies the formula.
pub fn assignment_to_word(c: &CnfInstance, assignment: &[bool]) -> Result<Word> {
    if assignment.len() != c.num_vars() {
        return Err(Error::input(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            c.num_vars()
        )));
    }
    if c.clauses().is_empty() {
        return Err(Error::input("reduction needs at least one clause"));
    }
    let alphabet = Alphabet::new(c.clauses().len() as u32)?;
    let mut letters = Vec::new();
    for (var, (true_block, false_block)) in letter_blocks(c).into_iter().enumerate() {
        let block = if assignment[var] { true_block } else { false_block };
        letters.extend(block);
    }
    Word::new(letters, alphabet)
}

/// A uniform random 3-SAT instance: `m` clauses over `n >= 3` variables,
/// three distinct variables per clause, signs independent and fair.
/// Deterministic per seed.
pub fn random_3sat(n: usize, m: usize, seed: u64) -> Result<CnfInstance> {
    if n < 3 {
        return Err(Error::input(
            "three distinct variables per clause require n >= 3",
        ));
    }
    if m == 0 {
        return Err(Error::input("instance needs at least one clause"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<i32> = (1..=n as i32).collect();
    let clauses = (0..m)
        .map(|_| {
            let mut picked: Vec<i32> = vars
                .choose_multiple(&mut rng, 3)
                .copied()
                .collect();
            picked.sort_unstable();
            picked
                .into_iter()
                .map(|v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfInstance::new(n, clauses)
}

//! Command-line frontend: universality indices of words, k-ESU / k-USU
//! decisions for NFAs and regexes, exact counting and ranking of
//! k-universal words, the star-free rewriting, the 3-SAT instance
//! generator, and the brute-force oracle report.
//!
//! Decision results are printed as `true` / `false` on stdout, never encoded
//! in the exit status. Exit codes: 0 success, 2 usage or input error,
//! 3 capacity error, 1 internal failure.

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use usubseq::counting::{self, CountSemantics, RankMode, TotalCount};
use usubseq::oracle;
use usubseq::regex::{parse_regex, regex_unbounded, star_free_reduce, thompson, Regex};
use usubseq::sat;
use usubseq::scc::{decompose, SccDecomposition};
use usubseq::sigma::max_universality_sigma;
use usubseq::states::{max_universality_states, StatesOptions, DEFAULT_MAX_SUBSET_STATES};
use usubseq::word::{arch_factorize, universality_index, Alphabet, Word};
use usubseq::{normalize, parse_nfa, Error, MaxUniversality, Nfa, NormalizedNfa};

#[derive(Parser)]
#[command(
    name = "usubseq",
    about = "Subsequence-universality analysis of regular languages",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Auto,
    Sigma,
    States,
    Product,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Atmost,
    Total,
}

#[derive(Args)]
struct LanguageInput {
    /// NFA file in the line-oriented text format.
    #[arg(long, conflicts_with_all = ["regex", "sigma"])]
    nfa: Option<String>,
    /// Regular expression (letters a..z, `|`, `*`, `_` epsilon, `#` empty).
    #[arg(long, requires = "sigma")]
    regex: Option<String>,
    /// Alphabet size for --regex.
    #[arg(long)]
    sigma: Option<u32>,
}

#[derive(Args)]
struct AnalysisFlags {
    /// Algorithm: the condensation DP (sigma), the subset enumeration
    /// (states), the product-automaton oracle, or automatic selection.
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// Cap for the subset-enumeration algorithm.
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSET_STATES)]
    max_subset_states: usize,
    /// Worker threads for the subset enumeration.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Print the SCC decomposition and component label sets to stderr.
    #[arg(long)]
    dump_scc: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Universality index and arch factorization of a word.
    Index {
        #[arg(long)]
        word: String,
        #[arg(long)]
        sigma: u32,
    },
    /// Does the language contain a k-universal word?
    Esu {
        #[command(flatten)]
        input: LanguageInput,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        flags: AnalysisFlags,
    },
    /// Is every word of the language k-universal?
    Usu {
        #[arg(long)]
        nfa: String,
        #[arg(long)]
        k: usize,
    },
    /// Maximum universality index over the language.
    Maxindex {
        #[command(flatten)]
        input: LanguageInput,
        #[command(flatten)]
        flags: AnalysisFlags,
    },
    /// Count k-universal words (or accepting paths) exactly.
    Count {
        #[arg(long)]
        nfa: String,
        #[arg(long)]
        k: usize,
        /// Length bound for exact/atmost modes.
        #[arg(long)]
        len: Option<usize>,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Restrict to k-universal words with an empty rest.
        #[arg(long)]
        perfect: bool,
        /// Count accepting paths of an NFA instead of words of a DFA.
        #[arg(long)]
        paths: bool,
    },
    /// Rank a word within the k-universal part of the language.
    Rank {
        #[arg(long)]
        nfa: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        len: Option<usize>,
        #[arg(long)]
        paths: bool,
    },
    /// Rewrite a bounded regex into a star-free one with the same maximum
    /// universality index.
    Reduce {
        #[arg(long)]
        regex: String,
        #[arg(long)]
        sigma: u32,
    },
    /// Reduce a 3-SAT instance (DIMACS) to a clause-alphabet regex.
    Sat2regex {
        #[arg(long)]
        cnf: String,
        /// Print the regex (default).
        #[arg(long, conflicts_with = "print_nfa")]
        print_regex: bool,
        /// Print the Thompson NFA in the automaton file format.
        #[arg(long)]
        print_nfa: bool,
    },
    /// Brute-force report: enumerated iota histogram, maximum index and
    /// decision verdicts.
    Oracle {
        #[arg(long)]
        nfa: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        k: Option<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(failure)) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
        Err(_) => {
            eprintln!("error: internal assertion failure");
            ExitCode::from(1)
        }
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(format!("cannot read {path}: {e}")))
}

fn load_nfa(path: &str) -> Result<Nfa, Failure> {
    Ok(parse_nfa(&read_file(path)?)?)
}

/// The language input resolved to a normalized NFA, unless it is already
/// known to be unbounded (regexes) or empty.
enum Language {
    Normalized(NormalizedNfa),
    Unbounded,
    Empty,
}

fn load_language(input: &LanguageInput) -> Result<Language, Failure> {
    match (&input.nfa, &input.regex) {
        (Some(path), None) => {
            let nfa = load_nfa(path)?;
            Ok(match normalize(&nfa) {
                Some(norm) => Language::Normalized(norm),
                None => Language::Empty,
            })
        }
        (None, Some(text)) => {
            let sigma = input.sigma.ok_or_else(|| fail("--regex requires --sigma"))?;
            let alphabet = Alphabet::new(sigma)?;
            let r = parse_regex(text, alphabet)?;
            if regex_unbounded(&r) {
                return Ok(Language::Unbounded);
            }
            let reduced = star_free_reduce(&r)?;
            let nfa = thompson(reduced.regex());
            Ok(match normalize(&nfa) {
                Some(norm) => Language::Normalized(norm),
                None => Language::Empty,
            })
        }
        _ => Err(fail("exactly one of --nfa or --regex is required")),
    }
}

fn dump_scc(norm: &NormalizedNfa, d: &SccDecomposition) {
    eprintln!("components: {}", d.count());
    for c in d.topo_order() {
        let members: Vec<String> = (0..norm.nfa().state_count())
            .filter(|&q| d.component_of(q) == c)
            .map(|q| q.to_string())
            .collect();
        let letters: Vec<String> = d.v_set(c).iter().map(|l| l.to_string()).collect();
        eprintln!(
            "component {c}: states {{{}}} labels {{{}}}",
            members.join(" "),
            letters.join(" ")
        );
    }
}

fn max_index(norm: &NormalizedNfa, flags: &AnalysisFlags) -> Result<MaxUniversality, Failure> {
    let d = decompose(norm);
    if flags.dump_scc {
        dump_scc(norm, &d);
    }
    let sigma = norm.nfa().alphabet().sigma();
    let n = norm.nfa().state_count();
    let algo = match flags.algo {
        Algo::Auto => {
            if sigma <= 20 {
                Algo::Sigma
            } else if n <= flags.max_subset_states {
                Algo::States
            } else {
                return Err(Failure::from(Error::Capacity(format!(
                    "no algorithm fits: sigma {sigma} > 20 and {n} states exceed \
                     the subset bound {}",
                    flags.max_subset_states
                ))));
            }
        }
        other => other,
    };
    let result = match algo {
        Algo::Sigma => max_universality_sigma(norm, &d)?,
        Algo::States => max_universality_states(
            norm,
            &d,
            StatesOptions {
                max_subset_states: flags.max_subset_states,
                workers: flags.workers,
            },
        )?,
        Algo::Product => oracle::max_universality_product(norm)?,
        Algo::Auto => unreachable!("resolved above"),
    };
    Ok(result)
}

fn emit(format: Format, json: serde_json::Value, text: String) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let result = match format {
        Format::Json => writeln!(out, "{json}"),
        Format::Text => writeln!(out, "{text}"),
    };
    if let Err(e) = result {
        // A closed pipe (e.g. piping into head) is not a failure.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(2);
    }
}

fn pretty_word(w: &Word) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.to_text()
    }
}

fn max_index_json(m: &MaxUniversality) -> serde_json::Value {
    match m {
        MaxUniversality::Finite(v) => json!(v),
        MaxUniversality::Unbounded => json!("unbounded"),
    }
}

fn semantics(paths: bool) -> CountSemantics {
    if paths {
        CountSemantics::Paths
    } else {
        CountSemantics::Words
    }
}

/// Counting operates on the automaton as given when it is epsilon-free;
/// otherwise the language-equivalent epsilon-free form is used (word
/// semantics rejects that case anyway, since DFAs have no epsilon moves).
fn counting_view(nfa: &Nfa) -> Nfa {
    if nfa.has_epsilon_transitions() {
        usubseq::remove_epsilon(nfa)
    } else {
        nfa.clone()
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Index { word, sigma } => {
            let alphabet = Alphabet::new(sigma)?;
            let w = Word::parse(&word, alphabet)?;
            let f = arch_factorize(&w);
            let iota = universality_index(&w);
            let arches: Vec<String> = f.arches.iter().map(Word::to_text).collect();
            let mut text = String::new();
            let _ = writeln!(text, "index: {iota}");
            let _ = writeln!(text, "arches: {}", arches.join("|"));
            let _ = write!(text, "rest: {}", pretty_word(&f.rest));
            emit(
                format,
                json!({ "index": iota, "arches": arches, "rest": f.rest.to_text() }),
                text,
            );
        }
        Command::Esu { input, k, flags } => {
            if k == 0 {
                return Err(fail("k must be at least 1"));
            }
            let verdict = match load_language(&input)? {
                Language::Unbounded => true,
                Language::Empty => false,
                Language::Normalized(norm) => max_index(&norm, &flags)?.at_least(k),
            };
            emit(format, json!({ "verdict": verdict }), verdict.to_string());
        }
        Command::Usu { nfa, k } => {
            if k == 0 {
                return Err(fail("k must be at least 1"));
            }
            let nfa = load_nfa(&nfa)?;
            let verdict = match normalize(&nfa) {
                // Every word of the empty language is k-universal.
                None => true,
                Some(norm) => oracle::usu_decide(&norm, k)?,
            };
            emit(format, json!({ "verdict": verdict }), verdict.to_string());
        }
        Command::Maxindex { input, flags } => {
            let result = match load_language(&input)? {
                Language::Unbounded => MaxUniversality::Unbounded,
                Language::Empty => {
                    return Err(fail("the language is empty; no maximum index exists"))
                }
                Language::Normalized(norm) => max_index(&norm, &flags)?,
            };
            emit(
                format,
                json!({ "max_index": max_index_json(&result) }),
                result.to_string(),
            );
        }
        Command::Count { nfa, k, len, mode, perfect, paths } => {
            let view = counting_view(&load_nfa(&nfa)?);
            let sem = semantics(paths);
            if sem == CountSemantics::Words && !view.is_deterministic() {
                return Err(fail(
                    "word counting requires a deterministic automaton; pass --paths for NFAs",
                ));
            }
            let rendered = match mode {
                Mode::Exact | Mode::Atmost => {
                    let m = len.ok_or_else(|| fail("--len is required for this mode"))?;
                    let count = if mode == Mode::Exact {
                        counting::count_exact(&view, m, k, perfect)?
                    } else {
                        counting::count_at_most(&view, m, k, perfect)?
                    };
                    count.to_string()
                }
                Mode::Total => {
                    if perfect {
                        return Err(fail("--perfect applies to bounded-length counts only"));
                    }
                    match counting::count_total(&view, k, sem)? {
                        TotalCount::Finite(c) => c.to_string(),
                        TotalCount::Infinite => "infinite".to_string(),
                    }
                }
            };
            emit(format, json!({ "count": rendered }), rendered);
        }
        Command::Rank { nfa, k, word, mode, len, paths } => {
            let view = counting_view(&load_nfa(&nfa)?);
            let w = Word::parse(&word, view.alphabet())?;
            let mode = match mode {
                Mode::Exact => RankMode::Exact { m: len.unwrap_or(w.len()) },
                Mode::Atmost => {
                    RankMode::AtMost { m: len.ok_or_else(|| fail("--len is required for atmost"))? }
                }
                Mode::Total => RankMode::Total,
            };
            let r = counting::rank(&view, &w, k, mode, semantics(paths))?;
            emit(format, json!({ "rank": r.to_string() }), r.to_string());
        }
        Command::Reduce { regex, sigma } => {
            let alphabet = Alphabet::new(sigma)?;
            let r = parse_regex(&regex, alphabet)?;
            let reduced = star_free_reduce(&r)?;
            let rendered = reduced.regex().to_string();
            emit(format, json!({ "regex": rendered }), rendered);
        }
        Command::Sat2regex { cnf, print_regex: _, print_nfa } => {
            let instance = sat::parse_dimacs(&read_file(&cnf)?)?;
            let regex = sat::reduce_to_regex(&instance)?;
            if print_nfa {
                let nfa = thompson(&regex);
                let rendered = nfa.to_text();
                emit(format, json!({ "nfa": rendered }), rendered.trim_end().to_string());
            } else {
                let rendered = render_regex(&regex)?;
                emit(format, json!({ "regex": rendered }), rendered);
            }
        }
        Command::Oracle { nfa, max_len, k } => {
            let nfa = load_nfa(&nfa)?;
            let histogram = oracle::iota_histogram(&nfa, max_len);
            let enumerated_max = histogram.iter().map(|&(iota, _)| iota).max();
            let product_max = normalize(&nfa)
                .map(|norm| oracle::max_universality_product(&norm))
                .transpose()?;
            let mut text = String::new();
            let _ = writeln!(text, "words enumerated up to length {max_len}:");
            for &(iota, count) in &histogram {
                let _ = writeln!(text, "  iota {iota}: {count} words");
            }
            let _ = writeln!(
                text,
                "max index (enumerated): {}",
                enumerated_max.map_or("none".to_string(), |v| v.to_string())
            );
            let _ = write!(
                text,
                "max index (product): {}",
                product_max
                    .as_ref()
                    .map_or("none (empty language)".to_string(), |m| m.to_string())
            );
            let mut payload = json!({
                "histogram": histogram
                    .iter()
                    .map(|&(iota, count)| (iota.to_string(), json!(count)))
                    .collect::<serde_json::Map<String, serde_json::Value>>(),
                "max_index": product_max.as_ref().map(max_index_json),
            });
            if let Some(k) = k {
                let (esu, usu) = match normalize(&nfa) {
                    None => (false, true),
                    Some(norm) => (
                        oracle::esu_by_enumeration(norm.nfa(), k)?,
                        oracle::usu_decide(&norm, k)?,
                    ),
                };
                let _ = write!(text, "\nk={k}: esu={esu} usu={usu}");
                payload["esu"] = json!(esu);
                payload["usu"] = json!(usu);
            }
            emit(format, payload, text);
        }
    }
    Ok(())
}

fn render_regex(r: &Regex) -> Result<String, Failure> {
    if r.alphabet().sigma() > 26 {
        return Err(fail(
            "the regex syntax renders letters a..z only (sigma <= 26); use --print-nfa",
        ));
    }
    Ok(r.to_string())
}

#[cfg(test)]
mod tests {
    use super::Cli;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}

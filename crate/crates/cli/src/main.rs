//! `betashift`: command-line access to β-expansions, survivor-set
//! dimensions, the interval atlas and critical values.
//!
//! Exit status is 0 on success, 1 when the input is well formed but the
//! mathematics refuses it, and 2 for malformed invocations.

mod format;

use std::io::{self, Write};
use std::process::ExitCode;

use betashift::bifurcation::{
    atlas, classify_isolated, classify_point, nesting_relation, Nesting, MAX_ATLAS_LEN,
};
use betashift::critical::{tau_report, z_set, TauRegime};
use betashift::expansions::{
    alpha_bounds, alpha_of_beta, beta_from_alpha, greedy_digits, is_admissible, is_in_q,
    one_minus_inverse_expansion, quasi_greedy_digits, AlphaOfBeta, BetaSpec, EpSequence,
    ExpansionError,
};
use betashift::interval::{parse_decimal, Real, DEFAULT_BITS};
use betashift::survivor::{staircase, uniform_grid, DimensionOptions};
use betashift::words::{
    check_palindrome_property, farey_level, is_farey, lyndon_rotation, max_rotation,
    standard_factorization, Word, DEFAULT_MAX_FAREY_LEVEL,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::format::{bracket, decimal, exact_or_null, float, number, Round};

#[derive(Parser)]
#[command(name = "betashift", version, about = "β-expansions, survivor sets and critical values")]
struct Cli {
    /// Decimal places for printed reals.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u16).range(0..=80))]
    digits: u16,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Greedy,
    Quasi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Farey,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Digits of the greedy or quasi-greedy expansion of x.
    Expand {
        #[arg(long)]
        x: String,
        /// A decimal such as 1.7, or @PRE(PER) for the base whose expansion of 1 is given.
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Greedy)]
        mode: Mode,
    },
    /// The quasi-greedy expansion of 1 in base β.
    Alpha {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 32)]
        n: usize,
    },
    /// The base whose quasi-greedy expansion of 1 is the given sequence.
    SolveBeta {
        #[arg(long, value_parser = parse_sequence)]
        alpha: EpSequence,
    },
    /// Whether every shift of x lies strictly below α(β).
    Admissible {
        #[arg(long, value_parser = parse_sequence)]
        x: EpSequence,
        #[arg(long, required_unless_present = "alpha", conflicts_with = "alpha")]
        beta: Option<String>,
        #[arg(long, value_parser = parse_sequence)]
        alpha: Option<EpSequence>,
    },
    /// One level of the Farey word recursion.
    Farey {
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=DEFAULT_MAX_FAREY_LEVEL as i64))]
        level: u32,
    },
    /// Standard factorization and structure of a Farey word.
    Factorize {
        #[arg(long, value_parser = parse_word)]
        word: Word,
    },
    /// Basic or Farey parameter intervals with their nesting.
    Atlas {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=MAX_ATLAS_LEN as u64))]
        max_len: u64,
        #[arg(long, value_enum, default_value_t = Kind::Farey)]
        kind: Kind,
    },
    /// CSV of dimension brackets of the survivor set over a grid of hole sizes.
    Staircase {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        /// Defaults to 1 - 1/β.
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..=100_000))]
        samples: u64,
        /// Word length for the counting fallback.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..=40))]
        n_max: u64,
    },
    /// What is known about the critical hole size τ_β.
    Tau {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..=24))]
        atlas_depth: u64,
    },
    /// Whether the point with expansion (word)^∞ is isolated in the bifurcation set.
    Isolated {
        #[arg(long, value_parser = parse_word)]
        word: Word,
        #[arg(long)]
        beta: String,
    },
    /// The finite set bounded by s0^∞ and (word)^∞ for a Farey generator.
    Zset {
        #[arg(long, value_parser = parse_word)]
        word: Word,
    },
    /// Membership of a symbolic point in the bifurcation sets.
    Classify {
        #[arg(long, value_parser = parse_sequence)]
        t: EpSequence,
        #[arg(long)]
        beta: String,
    },
}

fn parse_sequence(s: &str) -> Result<EpSequence, String> {
    s.parse().map_err(|e: ExpansionError| e.to_string())
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.trim().parse().map_err(|e: betashift::words::WordError| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn parse_beta(s: &str) -> Result<BetaSpec, Failure> {
    BetaSpec::parse(s).map_err(|e| match e {
        ExpansionError::Parse(_) => Failure::Usage(format!("invalid base: {e}")),
        e => Failure::Domain(e.to_string()),
    })
}

fn beta_json(input: &str, beta: &BetaSpec, d: usize) -> Value {
    json!({
        "input": input.trim(),
        "alpha": beta.alpha.as_ref().map(|a| a.to_string()),
        "value": match beta.exact_value() {
            Some(r) => Value::Array(vec![
                number(decimal(r, d, Round::Down)),
                number(decimal(r, d, Round::Up)),
            ]),
            None => bracket(&beta.value, d),
        },
    })
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let d = cli.digits as usize;
    let value = match cli.command {
        Command::Expand { x, beta, n, mode } => {
            let b = parse_beta(&beta)?;
            let (r, _) = parse_decimal(&x).ok_or_else(|| Failure::Usage(format!("invalid number {x:?}")))?;
            let xr = Real::from_ratio(&r, DEFAULT_BITS);
            let run = match mode {
                Mode::Greedy => greedy_digits(&xr, &b, n),
                Mode::Quasi => quasi_greedy_digits(&xr, &b, n),
            }
            .map_err(|e| match e {
                ExpansionError::OutOfRange(_) => Failure::Domain(format!(
                    "x = {} is outside the domain of the {} map",
                    x.trim(),
                    match mode { Mode::Greedy => "greedy", Mode::Quasi => "quasi-greedy" }
                )),
                e => domain(e),
            })?;
            json!({
                "x": x.trim(),
                "beta": beta_json(&beta, &b, d),
                "mode": match mode { Mode::Greedy => "greedy", Mode::Quasi => "quasi" },
                "digits": run.as_string(),
                "certified": run.certified,
            })
        }
        Command::Alpha { beta, n } => {
            let b = parse_beta(&beta)?;
            let (alpha, heuristic) = match alpha_of_beta(&b) {
                AlphaOfBeta::Periodic { alpha, heuristic } => (Some(alpha), heuristic),
                AlphaOfBeta::Prefix(_) => (None, false),
            };
            let (prefix, certified) = match (&alpha, heuristic) {
                (Some(a), false) => (a.prefix(n), n),
                _ => {
                    let run = quasi_greedy_digits(&Real::one(), &b, n).map_err(domain)?;
                    (run.digits, run.certified)
                }
            };
            json!({
                "beta": beta_json(&beta, &b, d),
                "alpha": alpha.map(|a| a.to_string()),
                "heuristic": heuristic,
                "prefix": prefix.iter().map(|x| char::from(b'0' + x)).collect::<String>(),
                "certified": certified,
            })
        }
        Command::SolveBeta { alpha } => {
            let b = beta_from_alpha(&alpha).map_err(domain)?;
            json!({ "alpha": alpha.to_string(), "beta": bracket(&b.value, d) })
        }
        Command::Admissible { x, beta, alpha } => {
            let (base, verdict) = match (beta, alpha) {
                (_, Some(a)) => {
                    if !is_in_q(&a) {
                        return Err(domain(ExpansionError::NotInQ(a.to_string())));
                    }
                    (json!({ "alpha": a.to_string() }), Some(is_admissible(&x, &a)))
                }
                (Some(s), None) => {
                    let b = parse_beta(&s)?;
                    let verdict = match &b.alpha {
                        Some(a) => Some(is_admissible(&x, a)),
                        None => {
                            // Admissibility only grows with α, so the two
                            // bounds decide it unless they disagree.
                            let (lo, hi) = alpha_bounds(&b, 256);
                            if is_admissible(&x, &lo) {
                                Some(true)
                            } else if !is_admissible(&x, &hi) {
                                Some(false)
                            } else {
                                None
                            }
                        }
                    };
                    (beta_json(&s, &b, d), verdict)
                }
                (None, None) => unreachable!("clap requires one of the two"),
            };
            json!({ "x": x.to_string(), "beta": base, "admissible": verdict })
        }
        Command::Farey { level } => {
            let f = farey_level(level).map_err(domain)?;
            json!({
                "level": level,
                "words": f.entries.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            })
        }
        Command::Factorize { word } => {
            if !is_farey(&word) {
                return Err(Failure::Domain(format!("{word} is not a Farey word")));
            }
            let (u, v) = standard_factorization(&word).map_err(domain)?;
            let (lyndon, shift) = lyndon_rotation(&word).map_err(domain)?;
            json!({
                "word": word.to_string(),
                "u": u.to_string(),
                "v": v.to_string(),
                "palindromic_interior": check_palindrome_property(&word).map_err(domain)?,
                "lyndon_rotation": lyndon.to_string(),
                "lyndon_shift": shift,
                "max_rotation": max_rotation(&word).map_err(domain)?.to_string(),
            })
        }
        Command::Atlas { max_len, kind } => {
            let entries = atlas(max_len as usize, kind == Kind::Farey).map_err(domain)?;
            let intervals: Vec<Value> = entries
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let r = &e.record;
                    json!({
                        "index": i,
                        "generator": r.generator.to_string(),
                        "lyndon": r.lyndon.to_string(),
                        "kind": r.kind.to_string(),
                        "alpha_left": r.alpha_left.to_string(),
                        "alpha_right": r.alpha_right.to_string(),
                        "beta_left": bracket(&r.beta_left.value, d),
                        "beta_right": bracket(&r.beta_right.value, d),
                        "parent": e.parent,
                    })
                })
                .collect();
            let mut nesting = vec![];
            for (i, x) in entries.iter().enumerate() {
                for (j, y) in entries.iter().enumerate() {
                    if i != j && nesting_relation(&x.record, &y.record).map_err(domain)? == Nesting::FirstInsideSecond {
                        nesting.push(json!({ "inner": i, "outer": j }));
                    }
                }
            }
            json!({
                "max_len": max_len,
                "kind": match kind { Kind::Farey => "farey", Kind::All => "all" },
                "intervals": intervals,
                "nesting": nesting,
            })
        }
        Command::Staircase { beta, t_min, t_max, samples, n_max } => {
            let b = parse_beta(&beta)?;
            let ceiling = 1.0 - 1.0 / b.value.mid_f64();
            let t_max = t_max.unwrap_or(ceiling);
            if !(0.0 <= t_min && t_min < t_max && t_max <= 1.0) {
                return Err(Failure::Usage(format!(
                    "need 0 <= t-min < t-max <= 1, got {t_min} and {t_max}"
                )));
            }
            let exact_end = if (t_max - ceiling).abs() < 1e-12 {
                one_minus_inverse_expansion(&b)
            } else {
                None
            };
            let grid = uniform_grid(&b, t_min, t_max, samples as usize, exact_end);
            let opts = DimensionOptions {
                counting_depth: n_max as usize,
                ..DimensionOptions::default()
            };
            let io = |e: io::Error| Failure::Domain(e.to_string());
            writeln!(out, "t,h_lower,h_upper,dim_lower,dim_upper,method").map_err(io)?;
            for row in staircase(&b, &grid, opts) {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    float(row.t, d, Round::Nearest),
                    float(row.h_lower, d, Round::Down),
                    float(row.h_upper, d, Round::Up),
                    float(row.dim_lower, d, Round::Down),
                    float(row.dim_upper, d, Round::Up),
                    row.method
                )
                .map_err(io)?;
            }
            return Ok(());
        }
        Command::Tau { beta, atlas_depth } => {
            let b = parse_beta(&beta)?;
            let r = tau_report(&b, atlas_depth as usize).map_err(domain)?;
            let determined = matches!(
                r.regime,
                TauRegime::LeftEndpoint | TauRegime::InsideFareyLow | TauRegime::OutsideClosure
            );
            json!({
                "beta": beta_json(&beta, &b, d),
                "regime": r.regime.to_string(),
                "tau_lower": bracket(&r.tau_lower, d).get(0).cloned(),
                "tau_upper": bracket(&r.tau_upper, d).get(1).cloned(),
                "tau": if determined { bracket(&r.tau_lower, d) } else { Value::Null },
                "tau_exact": if determined { exact_or_null(&r.tau_lower, d) } else { Value::Null },
                "generator": r.generator.map(|g| g.to_string()),
                "witness_words": r.witnesses.iter().map(|w| json!({
                    "role": w.role,
                    "sequence": w.sequence.to_string(),
                })).collect::<Vec<_>>(),
                "atlas_depth": r.atlas_depth,
                "certified": r.certified,
            })
        }
        Command::Isolated { word, beta } => {
            let b = parse_beta(&beta)?;
            let status = classify_isolated(&word, &b).map_err(domain)?;
            json!({
                "word": word.to_string(),
                "beta": beta_json(&beta, &b, d),
                "status": status.to_string(),
            })
        }
        Command::Zset { word } => {
            let z = z_set(&word).map_err(domain)?;
            json!({
                "word": word.to_string(),
                "cardinality": z.cardinality(),
                "members": z.members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            })
        }
        Command::Classify { t, beta } => {
            let b = parse_beta(&beta)?;
            let c = classify_point(&t, &b);
            json!({
                "t": t.to_string(),
                "beta": beta_json(&beta, &b, d),
                "in_e_plus": c.in_e_plus,
                "in_e_zero": c.in_e_zero,
                "in_e": c.in_e(),
            })
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("serializable");
    writeln!(out, "{text}").map_err(|e| Failure::Domain(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

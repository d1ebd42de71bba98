//! Command-line front end: norms, Schreier queries, isometry checks, and
//! the verification suites, all emitting one JSON document on stdout.
//!
//! Exit codes: 0 when every check passes, 1 when a verification finds a
//! counterexample, 2 on malformed input. Diagnostics go to stderr;
//! stdout carries exactly one JSON document per invocation, and identical
//! invocations produce identical output.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tsirelson::harness::{
    compare_oracle, generate_corpus, run_isometry_suite, run_lemma_suite, CorpusSpec,
    REPORT_SCHEMA,
};
use tsirelson::index_set::IndexSet;
use tsirelson::isometry::{
    check_isometry, is_admissible_form, verify_linear_extension, CoordinateMap,
};
use tsirelson::norm::{norm_iterate, norm_with_witness, tsirelson_norm, NormContext};
use tsirelson::rational::parse_rational;
use tsirelson::schreier::{decompose, enumerate_members, greedy_maximal, is_member, Ordinal};
use tsirelson::vector::SparseVector;

#[derive(Parser)]
#[command(
    name = "tsirelson",
    about = "Exact computation in combinatorial Tsirelson spaces T[theta, S_alpha]",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ContextArgs {
    /// theta as p/q, in (0, 1/2]
    #[arg(long)]
    theta: String,
    /// Schreier order: a nonnegative integer, `w`, or `w+n`
    #[arg(long)]
    alpha: String,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the norm of a vector; optionally the witness and iterates.
    Norm {
        #[command(flatten)]
        context: ContextArgs,
        /// Vector in the grammar `index:rational,...`, e.g. `3:1,4:1,5:1`
        #[arg(long)]
        vec: String,
        /// Include the optimal witness certificate
        #[arg(long)]
        witness: bool,
        /// Include the iterate sequence |x|_0 .. |x|_N
        #[arg(long, value_name = "N")]
        iterates: Option<u32>,
    },
    /// Compute the norm together with its witness certificate.
    Witness {
        #[command(flatten)]
        context: ContextArgs,
        #[arg(long)]
        vec: String,
    },
    /// Schreier family queries.
    Schreier {
        #[command(subcommand)]
        query: SchreierCommand,
    },
    /// Check one coordinate map against a deterministic corpus.
    Isometry {
        #[command(flatten)]
        context: ContextArgs,
        /// Map in the grammar `perm=2,1;signs=-1,1;default=+1`
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = CorpusSpec::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = CorpusSpec::default().count)]
        count: u32,
    },
    /// Run a verification suite: lemmas, isometry, or oracle.
    Verify {
        #[command(flatten)]
        context: ContextArgs,
        #[arg(long)]
        suite: SuiteName,
        #[arg(long, default_value_t = CorpusSpec::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = CorpusSpec::default().count)]
        count: u32,
        /// Sweep bound for the oracle suite (indices 1..=bound)
        #[arg(long, default_value_t = 5)]
        bound: u32,
    },
    /// Shorthand for `verify --suite oracle`.
    Oracle {
        #[command(flatten)]
        context: ContextArgs,
        #[arg(long, default_value_t = 5)]
        bound: u32,
    },
}

#[derive(Subcommand)]
enum SchreierCommand {
    /// Membership of a set in S_alpha, with a decomposition witness when
    /// the order is a successor.
    Member {
        #[arg(long)]
        alpha: String,
        /// Comma-separated strictly increasing indices, e.g. `2,4,5,6,7`
        #[arg(long)]
        set: String,
    },
    /// All members inside {1..max}.
    Enum {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        max: u32,
    },
    /// The greedy maximal member starting at an index.
    Maximal {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        start: u32,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SuiteName {
    Lemmas,
    Isometry,
    Oracle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn parse_context(args: &ContextArgs) -> Result<NormContext, String> {
    let theta = parse_rational(&args.theta).map_err(|e| format!("--theta: {e}"))?;
    let alpha: Ordinal = args.alpha.parse().map_err(|e| format!("--alpha: {e}"))?;
    NormContext::new(theta, alpha).map_err(|e| format!("--theta: {e}"))
}

fn parse_vector(text: &str) -> Result<SparseVector, String> {
    text.parse().map_err(|e| format!("--vec: {e}"))
}

fn emit(value: &Value) {
    println!("{value}");
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Norm { context, vec, witness, iterates } => {
            let ctx = parse_context(&context)?;
            let x = parse_vector(&vec)?;
            let mut output = json!({
                "schema": REPORT_SCHEMA,
                "norm": tsirelson_norm(&x, &ctx).to_string(),
            });
            if witness {
                let (_, w) = norm_with_witness(&x, &ctx).map_err(|e| e.to_string())?;
                output["witness"] = serde_json::to_value(&w).expect("witnesses serialize");
            }
            if let Some(n) = iterates {
                let sequence: Vec<String> = (0..=n)
                    .map(|k| norm_iterate(&x, &ctx, k).to_string())
                    .collect();
                output["iterates"] = json!(sequence);
            }
            emit(&output);
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness { context, vec } => run(Command::Norm {
            context,
            vec,
            witness: true,
            iterates: None,
        }),
        Command::Schreier { query } => run_schreier(query),
        Command::Isometry { context, map, seed, count } => {
            let ctx = parse_context(&context)?;
            let map: CoordinateMap = map.parse().map_err(|e| format!("--map: {e}"))?;
            let spec = CorpusSpec { seed, count, ..CorpusSpec::default() };
            let corpus = generate_corpus(&spec, &ctx).map_err(|e| e.to_string())?;
            let conforms = is_admissible_form(&map, &ctx);
            let report = if conforms {
                verify_linear_extension(&map, &ctx, &corpus).map_err(|e| e.to_string())?
            } else {
                check_isometry(&map, &corpus, &ctx)
            };
            let counterexample = report.counterexample.as_ref().map(|ce| {
                json!({
                    "x": ce.x.to_string(),
                    "y": ce.y.to_string(),
                    "lhs": ce.lhs.to_string(),
                    "rhs": ce.rhs.to_string(),
                })
            });
            let passed = report.passed();
            emit(&json!({
                "schema": REPORT_SCHEMA,
                "map": map.to_string(),
                "conforms": conforms,
                "odd": map.is_odd(4),
                "status": if passed { "pass" } else { "fail" },
                "pairs_checked": report.pairs_checked,
                "counterexample": counterexample,
            }));
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify { context, suite, seed, count, bound } => {
            let ctx = parse_context(&context)?;
            let report = match suite {
                SuiteName::Lemmas | SuiteName::Isometry => {
                    let spec = CorpusSpec { seed, count, ..CorpusSpec::default() };
                    let corpus = generate_corpus(&spec, &ctx).map_err(|e| e.to_string())?;
                    match suite {
                        SuiteName::Lemmas => run_lemma_suite(&ctx, &corpus),
                        _ => run_isometry_suite(&ctx, &corpus),
                    }
                }
                SuiteName::Oracle => compare_oracle(&ctx, bound).map_err(|e| e.to_string())?,
            };
            println!("{}", report.to_json());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Oracle { context, bound } => run(Command::Verify {
            context,
            suite: SuiteName::Oracle,
            seed: CorpusSpec::default().seed,
            count: CorpusSpec::default().count,
            bound,
        }),
    }
}

fn run_schreier(query: SchreierCommand) -> Result<ExitCode, String> {
    match query {
        SchreierCommand::Member { alpha, set } => {
            let alpha: Ordinal = alpha.parse().map_err(|e| format!("--alpha: {e}"))?;
            let set: IndexSet = set.parse().map_err(|e| format!("--set: {e}"))?;
            let member = is_member(&set, alpha);
            let decomposition = if member && alpha.is_successor() {
                decompose(&set, alpha)
                    .expect("successor order")
                    .map(|d| serde_json::to_value(&d).expect("decompositions serialize"))
            } else {
                None
            };
            emit(&json!({
                "schema": REPORT_SCHEMA,
                "alpha": alpha.to_string(),
                "set": set,
                "member": member,
                "decomposition": decomposition,
            }));
            Ok(ExitCode::SUCCESS)
        }
        SchreierCommand::Enum { alpha, max } => {
            let alpha: Ordinal = alpha.parse().map_err(|e| format!("--alpha: {e}"))?;
            let members = enumerate_members(alpha, max).map_err(|e| e.to_string())?;
            emit(&json!({
                "schema": REPORT_SCHEMA,
                "alpha": alpha.to_string(),
                "max": max,
                "count": members.len(),
                "sets": members,
            }));
            Ok(ExitCode::SUCCESS)
        }
        SchreierCommand::Maximal { alpha, start } => {
            let alpha: Ordinal = alpha.parse().map_err(|e| format!("--alpha: {e}"))?;
            let set = greedy_maximal(start, alpha).map_err(|e| e.to_string())?;
            emit(&json!({
                "schema": REPORT_SCHEMA,
                "alpha": alpha.to_string(),
                "start": start,
                "set": set,
            }));
            Ok(ExitCode::SUCCESS)
        }
    }
}

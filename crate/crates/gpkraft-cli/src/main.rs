//! `gpkraft` — classify twisted Gelfand–Ponomarev modules, build modules
//! from Kraft-quiver representations, test isomorphism, emit random test
//! cases, and run the self-check suite.
//!
//! Exit codes: 0 success / isomorphic, 1 not isomorphic, 2 parse or input
//! error, 3 mathematical precondition violated (FV = VF ≠ 0, Kraft
//! conditions, field mismatch), 4 internal error, 5 undetermined.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gpkraft::classify::{classify, modules_isomorphic, IsoAnswer};
use gpkraft::field::{Ctx, FieldCtx};
use gpkraft::json;
use gpkraft::quiver::{LabeledGraph, Letter};
use gpkraft::repn::module_of;
use gpkraft::sample::{
    corpus_round_trip, random_corpus, recovered_graph, relation_law_suite, CorpusParams,
    SelfCheck,
};
use gpkraft::Error;

#[derive(Parser)]
#[command(name = "gpkraft", version, about = "Exact classification of twisted Gelfand-Ponomarev modules")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a module file into linear and circular summands.
    Classify {
        /// Input module JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output report JSON file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the recovered Kraft quiver in DOT syntax.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        /// Accepted for interface stability; classification is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the module attached to a quiver spec (quiver + representation).
    Generate {
        /// Input quiver spec JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output module JSON file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two module files are isomorphic.
    Isomorphic {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Seed for the conjugacy search over the rationals.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit random Kraft quiver specs with strict representations.
    Random {
        /// Field: "Q" for the rationals or a prime power such as 2, 4, 9.
        #[arg(long, default_value = "2")]
        field: String,
        /// Total dimension budget per instance.
        #[arg(long, default_value_t = 16)]
        max_dim: usize,
        /// Number of instances.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output JSON file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites and the round-trip corpus.
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

/// User error (bad input) vs mathematical precondition vs internal bug.
fn code_of(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Dim(_) => 2,
        Error::GpViolation(_)
        | Error::Kraft(_)
        | Error::InvalidField(_)
        | Error::CtxMismatch => 3,
        _ => 4,
    }
}

fn read_json(path: &PathBuf) -> Result<serde_json::Value, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    json::parse(&text)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_field(s: &str) -> Result<Ctx, Error> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldCtx::rationals());
    }
    let digits = s.trim_start_matches(['F', 'f']);
    let q: u64 = digits
        .parse()
        .map_err(|_| Error::Parse(format!("unknown field {s:?}: expected Q or a prime power")))?;
    FieldCtx::gf(q)
}

/// DOT rendering of a labeled graph; arrows carry the labels F and V in
/// quiver orientation.
fn to_dot(g: &LabeledGraph) -> String {
    let mut s = String::from("digraph kraft {\n");
    for (i, name) in g.vertices.iter().enumerate() {
        s.push_str(&format!("  v{i} [label=\"{name}\"];\n"));
    }
    for e in &g.edges {
        let label = match e.label {
            Letter::F => "F",
            Letter::V => "V",
        };
        s.push_str(&format!("  v{} -> v{} [label=\"{label}\"];\n", e.tail, e.head));
    }
    s.push_str("}\n");
    s
}

fn cmd_classify(
    input: &PathBuf,
    out: &Option<PathBuf>,
    emit_dot: &Option<PathBuf>,
) -> Result<u8, Error> {
    let m = json::module_from_json(&read_json(input)?)?;
    let report = classify(&m)?;
    write_out(out, &json::render(&json::report_to_json(&report)))?;
    if let Some(path) = emit_dot {
        let dot = to_dot(&recovered_graph(&report));
        fs::write(path, dot)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(0)
}

fn cmd_generate(input: &PathBuf, out: &Option<PathBuf>) -> Result<u8, Error> {
    let spec = json::quiver_spec_from_json(&read_json(input)?)?;
    let build = module_of(&spec.rep)?;
    write_out(
        out,
        &json::render(&json::module_to_json(&build.module, Some(&build.blocks))),
    )?;
    Ok(0)
}

fn cmd_isomorphic(a: &PathBuf, b: &PathBuf, seed: u64) -> Result<u8, Error> {
    let ma = json::module_from_json(&read_json(a)?)?;
    let mb = json::module_from_json(&read_json(b)?)?;
    if ma.ctx != mb.ctx {
        return Err(Error::InvalidField(format!(
            "field mismatch: {} vs {}",
            json::field_to_json(&ma.ctx),
            json::field_to_json(&mb.ctx)
        )));
    }
    match modules_isomorphic(&ma, &mb, seed)? {
        IsoAnswer::Yes => {
            println!("yes");
            Ok(0)
        }
        IsoAnswer::No(reason) => {
            println!("no");
            eprintln!("{reason}");
            Ok(1)
        }
        IsoAnswer::Undetermined(reason) => {
            println!("undetermined");
            eprintln!("{reason}");
            Ok(5)
        }
    }
}

fn cmd_random(
    field: &str,
    max_dim: usize,
    count: usize,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<u8, Error> {
    let ctx = parse_field(field)?;
    let params = CorpusParams {
        max_total_dim: max_dim,
        ..CorpusParams::default()
    };
    let specs: Vec<serde_json::Value> = random_corpus(&ctx, &params, count, seed)
        .into_iter()
        .map(|(quiver, rep)| {
            json::quiver_spec_to_json(&json::QuiverSpec {
                ctx: ctx.clone(),
                quiver,
                rep,
            })
        })
        .collect();
    write_out(out, &json::render(&serde_json::Value::Array(specs)))?;
    Ok(0)
}

fn cmd_selftest(level: Level) -> Result<u8, Error> {
    let (law_samples, corpus_count, fields): (usize, usize, &[u64]) = match level {
        Level::Fast => (60, 12, &[2, 4]),
        Level::Full => (170, 67, &[2, 4, 9]),
    };
    let mut checks: Vec<SelfCheck> = Vec::new();
    for &q in fields {
        let ctx = FieldCtx::gf(q)?;
        let failures = relation_law_suite(&ctx, law_samples, 4, 7);
        checks.push(SelfCheck {
            name: "relation laws",
            passed: failures.is_empty(),
            detail: if failures.is_empty() {
                format!("GF({q}): {law_samples} samples")
            } else {
                format!("GF({q}): {}", failures.join("; "))
            },
        });
        let (passed, failures) = corpus_round_trip(&ctx, &CorpusParams::default(), corpus_count, 7);
        checks.push(SelfCheck {
            name: "round trip",
            passed: failures.is_empty(),
            detail: if failures.is_empty() {
                format!("GF({q}): {passed}/{corpus_count} instances")
            } else {
                format!("GF({q}): {}", failures.join("; "))
            },
        });
    }
    let mut all = true;
    for c in &checks {
        all &= c.passed;
        println!(
            "{} {:<14} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    Ok(if all { 0 } else { 4 })
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.cmd {
        Cmd::Classify {
            input,
            out,
            emit_dot,
            seed: _,
        } => cmd_classify(input, out, emit_dot),
        Cmd::Generate { input, out } => cmd_generate(input, out),
        Cmd::Isomorphic { a, b, seed } => cmd_isomorphic(a, b, *seed),
        Cmd::Random {
            field,
            max_dim,
            count,
            seed,
            out,
        } => cmd_random(field, *max_dim, *count, *seed, out),
        Cmd::Selftest { level } => cmd_selftest(*level),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(code_of(&e))
        }
        Err(_) => {
            eprintln!("error: internal invariant violated (this is a bug)");
            ExitCode::from(4)
        }
    }
}

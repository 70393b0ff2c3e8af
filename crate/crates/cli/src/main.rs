mod spec;

use anyhow::anyhow;
use char3_core::check::{Outcome, Report, DEFAULT_SAMPLES, DEFAULT_SEED};
use char3_core::identity::{check_identity, corpus_identity, parse_identity, Binding};
use char3_core::io::{self, Artifact};
use char3_core::jternary::{jordanize, jordanize_unchecked, Sign, TripleSystem};
use char3_core::lie::{build_lt, check_lts, kt_triple_system, lt_delta};
use char3_core::magic::{magic_square, render_table};
use char3_core::semisimplify::semisimplify;
use char3_core::superalgebra::LieSuperalgebra;
use char3_core::{Field, Mode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spec::{as_super, as_triple, resolve, Failure};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "char3", version, about = "Structurable, J-ternary and Lie (super)algebra constructions over GF(p)")]
#[command(after_help = spec::HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a construction and emit it as JSON
    Construct {
        #[arg(required = true, value_name = "SPEC")]
        spec: Vec<String>,
        /// write the JSON here instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        p: u32,
    },
    /// Run an axiom suite on a JSON file or a construction
    Check {
        #[arg(required = true, value_name = "FILE|SPEC")]
        target: Vec<String>,
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Superalgebra of a Lie algebra with a nilpotent derivation
    Semisimplify {
        #[arg(required = true, value_name = "FILE|SPEC")]
        target: Vec<String>,
        /// write the superalgebra JSON here
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Isomorphism evidence for a Lie superalgebra
    Fingerprint {
        #[arg(required = true, value_name = "FILE|SPEC")]
        target: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// The table of superalgebras from tensor products of composition algebras
    MagicSquare {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check an identity written in the identity language
    Identity {
        /// identity source file
        #[arg(long, value_name = "FILE", required_unless_present = "corpus")]
        identity: Option<PathBuf>,
        /// a shipped identity by name instead of a file
        #[arg(long, conflicts_with = "identity")]
        corpus: Option<String>,
        #[arg(required = true, value_name = "FILE|SPEC")]
        target: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// tuples to sample when not exhaustive
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 3)]
    p: u32,
}

impl RunArgs {
    fn mode(&self) -> Mode {
        let (seed, samples) = (self.seed, self.samples);
        match self.mode {
            ModeArg::Auto => Mode::Auto { seed, samples },
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Random => Mode::Random { seed, samples },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// exhaustive within budget, sampled beyond
    Auto,
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Hein,
    Fk,
    Special,
    Allison,
    Structurable,
    Lts,
    Jacobi,
    Super,
    SuperCube,
}

/// How a command ended, mapped to the process exit code.
enum Exit {
    Pass,
    CheckFailed,
}

type CmdResult = Result<Exit, Failure>;

fn field(p: u32) -> Result<Field, Failure> {
    Field::new(p).map_err(|e| Failure::Usage(anyhow!("{e}")))
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

fn construction(e: impl std::fmt::Display) -> Failure {
    Failure::Construction(anyhow!("{e}"))
}

fn verdict(passed: bool) -> Exit {
    if passed {
        Exit::Pass
    } else {
        Exit::CheckFailed
    }
}

fn outcome_json(o: &Outcome) -> Value {
    json!({
        "name": o.name,
        "passed": o.passed,
        "exhaustive": o.exhaustive,
        "tuples": o.tuples,
        "counterexample": o.counterexample,
    })
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("writing {}: {e}", path.display())))
}

fn construct(words: &[String], out: Option<PathBuf>, p: u32) -> CmdResult {
    let a = resolve(words, field(p)?)?;
    let text = io::to_string(&a);
    match out {
        Some(path) => {
            write_out(&path, &text)?;
            println!("{} of dimension {} written to {}", a.kind(), a.dim(), path.display());
        }
        None => println!("{text}"),
    }
    Ok(Exit::Pass)
}

/// What a suite ran on, the report, and the basis names witnesses index
/// (empty when witnesses span several sorts).
struct SuiteRun {
    subject: String,
    report: Report,
    names: Vec<String>,
}

fn described(kind: &str, dim: usize, report: Report, names: Vec<String>) -> SuiteRun {
    SuiteRun { subject: format!("{kind} of dimension {dim}"), report, names }
}

fn suite_name(s: Suite) -> String {
    s.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn run_suite(suite: Suite, a: Artifact, mode: Mode) -> Result<SuiteRun, Failure> {
    Ok(match suite {
        Suite::Hein => {
            let t = as_triple(a)?;
            described("triple system", t.dim(), t.check_hein(mode), t.names().to_vec())
        }
        Suite::Fk => match a {
            // structurable algebras: {x,y,z} = V_{x,y}z is a (−1,1) system
            Artifact::Structurable(s) => {
                let v = TripleSystem::new(s.alg().names().to_vec(), s.v_tensor().clone());
                described(
                    "triple system V_{x,y}z",
                    v.dim(),
                    v.check_fk(Sign::Minus, Sign::Plus, mode),
                    s.alg().names().to_vec(),
                )
            }
            other => {
                let t = as_triple(other)?;
                described("triple system", t.dim(), t.check_fk(Sign::Plus, Sign::Plus, mode), t.names().to_vec())
            }
        },
        Suite::Special => {
            let t = as_triple(a)?;
            described("triple system", t.dim(), t.check_special(Sign::Plus, Sign::Plus, mode), t.names().to_vec())
        }
        Suite::Allison => {
            let pkg = jordanize_unchecked(&as_triple(a)?);
            let mut r = pkg.check_jordan_closure();
            if r.passed() {
                r.extend(pkg.check_allison(mode));
            }
            described("J-ternary package", pkg.system.dim(), r, Vec::new())
        }
        Suite::Structurable => match a {
            Artifact::Structurable(s) => {
                described("structurable algebra", s.dim(), s.check_axioms(mode), s.alg().names().to_vec())
            }
            other => {
                return Err(usage(format!("suite structurable needs a structurable algebra, got {}", other.kind())))
            }
        },
        Suite::Lts => {
            let t = match a {
                Artifact::Structurable(s) => kt_triple_system(&s),
                Artifact::Triple(t) => t,
                other => return Err(usage(format!("suite lts needs a triple system, got {}", other.kind()))),
            };
            described("triple system", t.dim(), check_lts(&t, mode), t.names().to_vec())
        }
        Suite::Jacobi => match a {
            Artifact::Algebra(l) => described("algebra", l.dim(), l.check_lie(mode), l.names().to_vec()),
            Artifact::Graded(g) => described("graded Lie algebra", g.dim(), g.check(mode), g.alg.names().to_vec()),
            Artifact::WithDerivation(l, d) => {
                let mut r = l.check_lie(mode);
                r.push(Outcome::fact("derivation", l.is_derivation(&d)));
                described("algebra with derivation", l.dim(), r, l.names().to_vec())
            }
            other => return Err(usage(format!("suite jacobi needs a Lie algebra, got {}", other.kind()))),
        },
        Suite::Super | Suite::SuperCube => {
            let s: LieSuperalgebra = as_super(a)?;
            let r = if matches!(suite, Suite::Super) { s.check_weak(mode) } else { s.check_super(mode) };
            let (e, o) = s.superdim();
            SuiteRun {
                subject: format!("superalgebra of superdimension ({e}|{o})"),
                report: r,
                names: s.alg.names().to_vec(),
            }
        }
    })
}

fn check(words: &[String], suite: Suite, run: &RunArgs) -> CmdResult {
    let a = resolve(words, field(run.p)?)?;
    let kind = a.kind();
    let SuiteRun { subject, report, names } = run_suite(suite, a, run.mode())?;
    let witness = report.first_failure().and_then(|o| o.counterexample.clone()).unwrap_or_default();
    let named: Option<Vec<&str>> = (!witness.is_empty() && witness.iter().all(|&i| i < names.len()))
        .then(|| witness.iter().map(|&i| names[i].as_str()).collect());
    if run.format == Format::Json {
        let v = json!({
            "suite": suite_name(suite),
            "input": kind,
            "subject": subject,
            "passed": report.passed(),
            "outcomes": report.outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
            "witness_basis": named,
        });
        println!("{v}");
    } else {
        println!("suite {} on {subject}", suite_name(suite));
        print!("{report}");
        if let (Some(o), Some(named)) = (report.first_failure(), &named) {
            println!("first failure {} at basis ({})", o.name, named.join(", "));
        }
        println!("result: {}", if report.passed() { "PASS" } else { "FAIL" });
    }
    Ok(verdict(report.passed()))
}

fn semisimplify_cmd(words: &[String], out: Option<PathBuf>, run: &RunArgs) -> CmdResult {
    let mode = run.mode();
    let a = resolve(words, field(run.p)?)?;
    let (l, delta) = match a {
        Artifact::WithDerivation(l, d) => (l, d),
        Artifact::Graded(g) => {
            let s = g.sl2.as_ref().ok_or_else(|| usage("graded algebra without sl2-triple: no derivation to use"))?;
            let d = g.ad(&s.f);
            (g.alg, d)
        }
        other => {
            let t = as_triple(other)?;
            let pkg = jordanize(&t, mode).map_err(construction)?;
            let lt = build_lt(&pkg).map_err(construction)?;
            let d = lt_delta(&lt);
            (lt.alg, d)
        }
    };
    let ss = semisimplify(&l, &delta, mode).map_err(construction)?;
    let fp = ss.sup.fingerprint();
    let sup_json = io::super_json(&ss.sup);
    if let Some(path) = &out {
        write_out(path, &serde_json::to_string(&sup_json).expect("serializes"))?;
    }
    if run.format == Format::Json {
        let v = json!({ "superalgebra": sup_json, "fingerprint": fp });
        println!("{v}");
    } else {
        println!("{fp}");
        if let Some(path) = &out {
            println!("superalgebra written to {}", path.display());
        }
    }
    Ok(Exit::Pass)
}

fn fingerprint_cmd(words: &[String], run: &RunArgs) -> CmdResult {
    let s = as_super(resolve(words, field(run.p)?)?)?;
    let fp = s.fingerprint();
    if run.format == Format::Json {
        println!("{}", serde_json::to_value(&fp).expect("serializes"));
    } else {
        println!("{fp}");
    }
    Ok(Exit::Pass)
}

fn magic_square_cmd(p: u32, format: Format) -> CmdResult {
    if p != 3 {
        return Err(usage("the magic square is defined for p = 3 only"));
    }
    let cells = magic_square(field(p)?);
    let passed = cells.iter().all(|c| c.ok);
    if format == Format::Json {
        println!("{}", json!({ "p": p, "passed": passed, "cells": cells }));
    } else {
        print!("{}", render_table(&cells));
        println!();
        for c in &cells {
            let how = match c.kind {
                char3_core::magic::CellKind::Empty => "empty".to_string(),
                char3_core::magic::CellKind::Reference => format!("reference-matched {}", c.name),
                char3_core::magic::CellKind::Named => format!("named {}", c.name),
            };
            println!("({},{}) {:<6} {}", c.d1, c.d2, if c.ok { "ok" } else { "FAIL" }, how);
        }
    }
    for c in cells.iter().filter(|c| !c.ok) {
        let note = c.note.as_deref().unwrap_or("").replace('\n', "; ");
        eprintln!("cell ({},{}) {} failed: {note}", c.d1, c.d2, c.name);
    }
    Ok(verdict(passed))
}

fn identity_cmd(path: Option<PathBuf>, name: Option<String>, words: &[String], run: &RunArgs) -> CmdResult {
    let (label, id) = match (path, name) {
        (Some(path), _) => {
            let src = std::fs::read_to_string(&path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
            let id = parse_identity(&src).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            (path.display().to_string(), id)
        }
        (None, Some(n)) => (n.clone(), corpus_identity(&n).ok_or_else(|| usage(format!("no corpus identity {n:?}")))?),
        (None, None) => return Err(usage("give --identity FILE or --corpus NAME")),
    };
    let a = resolve(words, field(run.p)?)?;
    let binding = match &a {
        Artifact::Triple(t) => {
            let ops = id.operators();
            if ops.contains_key("A") || ops.contains_key("P") {
                Binding::for_package(&jordanize_unchecked(t))
            } else {
                Binding::for_triple(t)
            }
        }
        Artifact::Structurable(s) => Binding::for_structurable(s),
        Artifact::Super(s) => Binding::for_superalgebra(s),
        Artifact::Algebra(l) | Artifact::WithDerivation(l, _) => Binding::for_algebra(l),
        Artifact::Graded(g) => Binding::for_algebra(&g.alg),
    };
    let o = check_identity(&label, &id, &binding, run.mode()).map_err(|e| usage(e.to_string()))?;
    if run.format == Format::Json {
        println!("{}", outcome_json(&o));
    } else {
        println!("{o}");
    }
    Ok(verdict(o.passed))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("CHAR3_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("CHAR3_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage(e.to_string()))
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    match cli.command {
        Command::Construct { spec, out, p } => construct(&spec, out, p),
        Command::Check { target, suite, run } => check(&target, suite, &run),
        Command::Semisimplify { target, out, run } => semisimplify_cmd(&target, out, &run),
        Command::Fingerprint { target, run } => fingerprint_cmd(&target, &run),
        Command::MagicSquare { p, format } => magic_square_cmd(p, format),
        Command::Identity { identity, corpus, target, run } => identity_cmd(identity, corpus, &target, &run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Exit::Pass) => ExitCode::SUCCESS,
        Ok(Exit::CheckFailed) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

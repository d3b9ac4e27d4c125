use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgeltl_core::analyzer::{analyze, render_proof, ProofFormat, Verdict};
use edgeltl_core::falsifier::{falsify, minimize, SearchBounds};
use edgeltl_core::patterns::{parse_binding, template_id, Binding, Catalog};
use edgeltl_core::semantics::{eval_at, LassoTrace};
use edgeltl_core::syntax::{parse, render, ParseError};
use edgeltl_core::Formula;
use serde_json::json;

/// Closure-under-stuttering toolkit for LTL with edge operators.
///
/// Exit status: 0 when the property holds, 1 for a negative result
/// (unknown verdict, false value, counterexample found), 2 on errors.
#[derive(Parser)]
#[command(name = "edgeltl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Try to prove a formula closed under stuttering.
    Analyze {
        formula: String,
        /// Print the derivation (or the blockers) as text or JSON.
        #[arg(long, value_enum)]
        proof: Option<ProofArg>,
    },
    /// Evaluate a formula on a lasso trace read from a JSON file.
    Eval {
        formula: String,
        trace: PathBuf,
        #[arg(long, default_value_t = 0)]
        position: usize,
    },
    /// Search for a trace on which stuttering changes the formula's value.
    Falsify {
        formula: String,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Shrink the counterexample before printing it.
        #[arg(long)]
        minimize: bool,
        /// Worker threads for the search.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Work with the property-pattern catalog.
    Pattern {
        #[command(subcommand)]
        command: PatternCommand,
        /// Extra templates (JSON list of {id, metavariables, body, notes}).
        #[arg(long, global = true)]
        templates: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProofArg {
    Text,
    Json,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, default_value_t = SearchBounds::default().max_stem)]
    stem_max: usize,
    #[arg(long, default_value_t = SearchBounds::default().max_loop)]
    loop_max: usize,
    #[arg(long, default_value_t = SearchBounds::default().max_unroll)]
    unroll_max: usize,
    #[arg(long, default_value_t = SearchBounds::default().atom_cap)]
    atom_cap: usize,
}

#[derive(Subcommand)]
enum PatternCommand {
    /// Print template ids.
    List,
    /// Print a template body, e.g. `show existence D 1`.
    Show {
        #[arg(num_args = 1..=3, required = true)]
        id: Vec<String>,
    },
    /// Bind metavariables, e.g. `instantiate existence D 1 -b P=scl -b "R=!mgn"`.
    Instantiate {
        #[arg(num_args = 1..=3, required = true)]
        id: Vec<String>,
        #[arg(short = 'b', long = "bind", value_name = "NAME=FORMULA")]
        bindings: Vec<String>,
    },
    /// Analyze every template; succeeds only if all are closed.
    Check,
}

// A closed pipe on stdout is not worth a panic.
macro_rules! emit {
    ($($arg:tt)*) => {{
        let _ = writeln!(io::stdout(), $($arg)*);
    }};
}

struct Failure(String);

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Analyze { formula, proof } => cmd_analyze(&parse_arg(&formula)?, proof),
        Command::Eval { formula, trace, position } => cmd_eval(&parse_arg(&formula)?, &trace, position),
        Command::Falsify { formula, bounds, minimize, jobs } => {
            let f = parse_arg(&formula)?;
            let b = SearchBounds {
                max_stem: bounds.stem_max,
                max_loop: bounds.loop_max,
                max_unroll: bounds.unroll_max,
                atom_cap: bounds.atom_cap,
            };
            match jobs {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| e.to_string())?
                    .install(|| cmd_falsify(&f, &b, minimize)),
                None => cmd_falsify(&f, &b, minimize),
            }
        }
        Command::Pattern { command, templates } => {
            let mut catalog = Catalog::builtin();
            if let Some(path) = templates {
                let text = read(&path)?;
                catalog.load_user_templates(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            cmd_pattern(&catalog, command)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    Ok(fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn parse_arg(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|e| Failure(with_caret(text, &e)))
}

fn with_caret(text: &str, e: &ParseError) -> String {
    let width = (e.span.end - e.span.start).max(1);
    format!("{e}\n  {text}\n  {}{}", " ".repeat(e.span.start), "^".repeat(width))
}

fn cmd_analyze(f: &Formula, proof: Option<ProofArg>) -> Result<u8, Failure> {
    let verdict = analyze(f);
    match proof {
        Some(ProofArg::Json) => {
            let doc = match &verdict {
                Verdict::Closed(p) => json!({ "verdict": "closed", "proof": p.to_json() }),
                Verdict::Unknown(b) => {
                    json!({ "verdict": "unknown", "blockers": b.iter().map(render).collect::<Vec<_>>() })
                }
            };
            emit!("{}", serde_json::to_string_pretty(&doc).expect("json values serialize"));
        }
        Some(ProofArg::Text) => {
            emit!("{}", verdict_line(&verdict));
            if let Verdict::Closed(p) = &verdict {
                let _ = write!(io::stdout(), "{}", render_proof(p, ProofFormat::Text));
            }
        }
        None => emit!("{}", verdict_line(&verdict)),
    }
    Ok(if verdict.is_closed() { 0 } else { 1 })
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::Closed(_) => "closed".to_string(),
        Verdict::Unknown(b) => {
            let b: Vec<String> = b.iter().map(render).collect();
            format!("unknown (stuck at {})", b.join(", "))
        }
    }
}

fn cmd_eval(f: &Formula, path: &PathBuf, position: usize) -> Result<u8, Failure> {
    let trace = LassoTrace::from_json_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let value = eval_at(f, &trace, position).map_err(|e| e.to_string())?;
    emit!("{value}");
    Ok(if value { 0 } else { 1 })
}

fn cmd_falsify(f: &Formula, b: &SearchBounds, shrink: bool) -> Result<u8, Failure> {
    match falsify(f, b).map_err(|e| e.to_string())? {
        Some(c) => {
            let c = if shrink { minimize(&c, f) } else { c };
            emit!("{}", serde_json::to_string_pretty(&c.to_json()).expect("json values serialize"));
            Ok(1)
        }
        None => {
            emit!("no counterexample within bounds");
            Ok(0)
        }
    }
}

fn resolve_id(parts: &[String]) -> String {
    match parts {
        [pattern, scope, combo] => template_id(pattern, scope, combo),
        _ => parts.join("/"),
    }
}

fn cmd_pattern(catalog: &Catalog, command: PatternCommand) -> Result<u8, Failure> {
    match command {
        PatternCommand::List => {
            for t in catalog.templates() {
                emit!("{}", t.id);
            }
            Ok(0)
        }
        PatternCommand::Show { id } => {
            let id = resolve_id(&id);
            let t = catalog.get(&id).ok_or_else(|| format!("unknown template `{id}`"))?;
            emit!("{}", render(&t.body));
            Ok(0)
        }
        PatternCommand::Instantiate { id, bindings } => {
            let id = resolve_id(&id);
            let mut binding = Binding::new();
            for b in &bindings {
                let (name, f) = parse_binding(b).map_err(|e| e.to_string())?;
                if binding.insert(name.clone(), f).is_some() {
                    return Err(format!("{name} is bound twice").into());
                }
            }
            let inst = catalog.instantiate(&id, &binding).map_err(|e| e.to_string())?;
            for w in &inst.warnings {
                eprintln!("{w}");
            }
            emit!("{}", render(&inst.formula));
            Ok(0)
        }
        PatternCommand::Check => {
            let report = catalog.check();
            for e in &report.entries {
                emit!("{}\t{}", e.id, verdict_line(&e.verdict));
            }
            Ok(if report.all_closed() { 0 } else { 1 })
        }
    }
}

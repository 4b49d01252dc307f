//! Command-line interface. Every command prints one JSON object, except
//! `dot`, which prints a Graphviz digraph.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::alphabet::tokenize_word;
use crate::dot::{kripke_dot, mvpa_dot};
use crate::error::{Error, Result};
use crate::io::{self, GridFile};
use crate::languages::{build_automaton, enumerate, reduction_alphabet, LanguageId};
use crate::mvpa::Mvpa;
use crate::pdl::syntax::{parse_formula, print_formula};
use crate::pdl::{satisfies, witness, AutomatonProgram, BoundPolicy, Formula};
use crate::phase::min_phases;
use crate::tiling::{bounded_tiler, build_model, check_grid, compile, SnakeVariant};

#[derive(Debug, Parser)]
#[command(name = "mvpa-pdl", version, about = "Multi-stack visibly pushdown automata, PDL model checking and tiling reductions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an automaton on a word and print an accepting run if there is one.
    Run {
        /// Built-in language name (L0, L1_h, ...) or automaton file.
        #[arg(short, long)]
        automaton: String,
        /// Whitespace-separated letters.
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
    },
    /// Minimal number of phases of a word.
    Phases {
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
        /// Classify letters with this automaton's alphabet instead of the
        /// reduction alphabet.
        #[arg(short, long)]
        automaton: Option<String>,
    },
    /// Membership of a word in an automaton's language.
    Member {
        #[arg(short, long)]
        automaton: String,
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
    },
    /// Whether an automaton is deterministic.
    Deterministic {
        #[arg(short, long)]
        automaton: String,
    },
    /// Emit or enumerate one of the six reduction languages.
    Languages {
        /// L0, L1, L0_h, L1_h, L0_v or L1_v.
        #[arg(long)]
        id: String,
        #[arg(value_enum, default_value_t = LanguageAction::Emit)]
        action: LanguageAction,
        /// Largest exponent for `enumerate`.
        #[arg(long, default_value_t = 3)]
        max_exp: usize,
    },
    /// Compile a tiling system into its reduction formula.
    Compile {
        #[arg(short, long)]
        tiling: PathBuf,
        /// Use `(a1 b2)+ d` and `(a2 b1)+ c` in the snake conjunct.
        #[arg(long)]
        plus_variant: bool,
        /// Also write the formula text to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the truncated snake model of a solution grid.
    BuildModel {
        #[arg(short, long)]
        tiling: PathBuf,
        #[arg(short, long)]
        grid: PathBuf,
        /// Truncate the grid to this size first.
        #[arg(short = 'R', long = "size")]
        size: Option<usize>,
    },
    /// Evaluate a formula at a world of a Kripke structure.
    Check {
        #[arg(short, long)]
        model: PathBuf,
        /// Formula file.
        #[arg(short, long, conflicts_with = "formula_text", required_unless_present = "formula_text")]
        formula: Option<PathBuf>,
        /// Formula given inline.
        #[arg(long = "formula-text")]
        formula_text: Option<String>,
        /// Witness bound for automaton programs.
        #[arg(short, long, env = "MVPA_PDL_BOUND")]
        bound: Option<usize>,
        /// World to check; defaults to the model's root.
        #[arg(short = 'x', long)]
        world: Option<String>,
    },
    /// Search for a solution grid of bounded size.
    Tile {
        #[arg(short, long)]
        tiling: PathBuf,
        #[arg(short = 'R', long = "size")]
        size: usize,
        /// Pin every cell of column 0 to t0.
        #[arg(long)]
        force_column_zero: bool,
    },
    /// Graphviz export of an automaton or a Kripke structure.
    Dot {
        /// Built-in language name or file.
        input: String,
        #[arg(short, long, value_enum)]
        kind: DotKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LanguageAction {
    Emit,
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotKind {
    Automaton,
    Kripke,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let status = e.exit_code();
            return if status == 0 {
                Outcome { status, stdout: text, stderr: String::new() }
            } else {
                Outcome { status: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli.command) {
        Ok(stdout) => Outcome { status: 0, stdout, stderr: String::new() },
        Err(e) => {
            let mut body = json!({ "error": e.to_string() });
            if let Error::Format { field, .. } = &e {
                body["field"] = json!(field);
            }
            Outcome { status: 1, stdout: String::new(), stderr: format!("{body}\n") }
        }
    }
}

fn print(v: Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
}

/// A built-in language name, or a path to an automaton file.
pub fn load_automaton(spec: &str) -> Result<Mvpa> {
    if let Ok(id) = spec.parse::<LanguageId>() {
        return Ok(build_automaton(id));
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::format(
            "automaton",
            format!("`{spec}` is neither a built-in language nor an automaton file"),
        ));
    }
    io::parse_automaton(&io::read_text(path)?)
}

fn resolve(name: &str) -> Result<AutomatonProgram> {
    Ok(AutomatonProgram::new(name, load_automaton(name)?))
}

fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Run { automaton, word } => {
            let m = load_automaton(automaton)?;
            let run = m.run(&tokenize_word(word))?;
            let accepted = run.as_ref().is_some_and(|r| r.accepted);
            Ok(print(json!({ "accepted": accepted, "run": run })))
        }
        Command::Phases { word, automaton } => {
            let alphabet = match automaton {
                Some(a) => load_automaton(a)?.alphabet().clone(),
                None => reduction_alphabet(),
            };
            let phases = min_phases(&alphabet, &tokenize_word(word))?;
            Ok(print(json!({ "phases": phases })))
        }
        Command::Member { automaton, word } => {
            let m = load_automaton(automaton)?;
            Ok(print(json!({ "member": m.membership(&tokenize_word(word))? })))
        }
        Command::Deterministic { automaton } => {
            let m = load_automaton(automaton)?;
            Ok(print(json!({ "deterministic": m.is_deterministic() })))
        }
        Command::Languages { id, action, max_exp } => {
            let id: LanguageId = id.parse()?;
            match action {
                LanguageAction::Emit => Ok(print(serde_json::to_value(io::AutomatonFile::from(&build_automaton(id))).expect("serializable"))),
                LanguageAction::Enumerate => {
                    let words: Vec<String> = enumerate(id, *max_exp).iter().map(|w| w.join(" ")).collect();
                    Ok(print(json!({ "language": id.to_string(), "max_exp": max_exp, "words": words })))
                }
            }
        }
        Command::Compile { tiling, plus_variant, output } => {
            let system = io::parse_tiling(&io::read_text(tiling)?)?;
            let variant = if *plus_variant { SnakeVariant::Plus } else { SnakeVariant::Star };
            let phi = compile(&system, variant);
            let text = print_formula(&phi.to_formula());
            if let Some(path) = output {
                io::write_text(path, &format!("{text}\n"))?;
            }
            let conjuncts: serde_json::Map<String, Value> = phi
                .parts()
                .iter()
                .map(|(name, f)| (name.to_string(), json!(print_formula(f))))
                .collect();
            Ok(print(json!({ "formula": text, "conjuncts": conjuncts })))
        }
        Command::BuildModel { tiling, grid, size } => {
            let system = io::parse_tiling(&io::read_text(tiling)?)?;
            let mut grid = io::parse_grid(&io::read_text(grid)?)?;
            if let Some(r) = size {
                grid = grid.truncate(*r)?;
            }
            let model = build_model(&system, &grid)?;
            let file = io::KripkeFile::from_structure(&model.kripke, Some(crate::tiling::model::ROOT));
            Ok(print(serde_json::to_value(file).expect("serializable")))
        }
        Command::Check { model, formula, formula_text, bound, world } => {
            let (k, root) = io::parse_kripke(&io::read_text(model)?)?;
            let text = match (formula, formula_text) {
                (Some(path), _) => io::read_text(path)?,
                (None, Some(t)) => t.clone(),
                (None, None) => return Err(Error::format("formula", "no formula given")),
            };
            let f = parse_formula(&text, &resolve)?;
            let x = world
                .clone()
                .or(root)
                .ok_or_else(|| Error::format("world", "no --world given and the model has no root"))?;
            let policy = bound.map_or(BoundPolicy::Exact, BoundPolicy::Witness);
            let verdict = satisfies(&k, &x, &f, policy)?;
            let mut out = json!({ "world": x, "formula": print_formula(&f) });
            merge(&mut out, serde_json::to_value(verdict).expect("serializable"));
            if let (Formula::Diamond(p, body), true) = (&f, verdict.holds()) {
                out["witness"] = json!(witness(&k, &x, p, body, policy)?);
            }
            if let (Some((p, body)), false) = (f.as_box(), verdict.holds()) {
                out["counterexample"] = json!(witness(&k, &x, p, &Formula::not(body.clone()), policy)?);
            }
            Ok(print(out))
        }
        Command::Tile { tiling, size, force_column_zero } => {
            let system = io::parse_tiling(&io::read_text(tiling)?)?;
            match bounded_tiler(&system, *size, *force_column_zero) {
                Some(grid) => {
                    let report = check_grid(&system, &grid);
                    Ok(print(json!({
                        "solution": GridFile::from(&grid),
                        "t0_in_column_zero": report.t0_in_column_zero,
                    })))
                }
                None => Ok(print(json!({ "solution": null }))),
            }
        }
        Command::Dot { input, kind } => match kind {
            DotKind::Automaton => Ok(mvpa_dot(&load_automaton(input)?)),
            DotKind::Kripke => {
                let (k, _) = io::parse_kripke(&io::read_text(Path::new(input))?)?;
                Ok(kripke_dot(&k))
            }
        },
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

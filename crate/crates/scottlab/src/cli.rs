//! The `scottlab` command line. Exit codes: 0 success, 1 a verification or
//! model check came out negative, 2 bad input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use scottlab_core::backforth::{bf_leq, exists_atomic_check, isolating_formula, orbits, scott_sentence_check, TupleInStructure};
use scottlab_core::constructions::{build_b_along_path, generate_tree_scott_sentence, verify_trace, ExplicitTree, StageFlag, Tree};
use scottlab_core::formula::{classify, evaluate, evaluate_witnessed};
use scottlab_core::{ElementId, StageStructure};
use serde_json::{json, Value};

use crate::bundle::{construct, RunKind};
use crate::format::structure::{read_structure, structure_to_string};
use crate::format::theta::parse_theta_spec;
use crate::format::trace::{read_snapshots, read_trace, snapshots_to_string, trace_to_string};
use crate::format::{parse_path_spec, parse_tree_spec, read_formula, write_text};
use crate::mutation::mutation_suite;

#[derive(Debug, Parser)]
#[command(name = "scottlab", version, about = "Finite-stage laboratory for Scott sentences of bouquet structures")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Warmup,
    Pi3,
    Tree,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a construction and write its trace.
    Construct {
        #[arg(value_enum)]
        kind: KindArg,
        /// Theta document, or builtin:NAME.
        #[arg(long)]
        theta: String,
        /// Tree document, or builtin:NAME (tree runs only).
        #[arg(long)]
        tree: Option<String>,
        #[arg(long)]
        stages: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the companion snapshots of a tree trace along a path.
    Bpath {
        #[arg(long)]
        trace: PathBuf,
        /// `zeros`, an inline path document, or a path document file.
        #[arg(long)]
        path: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the Π₂ sentence describing a finite tree's limit structure.
    ScottSentence {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a sentence in a structure.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        structure: PathBuf,
        /// Existential quantifiers only look at the first N elements by id.
        #[arg(long)]
        witness_bound: Option<usize>,
    },
    /// Decide `(left, ā) ≤ₙ (right, b̄)`.
    Bf {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Comma-separated element ids.
        #[arg(long, default_value = "")]
        tuple_left: String,
        #[arg(long, default_value = "")]
        tuple_right: String,
    },
    /// Automorphism orbits of elements.
    Orbits {
        #[arg(long)]
        structure: PathBuf,
    },
    /// An isolating formula for each element orbit.
    Isolate {
        #[arg(long)]
        structure: PathBuf,
    },
    /// Whether every element is isolated by a conjunction of its labels.
    AtomicCheck {
        #[arg(long)]
        structure: PathBuf,
    },
    /// Check that a sentence holds in exactly the test structures isomorphic
    /// to the given one.
    ScottCheck {
        #[arg(long)]
        sentence: PathBuf,
        #[arg(long)]
        structure: PathBuf,
        /// Directory of structure documents (`*.json`).
        #[arg(long)]
        tests: PathBuf,
    },
    /// Write a mutation suite of a structure.
    Mutate {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the invariants of a trace.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        /// Companion snapshots from `bpath`.
        #[arg(long)]
        b: Option<PathBuf>,
    },
}

/// Input problems; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
enum InputError {
    #[error(transparent)]
    Format(#[from] crate::format::FormatError),
    #[error(transparent)]
    Run(#[from] crate::bundle::RunError),
    #[error("{0}")]
    Other(String),
}

fn other(e: impl ToString) -> InputError {
    InputError::Other(e.to_string())
}

/// A JSON report and whether the command's check passed.
struct Outcome {
    report: Value,
    passed: bool,
}

fn pass(report: Value) -> Outcome {
    Outcome { report, passed: true }
}

fn parse_ids(text: &str) -> Result<Vec<ElementId>, InputError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map(ElementId).map_err(|_| other(format!("malformed element id {t:?}"))))
        .collect()
}

fn ids_json(ids: &[ElementId]) -> Value {
    json!(ids.iter().map(|i| i.0).collect::<Vec<_>>())
}

fn explicit_tree(t: Tree) -> Result<ExplicitTree, InputError> {
    match t {
        Tree::Explicit(e) => Ok(e),
        other_tree => {
            let nodes = other_tree
                .finite_nodes()
                .ok_or_else(|| other("scott-sentence needs a finite tree"))?;
            ExplicitTree::new(nodes).map_err(other)
        }
    }
}

fn structure_files(dir: &Path) -> Result<Vec<PathBuf>, InputError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| other(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn execute(command: Command) -> Result<Outcome, InputError> {
    match command {
        Command::Construct {
            kind,
            theta,
            tree,
            stages,
            out,
        } => {
            let kind = match kind {
                KindArg::Warmup => RunKind::Warmup,
                KindArg::Pi3 => RunKind::Pi3,
                KindArg::Tree => RunKind::Tree,
            };
            let theta = parse_theta_spec(&theta)?;
            let tree = tree.as_deref().map(parse_tree_spec).transpose()?;
            let trace = construct(kind, &theta, tree.as_ref(), stages)?;
            write_text(&out, &trace_to_string(&trace))?;
            let count = |f: StageFlag| trace.records.iter().filter(|r| r.flag == f).count();
            let last = trace.last().expect("stage 0 is always recorded");
            Ok(pass(json!({
                "records": trace.len(),
                "expansionary": count(StageFlag::Expansionary),
                "attention": count(StageFlag::Attention),
                "quiet": count(StageFlag::Quiet),
                "n": last.n,
                "k": last.k,
            })))
        }
        Command::Bpath { trace, path, out } => {
            let t = read_trace(&trace)?;
            let rule = parse_path_spec(&path)?;
            let bs = build_b_along_path(&t, None, &rule).map_err(other)?;
            write_text(&out, &snapshots_to_string(&bs))?;
            Ok(pass(json!({ "snapshots": bs.len() })))
        }
        Command::ScottSentence { tree, out } => {
            let t = explicit_tree(parse_tree_spec(&tree)?)?;
            let psi = generate_tree_scott_sentence(&t);
            write_text(&out, &format!("{psi}\n"))?;
            Ok(pass(json!({
                "classification": classify(&psi).to_string(),
                "size": psi.size(),
                "nodes": t.len(),
            })))
        }
        Command::Eval {
            formula,
            structure,
            witness_bound,
        } => {
            let f = read_formula(&formula)?;
            let s = read_structure(&structure)?;
            let env = Default::default();
            let value = match witness_bound {
                Some(b) => evaluate_witnessed(&f, &s, b, &env),
                None => evaluate(&f, &s, &env),
            }
            .map_err(other)?;
            Ok(Outcome {
                report: json!({ "value": value, "classification": classify(&f).to_string() }),
                passed: value,
            })
        }
        Command::Bf {
            n,
            left,
            right,
            tuple_left,
            tuple_right,
        } => {
            let a = read_structure(&left)?;
            let b = read_structure(&right)?;
            let ta = parse_ids(&tuple_left)?;
            let tb = parse_ids(&tuple_right)?;
            let leq = bf_leq(n, TupleInStructure::new(&a, &ta), TupleInStructure::new(&b, &tb)).map_err(other)?;
            Ok(Outcome {
                report: json!({ "n": n, "leq": leq }),
                passed: leq,
            })
        }
        Command::Orbits { structure } => {
            let s = read_structure(&structure)?;
            let classes: Vec<Value> = orbits(&s, 1)
                .classes
                .iter()
                .map(|c| ids_json(&c.iter().map(|t| t[0]).collect::<Vec<_>>()))
                .collect();
            Ok(pass(json!({ "orbits": classes })))
        }
        Command::Isolate { structure } => {
            let s = read_structure(&structure)?;
            let mut all = true;
            let rows: Vec<Value> = orbits(&s, 1)
                .classes
                .iter()
                .map(|c| {
                    let members: Vec<ElementId> = c.iter().map(|t| t[0]).collect();
                    let f = isolating_formula(&s, &c[0]).ok();
                    all &= f.is_some();
                    json!({ "orbit": ids_json(&members), "formula": f.map(|f| f.to_string()) })
                })
                .collect();
            Ok(Outcome {
                report: json!(rows),
                passed: all,
            })
        }
        Command::AtomicCheck { structure } => {
            let s = read_structure(&structure)?;
            let r = exists_atomic_check(&s);
            Ok(Outcome {
                report: json!({ "atomic": r.atomic, "witnesses": ids_json(&r.witnesses) }),
                passed: r.atomic,
            })
        }
        Command::ScottCheck {
            sentence,
            structure,
            tests,
        } => {
            let theta = read_formula(&sentence)?;
            let a = read_structure(&structure)?;
            let files = structure_files(&tests)?;
            let structures: Vec<StageStructure> = files.iter().map(|f| read_structure(f)).collect::<Result<_, _>>()?;
            let verdicts = scott_sentence_check(&theta, &a, &structures).map_err(other)?;
            let rows: Vec<Value> = files
                .iter()
                .zip(&verdicts)
                .map(|(f, v)| {
                    json!({
                        "file": f.file_name().map(|n| n.to_string_lossy().into_owned()),
                        "models": v.models,
                        "isomorphic": v.isomorphic,
                        "agree": v.agree,
                    })
                })
                .collect();
            Ok(Outcome {
                report: json!(rows),
                passed: verdicts.iter().all(|v| v.agree),
            })
        }
        Command::Mutate { structure, budget, out } => {
            let s = read_structure(&structure)?;
            let suite = mutation_suite(&s, budget as usize);
            fs::create_dir_all(&out).map_err(|e| other(format!("{}: {e}", out.display())))?;
            let mut manifest = String::from("file\texpected_iso\tdescription\n");
            for (i, m) in suite.mutants.iter().enumerate() {
                let name = format!("mutant-{i:03}.json");
                write_text(&out.join(&name), &structure_to_string(&m.structure))?;
                manifest.push_str(&format!("{name}\t{}\t{}\n", m.expected_iso, m.description));
            }
            write_text(&out.join("manifest.tsv"), &manifest)?;
            Ok(pass(json!({
                "mutants": suite.mutants.len(),
                "isomorphic": suite.mutants.iter().filter(|m| m.expected_iso).count(),
            })))
        }
        Command::Verify { trace, b } => {
            let t = read_trace(&trace)?;
            let bs = b.as_deref().map(read_snapshots).transpose()?;
            let violations = verify_trace(&t, bs.as_deref(), None);
            let rows: Vec<Value> = violations
                .iter()
                .map(|v| {
                    json!({
                        "stage": v.stage,
                        "kind": v.kind.as_str(),
                        "elements": ids_json(&v.elements),
                        "detail": v.detail,
                    })
                })
                .collect();
            Ok(Outcome {
                passed: rows.is_empty(),
                report: json!({ "violations": rows }),
            })
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. The report goes to `out`, errors to
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&o.report).expect("json"));
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

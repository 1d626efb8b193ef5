//! `infect`: truth tables, entailment, proof checking, normalisation and search.
//!
//! Exit status: 0 when the answer is positive, 1 when it is negative (with a
//! countermodel or violation on stdout), 2 on usage, parse or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use infectious_nd::calculus::{check_proof, parse_proof, render_path, render_proof, Proof, SystemId};
use infectious_nd::normaliser::{check_nsp, normalise, rank};
use infectious_nd::search::{prove, SearchBudget};
use infectious_nd::semantics::{entails, Matrix, TruthValue};
use infectious_nd::{parse_formula, Formula, LogicId};

#[derive(Parser)]
#[command(name = "infect", version, about = "Infectious logics: tables, entailment, natural deduction")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the truth tables of a logic.
    Tables { logic: LogicId },
    /// Decide a sequent `F1, F2 |- G1, G2` by enumerating valuations.
    Entail { logic: LogicId, sequent: String },
    /// Check a proof file against a system.
    Check { system: SystemId, file: PathBuf },
    /// Normalise a proof file.
    Normalise {
        system: SystemId,
        file: PathBuf,
        /// Write the normal proof here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the reduction trace.
        #[arg(long)]
        trace: bool,
    },
    /// Check the negation subformula property of a proof file.
    Nsp { system: SystemId, file: PathBuf },
    /// Search for a proof of a single-conclusion sequent.
    Search {
        system: SystemId,
        sequent: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 5000)]
        nodes: usize,
    },
}

/// Outcome of a command that completed: positive or negative.
struct Report {
    ok: bool,
    text: String,
    json: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(r) => {
            if cli.json {
                println!("{}", r.json);
            } else {
                print!("{}", r.text);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Tables { logic } => Ok(tables(*logic)),
        Command::Entail { logic, sequent } => {
            let (gamma, delta) = parse_sequent(sequent)?;
            let e = entails(*logic, &gamma, &delta)?;
            let text = match &e.countermodel {
                None => format!("holds: {}\n", render_sequent(&gamma, &delta)),
                Some(v) => {
                    let assignment: Vec<String> = v.iter().map(|(x, t)| format!("{x}={}", t.symbol())).collect();
                    format!(
                        "fails: {}\ncountermodel: {}\n",
                        render_sequent(&gamma, &delta),
                        assignment.join(", ")
                    )
                }
            };
            Ok(Report {
                ok: e.holds,
                text,
                json: serde_json::to_value(&e)?,
            })
        }
        Command::Check { system, file } => {
            let p = read_proof(file)?;
            Ok(match check_proof(*system, &p) {
                Ok(j) => {
                    let seq = render_sequent(&j.assumptions(), std::slice::from_ref(&j.conclusion));
                    Report {
                        ok: true,
                        text: format!("valid: {seq}\n"),
                        json: json!({ "valid": true, "judgement": seq }),
                    }
                }
                Err(e) => Report {
                    ok: false,
                    text: format!("invalid: {e}\n"),
                    json: json!({ "valid": false, "path": render_path(&e.path), "error": e.kind.to_string() }),
                },
            })
        }
        Command::Normalise {
            system,
            file,
            out,
            trace,
        } => {
            let p = read_proof(file)?;
            let before = rank(&p);
            let n = normalise(*system, &p)?;
            let rendered = render_proof(&n.result);
            let mut text = String::new();
            match out {
                Some(path) => {
                    fs::write(path, format!("{rendered}\n")).with_context(|| format!("writing {}", path.display()))?;
                    text.push_str(&format!("normalised in {} steps: {}\n", n.trace.len(), path.display()));
                }
                None => {
                    text.push_str(&rendered);
                    text.push('\n');
                }
            }
            if *trace {
                for (i, s) in n.trace.iter().enumerate() {
                    text.push_str(&format!(
                        "step {}: {} at {}, rank after {}\n",
                        i + 1,
                        s.redex.kind.name(),
                        render_path(&s.redex.position),
                        s.rank
                    ));
                }
            }
            let mut j = json!({
                "steps": n.trace.len(),
                "rank_before": before,
                "proof": rendered,
            });
            if *trace {
                j["trace"] = serde_json::to_value(&n.trace)?;
            }
            Ok(Report { ok: true, text, json: j })
        }
        Command::Nsp { system, file } => {
            let p = read_proof(file)?;
            check_proof(*system, &p).map_err(|e| anyhow!("proof does not check: {e}"))?;
            let r = check_nsp(&p);
            let text = if r.holds {
                "holds\n".to_string()
            } else {
                let mut t = String::from("fails\n");
                for v in &r.violations {
                    let f = p.get(v).map(|q| q.conclusion().render()).unwrap_or_default();
                    t.push_str(&format!("violation at {}: {f}\n", render_path(v)));
                }
                t
            };
            Ok(Report {
                ok: r.holds,
                text,
                json: serde_json::to_value(&r)?,
            })
        }
        Command::Search {
            system,
            sequent,
            depth,
            nodes,
        } => {
            let (gamma, delta) = parse_sequent(sequent)?;
            let [goal] = delta.as_slice() else {
                bail!("search needs exactly one conclusion");
            };
            if *depth == 0 || *nodes == 0 {
                bail!("--depth and --nodes must be positive");
            }
            let found = prove(*system, &gamma, goal, SearchBudget::new(*depth, *nodes));
            Ok(match found {
                Some(p) => {
                    let rendered = render_proof(&p);
                    Report {
                        ok: true,
                        text: format!("{rendered}\n"),
                        json: json!({ "found": true, "proof": rendered }),
                    }
                }
                None => Report {
                    ok: false,
                    text: format!("no proof of depth <= {depth} with <= {nodes} nodes\n"),
                    json: json!({ "found": false }),
                },
            })
        }
    }
}

fn read_proof(path: &Path) -> Result<Proof> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_proof(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Splits `F1, F2 |- G1, G2`; either side may be empty.
fn parse_sequent(text: &str) -> Result<(Vec<Formula>, Vec<Formula>)> {
    let text = text.replace('⊢', "|-");
    let mut sides = text.split("|-");
    let (Some(left), Some(right), None) = (sides.next(), sides.next(), sides.next()) else {
        bail!("sequent must contain exactly one `|-`");
    };
    let side = |s: &str| -> Result<Vec<Formula>> {
        if s.trim().is_empty() {
            return Ok(Vec::new());
        }
        s.split(',')
            .map(|f| parse_formula(f.trim()).map_err(|e| anyhow!("{e}")))
            .collect()
    };
    Ok((side(left)?, side(right)?))
}

fn render_sequent(gamma: &[Formula], delta: &[Formula]) -> String {
    let join = |fs: &[Formula]| fs.iter().map(Formula::render).collect::<Vec<_>>().join(", ");
    let (l, r) = (join(gamma), join(delta));
    match (l.is_empty(), r.is_empty()) {
        (true, true) => "|-".into(),
        (true, false) => format!("|- {r}"),
        (false, true) => format!("{l} |-"),
        (false, false) => format!("{l} |- {r}"),
    }
}

#[derive(Serialize)]
struct TablesJson {
    logic: LogicId,
    carrier: Vec<TruthValue>,
    designated: Vec<TruthValue>,
    neg: Vec<TruthValue>,
    and: Vec<Vec<TruthValue>>,
    or: Vec<Vec<TruthValue>>,
}

fn tables(logic: LogicId) -> Report {
    let m: &Matrix = logic.matrix();
    let c = m.carrier();
    let sym = |x: TruthValue| x.symbol().to_string();
    let row = |xs: &[String]| xs.join(" ");
    let mut text = format!("{logic}\ndesignated: {}\n\n", row(&m.designated().iter().map(|&x| sym(x)).collect::<Vec<_>>()));
    text.push_str("A | ~A\n");
    for &x in c {
        text.push_str(&format!("{} | {}\n", sym(x), sym(m.neg(x))));
    }
    let binary = |name: &str, op: &dyn Fn(TruthValue, TruthValue) -> TruthValue| {
        let mut t = format!("\n{name} | {}\n", row(&c.iter().map(|&x| sym(x)).collect::<Vec<_>>()));
        for &x in c {
            t.push_str(&format!("{} | {}\n", sym(x), row(&c.iter().map(|&y| sym(op(x, y))).collect::<Vec<_>>())));
        }
        t
    };
    text.push_str(&binary("&", &|x, y| m.and(x, y)));
    text.push_str(&binary("|", &|x, y| m.or(x, y)));
    let json = TablesJson {
        logic,
        carrier: c.to_vec(),
        designated: m.designated().to_vec(),
        neg: c.iter().map(|&x| m.neg(x)).collect(),
        and: c.iter().map(|&x| c.iter().map(|&y| m.and(x, y)).collect()).collect(),
        or: c.iter().map(|&x| c.iter().map(|&y| m.or(x, y)).collect()).collect(),
    };
    Report {
        ok: true,
        text,
        json: serde_json::to_value(json).expect("tables serialise"),
    }
}

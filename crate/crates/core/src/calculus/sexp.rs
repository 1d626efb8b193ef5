//! Reading and writing proof files.
//!
//! ```text
//! (assume <label> "<formula>")
//! (assume "<formula>")
//! (rule <RuleId> "<conclusion>" (<proof> ...) (discharge (<premise> <label> ...) ...))
//! ```
//!
//! The conclusion may be left out when the premises determine it, and the
//! discharge clause may be left out when nothing is discharged. `;` starts a
//! comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use lexpr::Value;
use thiserror::Error;

use crate::formula::{parse_formula, Formula};

use super::check::infer_conclusion;
use super::proof::{is_label, label, Assumption, Label, Proof, RuleApp};
use super::rules::RuleId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg}")]
pub struct ProofParseError {
    pub msg: String,
}

fn err<T>(msg: impl Into<String>) -> Result<T, ProofParseError> {
    Err(ProofParseError { msg: msg.into() })
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofParseError> {
    let value = lexpr::from_str(text).map_err(|e| ProofParseError { msg: e.to_string() })?;
    read_proof(&value)
}

fn list(v: &Value) -> Option<Vec<&Value>> {
    if v.is_null() {
        return Some(Vec::new());
    }
    v.list_iter().map(|it| it.collect())
}

fn read_formula(v: &Value) -> Result<Formula, ProofParseError> {
    let Some(text) = v.as_str() else {
        return err(format!("expected a quoted formula, found {v}"));
    };
    parse_formula(text).map_err(|e| ProofParseError {
        msg: format!("in formula \"{text}\": {e}"),
    })
}

fn read_label(v: &Value) -> Result<Label, ProofParseError> {
    match v.as_symbol() {
        Some(s) if is_label(s) => Ok(label(s)),
        _ => err(format!("expected a label, found {v}")),
    }
}

fn read_proof(v: &Value) -> Result<Proof, ProofParseError> {
    let Some(items) = list(v) else {
        return err(format!("expected a proof, found {v}"));
    };
    match items.first().and_then(|h| h.as_symbol()) {
        Some("assume") => match items.len() {
            2 => Ok(Proof::Assume(Assumption {
                formula: read_formula(items[1])?,
                label: None,
            })),
            3 => Ok(Proof::Assume(Assumption {
                label: Some(read_label(items[1])?),
                formula: read_formula(items[2])?,
            })),
            _ => err("assume takes an optional label and a formula"),
        },
        Some("rule") => read_rule(&items[1..]),
        _ => err(format!("expected (assume ...) or (rule ...), found {v}")),
    }
}

fn read_rule(items: &[&Value]) -> Result<Proof, ProofParseError> {
    let Some(name) = items.first().and_then(|v| v.as_symbol()) else {
        return err("rule needs a rule name");
    };
    let rule: RuleId = name.parse().map_err(|e: crate::semantics::UnknownName| ProofParseError { msg: e.to_string() })?;
    let mut rest = &items[1..];
    let mut conclusion = None;
    if let Some(v) = rest.first() {
        if v.is_string() {
            conclusion = Some(read_formula(v)?);
            rest = &rest[1..];
        }
    }
    let Some(premise_list) = rest.first().and_then(|v| list(v)) else {
        return err(format!("{rule} needs a premise list"));
    };
    let premises = premise_list.into_iter().map(read_proof).collect::<Result<Vec<_>, _>>()?;
    rest = &rest[1..];
    let mut discharges: BTreeMap<usize, BTreeSet<Label>> = BTreeMap::new();
    if let Some(clause) = rest.first() {
        let entries = list(clause).unwrap_or_default();
        if entries.first().and_then(|h| h.as_symbol()) != Some("discharge") {
            return err(format!("expected (discharge ...), found {clause}"));
        }
        for entry in &entries[1..] {
            let parts = list(entry).unwrap_or_default();
            let Some(index) = parts.first().and_then(|v| v.as_u64()) else {
                return err(format!("expected (<premise> <label> ...), found {entry}"));
            };
            let set = discharges.entry(index as usize).or_default();
            for l in &parts[1..] {
                set.insert(read_label(l)?);
            }
        }
        rest = &rest[1..];
    }
    if !rest.is_empty() {
        return err(format!("unexpected trailing items in {rule}"));
    }
    discharges.retain(|_, ls| !ls.is_empty());
    let conclusion = match conclusion {
        Some(c) => c,
        None => {
            let concls: Vec<&Formula> = premises.iter().map(Proof::conclusion).collect();
            match infer_conclusion(rule, &concls) {
                Some(c) => c,
                None => return err(format!("{rule} needs an explicit conclusion here")),
            }
        }
    };
    Ok(Proof::Rule(RuleApp {
        rule,
        conclusion,
        premises,
        discharges,
    }))
}

/// Pretty-prints a proof in the file format, always with explicit conclusions.
pub fn render_proof(p: &Proof) -> String {
    let mut out = String::new();
    write_proof(p, 0, &mut out);
    out
}

fn write_proof(p: &Proof, indent: usize, out: &mut String) {
    match p {
        Proof::Assume(a) => match &a.label {
            Some(l) => write!(out, "(assume {l} \"{}\")", a.formula).unwrap(),
            None => write!(out, "(assume \"{}\")", a.formula).unwrap(),
        },
        Proof::Rule(r) => {
            write!(out, "(rule {} \"{}\"", r.rule, r.conclusion).unwrap();
            let pad = " ".repeat(indent + 2);
            write!(out, "\n{pad}(").unwrap();
            for (i, q) in r.premises.iter().enumerate() {
                if i > 0 {
                    write!(out, "\n{pad} ").unwrap();
                }
                write_proof(q, indent + 3, out);
            }
            out.push(')');
            if !r.discharges.is_empty() {
                write!(out, "\n{pad}(discharge").unwrap();
                for (i, ls) in &r.discharges {
                    write!(out, " ({i}").unwrap();
                    for l in ls {
                        write!(out, " {l}").unwrap();
                    }
                    out.push(')');
                }
                out.push(')');
            }
            out.push(')');
        }
    }
}

//! Per-system proof checking.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::Formula;

use super::proof::{Label, Path, Proof, RuleApp};
use super::rules::{RuleId, RuleKind, RuleSchema, SystemId};

/// Values of the schema metavariables `A`, `B`, `C`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Binding([Option<Formula>; 3]);

fn meta_index(name: &str) -> Option<usize> {
    match name {
        "A" => Some(0),
        "B" => Some(1),
        "C" => Some(2),
        _ => None,
    }
}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn get(&self, meta: &str) -> Option<&Formula> {
        meta_index(meta).and_then(|i| self.0[i].as_ref())
    }

    pub fn set(&mut self, meta: &str, f: Formula) {
        let i = meta_index(meta).expect("metavariable is A, B or C");
        self.0[i] = Some(f);
    }

    /// Extends the binding so that `pattern` instantiates to `f`. On failure
    /// the binding is left unchanged.
    pub fn unify(&mut self, pattern: &Formula, f: &Formula) -> bool {
        let mut trial = self.clone();
        if trial.unify_in_place(pattern, f) {
            *self = trial;
            true
        } else {
            false
        }
    }

    fn unify_in_place(&mut self, pattern: &Formula, f: &Formula) -> bool {
        match (pattern, f) {
            (Formula::Var(m), _) => {
                let i = meta_index(m).expect("schema variables are metavariables");
                match &self.0[i] {
                    Some(bound) => bound == f,
                    None => {
                        self.0[i] = Some(f.clone());
                        true
                    }
                }
            }
            (Formula::Neg(p), Formula::Neg(g)) => self.unify_in_place(p, g),
            (Formula::And(p1, p2), Formula::And(g1, g2)) | (Formula::Or(p1, p2), Formula::Or(g1, g2)) => {
                self.unify_in_place(p1, g1) && self.unify_in_place(p2, g2)
            }
            _ => false,
        }
    }

    /// The instance of `pattern`, if all its metavariables are bound.
    pub fn instantiate(&self, pattern: &Formula) -> Option<Formula> {
        Some(match pattern {
            Formula::Var(m) => self.0[meta_index(m)?].clone()?,
            Formula::Neg(p) => Formula::neg(self.instantiate(p)?),
            Formula::And(p, q) => Formula::and(self.instantiate(p)?, self.instantiate(q)?),
            Formula::Or(p, q) => Formula::or(self.instantiate(p)?, self.instantiate(q)?),
        })
    }
}

/// The result of checking a (sub)proof: `assumptions ⊢ conclusion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgement {
    pub conclusion: Formula,
    hyps: Vec<(Option<Label>, Formula)>,
    closed: BTreeSet<Label>,
}

impl Judgement {
    /// Undischarged assumption occurrences as a sorted multiset.
    pub fn assumptions(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self.hyps.iter().map(|(_, f)| f.clone()).collect();
        out.sort();
        out
    }

    /// Distinct undischarged assumption formulas.
    pub fn assumption_set(&self) -> BTreeSet<Formula> {
        self.hyps.iter().map(|(_, f)| f.clone()).collect()
    }

    fn open_label(&self, l: &Label) -> Option<&Formula> {
        self.hyps
            .iter()
            .find(|(m, _)| m.as_ref() == Some(l))
            .map(|(_, f)| f)
    }

    fn mentions(&self, l: &Label) -> bool {
        self.closed.contains(l) || self.open_label(l).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error("rule {rule} is not part of {system}")]
    RuleNotInSystem { rule: RuleId, system: SystemId },
    #[error("rule {rule} takes {expected} premises, got {found}")]
    Arity { rule: RuleId, expected: usize, found: usize },
    #[error("premise {premise} does not fit the schema of {rule}")]
    SchemaMismatch { rule: RuleId, premise: usize },
    #[error("conclusion {conclusion} does not fit the schema of {rule}")]
    ConclusionMismatch { rule: RuleId, conclusion: Formula },
    #[error("branch {branch} of {rule} concludes {found}, expected {expected}")]
    BranchConclusionMismatch {
        rule: RuleId,
        branch: usize,
        expected: Formula,
        found: Formula,
    },
    #[error("{rule} cannot discharge {formula} (label {label}) in premise {branch}")]
    IllegalDischarge {
        rule: RuleId,
        branch: usize,
        label: Label,
        formula: Formula,
    },
    #[error("label {label} is discharged in premise {branch} but has no open leaf there")]
    DischargeOutsideBranch { label: Label, branch: usize },
    #[error("label {label} labels leaves outside the branch that discharges it")]
    LabelReused { label: Label },
    #[error("label {label} is attached to different formulas")]
    LabelFormulaConflict { label: Label },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {}: {kind}", render_path(.path))]
pub struct CheckError {
    pub path: Path,
    pub kind: CheckErrorKind,
}

pub fn render_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn leaf_judgement(formula: &Formula, label: &Option<Label>) -> Judgement {
    Judgement {
        conclusion: formula.clone(),
        hyps: vec![(label.clone(), formula.clone())],
        closed: BTreeSet::new(),
    }
}

/// Matches premises (major first), then the conclusion, then every
/// discharged hypothesis against the schema.
pub fn match_schema(
    schema: &RuleSchema,
    premises: &[&Formula],
    conclusion: &Formula,
) -> Result<Binding, CheckErrorKind> {
    let rule = schema.id;
    if premises.len() != schema.arity() {
        return Err(CheckErrorKind::Arity {
            rule,
            expected: schema.arity(),
            found: premises.len(),
        });
    }
    let mut binding = Binding::new();
    if schema.kind.is_del() {
        // All minor premises must agree before anything else is compared.
        let minors: Vec<usize> = schema.minor_indices().collect();
        for &i in &minors[1..] {
            if premises[i] != premises[minors[0]] {
                return Err(CheckErrorKind::BranchConclusionMismatch {
                    rule,
                    branch: i,
                    expected: premises[minors[0]].clone(),
                    found: premises[i].clone(),
                });
            }
        }
    }
    for (i, (p, f)) in schema.premises.iter().zip(premises).enumerate() {
        if !binding.unify(&p.formula, f) {
            return Err(CheckErrorKind::SchemaMismatch { rule, premise: i });
        }
    }
    if !binding.unify(&schema.conclusion, conclusion) {
        return Err(CheckErrorKind::ConclusionMismatch {
            rule,
            conclusion: conclusion.clone(),
        });
    }
    Ok(binding)
}

/// Checks one rule application given the judgements of its premises.
pub fn check_step(system: SystemId, node: &RuleApp, premises: &[Judgement]) -> Result<Judgement, CheckErrorKind> {
    let rule = node.rule;
    if !system.has_rule(rule) {
        return Err(CheckErrorKind::RuleNotInSystem { rule, system });
    }
    let schema = rule.schema();
    let concls: Vec<&Formula> = premises.iter().map(|j| &j.conclusion).collect();
    let mut binding = match_schema(schema, &concls, &node.conclusion)?;

    // Labels may be shared between premises only as open leaves of one formula.
    let mut seen: BTreeMap<&Label, (usize, &Formula)> = BTreeMap::new();
    for (i, j) in premises.iter().enumerate() {
        for (l, f) in j.hyps.iter().filter_map(|(l, f)| l.as_ref().map(|l| (l, f))) {
            if let Some((_, g)) = seen.get(l) {
                if *g != f {
                    return Err(CheckErrorKind::LabelFormulaConflict { label: l.clone() });
                }
            }
            seen.insert(l, (i, f));
        }
        for l in &j.closed {
            if premises.iter().enumerate().any(|(k, other)| k != i && other.mentions(l)) {
                return Err(CheckErrorKind::LabelReused { label: l.clone() });
            }
        }
    }

    let mut discharged: BTreeSet<Label> = BTreeSet::new();
    for (&branch, labels) in &node.discharges {
        let hyp_patterns = match schema.premises.get(branch) {
            Some(p) if p.is_branch() => &p.hyps,
            _ => {
                let label = labels.iter().next().cloned().unwrap_or_else(|| super::proof::label("?"));
                let formula = premises
                    .get(branch)
                    .and_then(|j| j.open_label(&label).cloned())
                    .unwrap_or_else(|| node.conclusion.clone());
                return Err(CheckErrorKind::IllegalDischarge {
                    rule,
                    branch,
                    label,
                    formula,
                });
            }
        };
        for l in labels {
            let Some(formula) = premises[branch].open_label(l) else {
                return Err(CheckErrorKind::DischargeOutsideBranch {
                    label: l.clone(),
                    branch,
                });
            };
            if premises.iter().enumerate().any(|(k, j)| k != branch && j.mentions(l)) || discharged.contains(l) {
                return Err(CheckErrorKind::LabelReused { label: l.clone() });
            }
            if !hyp_patterns.iter().any(|h| binding.unify(h, formula)) {
                return Err(CheckErrorKind::IllegalDischarge {
                    rule,
                    branch,
                    label: l.clone(),
                    formula: formula.clone(),
                });
            }
            discharged.insert(l.clone());
        }
    }

    let mut hyps = Vec::new();
    let mut closed = discharged.clone();
    for j in premises {
        closed.extend(j.closed.iter().cloned());
        hyps.extend(
            j.hyps
                .iter()
                .filter(|(l, _)| l.as_ref().is_none_or(|l| !discharged.contains(l)))
                .cloned(),
        );
    }
    Ok(Judgement {
        conclusion: node.conclusion.clone(),
        hyps,
        closed,
    })
}

/// Checks a whole proof bottom-up.
pub fn check_proof(system: SystemId, p: &Proof) -> Result<Judgement, CheckError> {
    fn go(system: SystemId, p: &Proof, path: &mut Path) -> Result<Judgement, CheckError> {
        match p {
            Proof::Assume(a) => Ok(leaf_judgement(&a.formula, &a.label)),
            Proof::Rule(r) => {
                let mut js = Vec::with_capacity(r.premises.len());
                for (i, q) in r.premises.iter().enumerate() {
                    path.push(i);
                    js.push(go(system, q, path)?);
                    path.pop();
                }
                check_step(system, r, &js).map_err(|kind| CheckError {
                    path: path.clone(),
                    kind,
                })
            }
        }
    }
    go(system, p, &mut Vec::new())
}

/// The conclusion a rule yields on the given premises, when the schema fixes it.
pub fn infer_conclusion(rule: RuleId, premises: &[&Formula]) -> Option<Formula> {
    let schema = rule.schema();
    if premises.len() != schema.arity() {
        return None;
    }
    let mut binding = Binding::new();
    for (p, f) in schema.premises.iter().zip(premises) {
        if !binding.unify(&p.formula, f) {
            return None;
        }
    }
    if schema.kind == RuleKind::Em {
        return Some(premises[0].clone());
    }
    binding.instantiate(&schema.conclusion)
}

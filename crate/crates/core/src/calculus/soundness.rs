//! Semantic validity of individual rule instances.
//!
//! A rule without branches is sound when its premises entail its conclusion.
//! A rule with branches is sound when, under every valuation designating the
//! non-branch premises, some branch has all its hypotheses designated. That
//! condition is checked as one multiple-conclusion entailment per choice of
//! one hypothesis from each branch.

use crate::formula::Formula;
use crate::semantics::{entails, LogicId, SemanticsError, Valuation};

use super::check::Binding;
use super::rules::{RuleId, SystemId};

/// A sequent `gamma ⊨ delta` that must hold for a rule instance to be sound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSequent {
    pub gamma: Vec<Formula>,
    pub delta: Vec<Formula>,
}

pub fn local_sequents(rule: RuleId, binding: &Binding) -> Vec<LocalSequent> {
    let schema = rule.schema();
    let inst = |f: &Formula| binding.instantiate(f).expect("binding covers the schema");
    let gamma: Vec<Formula> = schema
        .premises
        .iter()
        .filter(|p| !p.is_branch())
        .map(|p| inst(&p.formula))
        .collect();
    let branches: Vec<Vec<Formula>> = schema
        .premises
        .iter()
        .filter(|p| p.is_branch())
        .map(|p| p.hyps.iter().map(inst).collect())
        .collect();
    if branches.is_empty() {
        return vec![LocalSequent {
            gamma,
            delta: vec![inst(&schema.conclusion)],
        }];
    }
    let mut choices: Vec<Vec<Formula>> = vec![Vec::new()];
    for hyps in &branches {
        choices = choices
            .into_iter()
            .flat_map(|picked| {
                hyps.iter().map(move |h| {
                    let mut next = picked.clone();
                    next.push(h.clone());
                    next
                })
            })
            .collect();
    }
    choices
        .into_iter()
        .map(|delta| LocalSequent {
            gamma: gamma.clone(),
            delta,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsoundInstance {
    pub rule: RuleId,
    pub sequent: LocalSequent,
    pub countermodel: Valuation,
}

/// Checks one instance of `rule` in `logic`.
pub fn check_instance(logic: LogicId, rule: RuleId, binding: &Binding) -> Result<Option<UnsoundInstance>, SemanticsError> {
    for sequent in local_sequents(rule, binding) {
        let e = entails(logic, &sequent.gamma, &sequent.delta)?;
        if !e.holds {
            return Ok(Some(UnsoundInstance {
                rule,
                sequent,
                countermodel: e.countermodel.unwrap_or_default(),
            }));
        }
    }
    Ok(None)
}

fn metavariables(rule: RuleId) -> Vec<&'static str> {
    let schema = rule.schema();
    let mut mentioned = Vec::new();
    let mut note = |f: &Formula| {
        for v in f.vars() {
            mentioned.push(v);
        }
    };
    for p in &schema.premises {
        note(&p.formula);
        p.hyps.iter().for_each(&mut note);
    }
    note(&schema.conclusion);
    ["A", "B", "C"]
        .into_iter()
        .filter(|m| mentioned.iter().any(|v| &**v == *m))
        .collect()
}

/// Instantiates every metavariable of every rule of `system` with each
/// formula of `universe` and returns the unsound instances.
pub fn unsound_instances(system: SystemId, universe: &[Formula]) -> Result<Vec<UnsoundInstance>, SemanticsError> {
    let logic = system.logic();
    let mut failures = Vec::new();
    for &rule in system.rules() {
        let metas = metavariables(rule);
        let mut idx = vec![0usize; metas.len()];
        loop {
            let mut binding = Binding::new();
            for (m, &i) in metas.iter().zip(&idx) {
                binding.set(m, universe[i].clone());
            }
            if let Some(u) = check_instance(logic, rule, &binding)? {
                failures.push(u);
            }
            // Odometer over the universe.
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < universe.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Ok(failures)
}

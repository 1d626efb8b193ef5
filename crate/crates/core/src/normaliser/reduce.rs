//! Detour and permutation conversions, plus the conversions that keep EFQ
//! premises inside the negation closure.

use std::collections::{BTreeMap, BTreeSet};

use crate::calculus::{Binding, Label, LabelSupply, Proof, RuleApp, RuleId, RuleKind, SystemId};
use crate::formula::Formula;

use super::redex::{kind_of, Redex, RedexKind};
use super::NormaliseError;

/// Replaces every leaf carrying one of `labels` by `make(formula)`.
pub(crate) fn substitute(p: &Proof, labels: &BTreeSet<Label>, make: &mut impl FnMut(&Formula) -> Proof) -> Proof {
    match p {
        Proof::Assume(a) => match &a.label {
            Some(l) if labels.contains(l) => make(&a.formula),
            _ => p.clone(),
        },
        Proof::Rule(r) => Proof::Rule(RuleApp {
            rule: r.rule,
            conclusion: r.conclusion.clone(),
            premises: r.premises.iter().map(|q| substitute(q, labels, make)).collect(),
            discharges: r.discharges.clone(),
        }),
    }
}

/// Hands out `original` the first time and fresh copies afterwards.
pub(crate) struct Copies<'a> {
    pub supply: &'a mut LabelSupply,
    used: BTreeSet<usize>,
}

impl<'a> Copies<'a> {
    pub fn new(supply: &'a mut LabelSupply) -> Copies<'a> {
        Copies {
            supply,
            used: BTreeSet::new(),
        }
    }

    pub fn take(&mut self, key: usize, original: &Proof) -> Proof {
        if self.used.insert(key) {
            original.clone()
        } else {
            self.supply.freshen(original)
        }
    }
}

fn stale(r: &Redex) -> NormaliseError {
    NormaliseError::StaleRedex { redex: r.clone() }
}

fn rule_at<'a>(p: &'a Proof, path: &[usize], expected: RuleId, r: &Redex) -> Result<&'a RuleApp, NormaliseError> {
    match p.get(path).and_then(Proof::as_rule) {
        Some(app) if app.rule == expected => Ok(app),
        _ => Err(stale(r)),
    }
}

fn with_replaced(p: &Proof, path: &[usize], new: Proof) -> Proof {
    let mut out = p.clone();
    out.replace_at(path, new).expect("path exists");
    out
}

/// Removes a maximal formula: the elimination is replaced by the matching
/// premise of the introduction, or by the matching branch of a del-rule with
/// the introduction's premises grafted onto its discharged assumptions.
pub fn detour_reduce(system: SystemId, p: &Proof, r: &Redex) -> Result<Proof, NormaliseError> {
    if r.kind != RedexKind::Detour || r.position.last() != Some(&0) {
        return Err(stale(r));
    }
    let (intro_rule, elim_rule) = r.rule_pair;
    let elim = rule_at(p, r.lower(), elim_rule, r)?;
    let intro = rule_at(p, &r.position, intro_rule, r)?;
    if intro_rule.kind() != RuleKind::Intro || !system.has_rule(elim_rule) || !system.has_rule(intro_rule) {
        return Err(stale(r));
    }
    let contractum = match elim_rule.kind() {
        RuleKind::Elim => intro
            .premises
            .iter()
            .find(|q| q.conclusion() == &elim.conclusion)
            .cloned()
            .ok_or_else(|| NormaliseError::NoContractum { redex: r.clone() })?,
        RuleKind::DelElim => {
            let schema = elim_rule.schema();
            let mut binding = Binding::new();
            if !binding.unify(&schema.premises[0].formula, &intro.conclusion) {
                return Err(stale(r));
            }
            let available: BTreeMap<&Formula, usize> =
                intro.premises.iter().enumerate().map(|(i, q)| (q.conclusion(), i)).collect();
            let branch = schema
                .minor_indices()
                .find(|&b| {
                    schema.premises[b]
                        .hyps
                        .iter()
                        .all(|h| binding.instantiate(h).is_some_and(|f| available.contains_key(&f)))
                })
                .ok_or_else(|| NormaliseError::NoContractum { redex: r.clone() })?;
            let mut supply = LabelSupply::for_proof(p);
            let mut copies = Copies::new(&mut supply);
            let labels = elim.discharges.get(&branch).cloned().unwrap_or_default();
            substitute(&elim.premises[branch], &labels, &mut |f| {
                let i = available[f];
                copies.take(i, &intro.premises[i])
            })
        }
        _ => return Err(stale(r)),
    };
    Ok(with_replaced(p, r.lower(), contractum).prune_discharges())
}

/// Pushes an elimination whose major premise is a del-rule conclusion into
/// every branch of that del-rule.
pub fn permute_reduce(system: SystemId, p: &Proof, r: &Redex) -> Result<Proof, NormaliseError> {
    if r.kind != RedexKind::Permutation || r.position.last() != Some(&0) {
        return Err(stale(r));
    }
    let (del_rule, elim_rule) = r.rule_pair;
    let elim = rule_at(p, r.lower(), elim_rule, r)?;
    let del = rule_at(p, &r.position, del_rule, r)?;
    if !del_rule.kind().is_del() || !system.has_rule(elim_rule) {
        return Err(stale(r));
    }
    let mut supply = LabelSupply::for_proof(p);
    let mut new_del = del.clone();
    new_del.conclusion = elim.conclusion.clone();
    for (n, b) in del_rule.schema().minor_indices().enumerate() {
        let mut copy = elim.clone();
        copy.premises[0] = Proof::hyp(del.conclusion.clone());
        let mut copy = match n {
            0 => Proof::Rule(copy),
            _ => supply.freshen(&Proof::Rule(copy)),
        };
        if let Proof::Rule(app) = &mut copy {
            app.premises[0] = del.premises[b].clone();
        }
        new_del.premises[b] = copy;
    }
    Ok(with_replaced(p, r.lower(), Proof::Rule(new_del)))
}

/// EFQ-specific redexes, in postorder.
pub fn find_efq_redexes(p: &Proof) -> Vec<Redex> {
    let mut out = Vec::new();
    for path in p.positions() {
        let node = p.get(&path).expect("position exists");
        if node.rule_id() != Some(RuleId::Efq) {
            continue;
        }
        let prem = node.premises();
        let kinds = [kind_of(&prem[0]), kind_of(&prem[1])];
        let (kind, upper) = if let Some(i) = kinds.iter().position(|k| *k == Some(RuleKind::Efq)) {
            (RedexKind::EfqCollapse, prem[i].rule_id())
        } else if let Some(i) = kinds.iter().position(|k| k.is_some_and(RuleKind::is_del)) {
            (RedexKind::EfqPermutation, prem[i].rule_id())
        } else if prem[1].rule_id() == Some(RuleId::NegNegI) || kinds.iter().all(|k| *k == Some(RuleKind::Intro)) {
            (RedexKind::EfqComponents, prem[1].rule_id())
        } else {
            continue;
        };
        out.push(Redex {
            kind,
            position: path,
            rule_pair: (upper.expect("rule"), RuleId::Efq),
            degree: prem[0].conclusion().degree(),
        });
    }
    out
}

fn efq(premises: [Proof; 2], conclusion: Formula) -> Proof {
    Proof::rule(RuleId::Efq, conclusion, premises.into())
}

/// Applies one of the EFQ conversions at `r.position`.
pub fn efq_reduce(system: SystemId, p: &Proof, r: &Redex) -> Result<Proof, NormaliseError> {
    let node = rule_at(p, &r.position, RuleId::Efq, r)?;
    if !system.has_efq() {
        return Err(stale(r));
    }
    let concl = node.conclusion.clone();
    let [pos, neg] = [&node.premises[0], &node.premises[1]];
    let new = match r.kind {
        RedexKind::EfqCollapse => {
            let inner = [pos, neg]
                .into_iter()
                .find(|q| q.rule_id() == Some(RuleId::Efq))
                .ok_or_else(|| stale(r))?;
            efq([inner.premises()[0].clone(), inner.premises()[1].clone()], concl)
        }
        RedexKind::EfqPermutation => {
            let (i, del) = [pos, neg]
                .into_iter()
                .enumerate()
                .find(|(_, q)| kind_of(q).is_some_and(RuleKind::is_del))
                .ok_or_else(|| stale(r))?;
            let other = node.premises[1 - i].clone();
            let Proof::Rule(mut app) = del.clone() else { unreachable!() };
            let mut supply = LabelSupply::for_proof(p);
            let mut copies = Copies::new(&mut supply);
            for b in app.rule.schema().minor_indices() {
                let branch = std::mem::replace(&mut app.premises[b], Proof::hyp(concl.clone()));
                let side = copies.take(0, &other);
                let pair = if i == 0 { [branch, side] } else { [side, branch] };
                app.premises[b] = efq(pair, concl.clone());
            }
            app.conclusion = concl;
            Proof::Rule(app)
        }
        RedexKind::EfqComponents => {
            if neg.rule_id() == Some(RuleId::NegNegI) {
                // A = ~Z and ~A = ~~Z from Z: use Z and ~Z instead.
                efq([neg.premises()[0].clone(), pos.clone()], concl)
            } else {
                let sides = [pos.premises(), neg.premises()];
                let pair = (0..2).find_map(|s| {
                    sides[s].iter().find_map(|a| {
                        let na = Formula::neg(a.conclusion().clone());
                        sides[1 - s].iter().find(|b| b.conclusion() == &na).map(|b| (a.clone(), b.clone()))
                    })
                });
                let (a, b) = pair.ok_or_else(|| NormaliseError::NoContractum { redex: r.clone() })?;
                efq([a, b], concl)
            }
        }
        _ => return Err(stale(r)),
    };
    Ok(with_replaced(p, &r.position, new).prune_discharges())
}

//! Transformations for the systems with EFQ or EM: atomic EFQ conclusions,
//! atomic EM formulas, and pushing EM applications to the bottom.

use std::collections::{BTreeMap, BTreeSet};

use crate::calculus::{Binding, Label, LabelSupply, Proof, RuleApp, RuleId, RuleKind, SystemId};
use crate::formula::Formula;

use super::reduce::substitute;

/// Splits every EFQ whose conclusion is not a literal into EFQs on literals
/// joined by introduction rules of `system`.
pub fn atomise_efq(system: SystemId, p: &Proof) -> Proof {
    if !system.has_efq() {
        return p.clone();
    }
    let mut supply = LabelSupply::for_proof(p);
    atomise_efq_in(system, p, &mut supply)
}

fn atomise_efq_in(system: SystemId, p: &Proof, supply: &mut LabelSupply) -> Proof {
    let Proof::Rule(r) = p else { return p.clone() };
    let premises: Vec<Proof> = r.premises.iter().map(|q| atomise_efq_in(system, q, supply)).collect();
    if r.rule == RuleId::Efq && !r.conclusion.is_literal() {
        split_efq(system, &premises[0], &premises[1], &r.conclusion, supply, &mut true)
    } else {
        Proof::Rule(RuleApp {
            premises,
            ..r.clone()
        })
    }
}

fn split_efq(system: SystemId, pos: &Proof, neg: &Proof, goal: &Formula, supply: &mut LabelSupply, first: &mut bool) -> Proof {
    if goal.is_literal() {
        let premises = if std::mem::take(first) {
            vec![pos.clone(), neg.clone()]
        } else {
            vec![supply.freshen(pos), supply.freshen(neg)]
        };
        return Proof::rule(RuleId::Efq, goal.clone(), premises);
    }
    let (rule, binding) = efq_intro(system, goal).expect("every compound formula has an introduction rule");
    let premises = rule
        .schema()
        .premises
        .iter()
        .map(|s| {
            let f = binding.instantiate(&s.formula).expect("bound by the conclusion");
            split_efq(system, pos, neg, &f, supply, first)
        })
        .collect();
    Proof::rule(rule, goal.clone(), premises)
}

/// The introduction used to split an EFQ on `goal`: fewest premises, then
/// declaration order.
pub fn efq_intro(system: SystemId, goal: &Formula) -> Option<(RuleId, Binding)> {
    system
        .rules()
        .iter()
        .filter(|r| r.kind() == RuleKind::Intro)
        .filter_map(|&r| {
            let schema = r.schema();
            let mut b = Binding::new();
            let determined = b.unify(&schema.conclusion, goal)
                && schema.premises.iter().all(|s| b.instantiate(&s.formula).is_some());
            determined.then_some((r, b))
        })
        .min_by_key(|(r, _)| r.schema().arity())
}

fn leaf_formula(p: &Proof, labels: &BTreeSet<Label>) -> Option<Formula> {
    let mut found = None;
    p.visit(&mut |q| {
        if let Proof::Assume(a) = q {
            if found.is_none() && a.label.as_ref().is_some_and(|l| labels.contains(l)) {
                found = Some(a.formula.clone());
            }
        }
    });
    found
}

/// The formula excluded in the middle by an EM node, when some branch uses
/// its hypothesis.
pub fn em_formula(app: &RuleApp) -> Option<Formula> {
    let get = |b: usize| {
        app.discharges
            .get(&b)
            .and_then(|ls| leaf_formula(&app.premises[b], ls))
    };
    get(0).or_else(|| get(1).and_then(|f| f.negated().cloned()))
}

fn branch_used(app: &RuleApp, b: usize) -> bool {
    app.discharges
        .get(&b)
        .is_some_and(|ls| leaf_formula(&app.premises[b], ls).is_some())
}

fn em(conclusion: &Formula, branches: [Proof; 2], labels: [BTreeSet<Label>; 2]) -> RuleApp {
    let [l0, l1] = labels;
    let discharges: BTreeMap<usize, BTreeSet<Label>> = [(0, l0), (1, l1)].into_iter().filter(|(_, ls)| !ls.is_empty()).collect();
    RuleApp {
        rule: RuleId::Em,
        conclusion: conclusion.clone(),
        premises: branches.into(),
        discharges,
    }
}

fn one(l: &Label) -> BTreeSet<Label> {
    BTreeSet::from([l.clone()])
}

/// Rewrites every EM so that it excludes the middle on a variable, and drops
/// EMs with a branch that does not use its hypothesis.
pub fn atomise_em(system: SystemId, p: &Proof) -> Proof {
    if !system.has_em() {
        return p.clone();
    }
    let mut supply = LabelSupply::for_proof(p);
    atomise_em_in(p, &mut supply).prune_discharges()
}

fn atomise_em_in(p: &Proof, supply: &mut LabelSupply) -> Proof {
    let Proof::Rule(r) = p else { return p.clone() };
    let app = RuleApp {
        premises: r.premises.iter().map(|q| atomise_em_in(q, supply)).collect(),
        ..r.clone()
    };
    if app.rule == RuleId::Em {
        atomise_em_node(app, supply)
    } else {
        Proof::Rule(app)
    }
}

fn atomise_em_node(app: RuleApp, supply: &mut LabelSupply) -> Proof {
    for b in 0..2 {
        if !branch_used(&app, b) {
            return app.premises[b].clone();
        }
    }
    let x = em_formula(&app).expect("both branches are used");
    if x.is_var() {
        return Proof::Rule(app);
    }
    let c = app.conclusion.clone();
    let [pi1, pi2]: [Proof; 2] = app.premises.try_into().expect("EM has two branches");
    let l1 = app.discharges.get(&0).cloned().unwrap_or_default();
    let l2 = app.discharges.get(&1).cloned().unwrap_or_default();
    let node = match &x {
        Formula::Neg(y) => {
            let ly = supply.fresh();
            let hyp_y = Proof::assume(&ly, (**y).clone());
            let b0 = substitute(&pi2, &l2, &mut |f| Proof::rule(RuleId::NegNegI, f.clone(), vec![hyp_y.clone()]));
            em(&c, [b0, pi1], [one(&ly), l1])
        }
        Formula::And(y, z) => {
            let (ly, lz, lny, lnz) = (supply.fresh(), supply.fresh(), supply.fresh(), supply.fresh());
            let (y, z) = ((**y).clone(), (**z).clone());
            let with_both = substitute(&pi1, &l1, &mut |f| {
                Proof::rule(RuleId::AndI, f.clone(), vec![Proof::assume(&ly, y.clone()), Proof::assume(&lz, z.clone())])
            });
            let without_z = substitute(&pi2, &l2, &mut |f| {
                Proof::rule(RuleId::NegAndI2, f.clone(), vec![Proof::assume(&lnz, Formula::neg(z.clone()))])
            });
            let inner = atomise_em_node(em(&c, [with_both, without_z], [one(&lz), one(&lnz)]), supply);
            let copy = supply.freshen(&pi2);
            let without_y = substitute(&copy, &l2, &mut |f| {
                Proof::rule(RuleId::NegAndI1, f.clone(), vec![Proof::assume(&lny, Formula::neg(y.clone()))])
            });
            em(&c, [inner, without_y], [one(&ly), one(&lny)])
        }
        Formula::Or(y, z) => {
            let (ly, lz, lny, lnz) = (supply.fresh(), supply.fresh(), supply.fresh(), supply.fresh());
            let (y, z) = ((**y).clone(), (**z).clone());
            let with_y = substitute(&pi1, &l1, &mut |f| {
                Proof::rule(RuleId::OrI1, f.clone(), vec![Proof::assume(&ly, y.clone())])
            });
            let copy = supply.freshen(&pi1);
            let with_z = substitute(&copy, &l1, &mut |f| {
                Proof::rule(RuleId::OrI2, f.clone(), vec![Proof::assume(&lz, z.clone())])
            });
            let without_both = substitute(&pi2, &l2, &mut |f| {
                Proof::rule(
                    RuleId::NegOrIp,
                    f.clone(),
                    vec![Proof::assume(&lny, Formula::neg(y.clone())), Proof::assume(&lnz, Formula::neg(z.clone()))],
                )
            });
            let inner = atomise_em_node(em(&c, [with_z, without_both], [one(&lz), one(&lnz)]), supply);
            em(&c, [with_y, inner], [one(&ly), one(&lny)])
        }
        Formula::Var(_) => unreachable!(),
    };
    atomise_em_node(node, supply)
}

/// Replaces every EM with an unused hypothesis by the branch that ignores it.
pub fn prune_vacuous_em(p: &Proof) -> Proof {
    prune_vacuous_em_in(p).prune_discharges()
}

fn prune_vacuous_em_in(p: &Proof) -> Proof {
    let Proof::Rule(r) = p else { return p.clone() };
    let app = RuleApp {
        premises: r.premises.iter().map(prune_vacuous_em_in).collect(),
        ..r.clone()
    };
    if app.rule == RuleId::Em {
        for b in 0..2 {
            if !branch_used(&app, b) {
                return app.premises[b].clone();
            }
        }
    }
    Proof::Rule(app)
}

fn is_em(p: &Proof) -> bool {
    p.rule_id() == Some(RuleId::Em)
}

/// True when every EM application has only EM applications below it.
pub fn is_em_final(p: &Proof) -> bool {
    p.positions().iter().all(|path| {
        !is_em(p.get(path).expect("position exists")) || (0..path.len()).all(|k| is_em(p.get(&path[..k]).expect("prefix exists")))
    })
}

/// Moves EM applications to the bottom of the proof, lowest first, by
/// copying the context below each one into both of its branches.
pub fn em_finalise(system: SystemId, p: &Proof) -> Proof {
    if !system.has_em() {
        return p.clone();
    }
    let mut supply = LabelSupply::for_proof(p);
    let mut p = p.clone();
    loop {
        let target = p
            .positions()
            .into_iter()
            .filter(|path| {
                is_em(p.get(path).expect("position exists")) && (0..path.len()).any(|k| !is_em(p.get(&path[..k]).expect("prefix exists")))
            })
            .min_by_key(Vec::len);
        let Some(x_path) = target else { return p };
        let k = (0..x_path.len())
            .find(|&k| !is_em(p.get(&x_path[..k]).expect("prefix exists")))
            .expect("has a non-EM ancestor");
        let (w_path, rel) = x_path.split_at(k);
        let w = p.get(w_path).expect("position exists").clone();
        let Some(x) = w.get(rel).and_then(Proof::as_rule).cloned() else { unreachable!() };
        let mut left = w.clone();
        left.replace_at(rel, x.premises[0].clone());
        let mut right = w.clone();
        right.replace_at(rel, x.premises[1].clone());
        let right = supply.freshen(&right);
        let node = Proof::Rule(RuleApp {
            rule: RuleId::Em,
            conclusion: w.conclusion().clone(),
            premises: vec![left, right],
            discharges: x.discharges.clone(),
        });
        p.replace_at(w_path, node);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_proof, parse_proof};
    use crate::formula::parse_formula;
    use SystemId::*;

    fn same_judgement(system: SystemId, before: &Proof, after: &Proof) {
        let b = check_proof(system, before).unwrap();
        let a = check_proof(system, after).unwrap_or_else(|e| panic!("{e}\n{after}"));
        assert_eq!(a.conclusion, b.conclusion);
        assert!(a.assumption_set().is_subset(&b.assumption_set()));
    }

    #[test]
    fn efq_on_a_conjunction() {
        let p = parse_proof(r#"(rule EFQ "q1 & q2" ((assume "p") (assume "~p")))"#).unwrap();
        let q = atomise_efq(NdpK3w, &p);
        same_judgement(NdpK3w, &p, &q);
        let expected = parse_proof(
            r#"(rule AndI ((rule EFQ "q1" ((assume "p") (assume "~p"))) (rule EFQ "q2" ((assume "p") (assume "~p")))))"#,
        )
        .unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn efq_intro_choices() {
        let f = |s: &str| parse_formula(s).unwrap();
        let pick = |sys, s: &str| efq_intro(sys, &f(s)).unwrap().0;
        assert_eq!(pick(NdpK3w, "~(a & b)"), RuleId::NegAndI1p);
        assert_eq!(pick(NdpK3R, "~(a & b)"), RuleId::NegAndI1);
        assert_eq!(pick(NdpK3L, "~(a & b)"), RuleId::NegAndI2);
        assert_eq!(pick(NdpK3w, "a | b"), RuleId::OrI1p);
        assert_eq!(pick(NdpK3R, "a | b"), RuleId::OrI1);
        assert_eq!(pick(NdpK3L, "a | b"), RuleId::OrI2);
        assert_eq!(pick(NdpK3w, "~~a"), RuleId::NegNegI);
        assert_eq!(pick(NdpK3w, "~(a | b)"), RuleId::NegOrIp);
    }

    #[test]
    fn efq_atomisation_freshens_copies() {
        let p = parse_proof(
            r#"(rule EFQ "(a | b) & ~~c"
                 ((rule NegAndE_p "p"
                    ((assume "~(p & p)") (assume x "p") (assume y "p") (assume "p"))
                    (discharge (1 x) (2 y)))
                  (assume "~p")))"#,
        )
        .unwrap();
        let q = atomise_efq(NdpK3w, &p);
        same_judgement(NdpK3w, &p, &q);
        let mut efqs = 0;
        q.visit(&mut |n| {
            if n.rule_id() == Some(RuleId::Efq) {
                efqs += 1;
                assert!(n.conclusion().is_literal());
            }
        });
        assert_eq!(efqs, 3);
    }

    #[test]
    fn em_on_negation_becomes_em_on_variable() {
        let p = parse_proof(
            r#"(rule EM "r | ~r"
                 ((rule OrI2 "r | ~r" ((assume a "~r")))
                  (rule OrI1 "r | ~r" ((rule NegNegE ((assume b "~~r"))))))
                 (discharge (0 a) (1 b)))"#,
        )
        .unwrap();
        let q = atomise_em(NdpPwk, &p);
        same_judgement(NdpPwk, &p, &q);
        let x = em_formula(q.as_rule().unwrap()).unwrap();
        assert_eq!(x, parse_formula("r").unwrap());
    }

    #[test]
    fn em_on_compounds_is_split() {
        for x in ["p & q", "p | q", "~(p & ~q)", "(p | q) & ~r"] {
            let text = format!(
                r#"(rule EM "({x}) | ~({x})"
                     ((rule OrI1 "({x}) | ~({x})" ((assume a "{x}")))
                      (rule OrI2 "({x}) | ~({x})" ((assume b "~({x})"))))
                     (discharge (0 a) (1 b)))"#
            );
            let p = parse_proof(&text).unwrap();
            let q = atomise_em(NdpPwk, &p);
            same_judgement(NdpPwk, &p, &q);
            q.visit(&mut |n| {
                if let Some(app) = n.as_rule().filter(|a| a.rule == RuleId::Em) {
                    assert!(em_formula(app).unwrap().is_var(), "{q}");
                }
            });
        }
    }

    #[test]
    fn vacuous_em_is_dropped() {
        let p = parse_proof(
            r#"(rule EM "q" ((assume "q") (rule NegNegE ((assume b "~~q")))) (discharge (1 b)))"#,
        )
        .unwrap();
        assert_eq!(atomise_em(NdpPwk, &p), parse_proof(r#"(assume "q")"#).unwrap());
        assert_eq!(prune_vacuous_em(&p), parse_proof(r#"(assume "q")"#).unwrap());
    }

    #[test]
    fn em_moves_below_its_context() {
        let p = parse_proof(
            r#"(rule NegNegE
                 ((rule EM "~~(q | ~q)"
                    ((rule NegNegI ((rule OrI1 "q | ~q" ((assume a "q")))))
                     (rule NegNegI ((rule OrI2 "q | ~q" ((assume b "~q"))))))
                    (discharge (0 a) (1 b)))))"#,
        )
        .unwrap();
        assert!(!is_em_final(&p));
        let q = em_finalise(NdpPwk, &p);
        same_judgement(NdpPwk, &p, &q);
        assert!(is_em_final(&q));
        let expected = parse_proof(
            r#"(rule EM "q | ~q"
                 ((rule NegNegE ((rule NegNegI ((rule OrI1 "q | ~q" ((assume a "q")))))))
                  (rule NegNegE ((rule NegNegI ((rule OrI2 "q | ~q" ((assume b "~q"))))))))
                 (discharge (0 a) (1 b)))"#,
        )
        .unwrap();
        assert!(q.alpha_eq(&expected));
    }

    #[test]
    fn stacked_ems_end_at_the_bottom() {
        let p = parse_proof(
            r#"(rule AndI
                 ((rule EM "p | ~p"
                    ((rule OrI1 "p | ~p" ((assume a "p")))
                     (rule OrI2 "p | ~p" ((assume b "~p"))))
                    (discharge (0 a) (1 b)))
                  (rule NegNegE
                    ((rule EM "~~(q | ~q)"
                       ((rule NegNegI ((rule OrI1 "q | ~q" ((assume c "q")))))
                        (rule NegNegI ((rule OrI2 "q | ~q" ((assume d "~q"))))))
                       (discharge (0 c) (1 d)))))))"#,
        )
        .unwrap();
        let q = em_finalise(NdpPwk, &p);
        same_judgement(NdpPwk, &p, &q);
        assert!(is_em_final(&q));
        let ems = q.positions().iter().filter(|path| is_em(q.get(path).unwrap())).count();
        assert_eq!(ems, 3);
        assert!(em_finalise(NdpPwk, &q) == q);
        let plain = parse_proof(r#"(rule AndI ((assume "p") (assume "q")))"#).unwrap();
        assert_eq!(em_finalise(NdpPwk, &plain), plain);
    }
}

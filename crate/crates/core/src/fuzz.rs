//! Random formulas and random valid proofs, biased towards detours.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::calculus::{label, Binding, Label, Proof, RuleApp, RuleId, RuleKind, SystemId};
use crate::formula::Formula;

/// A random formula of depth at most `depth` over `vars`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::var(vars.choose(rng).expect("at least one variable"));
    }
    match rng.gen_range(0..3) {
        0 => Formula::neg(random_formula(rng, vars, depth - 1)),
        1 => Formula::and(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)),
        _ => Formula::or(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)),
    }
}

#[derive(Debug, Clone)]
pub struct ProofGen {
    pub system: SystemId,
    pub vars: Vec<&'static str>,
    /// Depth of the goal formula.
    pub goal_depth: usize,
    /// Height of the generated tree before size filtering.
    pub height: usize,
    pub max_nodes: usize,
    /// Chance that the major premise of an elimination is an introduction.
    pub detour_bias: f64,
}

impl ProofGen {
    pub fn new(system: SystemId) -> ProofGen {
        ProofGen {
            system,
            vars: vec!["p", "q", "r"],
            goal_depth: 2,
            height: 4,
            max_nodes: 25,
            detour_bias: 0.7,
        }
    }

    /// A proof valid in the system with at most `max_nodes` nodes.
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Proof {
        loop {
            let goal = random_formula(rng, &self.vars, self.goal_depth);
            let mut st = State {
                gen: self,
                next_label: 0,
                scope: Vec::new(),
            };
            let height = rng.gen_range(2..=self.height);
            let p = st.prove(rng, &goal, height, false);
            if p.node_count() <= self.max_nodes && p.node_count() > 1 {
                return p;
            }
        }
    }
}

struct State<'a> {
    gen: &'a ProofGen,
    next_label: usize,
    scope: Vec<(Label, Formula)>,
}

impl State<'_> {
    fn fresh(&mut self) -> Label {
        self.next_label += 1;
        label(&format!("h{}", self.next_label))
    }

    fn small<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        random_formula(rng, &self.gen.vars, 1)
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, goal: &Formula) -> Proof {
        let bound: Vec<&Label> = self.scope.iter().filter(|(_, f)| f == goal).map(|(l, _)| l).collect();
        match bound.choose(rng) {
            Some(l) if rng.gen_bool(0.9) => Proof::assume(l, goal.clone()),
            _ => Proof::hyp(goal.clone()),
        }
    }

    fn prove<R: Rng + ?Sized>(&mut self, rng: &mut R, goal: &Formula, height: usize, intro_first: bool) -> Proof {
        if height == 0 {
            return self.leaf(rng, goal);
        }
        if intro_first {
            if let Some(p) = self.by_rule_of_kind(rng, goal, height, &[RuleKind::Intro]) {
                return p;
            }
        }
        if rng.gen_bool(0.2) {
            return self.leaf(rng, goal);
        }
        let kinds = [RuleKind::Intro, RuleKind::Elim, RuleKind::DelElim, RuleKind::Em, RuleKind::Efq];
        self.by_rule_of_kind(rng, goal, height, &kinds)
            .unwrap_or_else(|| self.leaf(rng, goal))
    }

    fn by_rule_of_kind<R: Rng + ?Sized>(&mut self, rng: &mut R, goal: &Formula, height: usize, kinds: &[RuleKind]) -> Option<Proof> {
        let mut candidates: Vec<(RuleId, Binding)> = self
            .gen
            .system
            .rules()
            .iter()
            .filter(|r| kinds.contains(&r.kind()))
            .filter_map(|&r| {
                let mut b = Binding::new();
                b.unify(&r.schema().conclusion, goal).then_some((r, b))
            })
            .collect();
        candidates.shuffle(rng);
        let (rule, mut binding) = candidates.pop()?;
        let schema = rule.schema();
        for meta in ["A", "B", "C"] {
            if binding.get(meta).is_none() {
                let f = self.small(rng);
                binding.set(meta, f);
            }
        }
        let mut premises = Vec::new();
        let mut discharges = std::collections::BTreeMap::new();
        for (i, s) in schema.premises.iter().enumerate() {
            let f = binding.instantiate(&s.formula).expect("all metavariables bound");
            let major = i == 0 && schema.kind.has_major();
            let intro_first = major && rng.gen_bool(self.gen.detour_bias);
            if s.hyps.is_empty() {
                premises.push(self.prove(rng, &f, height - 1, intro_first));
                continue;
            }
            let depth_before = self.scope.len();
            let mut labels = Vec::new();
            for h in &s.hyps {
                let l = self.fresh();
                labels.push(l.clone());
                self.scope.push((l, binding.instantiate(h).expect("bound")));
            }
            let q = self.prove(rng, &f, height - 1, false);
            self.scope.truncate(depth_before);
            let used: std::collections::BTreeSet<Label> = labels.into_iter().collect();
            discharges.insert(i, used);
            premises.push(q);
        }
        let p = Proof::Rule(RuleApp {
            rule,
            conclusion: goal.clone(),
            premises,
            discharges,
        });
        Some(p.prune_discharges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_proof;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_proofs_check() {
        for &system in SystemId::ALL {
            let gen = ProofGen::new(system);
            let mut rng = StdRng::seed_from_u64(7);
            for _ in 0..200 {
                let p = gen.generate(&mut rng);
                assert!(p.node_count() <= 25);
                if let Err(e) = check_proof(system, &p) {
                    panic!("{system}: {e}\n{p}");
                }
            }
        }
    }

    #[test]
    fn formulas_respect_depth() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(random_formula(&mut rng, &["p", "q"], 2).depth() <= 2);
        }
    }
}

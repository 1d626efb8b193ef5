//! Bounded backward proof search.
//!
//! The search builds proofs in the shape normal proofs have: eliminations
//! and del-rule splits on the assumptions at the bottom, introductions on top,
//! EFQ between a formula and its negation, and EM on variables below
//! everything else. Only formulas from the negation closure of the sequent
//! (or of a larger universe supplied by the caller) are considered.
//!
//! Depth is the number of inference steps on the longest path of a proof.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::calculus::{label, Label, Proof, RuleApp, RuleId, RuleKind, SystemId};
use crate::formula::{negation_closure, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl SearchBudget {
    pub fn new(max_depth: usize, max_nodes: usize) -> SearchBudget {
        assert!(max_depth >= 1 && max_nodes >= 1, "budget limits must be positive");
        SearchBudget { max_depth, max_nodes }
    }
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget::new(8, 5000)
    }
}

const INF: u8 = u8::MAX;
/// Upper bound on search states per assumption set.
const MAX_STATES: usize = 50_000;

fn succ(h: u8) -> u8 {
    if h >= INF - 1 {
        INF
    } else {
        h + 1
    }
}

/// Formulas available to the search, smaller ones first.
#[derive(Debug, Clone)]
pub struct Universe {
    formulas: Vec<Formula>,
    ids: HashMap<Formula, u32>,
}

impl Universe {
    pub fn closure_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Universe {
        let mut formulas: Vec<Formula> = negation_closure(fs).into_iter().collect();
        formulas.sort_by(|a, b| (a.node_count(), a).cmp(&(b.node_count(), b)));
        let ids = formulas.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
        Universe { formulas, ids }
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn id(&self, f: &Formula) -> Option<u32> {
        self.ids.get(f).copied()
    }

    pub fn formula(&self, id: u32) -> &Formula {
        &self.formulas[id as usize]
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.ids.contains_key(f)
    }
}

#[derive(Debug, Clone)]
struct Alt {
    rule: RuleId,
    premises: Vec<u32>,
}

#[derive(Debug, Clone)]
struct DelAlt {
    rule: RuleId,
    branches: Vec<Vec<u32>>,
}

/// Rule instances of one system over one universe.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    system: SystemId,
    universe: Universe,
    intros: Vec<Vec<Alt>>,
    elims: Vec<Vec<(RuleId, u32)>>,
    dels: Vec<Vec<DelAlt>>,
    neg: Vec<Option<u32>>,
    vars: Vec<u32>,
    /// `intros` flattened: premise pairs of formula `x` at `flat[start[x]..start[x + 1]]`.
    flat: Vec<[u32; 2]>,
    start: Vec<u32>,
}

impl SearchSpace {
    pub fn new(system: SystemId, universe: Universe) -> SearchSpace {
        let n = universe.len();
        let mut space = SearchSpace {
            system,
            intros: vec![Vec::new(); n],
            elims: vec![Vec::new(); n],
            dels: vec![Vec::new(); n],
            neg: (0..n).map(|i| universe.id(&Formula::neg(universe.formulas[i].clone()))).collect(),
            vars: (0..n as u32).filter(|&i| universe.formula(i).is_var()).collect(),
            flat: Vec::new(),
            start: Vec::new(),
            universe,
        };
        let ids = |fs: Vec<Option<Formula>>| -> Option<Vec<u32>> {
            fs.into_iter().map(|f| f.and_then(|f| space.universe.id(&f))).collect()
        };
        let mut intros = vec![Vec::new(); n];
        let mut elims = vec![Vec::new(); n];
        let mut dels = vec![Vec::new(); n];
        for (i, f) in space.universe.formulas.iter().enumerate() {
            for &rule in system.rules() {
                let schema = rule.schema();
                let mut b = crate::calculus::Binding::new();
                match schema.kind {
                    RuleKind::Intro => {
                        if b.unify(&schema.conclusion, f) {
                            let prem = schema.premises.iter().map(|s| b.instantiate(&s.formula)).collect();
                            if let Some(premises) = ids(prem) {
                                intros[i].push(Alt { rule, premises });
                            }
                        }
                    }
                    RuleKind::Elim => {
                        if b.unify(&schema.premises[0].formula, f) {
                            if let Some(c) = b.instantiate(&schema.conclusion).and_then(|c| space.universe.id(&c)) {
                                elims[i].push((rule, c));
                            }
                        }
                    }
                    RuleKind::DelElim => {
                        if b.unify(&schema.premises[0].formula, f) {
                            let branches: Option<Vec<Vec<u32>>> = schema
                                .minor_indices()
                                .map(|k| ids(schema.premises[k].hyps.iter().map(|h| b.instantiate(h)).collect()))
                                .collect();
                            if let Some(branches) = branches {
                                dels[i].push(DelAlt { rule, branches });
                            }
                        }
                    }
                    RuleKind::Em | RuleKind::Efq => {}
                }
            }
        }
        space.start.push(0);
        for alts in &intros {
            for a in alts {
                let p0 = a.premises.first().copied().expect("introductions have premises");
                let p1 = a.premises.get(1).copied().unwrap_or(p0);
                assert!(a.premises.len() <= 2);
                space.flat.push([p0, p1]);
            }
            space.start.push(space.flat.len() as u32);
        }
        space.intros = intros;
        space.elims = elims;
        space.dels = dels;
        space
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn system(&self) -> SystemId {
        self.system
    }
}

#[derive(Debug, Clone, Copy)]
enum Just {
    Gamma,
    Hyp,
    Elim(RuleId, u32),
}

#[derive(Debug, Clone, Copy)]
struct Member {
    h: u8,
    just: Just,
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    None,
    Member,
    Intro(usize),
    Efq(u32),
}

struct Synth {
    /// Heights and choices without EFQ, then with it.
    passes: Vec<(Vec<u8>, Vec<Choice>)>,
}

impl Synth {
    fn heights(&self) -> &[u8] {
        &self.passes.last().expect("at least one pass").0
    }
}

#[derive(Debug, Clone, Copy)]
enum SplitRule {
    Del(RuleId, u32),
    Em(u32),
}

#[derive(Debug)]
struct SplitOpt {
    rule: SplitRule,
    /// New hypotheses and the resulting state, per branch.
    branches: Vec<(Vec<u32>, usize)>,
}

#[derive(Debug)]
struct State {
    hyps: Vec<u32>,
    eval: Vec<u8>,
    splits: Vec<SplitOpt>,
}

/// Searches for proofs from a fixed set of assumptions.
///
/// A search state is the set of open hypotheses. Each state closes its
/// members under simple eliminations, builds everything else by
/// introductions and EFQ, or splits on a del-rule or on EM for a variable.
pub struct Prover<'s> {
    space: &'s SearchSpace,
    gamma: Vec<u32>,
    states: Vec<State>,
    index: HashMap<Vec<u32>, usize>,
    next_label: usize,
}

impl<'s> Prover<'s> {
    /// `gamma` must lie in the universe of `space`.
    pub fn new(space: &'s SearchSpace, gamma: &[Formula]) -> Prover<'s> {
        let gamma = gamma
            .iter()
            .map(|f| space.universe.id(f).expect("assumption in the search universe"))
            .collect();
        Prover {
            space,
            gamma,
            states: Vec::new(),
            index: HashMap::new(),
            next_label: 0,
        }
    }

    /// Number of search states explored so far.
    pub fn states(&self) -> usize {
        self.states.len()
    }

    /// Depth of the shallowest proof of `goal` this search can build.
    pub fn min_depth(&mut self, goal: &Formula) -> Option<usize> {
        let g = self.space.universe.id(goal)?;
        let h = self.root_eval()[g as usize];
        (h != INF).then_some(h as usize)
    }

    /// Depths for every formula of the universe, `None` where unreachable.
    pub fn all_depths(&mut self) -> Vec<Option<usize>> {
        self.root_eval().iter().map(|&h| (h != INF).then_some(h as usize)).collect()
    }

    pub fn prove(&mut self, goal: &Formula, budget: SearchBudget) -> Option<Proof> {
        let g = self.space.universe.id(goal)?;
        let root = self.solve(Vec::new());
        let h = self.states[root].eval[g as usize];
        if h == INF || h as usize > budget.max_depth {
            return None;
        }
        let p = self.build(root, g, &mut HashMap::new()).prune_discharges();
        (p.height() - 1 <= budget.max_depth && p.node_count() <= budget.max_nodes).then_some(p)
    }

    fn root_eval(&mut self) -> &[u8] {
        let root = self.solve(Vec::new());
        &self.states[root].eval
    }

    fn members(&self, hyps: &[u32]) -> Vec<Option<Member>> {
        let mut members: Vec<Option<Member>> = vec![None; self.space.universe.len()];
        for &g in &self.gamma {
            members[g as usize] = Some(Member { h: 0, just: Just::Gamma });
        }
        for &h in hyps {
            if members[h as usize].is_none() {
                members[h as usize] = Some(Member { h: 0, just: Just::Hyp });
            }
        }
        // Every elimination adds one to the height, so breadth-first order is exact.
        let mut queue: std::collections::VecDeque<u32> =
            (0..members.len() as u32).filter(|&i| members[i as usize].is_some()).collect();
        while let Some(i) = queue.pop_front() {
            let nh = succ(members[i as usize].expect("queued members exist").h);
            for &(rule, c) in &self.space.elims[i as usize] {
                if members[c as usize].is_none() {
                    members[c as usize] = Some(Member {
                        h: nh,
                        just: Just::Elim(rule, i),
                    });
                    queue.push_back(c);
                }
            }
        }
        members
    }

    fn split_candidates(&self, members: &[Option<Member>]) -> Vec<(SplitRule, Vec<Vec<u32>>)> {
        let mut out = Vec::new();
        for (i, m) in members.iter().enumerate() {
            if m.is_some() {
                for d in &self.space.dels[i] {
                    out.push((SplitRule::Del(d.rule, i as u32), d.branches.clone()));
                }
            }
        }
        if self.space.system.has_em() {
            for &v in &self.space.vars {
                if let Some(nv) = self.space.neg[v as usize] {
                    out.push((SplitRule::Em(v), vec![vec![v], vec![nv]]));
                }
            }
        }
        out
    }

    fn solve(&mut self, hyps: Vec<u32>) -> usize {
        if let Some(&i) = self.index.get(&hyps) {
            return i;
        }
        let members = self.members(&hyps);
        let open = |f: u32| members[f as usize].is_some_and(|m| m.h == 0);
        let mut eval = self.synth_heights(&members);
        let mut splits = Vec::new();
        let guard = self.states.len() < MAX_STATES;
        for (rule, branches) in self.split_candidates(&members) {
            if !guard {
                break;
            }
            // A branch adding nothing repeats this state, so the split cannot help.
            let news: Vec<Vec<u32>> = branches
                .iter()
                .map(|b| b.iter().copied().filter(|&f| !open(f)).collect())
                .collect();
            if news.iter().any(|n: &Vec<u32>| n.is_empty()) {
                continue;
            }
            let mut children = Vec::new();
            for new in news {
                let mut key = hyps.clone();
                key.extend(&new);
                key.sort_unstable();
                key.dedup();
                let child = self.solve(key);
                children.push((new, child));
            }
            let hm = match rule {
                SplitRule::Del(_, major) => members[major as usize].expect("major is a member").h,
                SplitRule::Em(_) => 0,
            };
            let mut top = self.states[children[0].1].eval.clone();
            for &(_, c) in &children[1..] {
                for (t, &h) in top.iter_mut().zip(&self.states[c].eval) {
                    *t = (*t).max(h);
                }
            }
            for (e, t) in eval.iter_mut().zip(top) {
                *e = (*e).min(succ(hm.max(t)));
            }
            splits.push(SplitOpt {
                rule,
                branches: children,
            });
        }
        self.states.push(State { hyps: hyps.clone(), eval, splits });
        let i = self.states.len() - 1;
        self.index.insert(hyps, i);
        i
    }

    fn intro_pass(&self, members: &[Option<Member>], efq: u8) -> Vec<u8> {
        let mut hs: Vec<u8> = Vec::with_capacity(members.len());
        for (x, m) in members.iter().enumerate() {
            let mut best = m.map_or(INF, |m| m.h).min(efq);
            let (lo, hi) = (self.space.start[x] as usize, self.space.start[x + 1] as usize);
            for &[p0, p1] in &self.space.flat[lo..hi] {
                best = best.min(succ(hs[p0 as usize].max(hs[p1 as usize])));
            }
            hs.push(best);
        }
        hs
    }

    fn efq_height(&self, first: &[u8]) -> Option<(u8, u32)> {
        if !self.space.system.has_efq() {
            return None;
        }
        (0..first.len())
            .filter_map(|a| {
                let na = self.space.neg[a]?;
                let h = first[a].max(first[na as usize]);
                (h != INF).then_some((succ(h), a as u32))
            })
            .min()
    }

    fn synth_heights(&self, members: &[Option<Member>]) -> Vec<u8> {
        let first = self.intro_pass(members, INF);
        match self.efq_height(&first) {
            Some((h, _)) => self.intro_pass(members, h),
            None => first,
        }
    }

    fn synth(&self, members: &[Option<Member>]) -> Synth {
        let n = members.len();
        let pass = |efq: Option<(u8, u32)>| {
            let mut hs = vec![INF; n];
            let mut cs = vec![Choice::None; n];
            for x in 0..n {
                let (mut best, mut choice) = match members[x] {
                    Some(m) => (m.h, Choice::Member),
                    None => (INF, Choice::None),
                };
                let (lo, hi) = (self.space.start[x] as usize, self.space.start[x + 1] as usize);
                for (k, [p0, p1]) in self.space.flat[lo..hi].iter().enumerate() {
                    let h = succ(hs[*p0 as usize].max(hs[*p1 as usize]));
                    if h < best {
                        best = h;
                        choice = Choice::Intro(k);
                    }
                }
                if let Some((h, a)) = efq {
                    if h < best {
                        best = h;
                        choice = Choice::Efq(a);
                    }
                }
                hs[x] = best;
                cs[x] = choice;
            }
            (hs, cs)
        };
        let first = pass(None);
        let efq = self.efq_height(&first.0);
        let mut passes = vec![first];
        if efq.is_some() {
            passes.push(pass(efq));
        }
        Synth { passes }
    }

    fn fresh(&mut self) -> Label {
        self.next_label += 1;
        label(&format!("h{}", self.next_label))
    }

    fn formula(&self, id: u32) -> Formula {
        self.space.universe.formula(id).clone()
    }

    fn member_proof(&self, members: &[Option<Member>], labels: &HashMap<u32, Label>, x: u32) -> Proof {
        let f = self.formula(x);
        match members[x as usize].expect("member").just {
            Just::Gamma => Proof::hyp(f),
            Just::Hyp => Proof::assume(&labels[&x], f),
            Just::Elim(rule, m) => Proof::rule(rule, f, vec![self.member_proof(members, labels, m)]),
        }
    }

    fn synth_proof(&self, members: &[Option<Member>], labels: &HashMap<u32, Label>, synth: &Synth, pass: usize, x: u32) -> Proof {
        let f = self.formula(x);
        match synth.passes[pass].1[x as usize] {
            Choice::Member => self.member_proof(members, labels, x),
            Choice::Intro(k) => {
                let alt = &self.space.intros[x as usize][k];
                let premises = alt
                    .premises
                    .iter()
                    .map(|&p| self.synth_proof(members, labels, synth, pass, p))
                    .collect();
                Proof::rule(alt.rule, f, premises)
            }
            Choice::Efq(a) => {
                let na = self.space.neg[a as usize].expect("negation in universe");
                let premises = vec![
                    self.synth_proof(members, labels, synth, 0, a),
                    self.synth_proof(members, labels, synth, 0, na),
                ];
                Proof::rule(RuleId::Efq, f, premises)
            }
            Choice::None => unreachable!("only reachable formulas are rebuilt"),
        }
    }

    fn build(&mut self, state: usize, x: u32, labels: &mut HashMap<u32, Label>) -> Proof {
        let members = self.members(&self.states[state].hyps);
        let synth = self.synth(&members);
        let target = self.states[state].eval[x as usize];
        if synth.heights()[x as usize] == target {
            return self.synth_proof(&members, labels, &synth, synth.passes.len() - 1, x);
        }
        let rule = self.states[state]
            .splits
            .iter()
            .find_map(|s| {
                let hm = match s.rule {
                    SplitRule::Del(_, major) => members[major as usize].expect("major is a member").h,
                    SplitRule::Em(_) => 0,
                };
                let top = s.branches.iter().map(|&(_, c)| self.states[c].eval[x as usize]).max()?;
                (succ(hm.max(top)) == target).then_some(s.rule)
            })
            .expect("the recorded height is realised by a split");
        let branches = self.states[state]
            .splits
            .iter()
            .find(|s| same_split(s.rule, rule))
            .expect("split exists")
            .branches
            .clone();
        let mut children = Vec::new();
        for (new, child) in branches {
            let fresh: Vec<(u32, Label)> = new.iter().map(|&f| (f, self.fresh())).collect();
            let saved: Vec<Option<Label>> = fresh.iter().map(|(f, l)| labels.insert(*f, l.clone())).collect();
            children.push((fresh.iter().map(|(_, l)| l.clone()).collect::<BTreeSet<Label>>(), self.build(child, x, labels)));
            for ((f, _), old) in fresh.iter().zip(saved) {
                match old {
                    Some(l) => labels.insert(*f, l),
                    None => labels.remove(f),
                };
            }
        }
        let (rule_id, mut premises, indices): (RuleId, Vec<Proof>, Vec<usize>) = match rule {
            SplitRule::Del(r, major) => (
                r,
                vec![self.member_proof(&members, labels, major)],
                r.schema().minor_indices().collect(),
            ),
            SplitRule::Em(_) => (RuleId::Em, Vec::new(), vec![0, 1]),
        };
        let mut discharges = BTreeMap::new();
        for ((ls, p), k) in children.into_iter().zip(indices) {
            premises.push(p);
            discharges.insert(k, ls);
        }
        Proof::Rule(RuleApp {
            rule: rule_id,
            conclusion: self.formula(x),
            premises,
            discharges,
        })
    }
}

fn same_split(a: SplitRule, b: SplitRule) -> bool {
    match (a, b) {
        (SplitRule::Del(r, m), SplitRule::Del(s, n)) => r == s && m == n,
        (SplitRule::Em(v), SplitRule::Em(w)) => v == w,
        _ => false,
    }
}


/// Searches for a proof of `goal` from `gamma` over the negation closure of
/// the sequent. `None` means nothing was found within the budget.
pub fn prove(system: SystemId, gamma: &[Formula], goal: &Formula, budget: SearchBudget) -> Option<Proof> {
    let universe = Universe::closure_of(gamma.iter().chain(std::iter::once(goal)));
    let space = SearchSpace::new(system, universe);
    Prover::new(&space, gamma).prove(goal, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_proof;
    use crate::formula::parse_formula;
    use SystemId::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn found(system: SystemId, gamma: &[&str], goal: &str) -> Option<Proof> {
        let gamma: Vec<Formula> = gamma.iter().map(|s| f(s)).collect();
        let p = prove(system, &gamma, &f(goal), SearchBudget::default())?;
        let j = check_proof(system, &p).unwrap_or_else(|e| panic!("{e}\n{p}"));
        assert_eq!(j.conclusion, f(goal));
        assert!(j.assumption_set().iter().all(|a| gamma.contains(a)));
        Some(p)
    }

    #[test]
    fn one_step_elimination() {
        let p = found(NdpSfde, &["p & q"], "q").unwrap();
        assert_eq!(p.rule_id(), Some(RuleId::AndE2));
    }

    #[test]
    fn efq_on_contradiction() {
        let p = found(NdpK3w, &["p", "~p"], "q").unwrap();
        assert_eq!(p.rule_id(), Some(RuleId::Efq));
    }

    #[test]
    fn conjunction_does_not_give_conjunct_in_dsfde() {
        assert!(found(NdpDSfde, &["p & q"], "p").is_none());
    }

    #[test]
    fn excluded_middle_in_pwk() {
        let p = found(NdpPwk, &[], "p | ~p").unwrap();
        assert_eq!(p.rule_id(), Some(RuleId::Em));
    }

    #[test]
    fn disjunction_to_excluded_middle_in_sfde() {
        found(NdpSfde, &["p | q"], "q | ~q").unwrap();
    }

    #[test]
    fn budget_limits() {
        let gamma = [f("p | q")];
        let goal = f("q | ~q");
        assert!(prove(NdpSfde, &gamma, &goal, SearchBudget::new(1, 100)).is_none());
        assert!(prove(NdpSfde, &gamma, &goal, SearchBudget::new(8, 2)).is_none());
    }
}

//! Deduction trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::formula::Formula;

use super::rules::RuleId;

pub type Label = Arc<str>;

/// Premise indices from the root down to a node.
pub type Path = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Proof {
    Assume(Assumption),
    Rule(RuleApp),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Assumption {
    pub formula: Formula,
    pub label: Option<Label>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RuleApp {
    pub rule: RuleId,
    pub conclusion: Formula,
    pub premises: Vec<Proof>,
    /// Premise index of a branch mapped to the labels it discharges.
    pub discharges: BTreeMap<usize, BTreeSet<Label>>,
}

pub fn label(name: &str) -> Label {
    Arc::from(name)
}

pub(crate) fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Proof {
    pub fn assume(label: &str, formula: Formula) -> Proof {
        Proof::Assume(Assumption {
            formula,
            label: Some(self::label(label)),
        })
    }

    /// An assumption that can never be discharged.
    pub fn hyp(formula: Formula) -> Proof {
        Proof::Assume(Assumption { formula, label: None })
    }

    pub fn rule(rule: RuleId, conclusion: Formula, premises: Vec<Proof>) -> Proof {
        Proof::Rule(RuleApp {
            rule,
            conclusion,
            premises,
            discharges: BTreeMap::new(),
        })
    }

    /// Like [`Proof::rule`] with discharges given as `(branch, labels)` pairs.
    pub fn rule_discharging(
        rule: RuleId,
        conclusion: Formula,
        premises: Vec<Proof>,
        discharges: &[(usize, &[&str])],
    ) -> Proof {
        let discharges = discharges
            .iter()
            .filter(|(_, ls)| !ls.is_empty())
            .map(|(i, ls)| (*i, ls.iter().map(|l| label(l)).collect()))
            .collect();
        Proof::Rule(RuleApp {
            rule,
            conclusion,
            premises,
            discharges,
        })
    }

    pub fn conclusion(&self) -> &Formula {
        match self {
            Proof::Assume(a) => &a.formula,
            Proof::Rule(r) => &r.conclusion,
        }
    }

    pub fn rule_id(&self) -> Option<RuleId> {
        match self {
            Proof::Assume(_) => None,
            Proof::Rule(r) => Some(r.rule),
        }
    }

    pub fn as_rule(&self) -> Option<&RuleApp> {
        match self {
            Proof::Rule(r) => Some(r),
            Proof::Assume(_) => None,
        }
    }

    pub fn premises(&self) -> &[Proof] {
        match self {
            Proof::Assume(_) => &[],
            Proof::Rule(r) => &r.premises,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises().iter().map(Proof::node_count).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises().iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn get(&self, path: &[usize]) -> Option<&Proof> {
        path.iter().try_fold(self, |node, &i| node.premises().get(i))
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut Proof> {
        let mut node = self;
        for &i in path {
            node = match node {
                Proof::Rule(r) => r.premises.get_mut(i)?,
                Proof::Assume(_) => return None,
            };
        }
        Some(node)
    }

    /// Replaces the subtree at `path`, returning the old one.
    pub fn replace_at(&mut self, path: &[usize], new: Proof) -> Option<Proof> {
        let slot = self.get_mut(path)?;
        Some(std::mem::replace(slot, new))
    }

    /// All node paths in postorder (premises left to right, then the node).
    pub fn positions(&self) -> Vec<Path> {
        fn walk(p: &Proof, path: &mut Path, out: &mut Vec<Path>) {
            for (i, q) in p.premises().iter().enumerate() {
                path.push(i);
                walk(q, path, out);
                path.pop();
            }
            out.push(path.clone());
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every formula occurrence, with its path, in postorder.
    pub fn occurrences(&self) -> Vec<(Path, &Formula)> {
        self.positions()
            .into_iter()
            .map(|path| {
                let f = self.get(&path).expect("position exists").conclusion();
                (path, f)
            })
            .collect()
    }

    /// Undischarged assumption leaves as a sorted multiset.
    pub fn undischarged(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.collect_open(&mut Vec::new(), &mut |a| out.push(a.formula.clone()));
        out.sort();
        out
    }

    /// Labels of undischarged leaves.
    pub fn open_labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.collect_open(&mut Vec::new(), &mut |a| {
            if let Some(l) = &a.label {
                out.insert(l.clone());
            }
        });
        out
    }

    fn collect_open<'a>(&'a self, closed: &mut Vec<&'a Label>, visit: &mut impl FnMut(&'a Assumption)) {
        match self {
            Proof::Assume(a) => {
                let bound = a.label.as_ref().is_some_and(|l| closed.contains(&l));
                if !bound {
                    visit(a);
                }
            }
            Proof::Rule(r) => {
                for (i, q) in r.premises.iter().enumerate() {
                    let before = closed.len();
                    if let Some(ls) = r.discharges.get(&i) {
                        closed.extend(ls.iter());
                    }
                    q.collect_open(closed, visit);
                    closed.truncate(before);
                }
            }
        }
    }

    /// Every label occurring anywhere, at leaves or in discharge lists.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| match p {
            Proof::Assume(a) => out.extend(a.label.iter().cloned()),
            Proof::Rule(r) => out.extend(r.discharges.values().flatten().cloned()),
        });
        out
    }

    /// Preorder traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Proof)) {
        f(self);
        for q in self.premises() {
            q.visit(f);
        }
    }

    /// Renames labels according to `map`; unmapped labels are kept.
    pub fn rename_labels(&self, map: &BTreeMap<Label, Label>) -> Proof {
        let get = |l: &Label| map.get(l).cloned().unwrap_or_else(|| l.clone());
        match self {
            Proof::Assume(a) => Proof::Assume(Assumption {
                formula: a.formula.clone(),
                label: a.label.as_ref().map(get),
            }),
            Proof::Rule(r) => Proof::Rule(RuleApp {
                rule: r.rule,
                conclusion: r.conclusion.clone(),
                premises: r.premises.iter().map(|q| q.rename_labels(map)).collect(),
                discharges: r
                    .discharges
                    .iter()
                    .map(|(i, ls)| (*i, ls.iter().map(get).collect()))
                    .collect(),
            }),
        }
    }

    /// Renames discharged labels to `h1`, `h2`, ... in order of first leaf
    /// occurrence and drops discharge entries without leaves. Two proofs are
    /// alpha-equivalent iff their canonical forms are equal.
    pub fn canonical(&self) -> Proof {
        let discharged: BTreeSet<Label> = {
            let mut s = BTreeSet::new();
            self.visit(&mut |p| {
                if let Proof::Rule(r) = p {
                    s.extend(r.discharges.values().flatten().cloned());
                }
            });
            s
        };
        let open = self.open_labels();
        let mut map = BTreeMap::new();
        let mut n = 0;
        self.visit(&mut |p| {
            if let Proof::Assume(Assumption { label: Some(l), .. }) = p {
                if discharged.contains(l) && !open.contains(l) && !map.contains_key(l) {
                    n += 1;
                    map.insert(l.clone(), label(&format!("h{n}")));
                }
            }
        });
        self.rename_labels(&map).prune_discharges()
    }

    /// Removes discharged labels that no leaf in the branch carries.
    pub fn prune_discharges(&self) -> Proof {
        match self {
            Proof::Assume(_) => self.clone(),
            Proof::Rule(r) => {
                let premises: Vec<Proof> = r.premises.iter().map(Proof::prune_discharges).collect();
                let discharges = r
                    .discharges
                    .iter()
                    .filter_map(|(i, ls)| {
                        let present = premises.get(*i).map(Proof::leaf_labels).unwrap_or_default();
                        let kept: BTreeSet<Label> = ls.intersection(&present).cloned().collect();
                        (!kept.is_empty()).then_some((*i, kept))
                    })
                    .collect();
                Proof::Rule(RuleApp {
                    rule: r.rule,
                    conclusion: r.conclusion.clone(),
                    premises,
                    discharges,
                })
            }
        }
    }

    fn leaf_labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            if let Proof::Assume(Assumption { label: Some(l), .. }) = p {
                out.insert(l.clone());
            }
        });
        out
    }

    pub fn alpha_eq(&self, other: &Proof) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::sexp::render_proof(self))
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::sexp::render_proof(self))
    }
}

/// Hands out labels not used anywhere in a set of proofs.
#[derive(Debug, Clone, Default)]
pub struct LabelSupply {
    used: BTreeSet<Label>,
    next: usize,
}

impl LabelSupply {
    pub fn for_proof(p: &Proof) -> LabelSupply {
        LabelSupply {
            used: p.labels(),
            next: 0,
        }
    }

    pub fn reserve(&mut self, p: &Proof) {
        self.used.extend(p.labels());
    }

    pub fn fresh(&mut self) -> Label {
        loop {
            self.next += 1;
            let l = label(&format!("u{}", self.next));
            if self.used.insert(l.clone()) {
                return l;
            }
        }
    }

    /// Gives every label discharged inside `p` a fresh name. Open labels are
    /// left alone so that the copy still fits the surrounding discharges.
    pub fn freshen(&mut self, p: &Proof) -> Proof {
        let mut inner = BTreeSet::new();
        p.visit(&mut |q| {
            if let Proof::Rule(r) = q {
                inner.extend(r.discharges.values().flatten().cloned());
            }
        });
        let map: BTreeMap<Label, Label> = inner.into_iter().map(|l| (l, self.fresh())).collect();
        p.rename_labels(&map)
    }
}

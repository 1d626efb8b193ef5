//! Maximal formulas, maximal segments and ranks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::calculus::{Path, Proof, RuleId, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedexKind {
    /// An introduction whose conclusion is the major premise of an elimination.
    Detour,
    /// A del-rule whose conclusion is the major premise of an elimination.
    Permutation,
    /// EFQ with a premise concluded by another EFQ.
    EfqCollapse,
    /// EFQ on a compound pair that is introduced on both sides.
    EfqComponents,
    /// EFQ with a premise concluded by a del-rule.
    EfqPermutation,
}

impl RedexKind {
    pub fn name(self) -> &'static str {
        match self {
            RedexKind::Detour => "detour",
            RedexKind::Permutation => "permutation",
            RedexKind::EfqCollapse => "efq_collapse",
            RedexKind::EfqComponents => "efq_components",
            RedexKind::EfqPermutation => "efq_permutation",
        }
    }
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Redex {
    pub kind: RedexKind,
    /// For detours and permutations, the major premise of the elimination;
    /// for the EFQ conversions, the EFQ node.
    pub position: Path,
    /// The rule above and the rule below the offending occurrence.
    pub rule_pair: (RuleId, RuleId),
    pub degree: usize,
}

impl Redex {
    /// Path of the elimination (or EFQ) node being rewritten.
    pub fn lower(&self) -> &[usize] {
        match self.kind {
            RedexKind::Detour | RedexKind::Permutation => &self.position[..self.position.len() - 1],
            _ => &self.position,
        }
    }
}

/// `⟨d, l⟩`, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Rank {
    pub d: usize,
    pub l: usize,
}

impl Ord for Rank {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d, self.l).cmp(&(other.d, other.l))
    }
}

impl PartialOrd for Rank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.d, self.l)
    }
}

/// A maximal segment `C1 ... Cn`, listed from the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub positions: Vec<Path>,
    pub degree: usize,
    pub is_maximal: bool,
}

pub(crate) fn kind_of(p: &Proof) -> Option<RuleKind> {
    p.rule_id().map(RuleId::kind)
}

fn is_del(p: &Proof) -> bool {
    kind_of(p).is_some_and(RuleKind::is_del)
}

/// Every segment ending at `path`: chains upwards through minor premises of
/// del-rules. A formula that is not a del-rule conclusion yields a chain of
/// length one.
fn chains_ending_at(p: &Proof, path: &Path) -> Vec<Vec<Path>> {
    let node = p.get(path).expect("path exists");
    if !is_del(node) {
        return vec![vec![path.clone()]];
    }
    let schema = node.rule_id().expect("rule node").schema();
    let mut out = Vec::new();
    for b in schema.minor_indices() {
        let mut child = path.clone();
        child.push(b);
        for mut chain in chains_ending_at(p, &child) {
            chain.push(path.clone());
            out.push(chain);
        }
    }
    out
}

/// Segments of length at least two, maximal or not.
pub fn segments(p: &Proof) -> Vec<Segment> {
    let mut out = Vec::new();
    for path in p.positions() {
        let node = p.get(&path).expect("position exists");
        // Segments end where the formula is not a minor premise of a del-rule.
        let is_minor = path.split_last().is_some_and(|(&i, parent)| {
            let parent = p.get(parent).expect("parent exists");
            is_del(parent) && parent.rule_id().expect("rule").schema().minor_indices().any(|b| b == i)
        });
        if is_minor || !is_del(node) {
            continue;
        }
        let maximal = major_of_elim(p, &path);
        for chain in chains_ending_at(p, &path) {
            out.push(Segment {
                degree: node.conclusion().degree(),
                positions: chain,
                is_maximal: maximal,
            });
        }
    }
    out
}

fn major_of_elim(p: &Proof, path: &[usize]) -> bool {
    match path.split_last() {
        Some((&0, parent)) => kind_of(p.get(parent).expect("parent exists")).is_some_and(RuleKind::has_major),
        _ => false,
    }
}

/// Maximal formulas and ends of maximal segments, ordered by the position of
/// the elimination in postorder.
pub fn find_redexes(p: &Proof) -> Vec<Redex> {
    let mut out = Vec::new();
    for path in p.positions() {
        let node = p.get(&path).expect("position exists");
        let Some(kind) = kind_of(node) else { continue };
        if !kind.has_major() {
            continue;
        }
        let major = &node.premises()[0];
        let Some(upper) = kind_of(major) else { continue };
        let redex_kind = match upper {
            RuleKind::Intro => RedexKind::Detour,
            RuleKind::DelElim | RuleKind::Em => RedexKind::Permutation,
            _ => continue,
        };
        let mut position = path.clone();
        position.push(0);
        out.push(Redex {
            kind: redex_kind,
            position,
            rule_pair: (major.rule_id().expect("rule"), node.rule_id().expect("rule")),
            degree: major.conclusion().degree(),
        });
    }
    out
}

/// Rank as the pair of the highest degree of a maximal formula or segment and
/// the number of maximal formulas plus the total length of maximal segments.
pub fn rank(p: &Proof) -> Rank {
    let mut r = Rank::default();
    for redex in find_redexes(p) {
        match redex.kind {
            RedexKind::Detour => {
                r.d = r.d.max(redex.degree);
                r.l += 1;
            }
            RedexKind::Permutation => {
                r.d = r.d.max(redex.degree);
                r.l += chains_ending_at(p, &redex.position).iter().map(Vec::len).sum::<usize>();
            }
            _ => {}
        }
    }
    r
}

pub fn is_normal(p: &Proof) -> bool {
    find_redexes(p).is_empty()
}

/// Among the redexes of highest degree, the first whose elimination has no
/// other such redex above it or above its minor premises.
pub fn select_redex(redexes: &[Redex]) -> Option<&Redex> {
    let d = redexes.iter().map(|r| r.degree).max()?;
    // Redexes are in postorder of their eliminations, so the first one of
    // degree d has none of degree d inside its subtree.
    redexes.iter().find(|r| r.degree == d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_proof;

    #[test]
    fn assumption_is_normal() {
        let p = parse_proof(r#"(assume "p")"#).unwrap();
        assert!(find_redexes(&p).is_empty());
        assert_eq!(rank(&p), Rank { d: 0, l: 0 });
    }

    #[test]
    fn single_detour() {
        let p = parse_proof(
            r#"(rule OrEp "p | q"
                 ((rule OrI1p ((assume "p") (assume "~q")))
                  (rule OrI1p ((assume a "p") (assume b "~q")))
                  (rule OrI2p ((assume c "~p") (assume d "q")))
                  (rule OrI3p ((assume e "p") (assume f "q"))))
                 (discharge (1 a b) (2 c d) (3 e f)))"#,
        )
        .unwrap();
        let rs = find_redexes(&p);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].kind, RedexKind::Detour);
        assert_eq!(rs[0].position, vec![0]);
        assert_eq!(rs[0].rule_pair, (RuleId::OrI1p, RuleId::OrEp));
        assert_eq!(rank(&p), Rank { d: 1, l: 1 });
    }

    #[test]
    fn segment_of_length_two() {
        let p = parse_proof(
            r#"(rule NegOrE1p
                 ((rule OrEp "~(p | q)"
                    ((assume "r | s")
                     (assume a "~(p | q)")
                     (assume b "~(p | q)")
                     (assume c "~(p | q)")))))"#,
        )
        .unwrap();
        let rs = find_redexes(&p);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].kind, RedexKind::Permutation);
        // Three branches give three segments of length two.
        assert_eq!(rank(&p), Rank { d: 2, l: 6 });
        let segs = segments(&p);
        assert_eq!(segs.len(), 3);
        assert!(segs.iter().all(|s| s.is_maximal && s.positions.len() == 2));
    }

    #[test]
    fn nested_segments_branch() {
        let p = parse_proof(
            r#"(rule NegNegE
                 ((rule OrE "~~p"
                    ((assume "r | s")
                     (rule OrE "~~p" ((assume "t | u") (assume "~~p") (assume "~~p")))
                     (assume "~~p")))))"#,
        )
        .unwrap();
        assert_eq!(rank(&p), Rank { d: 2, l: 3 + 3 + 2 });
        let non_maximal = parse_proof(
            r#"(rule OrE "~~p" ((assume "t | u") (assume "~~p") (assume "~~p")))"#,
        )
        .unwrap();
        assert_eq!(segments(&non_maximal).len(), 2);
        assert!(segments(&non_maximal).iter().all(|s| !s.is_maximal));
        assert!(is_normal(&non_maximal));
    }

    #[test]
    fn strategy_prefers_highest_degree_then_innermost() {
        let rs = vec![
            Redex { kind: RedexKind::Detour, position: vec![0, 0], rule_pair: (RuleId::AndI, RuleId::AndE1), degree: 1 },
            Redex { kind: RedexKind::Detour, position: vec![1, 0], rule_pair: (RuleId::AndI, RuleId::AndE1), degree: 3 },
            Redex { kind: RedexKind::Detour, position: vec![0], rule_pair: (RuleId::AndI, RuleId::AndE1), degree: 3 },
        ];
        assert_eq!(select_redex(&rs).unwrap().position, vec![1, 0]);
        assert!(select_redex(&[]).is_none());
    }
}

//! Rule schemas and the natural-deduction systems built from them.
//!
//! A schema is written with the metavariables `A`, `B` and `C` standing for
//! arbitrary formulas. Every premise may carry a list of dischargeable
//! hypotheses; a premise with hypotheses is a minor premise (a branch).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::formula::{parse_formula, Formula};
use crate::semantics::{LogicId, UnknownName};

macro_rules! rule_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum RuleId {
            $($variant),*
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$variant),*];

            /// The spelling used in proof files.
            pub fn name(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $name),*
                }
            }
        }

        impl FromStr for RuleId {
            type Err = UnknownName;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(RuleId::$variant),)*
                    other => Err(UnknownName { kind: "rule", name: other.to_string() }),
                }
            }
        }
    };
}

rule_ids! {
    AndI => "AndI",
    AndE1 => "AndE1",
    AndE2 => "AndE2",
    OrI1 => "OrI1",
    OrI2 => "OrI2",
    OrE => "OrE",
    NegNegI => "NegNegI",
    NegNegE => "NegNegE",
    OrI1p => "OrI1p",
    OrI2p => "OrI2p",
    OrI3p => "OrI3p",
    OrEp => "OrEp",
    NegAndE3p => "NegAndE_p",
    NegOrIp => "NegOrIp",
    NegOrE1p => "NegOrE1p",
    NegOrE2p => "NegOrE2p",
    NegAndI1p => "NegAndI1p",
    NegAndI2p => "NegAndI2p",
    NegAndI3p => "NegAndI3p",
    NegAndI1 => "NegAndI1",
    NegAndI2 => "NegAndI2",
    NegAndEp => "NegAndEp",
    NegOrI => "NegOrI",
    AndI2 => "AndI2",
    AndI3 => "AndI3",
    NegOrI2 => "NegOrI2",
    NegOrI3 => "NegOrI3",
    AndEBi => "AndE_bi",
    NegOrEBi => "NegOrE_bi",
    OrER => "OrER",
    OrEL => "OrEL",
    NegAndER => "NegAndER",
    NegAndEL => "NegAndEL",
    AndER => "AndER",
    AndEL => "AndEL",
    NegOrER => "NegOrER",
    NegOrEL => "NegOrEL",
    AndERp => "AndERp",
    AndELp => "AndELp",
    NegOrERp => "NegOrERp",
    NegOrELp => "NegOrELp",
    Efq => "EFQ",
    Em => "EM",
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a rule participates in normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    /// Conclusion is a compound pattern built from the premises.
    Intro,
    /// Major premise at index 0, no branches.
    Elim,
    /// Major premise at index 0 plus branches concluding `C`.
    DelElim,
    /// Excluded middle: two branches and no major premise.
    Em,
    /// Ex falso: `A`, `~A` / `B`.
    Efq,
}

impl RuleKind {
    pub fn has_major(self) -> bool {
        matches!(self, RuleKind::Elim | RuleKind::DelElim)
    }

    /// Rules of the shape of disjunction elimination.
    pub fn is_del(self) -> bool {
        matches!(self, RuleKind::DelElim | RuleKind::Em)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PremiseSchema {
    pub formula: Formula,
    pub hyps: Vec<Formula>,
}

impl PremiseSchema {
    pub fn is_branch(&self) -> bool {
        !self.hyps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSchema {
    pub id: RuleId,
    pub kind: RuleKind,
    pub premises: Vec<PremiseSchema>,
    pub conclusion: Formula,
}

impl RuleSchema {
    pub fn arity(&self) -> usize {
        self.premises.len()
    }

    /// Indices of the minor premises that are branches of a del-rule.
    pub fn minor_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let start = if self.kind == RuleKind::DelElim { 1 } else { 0 };
        (start..self.premises.len()).filter(move |_| self.kind.is_del())
    }
}

fn pat(s: &str) -> Formula {
    parse_formula(s).expect("schema pattern parses")
}

fn plain(formulas: &[&str]) -> Vec<PremiseSchema> {
    formulas
        .iter()
        .map(|f| PremiseSchema {
            formula: pat(f),
            hyps: Vec::new(),
        })
        .collect()
}

fn intro(id: RuleId, premises: &[&str], conclusion: &str) -> RuleSchema {
    RuleSchema {
        id,
        kind: RuleKind::Intro,
        premises: plain(premises),
        conclusion: pat(conclusion),
    }
}

fn elim(id: RuleId, major: &str, conclusion: &str) -> RuleSchema {
    RuleSchema {
        id,
        kind: RuleKind::Elim,
        premises: plain(&[major]),
        conclusion: pat(conclusion),
    }
}

fn del(id: RuleId, major: &str, branches: &[&[&str]]) -> RuleSchema {
    let mut premises = plain(&[major]);
    premises.extend(branches.iter().map(|hyps| PremiseSchema {
        formula: pat("C"),
        hyps: hyps.iter().map(|h| pat(h)).collect(),
    }));
    RuleSchema {
        id,
        kind: RuleKind::DelElim,
        premises,
        conclusion: pat("C"),
    }
}

fn build(id: RuleId) -> RuleSchema {
    use RuleId::*;
    match id {
        AndI => intro(id, &["A", "B"], "A & B"),
        AndE1 => elim(id, "A & B", "A"),
        AndE2 => elim(id, "A & B", "B"),
        OrI1 => intro(id, &["A"], "A | B"),
        OrI2 => intro(id, &["B"], "A | B"),
        OrE => del(id, "A | B", &[&["A"], &["B"]]),
        NegNegI => intro(id, &["A"], "~~A"),
        NegNegE => elim(id, "~~A", "A"),

        OrI1p => intro(id, &["A", "~B"], "A | B"),
        OrI2p => intro(id, &["~A", "B"], "A | B"),
        OrI3p => intro(id, &["A", "B"], "A | B"),
        OrEp => del(id, "A | B", &[&["A", "~B"], &["~A", "B"], &["A", "B"]]),
        NegAndE3p => del(id, "~(A & B)", &[&["~A", "B"], &["A", "~B"], &["~A", "~B"]]),
        NegOrIp => intro(id, &["~A", "~B"], "~(A | B)"),
        NegOrE1p => elim(id, "~(A | B)", "~A"),
        NegOrE2p => elim(id, "~(A | B)", "~B"),
        NegAndI1p => intro(id, &["~A", "B"], "~(A & B)"),
        NegAndI2p => intro(id, &["A", "~B"], "~(A & B)"),
        NegAndI3p => intro(id, &["~A", "~B"], "~(A & B)"),

        NegAndI1 => intro(id, &["~A"], "~(A & B)"),
        NegAndI2 => intro(id, &["~B"], "~(A & B)"),
        NegAndEp => del(id, "~(A & B)", &[&["~A"], &["~B"]]),
        NegOrI => intro(id, &["~A & ~B"], "~(A | B)"),

        AndI2 => intro(id, &["A", "~A"], "A & B"),
        AndI3 => intro(id, &["B", "~B"], "A & B"),
        NegOrI2 => intro(id, &["A", "~A"], "~(A | B)"),
        NegOrI3 => intro(id, &["B", "~B"], "~(A | B)"),
        AndEBi => del(id, "A & B", &[&["A", "B"], &["A", "~A"], &["B", "~B"]]),
        NegOrEBi => del(id, "~(A | B)", &[&["~A", "~B"], &["A", "~A"], &["B", "~B"]]),

        OrER => del(id, "A | B", &[&["A"], &["~A", "B"]]),
        OrEL => del(id, "A | B", &[&["A", "~B"], &["B"]]),
        NegAndER => del(id, "~(A & B)", &[&["~A"], &["A", "~B"]]),
        // The second branch discharges ~B; a [B] branch would be unsound.
        NegAndEL => del(id, "~(A & B)", &[&["~A", "B"], &["~B"]]),
        AndER => del(id, "A & B", &[&["A", "B"], &["A", "~A"]]),
        AndEL => del(id, "A & B", &[&["A", "B"], &["B", "~B"]]),
        NegOrER => del(id, "~(A | B)", &[&["~A", "~B"], &["A", "~A"]]),
        NegOrEL => del(id, "~(A | B)", &[&["~A", "~B"], &["B", "~B"]]),
        AndERp => del(id, "A & B", &[&["~A"], &["B"]]),
        AndELp => del(id, "A & B", &[&["A"], &["~B"]]),
        NegOrERp => del(id, "~(A | B)", &[&["A"], &["~B"]]),
        NegOrELp => del(id, "~(A | B)", &[&["~A"], &["B"]]),

        Efq => RuleSchema {
            id,
            kind: RuleKind::Efq,
            premises: plain(&["A", "~A"]),
            conclusion: pat("B"),
        },
        Em => RuleSchema {
            id,
            kind: RuleKind::Em,
            premises: vec![
                PremiseSchema {
                    formula: pat("C"),
                    hyps: vec![pat("A")],
                },
                PremiseSchema {
                    formula: pat("C"),
                    hyps: vec![pat("~A")],
                },
            ],
            conclusion: pat("C"),
        },
    }
}

impl RuleId {
    pub fn schema(self) -> &'static RuleSchema {
        static SCHEMAS: OnceLock<Vec<RuleSchema>> = OnceLock::new();
        let all = SCHEMAS.get_or_init(|| RuleId::ALL.iter().map(|&r| build(r)).collect());
        &all[self as usize]
    }

    pub fn kind(self) -> RuleKind {
        self.schema().kind
    }
}

macro_rules! system_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum SystemId {
            $($variant),*
        }

        impl SystemId {
            pub const ALL: &'static [SystemId] = &[$(SystemId::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(SystemId::$variant => $name),*
                }
            }
        }

        impl FromStr for SystemId {
            type Err = UnknownName;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(SystemId::$variant),)*
                    other => Err(UnknownName { kind: "system", name: other.to_string() }),
                }
            }
        }
    };
}

system_ids! {
    NdpSfde => "NDp_Sfde",
    NdpDSfde => "NDp_dSfde",
    NdpSfdeR => "NDp_SfdeR",
    NdpSfdeL => "NDp_SfdeL",
    NdDSfdeR => "ND_dSfdeR",
    NdDSfdeRAlt => "ND_dSfdeR_alt",
    NdDSfdeL => "ND_dSfdeL",
    NdDSfdeLAlt => "ND_dSfdeL_alt",
    NdpK3R => "NDp_K3R",
    NdpK3L => "NDp_K3L",
    NdpK3w => "NDp_K3w",
    NdpK3R2 => "NDp_K3R2",
    NdpK3L2 => "NDp_K3L2",
    NdpPwk => "NDp_PWK",
    NdFdep => "ND_FDEp",
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn replace(base: &[RuleId], remove: &[RuleId], add: &[RuleId]) -> Vec<RuleId> {
    let mut out: Vec<RuleId> = base.iter().copied().filter(|r| !remove.contains(r)).collect();
    out.extend_from_slice(add);
    out
}

fn build_rules(system: SystemId) -> BTreeSet<RuleId> {
    use RuleId::*;
    use SystemId::*;
    const SFDE: &[RuleId] = &[
        AndI, AndE1, AndE2, NegNegI, NegNegE, OrEp, NegAndE3p, OrI1p, OrI2p, OrI3p, NegOrIp, NegOrE1p,
        NegOrE2p, NegAndI1p, NegAndI2p, NegAndI3p,
    ];
    const DSFDE: &[RuleId] = &[
        OrI1, OrI2, OrE, AndI, AndI2, NegNegI, NegNegE, NegAndI1, NegAndI2, NegOrIp, NegAndEp, AndI3,
        NegOrI2, NegOrI3, AndEBi, NegOrEBi,
    ];
    let sfde_r = || {
        replace(
            SFDE,
            &[OrI1p, OrI3p, OrEp, NegAndI1p, NegAndI3p, NegAndE3p],
            &[OrI1, OrER, NegAndI1, NegAndER],
        )
    };
    let sfde_l = || {
        replace(
            SFDE,
            &[OrI2p, OrI3p, OrEp, NegAndI2p, NegAndI3p, NegAndE3p],
            &[OrI2, OrEL, NegAndI2, NegAndEL],
        )
    };
    let dsfde_r = || replace(DSFDE, &[AndI3, AndEBi, NegOrI3, NegOrEBi], &[AndER, NegOrER]);
    let dsfde_l = || replace(DSFDE, &[AndI2, AndEBi, NegOrI2, NegOrEBi], &[AndEL, NegOrEL]);
    let with = |mut rules: Vec<RuleId>, extra: RuleId| {
        rules.push(extra);
        rules
    };
    let rules = match system {
        NdpSfde => SFDE.to_vec(),
        NdpDSfde => DSFDE.to_vec(),
        NdpSfdeR => sfde_r(),
        NdpSfdeL => sfde_l(),
        NdDSfdeR => dsfde_r(),
        NdDSfdeRAlt => replace(
            DSFDE,
            &[AndI3, AndEBi, NegOrI3, NegOrEBi],
            &[AndERp, AndE1, NegOrERp, NegOrE1p],
        ),
        NdDSfdeL => dsfde_l(),
        NdDSfdeLAlt => replace(
            DSFDE,
            &[AndI2, AndEBi, NegOrI2, NegOrEBi],
            &[AndELp, AndE2, NegOrELp, NegOrE2p],
        ),
        NdpK3R => with(sfde_r(), Efq),
        NdpK3L => with(sfde_l(), Efq),
        NdpK3w => with(SFDE.to_vec(), Efq),
        NdpK3R2 => with(dsfde_r(), Em),
        NdpK3L2 => with(dsfde_l(), Em),
        NdpPwk => with(DSFDE.to_vec(), Em),
        NdFdep => vec![
            AndI, AndE1, AndE2, OrI1, OrI2, OrE, NegNegI, NegNegE, NegOrIp, NegOrE1p, NegOrE2p,
            NegAndI1, NegAndI2, NegAndEp,
        ],
    };
    rules.into_iter().collect()
}

impl SystemId {
    pub fn rules(self) -> &'static BTreeSet<RuleId> {
        static RULES: OnceLock<Vec<BTreeSet<RuleId>>> = OnceLock::new();
        let all = RULES.get_or_init(|| SystemId::ALL.iter().map(|&s| build_rules(s)).collect());
        &all[self as usize]
    }

    pub fn has_rule(self, rule: RuleId) -> bool {
        self.rules().contains(&rule)
    }

    /// The logic whose matrix the system is sound and complete for.
    pub fn logic(self) -> LogicId {
        use SystemId::*;
        match self {
            NdpSfde => LogicId::Sfde,
            NdpDSfde => LogicId::DSfde,
            NdpSfdeR => LogicId::SfdeR,
            NdpSfdeL => LogicId::SfdeL,
            NdDSfdeR | NdDSfdeRAlt => LogicId::DSfdeR,
            NdDSfdeL | NdDSfdeLAlt => LogicId::DSfdeL,
            NdpK3R => LogicId::K3R,
            NdpK3L => LogicId::K3L,
            NdpK3w => LogicId::K3w,
            NdpK3R2 => LogicId::K3R2,
            NdpK3L2 => LogicId::K3L2,
            NdpPwk => LogicId::Pwk,
            NdFdep => LogicId::Fde,
        }
    }

    pub fn has_efq(self) -> bool {
        self.has_rule(RuleId::Efq)
    }

    pub fn has_em(self) -> bool {
        self.has_rule(RuleId::Em)
    }
}

pub fn system_rules(system: SystemId) -> &'static BTreeSet<RuleId> {
    system.rules()
}

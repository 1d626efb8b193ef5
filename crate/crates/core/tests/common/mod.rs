//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use infectious_nd::calculus::{check_proof, parse_proof, Proof, SystemId};
use infectious_nd::normaliser::{atomise_efq, detour_reduce, em_finalise, find_redexes, permute_reduce, RedexKind};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn load(rel: &str) -> Proof {
    let path = fixture(rel);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_proof(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, Copy)]
pub enum Op {
    Detour,
    Permute,
    EmFinalise,
    AtomiseEfq,
}

/// Figure pairs: file stem, system, and the operation relating them.
pub const FIGURES: &[(&str, SystemId, Op)] = &[
    ("or_case1", SystemId::NdpSfde, Op::Detour),
    ("or_case2", SystemId::NdpSfde, Op::Detour),
    ("or_case3", SystemId::NdpSfde, Op::Detour),
    ("neg_and", SystemId::NdpSfde, Op::Detour),
    ("permute_or", SystemId::NdpSfde, Op::Permute),
    ("permute_neg_and", SystemId::NdpSfde, Op::Permute),
    ("em_final", SystemId::NdpPwk, Op::EmFinalise),
    ("efq_and", SystemId::NdpK3w, Op::AtomiseEfq),
    ("efq_neg_and", SystemId::NdpK3w, Op::AtomiseEfq),
];

/// Applies the figure's operation to "before" and compares with "after".
pub fn check_figure(name: &str, system: SystemId, op: Op) -> Result<(), String> {
    let before = load(&format!("figures/{name}.before.ndp"));
    let after = load(&format!("figures/{name}.after.ndp"));
    let jb = check_proof(system, &before).map_err(|e| format!("before does not check: {e}"))?;
    let ja = check_proof(system, &after).map_err(|e| format!("after does not check: {e}"))?;
    if jb.conclusion != ja.conclusion {
        return Err("before and after have different conclusions".into());
    }
    let single = |kind: RedexKind| {
        let rs: Vec<_> = find_redexes(&before).into_iter().filter(|r| r.kind == kind).collect();
        match rs.as_slice() {
            [r] => Ok(r.clone()),
            _ => Err(format!("expected one {kind:?} redex, found {}", rs.len())),
        }
    };
    let got = match op {
        Op::Detour => detour_reduce(system, &before, &single(RedexKind::Detour)?).map_err(|e| e.to_string())?,
        Op::Permute => permute_reduce(system, &before, &single(RedexKind::Permutation)?).map_err(|e| e.to_string())?,
        Op::EmFinalise => em_finalise(system, &before),
        Op::AtomiseEfq => atomise_efq(system, &before),
    };
    if got.alpha_eq(&after) {
        Ok(())
    } else {
        Err(format!("result differs from the expected proof:\n{got}"))
    }
}

//! Normalisation: redexes, ranks, conversions and the driver.

mod redex;
mod reduce;
mod transform;
mod nsp;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{check_proof, render_path, CheckError, Proof, SystemId};

pub use nsp::{check_nsp, NspReport};
pub use redex::{find_redexes, is_normal, rank, segments, select_redex, Rank, Redex, RedexKind, Segment};
pub use reduce::{detour_reduce, efq_reduce, find_efq_redexes, permute_reduce};
pub use transform::{atomise_efq, atomise_em, em_finalise, em_formula, efq_intro, is_em_final, prune_vacuous_em};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormaliseError {
    #[error("input does not check: {0}")]
    Invalid(#[from] CheckError),
    #[error("no {} redex at {}", .redex.kind, render_path(&.redex.position))]
    StaleRedex { redex: Redex },
    #[error("no contractum for the {} redex at {}", .redex.kind, render_path(&.redex.position))]
    NoContractum { redex: Redex },
    #[error("gave up after {cap} steps")]
    StepCapExceeded { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub redex: Redex,
    /// Rank of the proof after the step.
    pub rank: Rank,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalised {
    pub result: Proof,
    pub trace: Vec<Step>,
}

/// Applies one conversion of any kind.
pub fn reduce(system: SystemId, p: &Proof, r: &Redex) -> Result<Proof, NormaliseError> {
    match r.kind {
        RedexKind::Detour => detour_reduce(system, p, r),
        RedexKind::Permutation => permute_reduce(system, p, r),
        _ => efq_reduce(system, p, r),
    }
}

pub fn step_cap(p: &Proof) -> usize {
    let n = p.node_count();
    (10 * n * n).max(1000)
}

/// Atomic EFQ conclusions in systems with EFQ; atomic and final EM
/// applications in systems with EM. Other systems are left alone.
pub fn prepare(system: SystemId, p: &Proof) -> Proof {
    let p = atomise_efq(system, p);
    if system.has_em() {
        em_finalise(system, &atomise_em(system, &p))
    } else {
        p
    }
}

/// Normalises `p` in `system`. EFQ conclusions are first made atomic, EM
/// applications atomic and final; then the highest-degree redex with no
/// other such redex above it is reduced until none is left, followed by the
/// EFQ conversions.
pub fn normalise(system: SystemId, p: &Proof) -> Result<Normalised, NormaliseError> {
    check_proof(system, p)?;
    let mut cur = prepare(system, p);
    let cap = step_cap(p).max(step_cap(&cur));
    let mut trace = Vec::new();
    loop {
        let redexes = find_redexes(&cur);
        let next = match select_redex(&redexes) {
            Some(r) => Some(r.clone()),
            None => find_efq_redexes(&cur).into_iter().next(),
        };
        let Some(r) = next else {
            if system.has_em() {
                let tidy = em_finalise(system, &prune_vacuous_em(&cur));
                if tidy != cur {
                    cur = tidy;
                    continue;
                }
            }
            return Ok(Normalised { result: cur, trace });
        };
        if trace.len() >= cap {
            return Err(NormaliseError::StepCapExceeded { cap });
        }
        cur = reduce(system, &cur, &r)?;
        trace.push(Step { redex: r, rank: rank(&cur) });
    }
}

//! The negation subformula property.

use serde::Serialize;

use crate::calculus::{Path, Proof};
use crate::formula::negation_closure;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NspReport {
    pub holds: bool,
    /// Positions whose formula is neither a subformula of an open assumption
    /// or the conclusion nor the negation of one.
    pub violations: Vec<Path>,
}

pub fn check_nsp(p: &Proof) -> NspReport {
    let mut base = p.undischarged();
    base.push(p.conclusion().clone());
    let closure = negation_closure(&base);
    let violations: Vec<Path> = p
        .occurrences()
        .into_iter()
        .filter(|(_, f)| !closure.contains(*f))
        .map(|(path, _)| path)
        .collect();
    NspReport {
        holds: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_proof;

    #[test]
    fn assumption_holds() {
        assert!(check_nsp(&parse_proof(r#"(assume "p")"#).unwrap()).holds);
    }

    #[test]
    fn normal_disjunction_intro_holds() {
        let p = parse_proof(r#"(rule OrI1p ((assume "p") (assume "~q")))"#).unwrap();
        assert!(check_nsp(&p).holds);
    }

    #[test]
    fn foreign_detour_is_reported() {
        let p = parse_proof(r#"(rule AndE1 ((rule AndI ((assume "p") (assume "q")))))"#).unwrap();
        let report = check_nsp(&p);
        assert!(!report.holds);
        assert_eq!(report.violations, vec![vec![0]]);
    }
}

//! Natural-deduction systems: rule schemas, proofs, checking and the proof
//! file format.

pub mod check;
pub mod proof;
pub mod rules;
pub mod sexp;
pub mod soundness;

pub use check::{check_proof, check_step, infer_conclusion, render_path, Binding, CheckError, CheckErrorKind, Judgement};
pub use proof::{label, Assumption, Label, LabelSupply, Path, Proof, RuleApp};
pub use rules::{system_rules, PremiseSchema, RuleId, RuleKind, RuleSchema, SystemId};
pub use sexp::{parse_proof, render_proof, ProofParseError};

/// Undischarged assumption leaves of `p` as a sorted multiset.
pub fn undischarged(p: &Proof) -> Vec<crate::formula::Formula> {
    p.undischarged()
}

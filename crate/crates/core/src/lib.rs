//! Many-valued semantics, natural deduction and proof normalisation for the
//! infectious logics S_fde and dS_fde, their directional variants and their
//! three-valued restrictions.

pub mod calculus;
pub mod formula;
pub mod fuzz;
pub mod normaliser;
pub mod search;
pub mod semantics;

pub use formula::{parse_formula, Formula};
pub use semantics::{LogicId, TruthValue};

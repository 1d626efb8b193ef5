//! Four-valued truth values, the logic matrices, evaluation and brute-force
//! entailment.
//!
//! The four-valued infectious and directional matrices are literal tables in
//! the row/column order T, B, N, F. The three-valued matrices are built from
//! their usual functional definitions (strong Kleene, weak Kleene, left- and
//! right-sequential connectives) over the carrier {T,N,F} or {T,B,F}, so that
//! the restriction relationship with the four-valued tables is something the
//! tests check rather than something the code assumes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TruthValue {
    T,
    B,
    N,
    F,
}

use TruthValue::{B, F, N, T};

impl TruthValue {
    /// All four values in table order.
    pub const ALL: [TruthValue; 4] = [T, B, N, F];

    pub const fn index(self) -> usize {
        match self {
            T => 0,
            B => 1,
            N => 2,
            F => 3,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            T => 'T',
            B => 'B',
            N => 'N',
            F => 'F',
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for TruthValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" => Ok(T),
            "B" => Ok(B),
            "N" => Ok(N),
            "F" => Ok(F),
            other => Err(format!("unknown truth value {other:?}")),
        }
    }
}

macro_rules! logic_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// The logics with a matrix semantics. `R` stands for the rightward
        /// arrow variant, `L` for the leftward one.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum LogicId {
            $($variant),*
        }

        impl LogicId {
            pub const ALL: &'static [LogicId] = &[$(LogicId::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(LogicId::$variant => $name),*
                }
            }
        }

        impl FromStr for LogicId {
            type Err = UnknownName;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(LogicId::$variant),)*
                    other => Err(UnknownName { kind: "logic", name: other.to_string() }),
                }
            }
        }
    };
}

logic_ids! {
    Fde => "FDE",
    Sfde => "Sfde",
    DSfde => "dSfde",
    SfdeR => "SfdeR",
    SfdeL => "SfdeL",
    DSfdeR => "dSfdeR",
    DSfdeL => "dSfdeL",
    K3 => "K3",
    Lp => "LP",
    K3w => "K3w",
    Pwk => "PWK",
    K3R => "K3R",
    K3L => "K3L",
    K3R2 => "K3R2",
    K3L2 => "K3L2",
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} name {name:?}")]
pub struct UnknownName {
    pub kind: &'static str,
    pub name: String,
}

type Unary = [Option<TruthValue>; 4];
type Binary = [[Option<TruthValue>; 4]; 4];

/// A logical matrix: carrier, designated values and the three truth tables.
/// Table cells outside the carrier are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    carrier: Vec<TruthValue>,
    designated: Vec<TruthValue>,
    neg: Unary,
    and: Binary,
    or: Binary,
}

impl Matrix {
    fn from_fns(
        carrier: &[TruthValue],
        neg: impl Fn(TruthValue) -> TruthValue,
        and: impl Fn(TruthValue, TruthValue) -> TruthValue,
        or: impl Fn(TruthValue, TruthValue) -> TruthValue,
    ) -> Matrix {
        let mut m = Matrix {
            carrier: carrier.to_vec(),
            designated: carrier.iter().copied().filter(|v| matches!(v, T | B)).collect(),
            neg: [None; 4],
            and: [[None; 4]; 4],
            or: [[None; 4]; 4],
        };
        for &x in carrier {
            m.neg[x.index()] = Some(neg(x));
            for &y in carrier {
                m.and[x.index()][y.index()] = Some(and(x, y));
                m.or[x.index()][y.index()] = Some(or(x, y));
            }
        }
        m
    }

    fn from_tables(and: [[TruthValue; 4]; 4], or: [[TruthValue; 4]; 4]) -> Matrix {
        Matrix::from_fns(
            &TruthValue::ALL,
            belnap_neg,
            |x, y| and[x.index()][y.index()],
            |x, y| or[x.index()][y.index()],
        )
    }

    pub fn carrier(&self) -> &[TruthValue] {
        &self.carrier
    }

    pub fn designated(&self) -> &[TruthValue] {
        &self.designated
    }

    pub fn in_carrier(&self, x: TruthValue) -> bool {
        self.neg[x.index()].is_some()
    }

    pub fn is_designated(&self, x: TruthValue) -> bool {
        matches!(x, T | B) && self.in_carrier(x)
    }

    /// Panics if `x` is outside the carrier.
    pub fn neg(&self, x: TruthValue) -> TruthValue {
        self.neg[x.index()].expect("value outside carrier")
    }

    pub fn and(&self, x: TruthValue, y: TruthValue) -> TruthValue {
        self.and[x.index()][y.index()].expect("value outside carrier")
    }

    pub fn or(&self, x: TruthValue, y: TruthValue) -> TruthValue {
        self.or[x.index()][y.index()].expect("value outside carrier")
    }

    /// The matrix with every table restricted to `carrier`.
    pub fn restrict(&self, carrier: &[TruthValue]) -> Matrix {
        Matrix::from_fns(carrier, |x| self.neg(x), |x, y| self.and(x, y), |x, y| self.or(x, y))
    }
}

fn belnap_neg(x: TruthValue) -> TruthValue {
    match x {
        T => F,
        F => T,
        other => other,
    }
}

// Truth-order rank: F < {B, N} < T; B and N are incomparable.
fn fde_and(x: TruthValue, y: TruthValue) -> TruthValue {
    match (x, y) {
        (F, _) | (_, F) => F,
        (T, z) | (z, T) => z,
        (a, b) if a == b => a,
        _ => F,
    }
}

fn fde_or(x: TruthValue, y: TruthValue) -> TruthValue {
    match (x, y) {
        (T, _) | (_, T) => T,
        (F, z) | (z, F) => z,
        (a, b) if a == b => a,
        _ => T,
    }
}

// Classical connectives with `mid` as the third value, combined in one of
// three styles.
fn weak(mid: TruthValue, classical: fn(bool, bool) -> bool) -> impl Fn(TruthValue, TruthValue) -> TruthValue {
    move |x, y| {
        if x == mid || y == mid {
            mid
        } else if classical(x == T, y == T) {
            T
        } else {
            F
        }
    }
}

fn strong_and(x: TruthValue, y: TruthValue) -> TruthValue {
    match (x, y) {
        (F, _) | (_, F) => F,
        (T, z) | (z, T) => z,
        (z, _) => z,
    }
}

fn strong_or(x: TruthValue, y: TruthValue) -> TruthValue {
    match (x, y) {
        (T, _) | (_, T) => T,
        (F, z) | (z, F) => z,
        (z, _) => z,
    }
}

/// Left-to-right short-circuit evaluation: the left operand decides first.
fn left_and(mid: TruthValue) -> impl Fn(TruthValue, TruthValue) -> TruthValue {
    move |x, y| match x {
        T => y,
        F => F,
        _ => mid,
    }
}

fn left_or(mid: TruthValue) -> impl Fn(TruthValue, TruthValue) -> TruthValue {
    move |x, y| match x {
        T => T,
        F => y,
        _ => mid,
    }
}

fn right_and(mid: TruthValue) -> impl Fn(TruthValue, TruthValue) -> TruthValue {
    move |x, y| left_and(mid)(y, x)
}

fn right_or(mid: TruthValue) -> impl Fn(TruthValue, TruthValue) -> TruthValue {
    move |x, y| left_or(mid)(y, x)
}

const KLEENE_N: [TruthValue; 3] = [T, N, F];
const KLEENE_B: [TruthValue; 3] = [T, B, F];

// Four-valued tables, rows and columns in order T, B, N, F.
const SFDE_AND: [[TruthValue; 4]; 4] = [[T, B, N, F], [B, B, N, F], [N, N, N, N], [F, F, N, F]];
const SFDE_OR: [[TruthValue; 4]; 4] = [[T, T, N, T], [T, B, N, B], [N, N, N, N], [T, B, N, F]];
const DSFDE_AND: [[TruthValue; 4]; 4] = [[T, B, N, F], [B, B, B, B], [N, B, N, F], [F, B, F, F]];
const DSFDE_OR: [[TruthValue; 4]; 4] = [[T, B, T, T], [B, B, B, B], [T, B, N, N], [T, B, N, F]];
const SFDE_R_AND: [[TruthValue; 4]; 4] = [[T, B, N, F], [B, B, F, F], [N, N, N, N], [F, F, F, F]];
const SFDE_R_OR: [[TruthValue; 4]; 4] = [[T, T, T, T], [T, B, T, B], [N, N, N, N], [T, B, N, F]];
const SFDE_L_AND: [[TruthValue; 4]; 4] = [[T, B, N, F], [B, B, N, F], [N, F, N, F], [F, F, N, F]];
const SFDE_L_OR: [[TruthValue; 4]; 4] = [[T, T, N, T], [T, B, N, B], [T, T, N, N], [T, B, N, F]];
const DSFDE_R_AND: [[TruthValue; 4]; 4] = [[T, B, N, F], [B, B, B, B], [N, F, N, F], [F, F, F, F]];
const DSFDE_R_OR: [[TruthValue; 4]; 4] = [[T, T, T, T], [B, B, B, B], [T, T, N, N], [T, B, N, F]];
const DSFDE_L_AND: [[TruthValue; 4]; 4] = [[T, B, N, F], [B, B, F, F], [N, B, N, F], [F, B, F, F]];
// Row B, column N is printed as F in the source table. Every other cell is the
// transpose of the dSfdeR table, which gives T here, and with F the rule
// A / A | B would fail for A = B, B = N.
const DSFDE_L_OR: [[TruthValue; 4]; 4] = [[T, B, T, T], [T, B, T, B], [T, B, N, N], [T, B, N, F]];

fn build(id: LogicId) -> Matrix {
    use LogicId::*;
    match id {
        Fde => Matrix::from_fns(&TruthValue::ALL, belnap_neg, fde_and, fde_or),
        Sfde => Matrix::from_tables(SFDE_AND, SFDE_OR),
        DSfde => Matrix::from_tables(DSFDE_AND, DSFDE_OR),
        SfdeR => Matrix::from_tables(SFDE_R_AND, SFDE_R_OR),
        SfdeL => Matrix::from_tables(SFDE_L_AND, SFDE_L_OR),
        DSfdeR => Matrix::from_tables(DSFDE_R_AND, DSFDE_R_OR),
        DSfdeL => Matrix::from_tables(DSFDE_L_AND, DSFDE_L_OR),
        K3 => Matrix::from_fns(&KLEENE_N, belnap_neg, strong_and, strong_or),
        Lp => Matrix::from_fns(&KLEENE_B, belnap_neg, strong_and, strong_or),
        K3w => Matrix::from_fns(&KLEENE_N, belnap_neg, weak(N, |a, b| a && b), weak(N, |a, b| a || b)),
        Pwk => Matrix::from_fns(&KLEENE_B, belnap_neg, weak(B, |a, b| a && b), weak(B, |a, b| a || b)),
        K3R => Matrix::from_fns(&KLEENE_N, belnap_neg, left_and(N), left_or(N)),
        K3L => Matrix::from_fns(&KLEENE_N, belnap_neg, right_and(N), right_or(N)),
        K3R2 => Matrix::from_fns(&KLEENE_B, belnap_neg, left_and(B), left_or(B)),
        K3L2 => Matrix::from_fns(&KLEENE_B, belnap_neg, right_and(B), right_or(B)),
    }
}

/// The matrix for `id`.
pub fn logic_matrix(id: LogicId) -> &'static Matrix {
    static MATRICES: OnceLock<Vec<Matrix>> = OnceLock::new();
    let all = MATRICES.get_or_init(|| LogicId::ALL.iter().map(|&id| build(id)).collect());
    &all[id as usize]
}

impl LogicId {
    pub fn matrix(self) -> &'static Matrix {
        logic_matrix(self)
    }

    /// For a three-valued logic, the four-valued logic it restricts.
    pub fn restriction_of(self) -> Option<LogicId> {
        use LogicId::*;
        match self {
            K3R => Some(SfdeR),
            K3L => Some(SfdeL),
            K3w => Some(Sfde),
            K3R2 => Some(DSfdeR),
            K3L2 => Some(DSfdeL),
            Pwk => Some(DSfde),
            _ => None,
        }
    }
}

pub type Valuation = BTreeMap<Arc<str>, TruthValue>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("valuation does not assign variable {0:?}")]
    UnknownVariable(String),
    #[error("value {value} assigned to {var:?} is outside the carrier of {logic}")]
    OutsideCarrier {
        logic: LogicId,
        var: String,
        value: TruthValue,
    },
    #[error("{count} variables exceed the exhaustive-check limit of {limit}")]
    TooManyVariables { count: usize, limit: usize },
}

pub fn eval_formula(id: LogicId, v: &Valuation, f: &Formula) -> Result<TruthValue, SemanticsError> {
    let m = logic_matrix(id);
    for var in f.vars() {
        match v.get(&var) {
            None => return Err(SemanticsError::UnknownVariable(var.to_string())),
            Some(&x) if !m.in_carrier(x) => {
                return Err(SemanticsError::OutsideCarrier {
                    logic: id,
                    var: var.to_string(),
                    value: x,
                })
            }
            Some(_) => {}
        }
    }
    Ok(eval_unchecked(m, v, f))
}

fn eval_unchecked(m: &Matrix, v: &Valuation, f: &Formula) -> TruthValue {
    match f {
        Formula::Var(x) => v[x],
        Formula::Neg(a) => m.neg(eval_unchecked(m, v, a)),
        Formula::And(a, b) => m.and(eval_unchecked(m, v, a), eval_unchecked(m, v, b)),
        Formula::Or(a, b) => m.or(eval_unchecked(m, v, a), eval_unchecked(m, v, b)),
    }
}

/// Largest number of distinct variables [`entails`] will enumerate.
pub const MAX_ENTAILMENT_VARS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entailment {
    pub holds: bool,
    /// The first failing valuation in enumeration order, when `holds` is false.
    pub countermodel: Option<Valuation>,
}

// Formula compiled against a fixed variable numbering, for the hot loop.
enum Compiled {
    Var(usize),
    Neg(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn new(f: &Formula, vars: &[Arc<str>]) -> Compiled {
        match f {
            Formula::Var(x) => Compiled::Var(vars.binary_search(x).expect("variable indexed")),
            Formula::Neg(a) => Compiled::Neg(Box::new(Compiled::new(a, vars))),
            Formula::And(a, b) => Compiled::And(Box::new(Compiled::new(a, vars)), Box::new(Compiled::new(b, vars))),
            Formula::Or(a, b) => Compiled::Or(Box::new(Compiled::new(a, vars)), Box::new(Compiled::new(b, vars))),
        }
    }

    fn eval(&self, m: &Matrix, v: &[TruthValue]) -> TruthValue {
        match self {
            Compiled::Var(i) => v[*i],
            Compiled::Neg(a) => m.neg(a.eval(m, v)),
            Compiled::And(a, b) => m.and(a.eval(m, v), b.eval(m, v)),
            Compiled::Or(a, b) => m.or(a.eval(m, v), b.eval(m, v)),
        }
    }
}

/// Calls `visit` with every valuation of `vars` over the carrier of `id`, in
/// lexicographic order (first variable most significant, values T<B<N<F).
/// Stops early when `visit` returns false.
pub fn for_each_valuation(id: LogicId, vars: &[Arc<str>], mut visit: impl FnMut(&[TruthValue]) -> bool) {
    let carrier = logic_matrix(id).carrier();
    let k = carrier.len();
    let mut digits = vec![0usize; vars.len()];
    let mut vals: Vec<TruthValue> = vec![carrier[0]; vars.len()];
    loop {
        if !visit(&vals) {
            return;
        }
        // Increment from the least significant (last) variable.
        let mut i = vars.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < k {
                vals[i] = carrier[digits[i]];
                break;
            }
            digits[i] = 0;
            vals[i] = carrier[0];
        }
    }
}

/// Γ ⊨ Δ: every valuation designating all of `gamma` designates some member
/// of `delta`. An empty `delta` asks whether `gamma` is unsatisfiable.
pub fn entails(id: LogicId, gamma: &[Formula], delta: &[Formula]) -> Result<Entailment, SemanticsError> {
    let mut vars = BTreeSet::new();
    for f in gamma.iter().chain(delta) {
        f.collect_vars(&mut vars);
    }
    if vars.len() > MAX_ENTAILMENT_VARS {
        return Err(SemanticsError::TooManyVariables {
            count: vars.len(),
            limit: MAX_ENTAILMENT_VARS,
        });
    }
    let vars: Vec<Arc<str>> = vars.into_iter().collect();
    let m = logic_matrix(id);
    let gamma: Vec<Compiled> = gamma.iter().map(|f| Compiled::new(f, &vars)).collect();
    let delta: Vec<Compiled> = delta.iter().map(|f| Compiled::new(f, &vars)).collect();
    let mut counter = None;
    for_each_valuation(id, &vars, |v| {
        let premises = gamma.iter().all(|g| m.is_designated(g.eval(m, v)));
        if premises && !delta.iter().any(|d| m.is_designated(d.eval(m, v))) {
            counter = Some(vars.iter().cloned().zip(v.iter().copied()).collect());
            return false;
        }
        true
    });
    Ok(Entailment {
        holds: counter.is_none(),
        countermodel: counter,
    })
}

/// Whether `x` absorbs every connective of `id`: any argument tuple that
/// contains `x` evaluates to `x`.
pub fn is_infectious_value(id: LogicId, x: TruthValue) -> bool {
    let m = logic_matrix(id);
    if !m.in_carrier(x) || m.neg(x) != x {
        return false;
    }
    m.carrier()
        .iter()
        .all(|&y| m.and(x, y) == x && m.and(y, x) == x && m.or(x, y) == x && m.or(y, x) == x)
}

pub fn infectious_values(id: LogicId) -> Vec<TruthValue> {
    logic_matrix(id)
        .carrier()
        .iter()
        .copied()
        .filter(|&x| is_infectious_value(id, x))
        .collect()
}

//! Propositional formulas over `~`, `&` and `|`.
//!
//! Formulas are immutable trees with shared children, so cloning is cheap and
//! values can be sent across threads. Parsing accepts both the ASCII spelling
//! (`~`, `&`, `|`) and the Unicode one (`¬`, `∧`, `∨`); rendering always uses
//! ASCII with the minimum number of parentheses.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Arc<str>),
    Neg(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    /// Builds a variable. Panics if `name` is not a valid identifier; use
    /// [`parse_formula`] for untrusted input.
    pub fn var(name: &str) -> Formula {
        assert!(is_identifier(name), "invalid variable name {name:?}");
        Formula::Var(Arc::from(name))
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Arc::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    /// A variable or the negation of a variable.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Neg(inner) => inner.is_var(),
            _ => false,
        }
    }

    /// The operand of a negation, if this is one.
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Neg(inner) => Some(inner),
            _ => None,
        }
    }

    /// Number of connective occurrences (negations included).
    pub fn degree(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Neg(a) => 1 + a.degree(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.degree() + b.degree(),
        }
    }

    /// Nesting depth; variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Neg(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        self.degree() + self.leaf_count()
    }

    fn leaf_count(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Neg(a) => a.leaf_count(),
            Formula::And(a, b) | Formula::Or(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Neg(a) => a.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Var(_) => {}
            Formula::Neg(a) => a.collect_subformulas(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// Reflexive-transitive subterm closure of `f`.
pub fn subformulas(f: &Formula) -> BTreeSet<Formula> {
    f.subformulas()
}

/// Subformulas of the given formulas together with their negations.
pub fn negation_closure<'a, I>(fs: I) -> BTreeSet<Formula>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut subs = BTreeSet::new();
    for f in fs {
        f.collect_subformulas(&mut subs);
    }
    let negs: Vec<Formula> = subs.iter().map(|g| Formula::neg(g.clone())).collect();
    subs.extend(negs);
    subs
}

pub fn degree(f: &Formula) -> usize {
    f.degree()
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

// Binding strength used by the printer: `|` < `&` < `~`.
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NEG: u8 = 3;

impl Formula {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let own = match self {
            Formula::Var(_) => u8::MAX,
            Formula::Neg(_) => PREC_NEG,
            Formula::And(..) => PREC_AND,
            Formula::Or(..) => PREC_OR,
        };
        let parens = own < ctx;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(v) => f.write_str(v)?,
            Formula::Neg(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, PREC_NEG)?;
            }
            // Left-associative: the right operand needs one level tighter.
            Formula::And(a, b) => {
                a.fmt_prec(f, PREC_AND)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, PREC_AND + 1)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, PREC_OR)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, PREC_OR + 1)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct ParseError {
    /// Character offset into the input.
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Formula::Var(Arc::from(name.as_str())))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.disjunction()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses the textual formula grammar: `~`/`¬` (prefix, tightest), then
/// `&`/`∧`, then `|`/`∨`, both left-associative.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError {
            pos: 0,
            msg: "empty formula".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: text.chars().count(),
    };
    let f = p.disjunction()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Every formula over `vars` of depth at most `max_depth`, ordered by depth
/// and then structurally.
pub fn formulas_up_to_depth(vars: &[&str], max_depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = vars.iter().map(|v| Formula::var(v)).collect();
    for _ in 0..max_depth {
        let prev = all.clone();
        let mut next: Vec<Formula> = vars.iter().map(|v| Formula::var(v)).collect();
        next.extend(prev.iter().map(|a| Formula::neg(a.clone())));
        for a in &prev {
            for b in &prev {
                next.push(Formula::and(a.clone(), b.clone()));
            }
        }
        for a in &prev {
            for b in &prev {
                next.push(Formula::or(a.clone(), b.clone()));
            }
        }
        all = next;
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn bounded_enumeration() {
        assert_eq!(formulas_up_to_depth(&["p", "q"], 0).len(), 2);
        let one = formulas_up_to_depth(&["p", "q"], 1);
        assert_eq!(one.len(), 12);
        let two = formulas_up_to_depth(&["p", "q"], 2);
        assert_eq!(two.len(), 302);
        let distinct: BTreeSet<_> = two.iter().collect();
        assert_eq!(distinct.len(), 302);
        assert!(two.iter().all(|g| g.depth() <= 2));
    }

    fn p() -> Formula {
        Formula::var("p")
    }
    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn parses_negated_conjunction() {
        assert_eq!(f("~(p & q)"), Formula::neg(Formula::and(p(), q())));
    }

    #[test]
    fn conjunction_binds_tighter_than_disjunction() {
        let r = Formula::var("r");
        assert_eq!(f("p | q & r"), Formula::or(p(), Formula::and(q(), r)));
    }

    #[test]
    fn double_negation_is_kept() {
        assert_eq!(f("~~p"), Formula::neg(Formula::neg(p())));
    }

    #[test]
    fn unicode_spelling() {
        assert_eq!(f("¬(p ∧ q) ∨ q"), f("~(p & q) | q"));
    }

    #[test]
    fn left_associative() {
        assert_eq!(f("p | q | r"), Formula::or(Formula::or(p(), q()), Formula::var("r")));
        assert_eq!(f("p | q | r").to_string(), "p | q | r");
        assert_eq!(f("p | (q | r)").to_string(), "p | (q | r)");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_formula("p & ").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_formula("p $ q").unwrap_err();
        assert_eq!(e.pos, 2);
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("").is_err());
        assert!(parse_formula("   ").is_err());
    }

    #[test]
    fn degree_counts_connectives() {
        assert_eq!(degree(&p()), 0);
        assert_eq!(degree(&f("~(p & q)")), 2);
        assert_eq!(degree(&f("~p | ~q")), 3);
    }

    #[test]
    fn subformula_sets() {
        assert_eq!(subformulas(&p()), BTreeSet::from([p()]));
        assert_eq!(
            subformulas(&f("p & ~q")),
            BTreeSet::from([f("p & ~q"), p(), f("~q"), q()])
        );
        assert_eq!(subformulas(&f("~~p")), BTreeSet::from([f("~~p"), f("~p"), p()]));
    }

    #[test]
    fn negation_closure_examples() {
        assert_eq!(negation_closure([&p()]), BTreeSet::from([p(), f("~p")]));
        assert_eq!(
            negation_closure([&f("p | q")]),
            BTreeSet::from([f("p | q"), p(), q(), f("~(p | q)"), f("~p"), f("~q")])
        );
        assert!(negation_closure(std::iter::empty()).is_empty());
    }

    #[test]
    fn literals() {
        assert!(p().is_literal());
        assert!(f("~p").is_literal());
        assert!(!f("~~p").is_literal());
        assert!(!f("p & q").is_literal());
    }
}

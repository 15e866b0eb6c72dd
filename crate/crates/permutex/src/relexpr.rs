//! Expression trees over named arrows under composition and opposite,
//! an evaluator against a concrete environment, and a replayer that
//! semantically checks equational derivation chains.
//!
//! Script grammar (one expression per line, `#` starts a comment):
//!
//! ```text
//! expr := comp(expr, expr)   composition: first argument applied first
//!                            (right-to-left notation writes this "ba")
//!       | op(expr)           opposite
//!       | id(NAME)           identity relation on a named carrier
//!       | NAME               a named arrow or relation
//! ```

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::relcore::{Carrier, FunctionArrow, RelError, Relation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelExpr {
    Arrow(String),
    Op(Box<RelExpr>),
    /// `Comp(a, b)`: the relation obtained by following `a` and then
    /// `b`; written `ba` in juxtaposition notation.
    Comp(Box<RelExpr>, Box<RelExpr>),
    Id(String),
}

impl RelExpr {
    pub fn arrow(name: &str) -> Self {
        RelExpr::Arrow(name.to_string())
    }

    pub fn op(e: RelExpr) -> Self {
        RelExpr::Op(Box::new(e))
    }

    pub fn comp(first: RelExpr, then: RelExpr) -> Self {
        RelExpr::Comp(Box::new(first), Box::new(then))
    }

    pub fn id(carrier: &str) -> Self {
        RelExpr::Id(carrier.to_string())
    }

    /// Right-to-left juxtaposition chain `c b a` = apply `a`, then `b`,
    /// then `c`; convenience for transcribing proof lines.
    pub fn juxt(factors: &[RelExpr]) -> Self {
        let mut it = factors.iter().rev().cloned();
        let first = it.next().expect("juxt of at least one factor");
        it.fold(first, RelExpr::comp)
    }
}

impl fmt::Display for RelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelExpr::Arrow(n) => write!(f, "{n}"),
            RelExpr::Op(e) => write!(f, "op({e})"),
            RelExpr::Comp(a, b) => write!(f, "comp({a}, {b})"),
            RelExpr::Id(c) => write!(f, "id({c})"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("unresolved name `{0}`")]
    UnresolvedName(String),
    #[error("unresolved carrier `{0}`")]
    UnresolvedCarrier(String),
    #[error("dimension mismatch in `{expr}`: {source}")]
    Dimension { expr: String, source: RelError },
    #[error("expressions evaluate to differently shaped relations")]
    ShapeMismatch,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("a derivation needs at least two expressions, got {0}")]
    TooShort(usize),
    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<ExprError> },
}

/// Named arrows/relations and named carriers an expression is
/// evaluated against.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    relations: BTreeMap<String, Relation>,
    carriers: BTreeMap<String, Carrier>,
}

impl Environment {
    pub fn new() -> Self {
        Environment::default()
    }

    pub fn bind_arrow(&mut self, name: &str, f: &FunctionArrow) {
        self.relations.insert(name.to_string(), f.graph());
    }

    pub fn bind_relation(&mut self, name: &str, r: Relation) {
        self.relations.insert(name.to_string(), r);
    }

    pub fn bind_carrier(&mut self, name: &str, c: Carrier) {
        self.carriers.insert(name.to_string(), c);
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }
}

pub fn evaluate(e: &RelExpr, env: &Environment) -> Result<Relation, ExprError> {
    match e {
        RelExpr::Arrow(name) => env
            .relations
            .get(name)
            .cloned()
            .ok_or_else(|| ExprError::UnresolvedName(name.clone())),
        RelExpr::Id(cname) => env
            .carriers
            .get(cname)
            .map(|&c| Relation::identity(c))
            .ok_or_else(|| ExprError::UnresolvedCarrier(cname.clone())),
        RelExpr::Op(inner) => Ok(evaluate(inner, env)?.opposite()),
        RelExpr::Comp(first, then) => {
            let a = evaluate(first, env)?;
            let b = evaluate(then, env)?;
            a.compose(&b).map_err(|source| ExprError::Dimension {
                expr: e.to_string(),
                source,
            })
        }
    }
}

/// Strict equality of the two evaluated matrices.
pub fn check_identity(lhs: &RelExpr, rhs: &RelExpr, env: &Environment) -> Result<bool, ExprError> {
    let l = evaluate(lhs, env)?;
    let r = evaluate(rhs, env)?;
    if l.src() != r.src() || l.dst() != r.dst() {
        return Err(ExprError::ShapeMismatch);
    }
    Ok(l == r)
}

/// An ordered chain of expressions claimed pairwise equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<(RelExpr, Option<String>)>,
}

impl Derivation {
    pub fn new(steps: Vec<(RelExpr, Option<String>)>) -> Result<Self, ExprError> {
        if steps.len() < 2 {
            return Err(ExprError::TooShort(steps.len()));
        }
        Ok(Derivation { steps })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepCheck {
    /// 1-based index of the adjacent pair.
    pub index: usize,
    pub equal: bool,
    /// First differing matrix cell when unequal.
    pub first_diff: Option<(usize, usize)>,
    pub justification: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationReport {
    pub steps: Vec<StepCheck>,
}

impl DerivationReport {
    pub fn verdict(&self) -> bool {
        self.steps.iter().all(|s| s.equal)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.steps.iter().find(|s| !s.equal).map(|s| s.index)
    }
}

/// Evaluates every line and compares each adjacent pair.
pub fn check_derivation(d: &Derivation, env: &Environment) -> Result<DerivationReport, ExprError> {
    let mut values = Vec::with_capacity(d.steps.len());
    for (i, (expr, _)) in d.steps.iter().enumerate() {
        let v = evaluate(expr, env).map_err(|e| ExprError::Step {
            step: i + 1,
            source: Box::new(e),
        })?;
        values.push(v);
    }
    let mut steps = Vec::new();
    for i in 1..values.len() {
        let (prev, cur) = (&values[i - 1], &values[i]);
        let same_shape = prev.src() == cur.src() && prev.dst() == cur.dst();
        let (equal, first_diff) = if !same_shape {
            (false, Some((0, 0)))
        } else if prev == cur {
            (true, None)
        } else {
            (false, prev.first_difference(cur))
        };
        steps.push(StepCheck {
            index: i,
            equal,
            first_diff,
            justification: d.steps[i].1.clone(),
        });
    }
    Ok(DerivationReport { steps })
}

// ---------------------------------------------------------------------------
// parsing

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, line: usize) -> Self {
        Parser {
            input: input.as_bytes(),
            pos: 0,
            line,
        }
    }

    fn error(&self, message: &str) -> ExprError {
        ExprError::Parse {
            line: self.line,
            message: format!("{message} (column {})", self.pos + 1),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, ch: u8) -> Result<(), ExprError> {
        self.skip_ws();
        if self.pos < self.input.len() && self.input[self.pos] == ch {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", ch as char)))
        }
    }

    fn ident(&mut self) -> Result<String, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len()
            && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an identifier"));
        }
        Ok(std::str::from_utf8(&self.input[start..self.pos])
            .expect("ascii input")
            .to_string())
    }

    fn expr(&mut self) -> Result<RelExpr, ExprError> {
        let name = self.ident()?;
        match name.as_str() {
            "comp" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                Ok(RelExpr::comp(a, b))
            }
            "op" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b')')?;
                Ok(RelExpr::op(a))
            }
            "id" => {
                self.expect(b'(')?;
                let c = self.ident()?;
                self.expect(b')')?;
                Ok(RelExpr::Id(c))
            }
            _ => Ok(RelExpr::Arrow(name)),
        }
    }

    fn finish(mut self, e: RelExpr) -> Result<RelExpr, ExprError> {
        self.skip_ws();
        if self.pos != self.input.len() {
            return Err(self.error("trailing input after expression"));
        }
        Ok(e)
    }
}

pub fn parse_expr(input: &str) -> Result<RelExpr, ExprError> {
    parse_expr_at(input, 1)
}

fn parse_expr_at(input: &str, line: usize) -> Result<RelExpr, ExprError> {
    let mut p = Parser::new(input, line);
    let e = p.expr()?;
    p.finish(e)
}

/// Parses a derivation script: one expression per line; lines starting
/// with `#` are comments; a trailing `#` on an expression line carries
/// the step justification.
pub fn parse_derivation(text: &str) -> Result<Derivation, ExprError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (expr_part, justification) = match line.split_once('#') {
            Some((e, j)) => (e.trim(), Some(j.trim().to_string())),
            None => (line, None),
        };
        steps.push((parse_expr_at(expr_part, i + 1)?, justification));
    }
    Derivation::new(steps)
}

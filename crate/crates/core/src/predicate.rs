use std::fmt;

use serde::{Deserialize, Serialize};

/// Comparison operator of a single-variable predicate.
///
/// The learners only emit `Eq` and `Ge`; the rest exist so that hand-written
/// trees can use the natural form of a test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Op {
    pub fn apply(self, lhs: u64, rhs: u64) -> bool {
        match self {
            Op::Eq => lhs == rhs,
            Op::Ne => lhs != rhs,
            Op::Lt => lhs < rhs,
            Op::Le => lhs <= rhs,
            Op::Gt => lhs > rhs,
            Op::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Eq => "=",
            Op::Ne => "!=",
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Eq => "eq",
            Op::Ne => "ne",
            Op::Lt => "lt",
            Op::Le => "le",
            Op::Gt => "gt",
            Op::Ge => "ge",
        }
    }

    pub fn from_name(name: &str) -> Option<Op> {
        Some(match name {
            "eq" => Op::Eq,
            "ne" => Op::Ne,
            "lt" => Op::Lt,
            "le" => Op::Le,
            "gt" => Op::Gt,
            "ge" => Op::Ge,
            _ => return None,
        })
    }
}

/// `x[var] <op> constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predicate {
    pub var: usize,
    pub op: Op,
    pub constant: u64,
}

impl Predicate {
    pub fn new(var: usize, op: Op, constant: u64) -> Self {
        Predicate { var, op, constant }
    }

    pub fn eq(var: usize, constant: u64) -> Self {
        Self::new(var, Op::Eq, constant)
    }

    pub fn ge(var: usize, constant: u64) -> Self {
        Self::new(var, Op::Ge, constant)
    }

    /// Panics if `x` is shorter than `var + 1`; callers check arity first.
    pub fn holds(&self, x: &[u64]) -> bool {
        self.op.apply(x[self.var], self.constant)
    }

    /// Renders the predicate with a variable name, e.g. `x1 < 4`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayNamed { p: self, names }
    }
}

struct DisplayNamed<'a> {
    p: &'a Predicate,
    names: &'a [String],
}

impl fmt::Display for DisplayNamed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.names.get(self.p.var) {
            Some(name) => write!(f, "{} {} {}", name, self.p.op.symbol(), self.p.constant),
            None => write!(f, "x{} {} {}", self.p.var + 1, self.p.op.symbol(), self.p.constant),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{} {} {}", self.var + 1, self.op.symbol(), self.constant)
    }
}

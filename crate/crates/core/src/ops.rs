//! Constants and primitive operators shared by both calculi.

use std::fmt;

use crate::types::Base;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lit {
    Int(i64),
    Bool(bool),
}

impl Lit {
    pub fn base(self) -> Base {
        match self {
            Lit::Int(_) => Base::Int,
            Lit::Bool(_) => Base::Bool,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lit::Int(n) => write!(f, "{n}"),
            Lit::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Eq,
    Lt,
}

impl Op {
    pub const ALL: [Op; 5] = [Op::Add, Op::Sub, Op::Mul, Op::Eq, Op::Lt];

    /// Operand and result base types; every operator takes two integers.
    pub fn signature(self) -> (Base, Base, Base) {
        match self {
            Op::Add | Op::Sub | Op::Mul => (Base::Int, Base::Int, Base::Int),
            Op::Eq | Op::Lt => (Base::Int, Base::Int, Base::Bool),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Eq => "=",
            Op::Lt => "<",
        }
    }

    /// The δ function. Arithmetic wraps, so δ is total on well-typed pairs.
    pub fn delta(self, a: Lit, b: Lit) -> Option<Lit> {
        let (Lit::Int(x), Lit::Int(y)) = (a, b) else {
            return None;
        };
        Some(match self {
            Op::Add => Lit::Int(x.wrapping_add(y)),
            Op::Sub => Lit::Int(x.wrapping_sub(y)),
            Op::Mul => Lit::Int(x.wrapping_mul(y)),
            Op::Eq => Lit::Bool(x == y),
            Op::Lt => Lit::Bool(x < y),
        })
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

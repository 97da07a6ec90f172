//! The small-step evaluator of λSx.
//!
//! Evaluation is call-by-value and left to right; continuation coercions are
//! ordinary values, so no special context grammar is needed.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use super::subst::substitute_many;
use super::term::{ProgramX, TermX, Tx};
use crate::coercion::{BlameLabel, Coercion, CoercionX};
use crate::lam_s::{Kind, Outcome};
use crate::name::{fresh, Name};
use crate::ops::Lit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleX {
    Op,
    Beta,
    Wrap,
    Unfold,
    IfTrue,
    IfFalse,
    Let,
    Cmp,
    Id,
    Fail,
    Crc,
    MergeV,
    Abort,
}

impl RuleX {
    pub fn name(self) -> &'static str {
        match self {
            RuleX::Op => "R-Op",
            RuleX::Beta => "R-Beta",
            RuleX::Wrap => "R-Wrap",
            RuleX::Unfold => "R-Unfold",
            RuleX::IfTrue => "R-IfTrue",
            RuleX::IfFalse => "R-IfFalse",
            RuleX::Let => "R-Let",
            RuleX::Cmp => "R-Cmp",
            RuleX::Id => "R-Id",
            RuleX::Fail => "R-Fail",
            RuleX::Crc => "R-Crc",
            RuleX::MergeV => "R-MergeV",
            RuleX::Abort => "E-Abort",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            RuleX::Op
            | RuleX::Beta
            | RuleX::Wrap
            | RuleX::Unfold
            | RuleX::IfTrue
            | RuleX::IfFalse
            | RuleX::Abort => Kind::E,
            RuleX::Let | RuleX::Cmp | RuleX::Id | RuleX::Fail | RuleX::Crc | RuleX::MergeV => Kind::C,
        }
    }
}

impl fmt::Display for RuleX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameX {
    OpL,
    OpR,
    AppFun,
    AppArg,
    AppCrc,
    LetBound,
    CmpL,
    CmpR,
    CrcSubj,
    CrcArg,
    IfCond,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepX {
    pub kind: Kind,
    pub rule: RuleX,
    pub next: TermX,
    pub path: Vec<FrameX>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResultX {
    Stepped(StepX),
    IsValue(TermX),
    IsBlame(BlameLabel),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("stuck at {path:?}: {reason}")]
pub struct StuckX {
    pub path: Vec<FrameX>,
    pub reason: String,
}

enum Local {
    Value,
    Blame(BlameLabel),
    Reduced(RuleX, TermX),
    Abort(BlameLabel),
}

struct Walker<'p> {
    program: &'p ProgramX,
    path: Vec<FrameX>,
}

/// Evaluates the listed children in order, rebuilding the node on a step.
macro_rules! visit {
    ($w:expr, $($frame:expr, $child:expr => $rebuild:expr;)+) => {
        $(
            match $w.child($frame, $child)? {
                Local::Value => {}
                Local::Blame(p) | Local::Abort(p) => return Ok(Local::Abort(p)),
                Local::Reduced(rule, n) => {
                    let rebuild: &dyn Fn(TermX) -> Tx = &$rebuild;
                    return Ok(Local::Reduced(rule, Rc::new(rebuild(n))));
                }
            }
        )+
    };
}

impl Walker<'_> {
    fn stuck(&self, reason: impl Into<String>) -> StuckX {
        StuckX { path: self.path.clone(), reason: reason.into() }
    }

    fn child(&mut self, frame: FrameX, m: &TermX) -> Result<Local, StuckX> {
        self.path.push(frame);
        let r = self.go(m)?;
        if matches!(r, Local::Value) {
            self.path.pop();
        }
        Ok(r)
    }

    fn go(&mut self, m: &TermX) -> Result<Local, StuckX> {
        match &**m {
            Tx::Blame(p) => Ok(Local::Blame(p.clone())),
            t if t.is_value() => Ok(Local::Value),
            Tx::Op(op, l, r) => {
                visit!(self,
                    FrameX::OpL, l => |n| Tx::Op(*op, n, r.clone());
                    FrameX::OpR, r => |n| Tx::Op(*op, l.clone(), n);
                );
                match (&**l, &**r) {
                    (Tx::Const(a), Tx::Const(b)) => match op.delta(*a, *b) {
                        Some(c) => Ok(Local::Reduced(RuleX::Op, Rc::new(Tx::Const(c)))),
                        None => Err(self.stuck(format!("δ undefined for {op} on {a}, {b}"))),
                    },
                    _ => Err(self.stuck(format!("operands of {op} are not constants"))),
                }
            }
            Tx::App2(f, a, k) => {
                visit!(self,
                    FrameX::AppFun, f => |n| Tx::App2(n, a.clone(), k.clone());
                    FrameX::AppArg, a => |n| Tx::App2(f.clone(), n, k.clone());
                    FrameX::AppCrc, k => |n| Tx::App2(f.clone(), a.clone(), n);
                );
                self.apply(f, a, k)
            }
            Tx::Let(x, bound, body) => {
                visit!(self, FrameX::LetBound, bound => |n| Tx::Let(x.clone(), n, body.clone()););
                Ok(Local::Reduced(RuleX::Let, substitute_many(body, &[(x.clone(), bound.clone())])))
            }
            Tx::Compose(l, r) => {
                visit!(self,
                    FrameX::CmpL, l => |n| Tx::Compose(n, r.clone());
                    FrameX::CmpR, r => |n| Tx::Compose(l.clone(), n);
                );
                match (&**l, &**r) {
                    (Tx::CrcLit(s), Tx::CrcLit(t)) => {
                        let st = s.compose(t).map_err(|e| self.stuck(e.to_string()))?;
                        Ok(Local::Reduced(RuleX::Cmp, Rc::new(Tx::CrcLit(st))))
                    }
                    _ => Err(self.stuck("composing values that are not coercions")),
                }
            }
            Tx::CrcApp(n, k) => {
                visit!(self,
                    FrameX::CrcSubj, n => |n2| Tx::CrcApp(n2, k.clone());
                    FrameX::CrcArg, k => |k2| Tx::CrcApp(n.clone(), k2);
                );
                match &**k {
                    Tx::CrcLit(t) => self.coerce_value(n, t),
                    _ => Err(self.stuck("coercing by a value that is not a coercion")),
                }
            }
            Tx::If(c, t, e) => {
                visit!(self, FrameX::IfCond, c => |n| Tx::If(n, t.clone(), e.clone()););
                match &**c {
                    Tx::Const(Lit::Bool(true)) => Ok(Local::Reduced(RuleX::IfTrue, t.clone())),
                    Tx::Const(Lit::Bool(false)) => Ok(Local::Reduced(RuleX::IfFalse, e.clone())),
                    _ => Err(self.stuck("condition is not a boolean")),
                }
            }
            _ => Err(self.stuck("no rule applies")),
        }
    }

    fn apply(&self, f: &TermX, a: &TermX, k: &TermX) -> Result<Local, StuckX> {
        match &**f {
            Tx::Abs2 { x, k: kx, body, .. } => {
                let sigma = [(x.clone(), a.clone()), (kx.clone(), k.clone())];
                Ok(Local::Reduced(RuleX::Beta, substitute_many(body, &sigma)))
            }
            Tx::GlobalRef(g) => match self.program.def(g) {
                Some(d) => Ok(Local::Reduced(RuleX::Unfold, Rc::new(Tx::App2(d.as_abs(), a.clone(), k.clone())))),
                None => Err(self.stuck(format!("unknown function {g}"))),
            },
            Tx::CoercedVal(u, Coercion::Fun(s, t)) => {
                let mut avoid = std::collections::BTreeSet::new();
                for n in [u, a, k] {
                    n.all_names(&mut avoid);
                }
                let kappa: Name = fresh("k", &avoid);
                let bound = Rc::new(Tx::Compose(Rc::new(Tx::CrcLit((**t).clone())), k.clone()));
                let arg = Rc::new(Tx::CrcApp(a.clone(), Rc::new(Tx::CrcLit((**s).clone()))));
                let call = Rc::new(Tx::App2(u.clone(), arg, Rc::new(Tx::Var(kappa.clone()))));
                Ok(Local::Reduced(RuleX::Wrap, Rc::new(Tx::Let(kappa, bound, call))))
            }
            Tx::CoercedVal(_, d) => Err(self.stuck(format!("applying a value coerced by {d}"))),
            _ => Err(self.stuck("applying a non-function")),
        }
    }

    fn coerce_value(&self, v: &TermX, t: &CoercionX) -> Result<Local, StuckX> {
        if let Tx::CoercedVal(u, d) = &**v {
            let dt = Rc::new(Tx::Compose(Rc::new(Tx::CrcLit(d.clone())), Rc::new(Tx::CrcLit(t.clone()))));
            return Ok(Local::Reduced(RuleX::MergeV, Rc::new(Tx::CrcApp(u.clone(), dt))));
        }
        if !v.is_uncoerced_value() {
            return Err(self.stuck("coercing an open term"));
        }
        match t {
            Coercion::IdStar | Coercion::Id(_) => Ok(Local::Reduced(RuleX::Id, v.clone())),
            Coercion::Fail(_, p, _) => Ok(Local::Reduced(RuleX::Fail, Rc::new(Tx::Blame(p.clone())))),
            Coercion::InjSeq(..) | Coercion::Fun(..) => {
                Ok(Local::Reduced(RuleX::Crc, Rc::new(Tx::CoercedVal(v.clone(), t.clone()))))
            }
            Coercion::ProjSeq(..) => Err(self.stuck(format!("projection {t} on an uncoerced value"))),
        }
    }
}

/// Performs one step of `↦Sx`.
pub fn step_x(program: &ProgramX, m: &TermX) -> Result<StepResultX, StuckX> {
    let mut w = Walker { program, path: Vec::new() };
    Ok(match w.go(m)? {
        Local::Value => StepResultX::IsValue(m.clone()),
        Local::Blame(p) => StepResultX::IsBlame(p),
        Local::Abort(p) => StepResultX::Stepped(StepX {
            kind: Kind::E,
            rule: RuleX::Abort,
            next: Rc::new(Tx::Blame(p)),
            path: w.path,
        }),
        Local::Reduced(rule, next) => StepResultX::Stepped(StepX { kind: rule.kind(), rule, next, path: w.path }),
    })
}

pub fn run_x(
    program: &ProgramX,
    m: &TermX,
    fuel: u64,
    mut observe: impl FnMut(&TermX, &StepX),
) -> Result<Outcome<TermX>, StuckX> {
    let mut cur = m.clone();
    for _ in 0..fuel {
        match step_x(program, &cur)? {
            StepResultX::IsValue(v) => return Ok(Outcome::Result(v)),
            StepResultX::IsBlame(p) => return Ok(Outcome::Blamed(p)),
            StepResultX::Stepped(s) => {
                observe(&cur, &s);
                cur = s.next;
            }
        }
    }
    Ok(match step_x(program, &cur)? {
        StepResultX::IsValue(v) => Outcome::Result(v),
        StepResultX::IsBlame(p) => Outcome::Blamed(p),
        StepResultX::Stepped(_) => Outcome::OutOfFuel,
    })
}

pub fn evaluate_x(program: &ProgramX, m: &TermX, fuel: u64) -> Result<Outcome<TermX>, StuckX> {
    run_x(program, m, fuel, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lam_sx::term::*;
    use crate::ops::Op;
    use crate::types::{Ground, TypeX};

    fn p() -> BlameLabel {
        BlameLabel::new("p")
    }

    fn example_u() -> TermX {
        let body = let_(
            "k1",
            compose(lit(CoercionX::inj(Ground::INT)), var("k")),
            crc(op(Op::Add, crc(var("x"), lit(CoercionX::proj(Ground::INT, &p()))), int(2)), var("k1")),
        );
        abs2("x", TypeX::Dyn, "k", TypeX::Dyn, body)
    }

    #[test]
    fn translated_example_reaches_five() {
        let f = CoercionX::mk_fun(CoercionX::inj(Ground::INT), CoercionX::proj(Ground::INT, &p()));
        let m = app2(coerced(example_u(), f), int(3), lit(CoercionX::inj(Ground::INT)));
        let mut rules = Vec::new();
        let out = run_x(&ProgramX::default(), &m, 100, |_, s| rules.push(s.rule.name())).unwrap();
        assert_eq!(out, Outcome::Result(coerced(int(5), CoercionX::inj(Ground::INT))));
        assert_eq!(rules[0], "R-Wrap");
        assert!(rules.contains(&"R-MergeV"));
    }

    #[test]
    fn wrap_binds_a_fresh_continuation() {
        let f = CoercionX::mk_fun(CoercionX::inj(Ground::INT), CoercionX::proj(Ground::INT, &p()));
        let m = app2(coerced(example_u(), f), int(3), var("k"));
        let StepResultX::Stepped(s) = step_x(&ProgramX::default(), &m).unwrap() else { panic!() };
        let Tx::Let(kappa, _, _) = &*s.next else { panic!("expected a let") };
        assert!(&**kappa != "k" && &**kappa != "k1");
    }

    #[test]
    fn let_and_compose_are_bookkeeping() {
        let m = let_("j", compose(lit(CoercionX::inj(Ground::INT)), lit(CoercionX::IdStar)), crc(int(1), var("j")));
        let mut kinds = Vec::new();
        let out = run_x(&ProgramX::default(), &m, 10, |_, s| kinds.push((s.rule, s.kind))).unwrap();
        assert_eq!(kinds, [(RuleX::Cmp, Kind::C), (RuleX::Let, Kind::C), (RuleX::Crc, Kind::C)]);
        assert_eq!(out, Outcome::Result(coerced(int(1), CoercionX::inj(Ground::INT))));
    }

    #[test]
    fn blame_propagates() {
        let m = op(Op::Add, int(1), blame("p"));
        let out = evaluate_x(&ProgramX::default(), &m, 10).unwrap();
        assert_eq!(out, Outcome::Blamed(p()));
    }
}

//! The deterministic small-step evaluator of λS.
//!
//! Evaluation contexts follow the inside-out grammar
//!
//! ```text
//! E ::= F | F[□<s>]
//! F ::= □ | E[op(□, M)] | E[op(V, □)] | E[□ M] | E[V □] | E[if □ then M else N]
//! ```
//!
//! so a path from the root to the redex never passes two coercion frames in
//! a row, and c-rules only fire when the innermost frame is not a coercion.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use super::subst::substitute;
use super::term::{Program, Term, TermS};
use crate::coercion::{BlameLabel, Coercion};

/// Step label: essential computation or coercion bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    E,
    C,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::E => "e",
            Kind::C => "c",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Op,
    Beta,
    Wrap,
    Unfold,
    IfTrue,
    IfFalse,
    Id,
    Fail,
    Crc,
    MergeC,
    MergeV,
    Abort,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Op => "R-Op",
            Rule::Beta => "R-Beta",
            Rule::Wrap => "R-Wrap",
            Rule::Unfold => "R-Unfold",
            Rule::IfTrue => "R-IfTrue",
            Rule::IfFalse => "R-IfFalse",
            Rule::Id => "R-Id",
            Rule::Fail => "R-Fail",
            Rule::Crc => "R-Crc",
            Rule::MergeC => "R-MergeC",
            Rule::MergeV => "R-MergeV",
            Rule::Abort => "E-Abort",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            Rule::Op | Rule::Beta | Rule::Wrap | Rule::Unfold | Rule::IfTrue | Rule::IfFalse | Rule::Abort => Kind::E,
            Rule::Id | Rule::Fail | Rule::Crc | Rule::MergeC | Rule::MergeV => Kind::C,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One evaluation-context frame on the way from the root to a redex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    OpL,
    OpR,
    AppFun,
    AppArg,
    CrcSubj,
    IfCond,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: Kind,
    pub rule: Rule,
    pub next: Term,
    /// Frames from the root to the redex; for `E-Abort`, to the `blame`.
    pub path: Vec<Frame>,
    /// The path crossed a frame `□<id>`.
    pub through_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Stepped(Step),
    IsValue(Term),
    IsBlame(BlameLabel),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("stuck at {path:?}: {reason}")]
pub struct Stuck {
    pub path: Vec<Frame>,
    pub reason: String,
}

enum Local {
    Value,
    Blame(BlameLabel),
    Reduced(Rule, Term),
    Abort(BlameLabel),
}

struct Walker<'p> {
    program: &'p Program,
    path: Vec<Frame>,
    through_identity: bool,
}

impl Walker<'_> {
    fn stuck(&self, reason: impl Into<String>) -> Stuck {
        Stuck { path: self.path.clone(), reason: reason.into() }
    }

    fn child(&mut self, frame: Frame, m: &Term, under_crc: bool) -> Result<Local, Stuck> {
        self.path.push(frame);
        let r = self.go(m, under_crc)?;
        if matches!(r, Local::Value) {
            self.path.pop();
        }
        Ok(r)
    }

    /// Finds and contracts the redex inside `m`. `under_crc` holds when the
    /// innermost enclosing frame is a coercion application.
    fn go(&mut self, m: &Term, under_crc: bool) -> Result<Local, Stuck> {
        match &**m {
            TermS::Blame(p) => Ok(Local::Blame(p.clone())),
            t if t.is_value() => Ok(Local::Value),
            TermS::Op(op, l, r) => {
                match self.child(Frame::OpL, l, false)? {
                    Local::Value => {}
                    Local::Blame(p) | Local::Abort(p) => return Ok(Local::Abort(p)),
                    Local::Reduced(rule, l2) => return Ok(Local::Reduced(rule, Rc::new(TermS::Op(*op, l2, r.clone())))),
                }
                match self.child(Frame::OpR, r, false)? {
                    Local::Value => {}
                    Local::Blame(p) | Local::Abort(p) => return Ok(Local::Abort(p)),
                    Local::Reduced(rule, r2) => return Ok(Local::Reduced(rule, Rc::new(TermS::Op(*op, l.clone(), r2)))),
                }
                match (&**l, &**r) {
                    (TermS::Const(a), TermS::Const(b)) => match op.delta(*a, *b) {
                        Some(c) => Ok(Local::Reduced(Rule::Op, Rc::new(TermS::Const(c)))),
                        None => Err(self.stuck(format!("δ undefined for {op} on {a}, {b}"))),
                    },
                    _ => Err(self.stuck(format!("operands of {op} are not constants"))),
                }
            }
            TermS::App(f, a) => {
                match self.child(Frame::AppFun, f, false)? {
                    Local::Value => {}
                    Local::Blame(p) | Local::Abort(p) => return Ok(Local::Abort(p)),
                    Local::Reduced(rule, f2) => return Ok(Local::Reduced(rule, Rc::new(TermS::App(f2, a.clone())))),
                }
                match self.child(Frame::AppArg, a, false)? {
                    Local::Value => {}
                    Local::Blame(p) | Local::Abort(p) => return Ok(Local::Abort(p)),
                    Local::Reduced(rule, a2) => return Ok(Local::Reduced(rule, Rc::new(TermS::App(f.clone(), a2)))),
                }
                self.apply(f, a)
            }
            TermS::If(c, t, e) => match self.child(Frame::IfCond, c, false)? {
                Local::Blame(p) | Local::Abort(p) => Ok(Local::Abort(p)),
                Local::Reduced(rule, c2) => Ok(Local::Reduced(rule, Rc::new(TermS::If(c2, t.clone(), e.clone())))),
                Local::Value => match &**c {
                    TermS::Const(crate::ops::Lit::Bool(true)) => Ok(Local::Reduced(Rule::IfTrue, t.clone())),
                    TermS::Const(crate::ops::Lit::Bool(false)) => Ok(Local::Reduced(Rule::IfFalse, e.clone())),
                    _ => Err(self.stuck("condition is not a boolean")),
                },
            },
            TermS::CrcApp(n, t) => {
                if under_crc {
                    return Err(self.stuck("adjacent coercion frames"));
                }
                if let TermS::CrcApp(inner, s) = &**n {
                    let st = s.compose(t).map_err(|e| self.stuck(e.to_string()))?;
                    return Ok(Local::Reduced(Rule::MergeC, Rc::new(TermS::CrcApp(inner.clone(), st))));
                }
                if n.is_value() {
                    return self.coerce_value(n, t);
                }
                if t.is_identity() {
                    self.through_identity = true;
                }
                match self.child(Frame::CrcSubj, n, true)? {
                    Local::Value => unreachable!("value subjects are handled above"),
                    Local::Blame(p) | Local::Abort(p) => Ok(Local::Abort(p)),
                    Local::Reduced(rule, n2) => Ok(Local::Reduced(rule, Rc::new(TermS::CrcApp(n2, t.clone())))),
                }
            }
            _ => Err(self.stuck("no rule applies")),
        }
    }

    fn apply(&self, f: &Term, a: &Term) -> Result<Local, Stuck> {
        match &**f {
            TermS::Abs(x, _, body) => Ok(Local::Reduced(Rule::Beta, substitute(body, x, a))),
            TermS::GlobalRef(g) => match self.program.def(g) {
                Some(d) => Ok(Local::Reduced(Rule::Unfold, Rc::new(TermS::App(d.as_abs(), a.clone())))),
                None => Err(self.stuck(format!("unknown function {g}"))),
            },
            TermS::CoercedVal(u, d) => match d {
                Coercion::Fun(s, t) => {
                    let inner = Rc::new(TermS::App(u.clone(), Rc::new(TermS::CrcApp(a.clone(), (**s).clone()))));
                    Ok(Local::Reduced(Rule::Wrap, Rc::new(TermS::CrcApp(inner, (**t).clone()))))
                }
                _ => Err(self.stuck(format!("applying a value coerced by {d}"))),
            },
            _ => Err(self.stuck("applying a non-function")),
        }
    }

    fn coerce_value(&self, v: &Term, t: &crate::coercion::CoercionS) -> Result<Local, Stuck> {
        if let TermS::CoercedVal(u, d) = &**v {
            let dt = d.compose(t).map_err(|e| self.stuck(e.to_string()))?;
            return Ok(Local::Reduced(Rule::MergeV, Rc::new(TermS::CrcApp(u.clone(), dt))));
        }
        if !v.is_uncoerced_value() {
            return Err(self.stuck("coercing an open term"));
        }
        match t {
            Coercion::IdStar | Coercion::Id(_) => Ok(Local::Reduced(Rule::Id, v.clone())),
            Coercion::Fail(_, p, _) => Ok(Local::Reduced(Rule::Fail, Rc::new(TermS::Blame(p.clone())))),
            Coercion::InjSeq(..) | Coercion::Fun(..) => {
                Ok(Local::Reduced(Rule::Crc, Rc::new(TermS::CoercedVal(v.clone(), t.clone()))))
            }
            Coercion::ProjSeq(..) => Err(self.stuck(format!("projection {t} on an uncoerced value"))),
        }
    }
}

/// Performs one step of `↦S`.
pub fn step(program: &Program, m: &Term) -> Result<StepResult, Stuck> {
    let mut w = Walker { program, path: Vec::new(), through_identity: false };
    Ok(match w.go(m, false)? {
        Local::Value => StepResult::IsValue(m.clone()),
        Local::Blame(p) => StepResult::IsBlame(p),
        Local::Abort(p) => StepResult::Stepped(Step {
            kind: Kind::E,
            rule: Rule::Abort,
            next: Rc::new(TermS::Blame(p)),
            path: w.path,
            through_identity: w.through_identity,
        }),
        Local::Reduced(rule, next) => StepResult::Stepped(Step {
            kind: rule.kind(),
            rule,
            next,
            path: w.path,
            through_identity: w.through_identity,
        }),
    })
}

/// Final state of a bounded evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Result(T),
    Blamed(BlameLabel),
    OutOfFuel,
}

impl<T> Outcome<T> {
    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::Result(_) => "value",
            Outcome::Blamed(_) => "blame",
            Outcome::OutOfFuel => "fuel",
        }
    }
}

/// Default step budget.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Runs at most `fuel` steps, calling `observe` with the term before each
/// step and the step taken.
pub fn run(
    program: &Program,
    m: &Term,
    fuel: u64,
    mut observe: impl FnMut(&Term, &Step),
) -> Result<Outcome<Term>, Stuck> {
    let mut cur = m.clone();
    for _ in 0..fuel {
        match step(program, &cur)? {
            StepResult::IsValue(v) => return Ok(Outcome::Result(v)),
            StepResult::IsBlame(p) => return Ok(Outcome::Blamed(p)),
            StepResult::Stepped(s) => {
                observe(&cur, &s);
                cur = s.next;
            }
        }
    }
    Ok(match step(program, &cur)? {
        StepResult::IsValue(v) => Outcome::Result(v),
        StepResult::IsBlame(p) => Outcome::Blamed(p),
        StepResult::Stepped(_) => Outcome::OutOfFuel,
    })
}

pub fn evaluate(program: &Program, m: &Term, fuel: u64) -> Result<Outcome<Term>, Stuck> {
    run(program, m, fuel, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coercion::CoercionS;
    use crate::lam_s::term::*;
    use crate::ops::Op;
    use crate::types::{Ground, TypeS};

    fn p() -> BlameLabel {
        BlameLabel::new("p")
    }

    fn trace(m: &Term) -> (Vec<(Rule, Term)>, Outcome<Term>) {
        let prog = Program::default();
        let mut steps = Vec::new();
        let out = run(&prog, m, 1000, |_, s| steps.push((s.rule, s.next.clone()))).unwrap();
        (steps, out)
    }

    fn example_u() -> Term {
        let body = crc(
            op(Op::Add, crc(var("x"), CoercionS::proj(Ground::INT, &p())), int(2)),
            CoercionS::inj(Ground::INT),
        );
        abs("x", TypeS::Dyn, body)
    }

    #[test]
    fn wrap_splits_function_coercion() {
        let f = CoercionS::mk_fun(CoercionS::inj(Ground::INT), CoercionS::proj(Ground::INT, &p()));
        let m = app(coerced(example_u(), f.clone()), int(3));
        let StepResult::Stepped(s) = step(&Program::default(), &m).unwrap() else { panic!() };
        assert_eq!(s.rule, Rule::Wrap);
        let expected = crc(app(example_u(), crc(int(3), CoercionS::inj(Ground::INT))), CoercionS::proj(Ground::INT, &p()));
        assert_eq!(s.next, expected);
    }

    #[test]
    fn nested_coercions_merge_before_the_inner_one_fires() {
        let d = CoercionS::inj(Ground::INT);
        let t = CoercionS::proj(Ground::INT, &p());
        let m = crc(crc(int(1), d.clone()), t.clone());
        let StepResult::Stepped(s) = step(&Program::default(), &m).unwrap() else { panic!() };
        assert_eq!(s.rule, Rule::MergeC);
        assert_eq!(s.next, crc(int(1), d.compose(&t).unwrap()));
    }

    #[test]
    fn example_one_reaches_five() {
        let f = CoercionS::mk_fun(CoercionS::inj(Ground::INT), CoercionS::proj(Ground::INT, &p()));
        let m = crc(app(crc(example_u(), f), int(3)), CoercionS::inj(Ground::INT));
        let (steps, out) = trace(&m);
        assert_eq!(out, Outcome::Result(coerced(int(5), CoercionS::inj(Ground::INT))));
        let rules: Vec<_> = steps.iter().map(|(r, _)| r.name()).collect();
        assert_eq!(
            rules,
            [
                "R-Crc", "R-Wrap", "R-MergeC", "R-Crc", "R-Beta", "R-MergeC", "R-MergeV", "R-Id", "R-Op", "R-Crc"
            ]
        );
    }

    #[test]
    fn blame_aborts_only_under_a_context() {
        let m = op(Op::Add, blame("p"), int(1));
        let (steps, out) = trace(&m);
        assert_eq!(steps[0].0, Rule::Abort);
        assert_eq!(out, Outcome::Blamed(p()));
        assert!(matches!(step(&Program::default(), &blame("q")).unwrap(), StepResult::IsBlame(_)));
    }

    #[test]
    fn failure_coercion_blames() {
        let m = crc(crc(int(1), CoercionS::inj(Ground::INT)), CoercionS::proj(Ground::BOOL, &p()));
        let (steps, out) = trace(&m);
        let rules: Vec<_> = steps.iter().map(|(r, _)| *r).collect();
        assert_eq!(rules, [Rule::MergeC, Rule::Fail]);
        assert_eq!(out, Outcome::Blamed(p()));
    }

    #[test]
    fn fuel_runs_out_on_self_application() {
        let proj = CoercionS::proj(Ground::DynFun, &p());
        let omega_body = app(crc(var("x"), proj.clone()), var("x"));
        let omega = abs("x", TypeS::Dyn, omega_body);
        let m = app(omega.clone(), crc(omega, CoercionS::inj(Ground::DynFun)));
        assert_eq!(evaluate(&Program::default(), &m, 1000).unwrap(), Outcome::OutOfFuel);
    }
}

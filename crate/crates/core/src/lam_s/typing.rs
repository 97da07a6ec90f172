//! Typing for λS.
//!
//! `synth` computes a [`Shape`]: a type whose holes stand for the parts that
//! `blame p` and failure coercions leave unconstrained. Holes are
//! independent, so any filling of them is a valid type.

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use super::term::{Program, Term, TermS};
use crate::coercion::CoercionS;
use crate::name::Name;
use crate::ops::Op;
use crate::types::{Base, CrcType, Shape, TypeS};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("type error ({rule}) at {path}: {message}")]
pub struct TypeError {
    pub rule: &'static str,
    pub path: String,
    pub message: String,
}

/// Typing environment: global definitions plus a stack of local binders.
#[derive(Clone, Debug, Default)]
pub struct Env {
    globals: HashMap<Name, TypeS>,
    locals: Vec<(Name, TypeS)>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn for_program(p: &Program) -> Env {
        let globals = p.defs.iter().map(|d| (d.name.clone(), d.ty())).collect();
        Env { globals, locals: Vec::new() }
    }

    pub fn with_local(mut self, x: &str, ty: TypeS) -> Env {
        self.locals.push((Name::from(x), ty));
        self
    }

    fn lookup(&self, x: &str) -> Option<&TypeS> {
        self.locals.iter().rev().find(|(y, _)| &**y == x).map(|(_, t)| t)
    }

    fn global(&self, f: &str) -> Option<&TypeS> {
        self.globals.get(f)
    }

    /// Environment for checking a closed subterm (`U<<d>>`, `blame p`).
    fn closed(&self) -> Env {
        Env { globals: self.globals.clone(), locals: Vec::new() }
    }
}

struct Checker<'e> {
    env: &'e mut Env,
    path: Vec<&'static str>,
}

impl Checker<'_> {
    fn err(&self, rule: &'static str, message: String) -> TypeError {
        let path = if self.path.is_empty() { "root".to_string() } else { self.path.join("/") };
        TypeError { rule, path, message }
    }

    fn sub(&mut self, frame: &'static str, m: &Term) -> Result<Shape, TypeError> {
        self.path.push(frame);
        let r = self.synth(m);
        self.path.pop();
        r
    }

    fn synth(&mut self, m: &Term) -> Result<Shape, TypeError> {
        match &**m {
            TermS::Const(l) => Ok(Shape::Base(l.base())),
            TermS::Var(x) => match self.env.lookup(x) {
                Some(t) => Ok(t.to_shape()),
                None => Err(self.err("T-Var", format!("unbound variable {x}"))),
            },
            TermS::GlobalRef(f) => match self.env.global(f) {
                Some(t) => Ok(t.to_shape()),
                None => Err(self.err("T-Global", format!("unknown function {f}"))),
            },
            TermS::Abs(x, a, body) => {
                self.env.locals.push((x.clone(), a.clone()));
                let b = self.sub("Abs.body", body);
                self.env.locals.pop();
                Ok(Shape::arrow(a.to_shape(), b?))
            }
            TermS::Op(op, l, r) => {
                let (l_ty, r_ty, res) = op.signature();
                let ls = self.sub("Op.left", l)?;
                self.expect("T-Op", &ls, &Shape::Base(l_ty), *op)?;
                let rs = self.sub("Op.right", r)?;
                self.expect("T-Op", &rs, &Shape::Base(r_ty), *op)?;
                Ok(Shape::Base(res))
            }
            TermS::App(f, a) => {
                let fs = self.sub("App.fun", f)?;
                let Some(Shape::Arrow(dom, cod)) = fs.meet(&Shape::arrow(Shape::Any, Shape::Any)) else {
                    return Err(self.err("T-App", format!("applying a non-function of type {}", fs.render("->"))));
                };
                let s = self.sub("App.arg", a)?;
                if dom.meet(&s).is_none() {
                    return Err(self.err(
                        "T-App",
                        format!("argument has type {}, expected {}", s.render("->"), dom.render("->")),
                    ));
                }
                Ok((*cod).clone())
            }
            TermS::CrcApp(n, s) => {
                let ns = self.sub("Crc.subject", n)?;
                self.coerce("T-Crc", &ns, s)
            }
            TermS::CoercedVal(u, d) => {
                if !u.is_uncoerced_value() {
                    return Err(self.err("T-CrcV", "coerced value must wrap an uncoerced value".into()));
                }
                if !d.is_delayed() {
                    return Err(self.err("T-CrcV", format!("{d} is not a delayed coercion")));
                }
                let mut closed = self.env.closed();
                let us = Checker { env: &mut closed, path: self.path.clone() }.synth(u)?;
                self.coerce("T-CrcV", &us, d)
            }
            TermS::Blame(_) => Ok(Shape::Any),
            TermS::If(c, t, e) => {
                let cs = self.sub("If.cond", c)?;
                if cs.meet(&Shape::Base(Base::Bool)).is_none() {
                    return Err(self.err("T-If", format!("condition has type {}", cs.render("->"))));
                }
                let ts = self.sub("If.then", t)?;
                let es = self.sub("If.else", e)?;
                ts.meet(&es).ok_or_else(|| {
                    self.err("T-If", format!("branches differ: {} vs {}", ts.render("->"), es.render("->")))
                })
            }
        }
    }

    fn expect(&self, rule: &'static str, got: &Shape, want: &Shape, op: Op) -> Result<(), TypeError> {
        if got.meet(want).is_some() {
            Ok(())
        } else {
            Err(self.err(rule, format!("operand of {op} has type {}, expected {}", got.render("->"), want.render("->"))))
        }
    }

    fn coerce(&self, rule: &'static str, subject: &Shape, s: &CoercionS) -> Result<Shape, TypeError> {
        s.classify().map_err(|e| self.err(rule, e.to_string()))?;
        let (src, tgt) = s.type_of().map_err(|e| self.err(rule, e.to_string()))?;
        if subject.meet(&src).is_none() {
            return Err(self.err(
                rule,
                format!("coercion {s} expects {}, subject has type {}", src.render("->"), subject.render("->")),
            ));
        }
        Ok(tgt)
    }
}

/// Computes the shape of `m` under `env`.
pub fn synth(env: &Env, m: &Term) -> Result<Shape, TypeError> {
    let mut env = env.clone();
    Checker { env: &mut env, path: Vec::new() }.synth(m)
}

/// Returns a type of `m`. Positions left open by blame or failure
/// coercions are reported as `Dyn`.
pub fn typecheck(env: &Env, m: &Term) -> Result<TypeS, TypeError> {
    let s = synth(env, m)?;
    Ok(TypeS::from_shape(&s.fill()).expect("filled λS shapes are types"))
}

/// Checks `m` against a requested type.
pub fn check(env: &Env, m: &Term, a: &TypeS) -> Result<(), TypeError> {
    let s = synth(env, m)?;
    if s.meet(&a.to_shape()).is_some() {
        Ok(())
    } else {
        Err(TypeError {
            rule: "T-Check",
            path: "root".into(),
            message: format!("term has type {}, expected {a}", s.render("->")),
        })
    }
}

/// Checks every definition against its declared type and returns a type
/// for the main term.
pub fn typecheck_program(p: &Program) -> Result<TypeS, TypeError> {
    let env = Env::for_program(p);
    for d in &p.defs {
        let local = env.clone().with_local(&d.param, d.param_ty.clone());
        check(&local, &d.body, &d.ret_ty).map_err(|e| TypeError {
            path: format!("{}/{}", d.name, e.path),
            ..e
        })?;
    }
    typecheck(&env, p.main())
}

/// A λS term in which every node carries the type chosen for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ATerm {
    pub ty: TypeS,
    pub node: ANode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ANode {
    Const(crate::ops::Lit),
    Var(Name),
    GlobalRef(Name),
    Abs(Name, TypeS, Box<ATerm>),
    Op(Op, Box<ATerm>, Box<ATerm>),
    App(Box<ATerm>, Box<ATerm>),
    CrcApp(Box<ATerm>, CoercionS),
    CoercedVal(Box<ATerm>, CoercionS),
    Blame(crate::coercion::BlameLabel),
    If(Box<ATerm>, Box<ATerm>, Box<ATerm>),
}

impl ATerm {
    /// `V`: variables, constants, abstractions, global names and `U<<d>>`.
    pub fn is_value(&self) -> bool {
        match &self.node {
            ANode::Const(_) | ANode::Var(_) | ANode::GlobalRef(_) | ANode::Abs(..) => true,
            ANode::CoercedVal(u, _) => matches!(u.node, ANode::Const(_) | ANode::GlobalRef(_) | ANode::Abs(..)),
            _ => false,
        }
    }
}

/// Elaborates `m` at type `ty`, choosing a type for every subterm.
///
/// Synthesis runs bottom-up; the requested type is then pushed top-down so
/// that the holes left by blame are resolved from their context, and only
/// holes that no context constrains become `Dyn`.
pub fn annotate(env: &Env, m: &Term, ty: &TypeS) -> Result<ATerm, TypeError> {
    check(env, m, ty)?;
    let mut env = env.clone();
    Ok(annotate_at(&mut env, m, ty))
}

fn shape_of(env: &Env, m: &Term) -> Shape {
    synth(env, m).expect("subterms of a checked term are well typed")
}

fn resolve(s: &Shape) -> TypeS {
    TypeS::from_shape(&s.fill()).expect("filled λS shapes are types")
}

fn annotate_at(env: &mut Env, m: &Term, ty: &TypeS) -> ATerm {
    let node = match &**m {
        TermS::Const(l) => ANode::Const(*l),
        TermS::Var(x) => ANode::Var(x.clone()),
        TermS::GlobalRef(f) => ANode::GlobalRef(f.clone()),
        TermS::Blame(p) => ANode::Blame(p.clone()),
        TermS::Abs(x, a, body) => {
            let b = match ty {
                TypeS::Fun(_, b) => (**b).clone(),
                _ => unreachable!("abstraction checked at a function type"),
            };
            env.locals.push((x.clone(), a.clone()));
            let ab = annotate_at(env, body, &b);
            env.locals.pop();
            ANode::Abs(x.clone(), a.clone(), Box::new(ab))
        }
        TermS::Op(op, l, r) => {
            let (lt, rt, _) = op.signature();
            ANode::Op(
                *op,
                Box::new(annotate_at(env, l, &TypeS::Base(lt))),
                Box::new(annotate_at(env, r, &TypeS::Base(rt))),
            )
        }
        TermS::App(f, a) => {
            let fs = shape_of(env, f).meet(&Shape::arrow(Shape::Any, ty.to_shape()));
            let dom = match fs {
                Some(Shape::Arrow(d, _)) => (*d).clone(),
                _ => Shape::Any,
            };
            let dom = resolve(&dom.meet(&shape_of(env, a)).unwrap_or(Shape::Any));
            ANode::App(
                Box::new(annotate_at(env, f, &TypeS::fun(dom.clone(), ty.clone()))),
                Box::new(annotate_at(env, a, &dom)),
            )
        }
        TermS::CrcApp(n, s) => {
            let src = subject_type(&shape_of(env, n), s);
            ANode::CrcApp(Box::new(annotate_at(env, n, &src)), s.clone())
        }
        TermS::CoercedVal(u, d) => {
            let mut closed = env.closed();
            let src = subject_type(&shape_of(&closed, u), d);
            ANode::CoercedVal(Box::new(annotate_at(&mut closed, u, &src)), d.clone())
        }
        TermS::If(c, t, e) => ANode::If(
            Box::new(annotate_at(env, c, &TypeS::BOOL)),
            Box::new(annotate_at(env, t, ty)),
            Box::new(annotate_at(env, e, ty)),
        ),
    };
    ATerm { ty: ty.clone(), node }
}

fn subject_type(subject: &Shape, s: &CoercionS) -> TypeS {
    let (src, _) = s.type_of().expect("coercions of a checked term are well formed");
    resolve(&subject.meet(&src).unwrap_or(src))
}

/// Forgets the annotations.
pub fn erase(a: &ATerm) -> Term {
    Rc::new(match &a.node {
        ANode::Const(l) => TermS::Const(*l),
        ANode::Var(x) => TermS::Var(x.clone()),
        ANode::GlobalRef(f) => TermS::GlobalRef(f.clone()),
        ANode::Blame(p) => TermS::Blame(p.clone()),
        ANode::Abs(x, t, b) => TermS::Abs(x.clone(), t.clone(), erase(b)),
        ANode::Op(o, l, r) => TermS::Op(*o, erase(l), erase(r)),
        ANode::App(f, x) => TermS::App(erase(f), erase(x)),
        ANode::CrcApp(n, s) => TermS::CrcApp(erase(n), s.clone()),
        ANode::CoercedVal(u, d) => TermS::CoercedVal(erase(u), d.clone()),
        ANode::If(c, t, e) => TermS::If(erase(c), erase(t), erase(e)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coercion::BlameLabel;
    use crate::lam_s::term::*;
    use crate::types::Ground;

    fn p() -> BlameLabel {
        BlameLabel::new("p")
    }

    fn example_u() -> Term {
        let body = crc(
            op(Op::Add, crc(var("x"), CoercionS::proj(Ground::INT, &p())), int(2)),
            CoercionS::inj(Ground::INT),
        );
        abs("x", TypeS::Dyn, body)
    }

    #[test]
    fn example_function_has_dyn_to_dyn() {
        let t = typecheck(&Env::new(), &example_u()).unwrap();
        assert_eq!(t, TypeS::fun(TypeS::Dyn, TypeS::Dyn));
    }

    #[test]
    fn constants_and_blame() {
        assert_eq!(typecheck(&Env::new(), &int(5)).unwrap(), TypeS::INT);
        assert!(check(&Env::new(), &blame("p"), &TypeS::fun(TypeS::INT, TypeS::BOOL)).is_ok());
    }

    #[test]
    fn rejects_mismatched_coercion() {
        let m = crc(int(1), CoercionS::inj(Ground::BOOL));
        let e = typecheck(&Env::new(), &m).unwrap_err();
        assert_eq!(e.rule, "T-Crc");
        let m = op(Op::Add, boolean(true), int(1));
        assert_eq!(typecheck(&Env::new(), &m).unwrap_err().rule, "T-Op");
    }

    #[test]
    fn failure_coercion_needs_a_compatible_non_dyn_source() {
        let fail = CoercionS::fail(Ground::INT, &p(), Ground::BOOL);
        assert!(typecheck(&Env::new(), &crc(int(3), fail.clone())).is_ok());
        assert!(typecheck(&Env::new(), &crc(boolean(true), fail)).is_err());
    }

    #[test]
    fn annotation_resolves_blame_from_context() {
        let m = op(Op::Add, app(blame("p"), int(3)), int(1));
        let a = annotate(&Env::new(), &m, &TypeS::INT).unwrap();
        let ANode::Op(_, l, _) = &a.node else { panic!() };
        assert_eq!(l.ty, TypeS::INT);
        let ANode::App(f, _) = &l.node else { panic!() };
        assert_eq!(f.ty, TypeS::fun(TypeS::INT, TypeS::INT));
        assert_eq!(erase(&a), m);
    }
}

//! Typing for λSx.
//!
//! Checking `λ(x:A, κ:B). M` mints a rigid variable `X`, gives `κ` the type
//! `B ~> X` and requires `M : X`, so the result type of a function is chosen
//! by its caller through the continuation coercion.

use std::collections::HashMap;

use thiserror::Error;

use super::term::{ProgramX, TermX, Tx};
use crate::coercion::CoercionX;
use crate::name::Name;
use crate::types::{Base, CrcType, Shape, TypeX};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TypeErrorX {
    #[error("type error ({rule}) at {path}: {message}")]
    Mismatch { rule: &'static str, path: String, message: String },
    #[error("rigid type variable escapes into the declared type {0}")]
    EscapedTyVar(String),
}

impl TypeErrorX {
    pub fn rule(&self) -> &'static str {
        match self {
            TypeErrorX::Mismatch { rule, .. } => rule,
            TypeErrorX::EscapedTyVar(_) => "T-Abs",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnvX {
    globals: HashMap<Name, TypeX>,
    locals: Vec<(Name, Shape)>,
}

impl EnvX {
    pub fn new() -> EnvX {
        EnvX::default()
    }

    pub fn for_program(p: &ProgramX) -> EnvX {
        let globals = p.defs.iter().map(|d| (d.name.clone(), d.ty())).collect();
        EnvX { globals, locals: Vec::new() }
    }

    pub fn with_local(mut self, x: &str, ty: &TypeX) -> EnvX {
        self.locals.push((Name::from(x), ty.to_shape()));
        self
    }

    fn lookup(&self, x: &str) -> Option<&Shape> {
        self.locals.iter().rev().find(|(y, _)| &**y == x).map(|(_, t)| t)
    }
}

struct Checker<'e> {
    env: &'e mut EnvX,
    path: Vec<&'static str>,
    next_var: u32,
}

const ARROW: &str = "=>";

impl Checker<'_> {
    fn err(&self, rule: &'static str, message: String) -> TypeErrorX {
        let path = if self.path.is_empty() { "root".to_string() } else { self.path.join("/") };
        TypeErrorX::Mismatch { rule, path, message }
    }

    fn sub(&mut self, frame: &'static str, m: &TermX) -> Result<Shape, TypeErrorX> {
        self.path.push(frame);
        let r = self.synth(m);
        self.path.pop();
        r
    }

    fn as_crc(&self, rule: &'static str, s: &Shape) -> Result<(Shape, Shape), TypeErrorX> {
        match s.meet(&Shape::crc(Shape::Any, Shape::Any)) {
            Some(Shape::Crc(a, b)) => Ok(((*a).clone(), (*b).clone())),
            _ => Err(self.err(rule, format!("expected a coercion, found {}", s.render(ARROW)))),
        }
    }

    fn meets(&self, rule: &'static str, got: &Shape, want: &Shape) -> Result<Shape, TypeErrorX> {
        got.meet(want).ok_or_else(|| {
            self.err(rule, format!("found {}, expected {}", got.render(ARROW), want.render(ARROW)))
        })
    }

    fn synth(&mut self, m: &TermX) -> Result<Shape, TypeErrorX> {
        match &**m {
            Tx::Const(l) => Ok(Shape::Base(l.base())),
            Tx::Var(x) => match self.env.lookup(x) {
                Some(t) => Ok(t.clone()),
                None => Err(self.err("T-Var", format!("unbound variable {x}"))),
            },
            Tx::GlobalRef(f) => match self.env.globals.get(f) {
                Some(t) => Ok(t.to_shape()),
                None => Err(self.err("T-Global", format!("unknown function {f}"))),
            },
            Tx::Abs2 { x, x_ty, k, k_ty, body } => {
                for t in [x_ty, k_ty] {
                    if t.has_tyvar() {
                        return Err(TypeErrorX::EscapedTyVar(t.to_string()));
                    }
                }
                let v = self.next_var;
                self.next_var += 1;
                self.env.locals.push((x.clone(), x_ty.to_shape()));
                self.env.locals.push((k.clone(), Shape::crc(k_ty.to_shape(), Shape::Var(v))));
                let b = self.sub("Abs.body", body);
                self.env.locals.pop();
                self.env.locals.pop();
                self.meets("T-Abs", &b?, &Shape::Var(v))?;
                Ok(Shape::arrow(x_ty.to_shape(), k_ty.to_shape()))
            }
            Tx::Op(op, l, r) => {
                let (lt, rt, res) = op.signature();
                let ls = self.sub("Op.left", l)?;
                self.meets("T-Op", &ls, &Shape::Base(lt))?;
                let rs = self.sub("Op.right", r)?;
                self.meets("T-Op", &rs, &Shape::Base(rt))?;
                Ok(Shape::Base(res))
            }
            Tx::App2(l, a, k) => {
                let ls = self.sub("App.fun", l)?;
                let Some(Shape::Arrow(dom, cod)) = ls.meet(&Shape::arrow(Shape::Any, Shape::Any)) else {
                    return Err(self.err("T-App", format!("applying a non-function of type {}", ls.render(ARROW))));
                };
                let as_ = self.sub("App.arg", a)?;
                self.meets("T-App", &as_, &dom)?;
                let ks = self.sub("App.crc", k)?;
                let (src, tgt) = self.as_crc("T-App", &ks)?;
                self.meets("T-App", &src, &cod)?;
                Ok(tgt)
            }
            Tx::Let(x, bound, body) => {
                let bs = self.sub("Let.bound", bound)?;
                self.env.locals.push((x.clone(), bs));
                let r = self.sub("Let.body", body);
                self.env.locals.pop();
                r
            }
            Tx::Compose(l, r) => {
                let ls = self.sub("Cmp.left", l)?;
                let (a, b) = self.as_crc("T-Cmp", &ls)?;
                let rs = self.sub("Cmp.right", r)?;
                let (b2, c) = self.as_crc("T-Cmp", &rs)?;
                self.meets("T-Cmp", &b, &b2)?;
                Ok(Shape::crc(a, c))
            }
            Tx::CrcApp(n, k) => {
                let ns = self.sub("Crc.subject", n)?;
                let ks = self.sub("Crc.coercion", k)?;
                let (src, tgt) = self.as_crc("T-Crc", &ks)?;
                self.meets("T-Crc", &ns, &src)?;
                Ok(tgt)
            }
            Tx::CrcLit(s) => {
                let (a, b) = self.literal("T-Crcn", s)?;
                Ok(Shape::crc(a, b))
            }
            Tx::CoercedVal(u, d) => {
                if !u.is_uncoerced_value() {
                    return Err(self.err("T-CrcV", "coerced value must wrap an uncoerced value".into()));
                }
                if !d.is_delayed() {
                    return Err(self.err("T-CrcV", format!("{d} is not a delayed coercion")));
                }
                let mut closed = EnvX { globals: self.env.globals.clone(), locals: Vec::new() };
                let mut inner = Checker { env: &mut closed, path: self.path.clone(), next_var: self.next_var };
                let us = inner.synth(u)?;
                self.next_var = inner.next_var;
                let (src, tgt) = self.literal("T-CrcV", d)?;
                self.meets("T-CrcV", &us, &src)?;
                Ok(tgt)
            }
            Tx::Blame(_) => Ok(Shape::Any),
            Tx::If(c, t, e) => {
                let cs = self.sub("If.cond", c)?;
                self.meets("T-If", &cs, &Shape::Base(Base::Bool))?;
                let ts = self.sub("If.then", t)?;
                let es = self.sub("If.else", e)?;
                self.meets("T-If", &ts, &es)
            }
        }
    }

    fn literal(&self, rule: &'static str, s: &CoercionX) -> Result<(Shape, Shape), TypeErrorX> {
        s.classify().map_err(|e| self.err(rule, e.to_string()))?;
        s.type_of().map_err(|e| self.err(rule, e.to_string()))
    }
}

pub fn synth_x(env: &EnvX, m: &TermX) -> Result<Shape, TypeErrorX> {
    let mut env = env.clone();
    Checker { env: &mut env, path: Vec::new(), next_var: 0 }.synth(m)
}

/// Returns a type of `m`, reporting unconstrained positions as `Dyn`.
pub fn typecheck_x(env: &EnvX, m: &TermX) -> Result<TypeX, TypeErrorX> {
    let s = synth_x(env, m)?;
    Ok(TypeX::from_shape(&s.fill()).expect("filled closed shapes are types"))
}

pub fn check_x(env: &EnvX, m: &TermX, a: &TypeX) -> Result<(), TypeErrorX> {
    let s = synth_x(env, m)?;
    if s.meet(&a.to_shape()).is_some() {
        Ok(())
    } else {
        Err(TypeErrorX::Mismatch {
            rule: "T-Check",
            path: "root".into(),
            message: format!("term has type {}, expected {a}", s.render(ARROW)),
        })
    }
}

/// Checks every definition as an abstraction and returns the main shape.
pub fn typecheck_program_x(p: &ProgramX) -> Result<Shape, TypeErrorX> {
    let env = EnvX::for_program(p);
    for d in &p.defs {
        synth_x(&env, &d.as_abs()).map_err(|e| match e {
            TypeErrorX::Mismatch { rule, path, message } => {
                TypeErrorX::Mismatch { rule, path: format!("{}/{path}", d.name), message }
            }
            e => e,
        })?;
    }
    synth_x(&env, p.main())
}

use std::collections::BTreeSet;
use std::rc::Rc;

use crate::coercion::{BlameLabel, CoercionX};
use crate::name::Name;
use crate::ops::{Lit, Op};
use crate::types::TypeX;

pub type TermX = Rc<Tx>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tx {
    Const(Lit),
    Var(Name),
    /// `λ(x:A, κ:B). M`, of type `A => B`.
    Abs2 { x: Name, x_ty: TypeX, k: Name, k_ty: TypeX, body: TermX },
    Op(Op, TermX, TermX),
    /// `L (M, N)`
    App2(TermX, TermX, TermX),
    Let(Name, TermX, TermX),
    /// `M ;; N`
    Compose(TermX, TermX),
    /// `M<N>`
    CrcApp(TermX, TermX),
    CoercedVal(TermX, CoercionX),
    CrcLit(CoercionX),
    Blame(BlameLabel),
    If(TermX, TermX, TermX),
    GlobalRef(Name),
}

/// `f (x : A, κ : B) = body`, of type `A => B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefX {
    pub name: Name,
    pub x: Name,
    pub x_ty: TypeX,
    pub k: Name,
    pub k_ty: TypeX,
    pub body: TermX,
}

impl DefX {
    pub fn ty(&self) -> TypeX {
        TypeX::fun2(self.x_ty.clone(), self.k_ty.clone())
    }

    pub fn as_abs(&self) -> TermX {
        Rc::new(Tx::Abs2 {
            x: self.x.clone(),
            x_ty: self.x_ty.clone(),
            k: self.k.clone(),
            k_ty: self.k_ty.clone(),
            body: self.body.clone(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgramX {
    pub defs: Vec<DefX>,
    pub main: Option<TermX>,
}

impl ProgramX {
    pub fn new(defs: Vec<DefX>, main: TermX) -> ProgramX {
        ProgramX { defs, main: Some(main) }
    }

    pub fn main(&self) -> &TermX {
        self.main.as_ref().expect("program has a main term")
    }

    pub fn def(&self, name: &str) -> Option<&DefX> {
        self.defs.iter().find(|d| &*d.name == name)
    }
}

pub fn int(n: i64) -> TermX {
    Rc::new(Tx::Const(Lit::Int(n)))
}

pub fn boolean(b: bool) -> TermX {
    Rc::new(Tx::Const(Lit::Bool(b)))
}

pub fn var(x: &str) -> TermX {
    Rc::new(Tx::Var(Name::from(x)))
}

pub fn abs2(x: &str, x_ty: TypeX, k: &str, k_ty: TypeX, body: TermX) -> TermX {
    Rc::new(Tx::Abs2 { x: Name::from(x), x_ty, k: Name::from(k), k_ty, body })
}

pub fn op(o: Op, l: TermX, r: TermX) -> TermX {
    Rc::new(Tx::Op(o, l, r))
}

pub fn app2(f: TermX, a: TermX, k: TermX) -> TermX {
    Rc::new(Tx::App2(f, a, k))
}

pub fn let_(x: &str, m: TermX, n: TermX) -> TermX {
    Rc::new(Tx::Let(Name::from(x), m, n))
}

pub fn compose(m: TermX, n: TermX) -> TermX {
    Rc::new(Tx::Compose(m, n))
}

pub fn crc(m: TermX, n: TermX) -> TermX {
    Rc::new(Tx::CrcApp(m, n))
}

pub fn lit(s: CoercionX) -> TermX {
    Rc::new(Tx::CrcLit(s))
}

pub fn coerced(u: TermX, d: CoercionX) -> TermX {
    Rc::new(Tx::CoercedVal(u, d))
}

pub fn blame(p: &str) -> TermX {
    Rc::new(Tx::Blame(BlameLabel::new(p)))
}

pub fn if_(c: TermX, t: TermX, e: TermX) -> TermX {
    Rc::new(Tx::If(c, t, e))
}

pub fn global(f: &str) -> TermX {
    Rc::new(Tx::GlobalRef(Name::from(f)))
}

impl Tx {
    /// `U`: constants, abstractions, coercions and global function names.
    pub fn is_uncoerced_value(&self) -> bool {
        matches!(self, Tx::Const(_) | Tx::Abs2 { .. } | Tx::CrcLit(_) | Tx::GlobalRef(_))
    }

    pub fn is_value(&self) -> bool {
        match self {
            Tx::Var(_) => true,
            Tx::CoercedVal(u, _) => u.is_uncoerced_value(),
            t => t.is_uncoerced_value(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Tx::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Tx::Abs2 { x, k, body, .. } => {
                bound.push(x.clone());
                bound.push(k.clone());
                body.collect_free(bound, out);
                bound.pop();
                bound.pop();
            }
            Tx::Let(x, m, n) => {
                m.collect_free(bound, out);
                bound.push(x.clone());
                n.collect_free(bound, out);
                bound.pop();
            }
            Tx::Const(_) | Tx::Blame(_) | Tx::GlobalRef(_) | Tx::CrcLit(_) => {}
            Tx::Op(_, l, r) | Tx::Compose(l, r) | Tx::CrcApp(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Tx::App2(a, b, c) | Tx::If(a, b, c) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
                c.collect_free(bound, out);
            }
            Tx::CoercedVal(u, _) => u.collect_free(bound, out),
        }
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Tx::Var(x) => {
                out.insert(x.clone());
            }
            Tx::Abs2 { x, k, body, .. } => {
                out.insert(x.clone());
                out.insert(k.clone());
                body.all_names(out);
            }
            Tx::Let(x, m, n) => {
                out.insert(x.clone());
                m.all_names(out);
                n.all_names(out);
            }
            Tx::Const(_) | Tx::Blame(_) | Tx::GlobalRef(_) | Tx::CrcLit(_) => {}
            Tx::Op(_, l, r) | Tx::Compose(l, r) | Tx::CrcApp(l, r) => {
                l.all_names(out);
                r.all_names(out);
            }
            Tx::App2(a, b, c) | Tx::If(a, b, c) => {
                a.all_names(out);
                b.all_names(out);
                c.all_names(out);
            }
            Tx::CoercedVal(u, _) => u.all_names(out),
        }
    }

    /// Visits every coercion literal (`false`) and delayed coercion (`true`).
    pub fn for_each_coercion(&self, f: &mut impl FnMut(&CoercionX, bool)) {
        match self {
            Tx::CrcLit(s) => f(s, false),
            Tx::CoercedVal(u, d) => {
                f(d, true);
                u.for_each_coercion(f);
            }
            Tx::Abs2 { body, .. } => body.for_each_coercion(f),
            Tx::Let(_, l, r) | Tx::Op(_, l, r) | Tx::Compose(l, r) | Tx::CrcApp(l, r) => {
                l.for_each_coercion(f);
                r.for_each_coercion(f);
            }
            Tx::App2(a, b, c) | Tx::If(a, b, c) => {
                a.for_each_coercion(f);
                b.for_each_coercion(f);
                c.for_each_coercion(f);
            }
            Tx::Const(_) | Tx::Var(_) | Tx::Blame(_) | Tx::GlobalRef(_) => {}
        }
    }
}

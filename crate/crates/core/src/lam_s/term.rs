use std::collections::BTreeSet;
use std::rc::Rc;

use crate::coercion::{BlameLabel, CoercionS};
use crate::name::Name;
use crate::ops::{Lit, Op};
use crate::types::TypeS;

pub type Term = Rc<TermS>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermS {
    Const(Lit),
    Var(Name),
    Abs(Name, TypeS, Term),
    Op(Op, Term, Term),
    App(Term, Term),
    /// `M<s>`
    CrcApp(Term, CoercionS),
    /// `U<<d>>`, a value carrying a delayed coercion.
    CoercedVal(Term, CoercionS),
    Blame(BlameLabel),
    If(Term, Term, Term),
    GlobalRef(Name),
}

/// A top-level recursive function `f (x : A) : B = body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub name: Name,
    pub param: Name,
    pub param_ty: TypeS,
    pub ret_ty: TypeS,
    pub body: Term,
}

impl Def {
    pub fn ty(&self) -> TypeS {
        TypeS::fun(self.param_ty.clone(), self.ret_ty.clone())
    }

    pub fn as_abs(&self) -> Term {
        Rc::new(TermS::Abs(self.param.clone(), self.param_ty.clone(), self.body.clone()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub defs: Vec<Def>,
    pub main: Option<Term>,
}

impl Program {
    pub fn new(defs: Vec<Def>, main: Term) -> Program {
        Program { defs, main: Some(main) }
    }

    pub fn main(&self) -> &Term {
        self.main.as_ref().expect("program has a main term")
    }

    pub fn def(&self, name: &str) -> Option<&Def> {
        self.defs.iter().find(|d| &*d.name == name)
    }
}

pub fn constant(l: Lit) -> Term {
    Rc::new(TermS::Const(l))
}

pub fn int(n: i64) -> Term {
    constant(Lit::Int(n))
}

pub fn boolean(b: bool) -> Term {
    constant(Lit::Bool(b))
}

pub fn var(x: &str) -> Term {
    Rc::new(TermS::Var(Name::from(x)))
}

pub fn abs(x: &str, ty: TypeS, body: Term) -> Term {
    Rc::new(TermS::Abs(Name::from(x), ty, body))
}

pub fn op(o: Op, l: Term, r: Term) -> Term {
    Rc::new(TermS::Op(o, l, r))
}

pub fn app(f: Term, a: Term) -> Term {
    Rc::new(TermS::App(f, a))
}

pub fn crc(m: Term, s: CoercionS) -> Term {
    Rc::new(TermS::CrcApp(m, s))
}

pub fn coerced(u: Term, d: CoercionS) -> Term {
    Rc::new(TermS::CoercedVal(u, d))
}

pub fn blame(p: &str) -> Term {
    Rc::new(TermS::Blame(BlameLabel::new(p)))
}

pub fn if_(c: Term, t: Term, e: Term) -> Term {
    Rc::new(TermS::If(c, t, e))
}

pub fn global(f: &str) -> Term {
    Rc::new(TermS::GlobalRef(Name::from(f)))
}

impl TermS {
    /// `U`: constants, abstractions and global function names.
    pub fn is_uncoerced_value(&self) -> bool {
        matches!(self, TermS::Const(_) | TermS::Abs(..) | TermS::GlobalRef(_))
    }

    /// `x | U | U<<d>>`.
    pub fn is_value(&self) -> bool {
        match self {
            TermS::Var(_) => true,
            TermS::CoercedVal(u, _) => u.is_uncoerced_value(),
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
            TermS::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            TermS::Abs(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            TermS::Const(_) | TermS::Blame(_) | TermS::GlobalRef(_) => {}
            TermS::Op(_, l, r) | TermS::App(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            TermS::CrcApp(m, _) | TermS::CoercedVal(m, _) => m.collect_free(bound, out),
            TermS::If(c, t, e) => {
                c.collect_free(bound, out);
                t.collect_free(bound, out);
                e.collect_free(bound, out);
            }
        }
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            TermS::Var(x) => {
                out.insert(x.clone());
            }
            TermS::Abs(x, _, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            TermS::Const(_) | TermS::Blame(_) | TermS::GlobalRef(_) => {}
            TermS::Op(_, l, r) | TermS::App(l, r) => {
                l.all_names(out);
                r.all_names(out);
            }
            TermS::CrcApp(m, _) | TermS::CoercedVal(m, _) => m.all_names(out),
            TermS::If(c, t, e) => {
                c.all_names(out);
                t.all_names(out);
                e.all_names(out);
            }
        }
    }

    /// Visits every coercion in the term together with whether it sits
    /// under `<<·>>` (true) or `<·>` (false).
    pub fn for_each_coercion(&self, f: &mut impl FnMut(&CoercionS, bool)) {
        match self {
            TermS::CrcApp(m, s) => {
                f(s, false);
                m.for_each_coercion(f);
            }
            TermS::CoercedVal(m, d) => {
                f(d, true);
                m.for_each_coercion(f);
            }
            TermS::Abs(_, _, b) => b.for_each_coercion(f),
            TermS::Op(_, l, r) | TermS::App(l, r) => {
                l.for_each_coercion(f);
                r.for_each_coercion(f);
            }
            TermS::If(c, t, e) => {
                c.for_each_coercion(f);
                t.for_each_coercion(f);
                e.for_each_coercion(f);
            }
            TermS::Const(_) | TermS::Var(_) | TermS::Blame(_) | TermS::GlobalRef(_) => {}
        }
    }

    /// True if some subterm has the shape `M<s><t>`.
    pub fn has_adjacent_coercions(&self) -> bool {
        match self {
            TermS::CrcApp(m, _) => matches!(&**m, TermS::CrcApp(..)) || m.has_adjacent_coercions(),
            TermS::CoercedVal(m, _) => m.has_adjacent_coercions(),
            TermS::Abs(_, _, b) => b.has_adjacent_coercions(),
            TermS::Op(_, l, r) | TermS::App(l, r) => l.has_adjacent_coercions() || r.has_adjacent_coercions(),
            TermS::If(c, t, e) => {
                c.has_adjacent_coercions() || t.has_adjacent_coercions() || e.has_adjacent_coercions()
            }
            TermS::Const(_) | TermS::Var(_) | TermS::Blame(_) | TermS::GlobalRef(_) => false,
        }
    }
}

//! Conversion from parsed syntax to core terms.
//!
//! A variable that is not bound by an enclosing binder but names a top-level
//! definition becomes a global reference.

use std::collections::BTreeSet;
use std::rc::Rc;

use coercion_core::lam_s::{Def, Program, Term, TermS};
use coercion_core::lam_sx::{DefX, ProgramX, TermX, Tx};
use coercion_core::name::Name;
use coercion_core::types::{TypeS, TypeX};

use crate::parser::{Expr, ProgramSyntax};

struct Scope<'a> {
    globals: &'a BTreeSet<String>,
    locals: Vec<String>,
}

impl Scope<'_> {
    fn is_global(&self, x: &str) -> bool {
        self.globals.contains(x) && !self.locals.iter().any(|l| l == x)
    }
}

fn name(s: &str) -> Name {
    Name::from(s)
}

fn term_s(e: &Expr<TypeS>, sc: &mut Scope) -> Term {
    let t = match e {
        Expr::Lit(l) => TermS::Const(*l),
        Expr::Var(x) if sc.is_global(x) => TermS::GlobalRef(name(x)),
        Expr::Var(x) => TermS::Var(name(x)),
        Expr::Lam(x, a, body) => {
            sc.locals.push(x.clone());
            let body = term_s(body, sc);
            sc.locals.pop();
            TermS::Abs(name(x), a.clone(), body)
        }
        Expr::App(f, a) => TermS::App(term_s(f, sc), term_s(a, sc)),
        Expr::Op(o, l, r) => TermS::Op(*o, term_s(l, sc), term_s(r, sc)),
        Expr::Crc(m, c) => match &**c {
            Expr::CrcLit(c) => TermS::CrcApp(term_s(m, sc), c.clone()),
            _ => unreachable!("λS coercion applications carry coercion literals"),
        },
        Expr::Coerced(u, d) => TermS::CoercedVal(term_s(u, sc), d.clone()),
        Expr::If(c, t, f) => TermS::If(term_s(c, sc), term_s(t, sc), term_s(f, sc)),
        Expr::Blame(p) => TermS::Blame(p.clone()),
        Expr::Lam2 { .. } | Expr::App2(..) | Expr::CrcLit(_) | Expr::Compose(..) | Expr::Let(..) => {
            unreachable!("λSx syntax in a λS term")
        }
    };
    Rc::new(t)
}

fn term_x(e: &Expr<TypeX>, sc: &mut Scope) -> TermX {
    let t = match e {
        Expr::Lit(l) => Tx::Const(*l),
        Expr::Var(x) if sc.is_global(x) => Tx::GlobalRef(name(x)),
        Expr::Var(x) => Tx::Var(name(x)),
        Expr::Lam2 { x, x_ty, k, k_ty, body } => {
            sc.locals.push(x.clone());
            sc.locals.push(k.clone());
            let body = term_x(body, sc);
            sc.locals.truncate(sc.locals.len() - 2);
            Tx::Abs2 { x: name(x), x_ty: x_ty.clone(), k: name(k), k_ty: k_ty.clone(), body }
        }
        Expr::App2(f, a, k) => Tx::App2(term_x(f, sc), term_x(a, sc), term_x(k, sc)),
        Expr::Op(o, l, r) => Tx::Op(*o, term_x(l, sc), term_x(r, sc)),
        Expr::Crc(m, k) => Tx::CrcApp(term_x(m, sc), term_x(k, sc)),
        Expr::Coerced(u, d) => Tx::CoercedVal(term_x(u, sc), d.clone()),
        Expr::CrcLit(c) => Tx::CrcLit(c.clone()),
        Expr::Compose(l, r) => Tx::Compose(term_x(l, sc), term_x(r, sc)),
        Expr::Let(x, m, n) => {
            let m = term_x(m, sc);
            sc.locals.push(x.clone());
            let n = term_x(n, sc);
            sc.locals.pop();
            Tx::Let(name(x), m, n)
        }
        Expr::If(c, t, f) => Tx::If(term_x(c, sc), term_x(t, sc), term_x(f, sc)),
        Expr::Blame(p) => Tx::Blame(p.clone()),
        Expr::Lam(..) | Expr::App(..) => unreachable!("λS syntax in a λSx term"),
    };
    Rc::new(t)
}

fn globals<T>(p: &ProgramSyntax<T>) -> BTreeSet<String> {
    p.defs.iter().map(|d| d.name.clone()).collect()
}

pub fn program_s(p: &ProgramSyntax<TypeS>) -> Program {
    let globals = globals(p);
    let mut defs = Vec::new();
    for d in &p.defs {
        let mut sc = Scope { globals: &globals, locals: vec![d.x.clone()] };
        defs.push(Def {
            name: name(&d.name),
            param: name(&d.x),
            param_ty: d.x_ty.clone(),
            ret_ty: d.ret_ty.clone().expect("λS definitions declare a result type"),
            body: term_s(&d.body, &mut sc),
        });
    }
    let main = term_s(&p.main, &mut Scope { globals: &globals, locals: Vec::new() });
    Program::new(defs, main)
}

pub fn program_x(p: &ProgramSyntax<TypeX>) -> ProgramX {
    let globals = globals(p);
    let mut defs = Vec::new();
    for d in &p.defs {
        let (k, k_ty) = d.k.clone().expect("λSx definitions take a continuation");
        let mut sc = Scope { globals: &globals, locals: vec![d.x.clone(), k.clone()] };
        defs.push(DefX {
            name: name(&d.name),
            x: name(&d.x),
            x_ty: d.x_ty.clone(),
            k: name(&k),
            k_ty,
            body: term_x(&d.body, &mut sc),
        });
    }
    let main = term_x(&p.main, &mut Scope { globals: &globals, locals: Vec::new() });
    ProgramX::new(defs, main)
}

//! The type-directed translation Ψ from λS into λSx.
//!
//! `C⟦M⟧` translates a term in a position with no pending coercion;
//! `K⟦M⟧K` translates it under a continuation coercion `K`, which is always
//! a variable or a coercion literal.

use std::collections::BTreeSet;
use std::rc::Rc;

use thiserror::Error;

use crate::coercion::{CoercionS, CoercionX};
use crate::lam_s::{annotate, typecheck_program, ANode, ATerm, Env, Program, Term, TypeError};
use crate::lam_sx::{DefX, ProgramX, TermX, Tx};
use crate::name::{fresh, Name};
use crate::types::{TypeS, TypeX};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("continuation must be a variable or a coercion literal, found {0}")]
    KViolation(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Translate `op(M, N)` under an identity continuation without `<id>`.
    pub opt_trop: bool,
}

pub fn trans_type(a: &TypeS) -> TypeX {
    match a {
        TypeS::Dyn => TypeX::Dyn,
        TypeS::Base(b) => TypeX::Base(*b),
        TypeS::Fun(a, b) => TypeX::fun2(trans_type(a), trans_type(b)),
    }
}

pub fn trans_coercion(s: &CoercionS) -> CoercionX {
    s.map_types(&trans_type)
}

#[derive(Clone, Debug)]
enum K {
    Var(Name),
    Lit(CoercionX),
}

impl K {
    fn term(&self) -> TermX {
        Rc::new(match self {
            K::Var(x) => Tx::Var(x.clone()),
            K::Lit(s) => Tx::CrcLit(s.clone()),
        })
    }

    fn is_identity(&self) -> bool {
        matches!(self, K::Lit(s) if s.is_identity())
    }
}

struct Translator {
    opts: Options,
    /// Every variable name of the source program.
    source: BTreeSet<Name>,
    /// Continuation variables bound around the current position.
    scope: Vec<Name>,
}

impl Translator {
    fn fresh_k(&self) -> Name {
        let mut avoid = self.source.clone();
        avoid.extend(self.scope.iter().cloned());
        fresh("k", &avoid)
    }

    /// `Ψ(V)`
    fn value(&mut self, v: &ATerm) -> TermX {
        Rc::new(match &v.node {
            ANode::Const(l) => Tx::Const(*l),
            ANode::Var(x) => Tx::Var(x.clone()),
            ANode::GlobalRef(f) => Tx::GlobalRef(f.clone()),
            ANode::Abs(x, a, body) => {
                let k = self.fresh_k();
                self.scope.push(k.clone());
                let b = self.k(body, &K::Var(k.clone()));
                self.scope.pop();
                Tx::Abs2 { x: x.clone(), x_ty: trans_type(a), k, k_ty: trans_type(&body.ty), body: b }
            }
            ANode::CoercedVal(u, d) => {
                let saved = std::mem::take(&mut self.scope);
                let u = self.value(u);
                self.scope = saved;
                Tx::CoercedVal(u, trans_coercion(d))
            }
            _ => unreachable!("Ψ applied to a non-value"),
        })
    }

    /// `C⟦M⟧`
    fn c(&mut self, m: &ATerm) -> TermX {
        if m.is_value() {
            return self.value(m);
        }
        match &m.node {
            ANode::CrcApp(n, s) => self.k(n, &K::Lit(trans_coercion(s))),
            _ => self.k(m, &K::Lit(CoercionX::id(trans_type(&m.ty)))),
        }
    }

    /// `K⟦M⟧K`
    fn k(&mut self, m: &ATerm, k: &K) -> TermX {
        if m.is_value() {
            return Rc::new(Tx::CrcApp(self.value(m), k.term()));
        }
        match &m.node {
            ANode::Op(o, l, r) => {
                let t = Rc::new(Tx::Op(*o, self.c(l), self.c(r)));
                if self.opts.opt_trop && k.is_identity() {
                    t
                } else {
                    Rc::new(Tx::CrcApp(t, k.term()))
                }
            }
            ANode::App(f, a) => Rc::new(Tx::App2(self.c(f), self.c(a), k.term())),
            ANode::CrcApp(n, s) => {
                let kappa = self.fresh_k();
                let bound = Rc::new(Tx::Compose(Rc::new(Tx::CrcLit(trans_coercion(s))), k.term()));
                self.scope.push(kappa.clone());
                let body = self.k(n, &K::Var(kappa.clone()));
                self.scope.pop();
                Rc::new(Tx::Let(kappa, bound, body))
            }
            ANode::Blame(p) => Rc::new(Tx::Blame(p.clone())),
            ANode::If(c, t, e) => Rc::new(Tx::If(self.c(c), self.k(t, k), self.k(e, k))),
            _ => unreachable!("values are handled above"),
        }
    }
}

fn source_names(p: &Program, extra: &Term) -> BTreeSet<Name> {
    let mut names = BTreeSet::new();
    for d in &p.defs {
        names.insert(d.name.clone());
        names.insert(d.param.clone());
        d.body.all_names(&mut names);
    }
    extra.all_names(&mut names);
    names
}

fn translator(p: &Program, m: &Term, opts: Options) -> Translator {
    Translator { opts, source: source_names(p, m), scope: Vec::new() }
}

/// `C⟦M⟧` for a closed term of type `ty` under the definitions of `p`.
pub fn translate_term(p: &Program, m: &Term, ty: &TypeS, opts: Options) -> Result<TermX, TranslateError> {
    let a = annotate(&Env::for_program(p), m, ty)?;
    Ok(translator(p, m, opts).c(&a))
}

/// `K⟦M⟧K` for `m` of type `ty` under `env`, rejecting continuations that
/// are not variables or literals.
pub fn translate_k(
    p: &Program,
    env: &Env,
    m: &Term,
    ty: &TypeS,
    k: &TermX,
    opts: Options,
) -> Result<TermX, TranslateError> {
    let k = match &**k {
        Tx::Var(x) => K::Var(x.clone()),
        Tx::CrcLit(s) => K::Lit(s.clone()),
        _ => return Err(TranslateError::KViolation(format!("{k:?}"))),
    };
    let a = annotate(env, m, ty)?;
    let mut t = translator(p, m, opts);
    if let K::Var(x) = &k {
        t.source.insert(x.clone());
    }
    Ok(t.k(&a, &k))
}

/// Translates every definition and the main term.
pub fn translate_program(p: &Program, opts: Options) -> Result<ProgramX, TranslateError> {
    let main_ty = typecheck_program(p)?;
    let mut defs = Vec::new();
    for d in &p.defs {
        let env = Env::for_program(p).with_local(&d.param, d.param_ty.clone());
        let body = annotate(&env, &d.body, &d.ret_ty)?;
        let mut t = translator(p, p.main(), opts);
        let k = t.fresh_k();
        t.scope.push(k.clone());
        let body = t.k(&body, &K::Var(k.clone()));
        defs.push(DefX {
            name: d.name.clone(),
            x: d.param.clone(),
            x_ty: trans_type(&d.param_ty),
            k,
            k_ty: trans_type(&d.ret_ty),
            body,
        });
    }
    let main = translate_term(p, p.main(), &main_ty, opts)?;
    Ok(ProgramX::new(defs, main))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_eq_x;
    use crate::coercion::BlameLabel;
    use crate::lam_s::term as s;
    use crate::lam_sx::term as x;
    use crate::lam_sx::{typecheck_program_x, typecheck_x, EnvX};
    use crate::ops::Op;
    use crate::types::{CrcType, Ground};

    fn p() -> BlameLabel {
        BlameLabel::new("p")
    }

    fn example_one() -> Term {
        let u = s::abs(
            "x",
            TypeS::Dyn,
            s::crc(s::op(Op::Add, s::crc(s::var("x"), CoercionS::proj(Ground::INT, &p())), s::int(2)), CoercionS::inj(Ground::INT)),
        );
        let f = CoercionS::mk_fun(CoercionS::inj(Ground::INT), CoercionS::proj(Ground::INT, &p()));
        s::crc(s::app(s::crc(u, f), s::int(3)), CoercionS::inj(Ground::INT))
    }

    #[test]
    fn example_one_translates_to_example_three() {
        let out = translate_term(&Program::default(), &example_one(), &TypeS::Dyn, Options::default()).unwrap();
        let u = x::abs2(
            "x",
            TypeX::Dyn,
            "k",
            TypeX::Dyn,
            x::let_(
                "k1",
                x::compose(x::lit(CoercionX::inj(Ground::INT)), x::var("k")),
                x::crc(x::op(Op::Add, x::crc(x::var("x"), x::lit(CoercionX::proj(Ground::INT, &p()))), x::int(2)), x::var("k1")),
            ),
        );
        let f = CoercionX::mk_fun(CoercionX::inj(Ground::INT), CoercionX::proj(Ground::INT, &p()));
        let expected = x::app2(x::crc(u, x::lit(f)), x::int(3), x::lit(CoercionX::inj(Ground::INT)));
        assert!(alpha_eq_x(&out, &expected), "{out:?}");
        assert_eq!(out, expected);
    }

    #[test]
    fn translation_preserves_types() {
        let out = translate_term(&Program::default(), &example_one(), &TypeS::Dyn, Options::default()).unwrap();
        assert_eq!(typecheck_x(&EnvX::new(), &out).unwrap(), TypeX::Dyn);
    }

    #[test]
    fn operation_under_identity() {
        let m = s::op(Op::Add, s::int(1), s::int(2));
        let plain = translate_term(&Program::default(), &m, &TypeS::INT, Options::default()).unwrap();
        assert_eq!(plain, x::crc(x::op(Op::Add, x::int(1), x::int(2)), x::lit(CoercionX::id(TypeX::INT))));
        let opt = translate_term(&Program::default(), &m, &TypeS::INT, Options { opt_trop: true }).unwrap();
        assert_eq!(opt, x::op(Op::Add, x::int(1), x::int(2)));
    }

    #[test]
    fn programs_translate_and_check() {
        let body = s::if_(
            s::op(Op::Eq, s::var("n"), s::int(0)),
            s::boolean(true),
            s::app(s::global("f"), s::op(Op::Sub, s::var("n"), s::int(1))),
        );
        let d = crate::lam_s::Def {
            name: "f".into(),
            param: "n".into(),
            param_ty: TypeS::INT,
            ret_ty: TypeS::BOOL,
            body,
        };
        let prog = Program::new(vec![d], s::app(s::global("f"), s::int(3)));
        let px = translate_program(&prog, Options::default()).unwrap();
        let main = typecheck_program_x(&px).unwrap();
        assert_eq!(TypeX::from_shape(&main.fill()).unwrap(), TypeX::BOOL);
    }

    #[test]
    fn rejects_composite_continuations() {
        let k = x::compose(x::var("a"), x::var("b"));
        let err = translate_k(&Program::default(), &Env::default(), &s::int(1), &TypeS::INT, &k, Options::default());
        assert!(matches!(err, Err(TranslateError::KViolation(_))));
    }
}

//! Properties of the translation: typing, substitution, evaluation contexts
//! and elimination of administrative identity continuations.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use coercion_core::alpha::alpha_eq_x;
use coercion_core::coercion::CoercionX;
use coercion_core::lam_s::subst::substitute;
use coercion_core::lam_s::term as t;
use coercion_core::lam_s::{evaluate, typecheck_program, Env, Kind, Outcome, Program, Term};
use coercion_core::lam_sx::subst::substitute_many;
use coercion_core::lam_sx::term as x;
use coercion_core::lam_sx::{check_x, step_x, typecheck_program_x, EnvX, StepResultX, TermX, Tx};
use coercion_core::name::{fresh, Name};
use coercion_core::ops::Op;
use coercion_core::translate::{trans_coercion, trans_type, translate_k, translate_program, translate_term, Options};
use coercion_core::types::{CrcType, TypeS};
use coercion_surface::{print_term_s, print_term_x};

use crate::gen::{GenConfig, Generator};

/// The translation of `p` typechecks at the translation of its type.
pub fn typed_translation(p: &Program, opts: Options) -> Result<(), String> {
    let ty = typecheck_program(p).map_err(|e| e.to_string())?;
    let px = translate_program(p, opts).map_err(|e| e.to_string())?;
    let shape = typecheck_program_x(&px).map_err(|e| e.to_string())?;
    let want = trans_type(&ty);
    if shape.meet(&want.to_shape()).is_none() {
        return Err(format!("translation has type {}, expected {want}", shape.render("=>")));
    }
    check_x(&EnvX::for_program(&px), px.main(), &want).map_err(|e| e.to_string())
}

fn generator(seed: u64) -> (Generator, ChaCha8Rng) {
    (Generator::new(GenConfig::new(seed, 4, TypeS::Dyn)), ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9)))
}

fn closed_value(g: &mut Generator, a: &TypeS) -> Option<Term> {
    let m = g.term(a, &[], 2);
    match evaluate(&Program::default(), &m, 10_000) {
        Ok(Outcome::Result(v)) => Some(v),
        _ => None,
    }
}

fn names_of(terms: &[&Term]) -> std::collections::BTreeSet<Name> {
    let mut out = std::collections::BTreeSet::new();
    for m in terms {
        m.all_names(&mut out);
    }
    out
}

/// Substituting `Ψ(V)` for `x` and `K` for `κ` in `K⟦M⟧κ` gives
/// `K⟦M[x := V]⟧K`, up to α-equivalence. Returns the first counterexample.
pub fn substitution_commutes(seed: u64, cases: usize) -> Option<String> {
    let (mut g, mut rng) = generator(seed);
    let p = Program::default();
    let opts = Options::default();
    let mut done = 0;
    while done < cases {
        let a = g.random_type(1);
        let b = g.random_type(1);
        let Some(v) = closed_value(&mut g, &a) else { continue };
        let var = Name::from(format!("y{}", rng.gen_range(0..1000)).as_str());
        let m = g.term(&b, &[(var.clone(), a.clone())], 4);
        let b2 = g.related_type(&b);
        let k = x::lit(trans_coercion(&g.coercion(&b, &b2)));
        let kappa = fresh("kappa", &names_of(&[&m, &v]));
        done += 1;

        let env = Env::default().with_local(&var, a.clone());
        let open = match translate_k(&p, &env, &m, &b, &x::var(&kappa), opts) {
            Ok(t) => t,
            Err(e) => return Some(format!("{}: {e}", print_term_s(&m, true))),
        };
        let psi_v = translate_term(&p, &v, &a, opts).expect("values translate");
        let lhs = substitute_many(&open, &[(var.clone(), psi_v), (kappa, k.clone())]);
        let rhs = match translate_k(&p, &Env::default(), &substitute(&m, &var, &v), &b, &k, opts) {
            Ok(t) => t,
            Err(e) => return Some(e.to_string()),
        };
        if !alpha_eq_x(&lhs, &rhs) {
            return Some(format!(
                "M = {}, V = {}: {} vs {}",
                print_term_s(&m, true),
                print_term_s(&v, true),
                print_term_x(&lhs, true),
                print_term_x(&rhs, true)
            ));
        }
    }
    None
}

/// `K⟦M⟧id` reaches `C⟦M⟧` by c-steps alone.
pub fn admin_elimination(seed: u64, cases: usize) -> Option<String> {
    let (mut g, _) = generator(seed);
    let p = Program::default();
    let px = Default::default();
    let opts = Options::default();
    for _ in 0..cases {
        let a = g.random_type(1);
        let m = g.term(&a, &[], 4);
        let id = x::lit(CoercionX::id(trans_type(&a)));
        let mut cur = translate_k(&p, &Env::default(), &m, &a, &id, opts).expect("generated terms translate");
        let target = translate_term(&p, &m, &a, opts).expect("generated terms translate");
        let mut steps = 0;
        while !alpha_eq_x(&cur, &target) {
            match step_x(&px, &cur) {
                Ok(StepResultX::Stepped(s)) if s.kind == Kind::C && steps < 100 => cur = s.next,
                _ => {
                    return Some(format!(
                        "{}: stopped at {} before {}",
                        print_term_s(&m, true),
                        print_term_x(&cur, true),
                        print_term_x(&target, true)
                    ))
                }
            }
            steps += 1;
        }
    }
    None
}

/// One evaluation frame, innermost first when stacked.
#[derive(Clone, Debug)]
enum Frame {
    OpL(Op, Term),
    OpR(Op, Term),
    AppFun(Term),
    AppArg(Term),
    IfCond(Term, Term),
    Crc(coercion_core::coercion::CoercionS),
}

fn plug(frames: &[Frame], m: &Term) -> Term {
    frames.iter().fold(m.clone(), |m, f| match f {
        Frame::OpL(o, r) => t::op(*o, m, r.clone()),
        Frame::OpR(o, l) => t::op(*o, l.clone(), m),
        Frame::AppFun(a) => t::app(m, a.clone()),
        Frame::AppArg(f) => t::app(f.clone(), m),
        Frame::IfCond(th, el) => t::if_(m, th.clone(), el.clone()),
        Frame::Crc(s) => t::crc(m, s.clone()),
    })
}

/// A random evaluation context around a hole of type `a`, with no
/// coercion frame next to the hole or to another coercion frame.
fn context(g: &mut Generator, rng: &mut ChaCha8Rng, a: &TypeS) -> (Vec<Frame>, TypeS) {
    let mut frames = Vec::new();
    let mut ty = a.clone();
    for i in 0..rng.gen_range(1..6) {
        let crc_ok = i > 0 && !matches!(frames.last(), Some(Frame::Crc(_)));
        let (frame, next) = match (rng.gen_range(0..5), &ty) {
            (0, TypeS::Base(_)) if ty == TypeS::INT => {
                let o = *[Op::Add, Op::Mul, Op::Lt].choose(rng).expect("nonempty");
                let other = g.term(&TypeS::INT, &[], 2);
                let res = if o == Op::Lt { TypeS::BOOL } else { TypeS::INT };
                if rng.gen() {
                    (Frame::OpL(o, other), res)
                } else {
                    (Frame::OpR(o, t::int(rng.gen_range(0..9))), res)
                }
            }
            (1, TypeS::Fun(d, c)) => (Frame::AppFun(g.term(d, &[], 2)), (**c).clone()),
            (2, TypeS::Base(_)) if ty == TypeS::BOOL => {
                let r = g.random_type(1);
                (Frame::IfCond(g.term(&r, &[], 2), g.term(&r, &[], 2)), r)
            }
            (3, _) if crc_ok => {
                let b = g.related_type(&ty);
                (Frame::Crc(g.coercion(&ty, &b)), b)
            }
            _ => {
                let c = g.random_type(1);
                let y = Name::from(format!("z{i}").as_str());
                let body = g.term(&c, &[(y.clone(), ty.clone())], 2);
                (Frame::AppArg(t::abs(&y, ty.clone(), body)), c)
            }
        };
        frames.push(frame);
        ty = next;
    }
    (frames, ty)
}

fn non_value(g: &mut Generator, a: &TypeS) -> Term {
    let m = g.term(a, &[], 3);
    if m.is_value() {
        t::app(t::abs("w", a.clone(), t::var("w")), m)
    } else {
        m
    }
}

/// Walks two translations in lockstep, binders matched pairwise, and counts
/// the positions where they hold `h1` and `h2` respectively.
fn holes(l: &Tx, r: &Tx, h1: &TermX, h2: &TermX, scope: &mut Vec<(Name, Name)>) -> Result<usize, String> {
    if scope.is_empty() && alpha_eq_x(&l.clone().into(), h1) && alpha_eq_x(&r.clone().into(), h2) {
        return Ok(1);
    }
    let pair = |scope: &mut Vec<(Name, Name)>, ls: &[&TermX], rs: &[&TermX]| -> Result<usize, String> {
        let mut n = 0;
        for (a, b) in ls.iter().zip(rs) {
            n += holes(a, b, h1, h2, scope)?;
        }
        Ok(n)
    };
    let mismatch = || Err(format!("{} differs from {}", print_term_x(&l.clone().into(), true), print_term_x(&r.clone().into(), true)));
    match (l, r) {
        (Tx::Var(a), Tx::Var(b)) => {
            let bound = scope.iter().rev().find(|(x, y)| x == a || y == b);
            match bound {
                Some((x, y)) if x == a && y == b => Ok(0),
                None if a == b => Ok(0),
                _ => mismatch(),
            }
        }
        (Tx::Abs2 { x, x_ty, k, k_ty, body }, Tx::Abs2 { x: x2, x_ty: xt2, k: k2, k_ty: kt2, body: b2 }) => {
            if x_ty != xt2 || k_ty != kt2 {
                return mismatch();
            }
            scope.push((x.clone(), x2.clone()));
            scope.push((k.clone(), k2.clone()));
            let n = holes(body, b2, h1, h2, scope);
            scope.truncate(scope.len() - 2);
            n
        }
        (Tx::Let(a, m, n), Tx::Let(b, m2, n2)) => {
            let first = holes(m, m2, h1, h2, scope)?;
            scope.push((a.clone(), b.clone()));
            let rest = holes(n, n2, h1, h2, scope);
            scope.pop();
            Ok(first + rest?)
        }
        (Tx::Op(o, a, b), Tx::Op(o2, a2, b2)) if o == o2 => pair(scope, &[a, b], &[a2, b2]),
        (Tx::App2(a, b, c), Tx::App2(a2, b2, c2)) | (Tx::If(a, b, c), Tx::If(a2, b2, c2)) => {
            pair(scope, &[a, b, c], &[a2, b2, c2])
        }
        (Tx::Compose(a, b), Tx::Compose(a2, b2)) | (Tx::CrcApp(a, b), Tx::CrcApp(a2, b2)) => {
            pair(scope, &[a, b], &[a2, b2])
        }
        (Tx::CoercedVal(..) | Tx::Const(_) | Tx::CrcLit(_) | Tx::Blame(_) | Tx::GlobalRef(_), _) => {
            if alpha_eq_x(&l.clone().into(), &r.clone().into()) {
                Ok(0)
            } else {
                mismatch()
            }
        }
        _ => mismatch(),
    }
}

/// For a random context `F` and terms `M1`, `M2` of the same type,
/// `C⟦F[M1]⟧` and `C⟦F[M2]⟧` differ exactly at one position, where they
/// hold `C⟦M1⟧` and `C⟦M2⟧`.
pub fn context_decomposition(seed: u64, cases: usize) -> Option<String> {
    let (mut g, mut rng) = generator(seed);
    let p = Program::default();
    let opts = Options::default();
    for _ in 0..cases {
        let a = g.random_type(1);
        let m1 = non_value(&mut g, &a);
        let m2 = non_value(&mut g, &a);
        if coercion_core::alpha::alpha_eq_s(&m1, &m2) {
            continue;
        }
        let (frames, ty) = context(&mut g, &mut rng, &a);
        let (f1, f2) = (plug(&frames, &m1), plug(&frames, &m2));
        let tr = |m: &Term, ty: &TypeS| translate_term(&p, m, ty, opts).expect("generated terms translate");
        let (c1, c2) = (tr(&f1, &ty), tr(&f2, &ty));
        let (h1, h2) = (tr(&m1, &a), tr(&m2, &a));
        match holes(&c1, &c2, &h1, &h2, &mut Vec::new()) {
            Ok(1) => {}
            Ok(n) => return Some(format!("{} holes in {}", n, print_term_s(&f1, true))),
            Err(e) => return Some(format!("{}: {e}", print_term_s(&f1, true))),
        }
    }
    None
}

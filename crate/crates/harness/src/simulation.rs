//! Step-by-step simulation of λS runs by their translations.
//!
//! Each λS step `M -> N` is replayed from `C⟦M⟧`: an e-step must be matched
//! by exactly one λSx e-step followed by c-steps, a c-step by one or more
//! c-steps, until the λSx term is α-equal to `C⟦N⟧`.

use coercion_core::alpha::alpha_eq_x;
use coercion_core::coercion::Coercion;
use coercion_core::lam_s::{step, typecheck_program, Kind, Program, StepResult, Term, TermS};
use coercion_core::lam_sx::{step_x, ProgramX, StepResultX, TermX, Tx};
use coercion_core::name::Name;
use coercion_core::translate::{translate_program, translate_term, Options};
use coercion_core::types::{CrcType, TypeS};
use coercion_surface::print_term_x;

use crate::differential::witness;
use crate::report::Verdict;

/// Bound on the λSx steps spent matching a single λS step.
pub const MATCH_FUEL: usize = 20_000;

/// Identity coercions at any types, and otherwise equal coercions.
fn crc_loose<T: CrcType>(a: &Coercion<T>, b: &Coercion<T>) -> bool {
    match (a, b) {
        _ if a.is_identity() && b.is_identity() => true,
        (Coercion::ProjSeq(g, p, i), Coercion::ProjSeq(h, q, j)) => g == h && p == q && crc_loose(i, j),
        (Coercion::InjSeq(i, g), Coercion::InjSeq(j, h)) => g == h && crc_loose(i, j),
        (Coercion::Fun(s, t), Coercion::Fun(s2, t2)) => crc_loose(s, s2) && crc_loose(t, t2),
        _ => a == b,
    }
}

/// α-equivalence that ignores the types of identity coercions and of
/// continuation binders. Those types are chosen by the typing derivation,
/// which failure coercions and blame leave open.
pub fn loose_eq(m: &Tx, n: &Tx, scope: &mut Vec<(Name, Name)>) -> bool {
    let go = |a: &TermX, b: &TermX, scope: &mut Vec<(Name, Name)>| loose_eq(a, b, scope);
    match (m, n) {
        (Tx::Var(x), Tx::Var(y)) => match scope.iter().rev().find(|(a, b)| a == x || b == y) {
            Some((a, b)) => a == x && b == y,
            None => x == y,
        },
        (Tx::Abs2 { x, x_ty, k, body, .. }, Tx::Abs2 { x: x2, x_ty: xt2, k: k2, body: b2, .. }) => {
            scope.push((x.clone(), x2.clone()));
            scope.push((k.clone(), k2.clone()));
            let r = x_ty == xt2 && go(body, b2, scope);
            scope.truncate(scope.len() - 2);
            r
        }
        (Tx::Let(x, b, body), Tx::Let(y, b2, body2)) => {
            if !go(b, b2, scope) {
                return false;
            }
            scope.push((x.clone(), y.clone()));
            let r = go(body, body2, scope);
            scope.pop();
            r
        }
        (Tx::Op(o, a, b), Tx::Op(o2, a2, b2)) => o == o2 && go(a, a2, scope) && go(b, b2, scope),
        (Tx::Compose(a, b), Tx::Compose(a2, b2)) | (Tx::CrcApp(a, b), Tx::CrcApp(a2, b2)) => {
            go(a, a2, scope) && go(b, b2, scope)
        }
        (Tx::App2(a, b, c), Tx::App2(a2, b2, c2)) | (Tx::If(a, b, c), Tx::If(a2, b2, c2)) => {
            go(a, a2, scope) && go(b, b2, scope) && go(c, c2, scope)
        }
        (Tx::CoercedVal(u, d), Tx::CoercedVal(u2, d2)) => crc_loose(d, d2) && loose_eq(u, u2, &mut Vec::new()),
        (Tx::CrcLit(a), Tx::CrcLit(b)) => crc_loose(a, b),
        _ => m == n,
    }
}

fn has_open_typing(m: &Term) -> bool {
    let mut fail = false;
    m.for_each_coercion(&mut |c, _| fail |= c.is_fail());
    fail || has_blame(m)
}

fn has_blame(m: &TermS) -> bool {
    match m {
        TermS::Blame(_) => true,
        TermS::Abs(_, _, b) => has_blame(b),
        TermS::Op(_, l, r) | TermS::App(l, r) => has_blame(l) || has_blame(r),
        TermS::CrcApp(n, _) | TermS::CoercedVal(n, _) => has_blame(n),
        TermS::If(c, t, e) => has_blame(c) || has_blame(t) || has_blame(e),
        TermS::Const(_) | TermS::Var(_) | TermS::GlobalRef(_) => false,
    }
}

enum Matched {
    Yes,
    No(String),
}

fn replay(px: &ProgramX, from: &TermX, to: &TermX, kind: Kind, allow_zero: bool, loose: bool) -> Matched {
    let same = |a: &TermX| alpha_eq_x(a, to) || (loose && loose_eq(a, to, &mut Vec::new()));
    if allow_zero && same(from) {
        return Matched::Yes;
    }
    let mut cur = from.clone();
    let mut need_e = kind == Kind::E;
    for _ in 0..MATCH_FUEL {
        let s = match step_x(px, &cur) {
            Ok(StepResultX::Stepped(s)) => s,
            Ok(_) => return Matched::No(format!("λSx halted at {}", print_term_x(&cur, true))),
            Err(e) => return Matched::No(e.to_string()),
        };
        match (need_e, s.kind) {
            (true, Kind::E) => need_e = false,
            (_, Kind::C) if !need_e => {}
            (_, k) => return Matched::No(format!("unexpected {k}-step {} at {}", s.rule, print_term_x(&cur, true))),
        }
        cur = s.next;
        if !need_e && same(&cur) {
            return Matched::Yes;
        }
    }
    Matched::No(format!("no match within {MATCH_FUEL} steps, reached {}", print_term_x(&cur, true)))
}

fn translate_at(p: &Program, m: &Term, ty: &TypeS, opts: Options) -> Result<TermX, String> {
    translate_term(p, m, ty, opts).map_err(|e| e.to_string())
}

/// Checks at most `max_steps` λS steps of `p`.
pub fn simulation_check(p: &Program, max_steps: usize, opts: Options) -> Verdict {
    let ty = match typecheck_program(p) {
        Ok(ty) => ty,
        Err(e) => return Verdict::violation("typing", witness(p), 0, e.to_string()),
    };
    let px = match translate_program(p, opts) {
        Ok(px) => px,
        Err(e) => return Verdict::violation("translation", witness(p), 0, e.to_string()),
    };
    let mut cur = p.main().clone();
    let mut cm = match translate_at(p, &cur, &ty, opts) {
        Ok(t) => t,
        Err(e) => return Verdict::violation("translation", witness(p), 0, e),
    };
    for i in 0..max_steps {
        let s = match step(p, &cur) {
            Ok(StepResult::Stepped(s)) => s,
            Ok(_) => break,
            Err(e) => return Verdict::violation("progress", witness(p), i, e.to_string()),
        };
        let cn = match translate_at(p, &s.next, &ty, opts) {
            Ok(t) => t,
            Err(e) => return Verdict::violation("simulation", witness(p), i, e),
        };
        let to_blame = matches!(&*s.next, TermS::Blame(_));
        let loose = has_open_typing(&s.next);
        if let Matched::No(why) = replay(&px, &cm, &cn, s.kind, to_blame, loose) {
            return Verdict::violation("simulation", witness(p), i, format!("{} step {}: {why}", s.kind, s.rule));
        }
        cur = s.next;
        cm = cn;
    }
    Verdict::Agree { outcome: crate::report::Observed::Value(format!("{ty}")) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coercion_surface::parse_program_s;

    #[test]
    fn example_program_is_simulated() {
        let p = parse_program_s(r"((\x:Dyn. (x<Int?^p> + 2)<Int!>)<Int! -> Int?^p> 3)<Int!>").unwrap();
        for opt_trop in [false, true] {
            let v = simulation_check(&p, 1000, Options { opt_trop });
            assert!(!v.is_failure(), "{v:?}");
        }
    }

    #[test]
    fn recursion_is_simulated() {
        let p = parse_program_s(
            "letrec even (x:Int) : Dyn = if x = 0 then true<Bool!> else (odd (x - 1))<Bool!>\n\
             and odd (x:Int) : Bool = if x = 0 then false else (even (x - 1))<Bool?^p>\n\
             in odd 4",
        )
        .unwrap();
        let v = simulation_check(&p, 1000, Options::default());
        assert!(!v.is_failure(), "{v:?}");
    }

    #[test]
    fn identity_types_under_failure_are_ignored() {
        let a = coercion_surface::parse_term_x("f (1, id{Int => Int})").unwrap();
        let b = coercion_surface::parse_term_x("f (1, id{Dyn => Dyn})").unwrap();
        assert!(!alpha_eq_x(&a, &b));
        assert!(loose_eq(&a, &b, &mut Vec::new()));
        let c = coercion_surface::parse_term_x("f (1, Int!)").unwrap();
        assert!(!loose_eq(&a, &c, &mut Vec::new()));
    }

    #[test]
    fn failure_merges_are_simulated() {
        for seed in [294, 325] {
            let p = crate::gen::gen_well_typed(&crate::gen::GenConfig::for_seed(seed, 8)).unwrap();
            let v = simulation_check(&p, 5000, Options::default());
            assert!(!v.is_failure(), "{v:?}");
        }
    }
}

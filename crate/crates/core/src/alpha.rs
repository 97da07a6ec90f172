//! α-equivalence for both calculi.

use crate::lam_s::{Term, TermS};
use crate::lam_sx::{TermX, Tx};
use crate::name::Name;

/// Pairs of binders in scope, innermost last.
type Scope = Vec<(Name, Name)>;

fn same_var(scope: &Scope, x: &Name, y: &Name) -> bool {
    for (a, b) in scope.iter().rev() {
        if a == x || b == y {
            return a == x && b == y;
        }
    }
    x == y
}

pub fn alpha_eq_s(m: &Term, n: &Term) -> bool {
    eq_s(m, n, &mut Vec::new())
}

fn eq_s(m: &TermS, n: &TermS, scope: &mut Scope) -> bool {
    match (m, n) {
        (TermS::Var(x), TermS::Var(y)) => same_var(scope, x, y),
        (TermS::Abs(x, a, b), TermS::Abs(y, a2, b2)) => {
            if a != a2 {
                return false;
            }
            scope.push((x.clone(), y.clone()));
            let r = eq_s(b, b2, scope);
            scope.pop();
            r
        }
        (TermS::Op(o, l, r), TermS::Op(o2, l2, r2)) => o == o2 && eq_s(l, l2, scope) && eq_s(r, r2, scope),
        (TermS::App(f, a), TermS::App(f2, a2)) => eq_s(f, f2, scope) && eq_s(a, a2, scope),
        (TermS::CrcApp(m, s), TermS::CrcApp(m2, s2)) => s == s2 && eq_s(m, m2, scope),
        (TermS::CoercedVal(u, d), TermS::CoercedVal(u2, d2)) => d == d2 && eq_s(u, u2, &mut Vec::new()),
        (TermS::If(c, t, e), TermS::If(c2, t2, e2)) => eq_s(c, c2, scope) && eq_s(t, t2, scope) && eq_s(e, e2, scope),
        (TermS::Const(a), TermS::Const(b)) => a == b,
        (TermS::Blame(p), TermS::Blame(q)) => p == q,
        (TermS::GlobalRef(f), TermS::GlobalRef(g)) => f == g,
        _ => false,
    }
}

pub fn alpha_eq_x(m: &TermX, n: &TermX) -> bool {
    eq_x(m, n, &mut Vec::new())
}

fn eq_x(m: &Tx, n: &Tx, scope: &mut Scope) -> bool {
    match (m, n) {
        (Tx::Var(x), Tx::Var(y)) => same_var(scope, x, y),
        (
            Tx::Abs2 { x, x_ty, k, k_ty, body },
            Tx::Abs2 { x: x2, x_ty: xt2, k: k2, k_ty: kt2, body: b2 },
        ) => {
            if x_ty != xt2 || k_ty != kt2 {
                return false;
            }
            scope.push((x.clone(), x2.clone()));
            scope.push((k.clone(), k2.clone()));
            let r = eq_x(body, b2, scope);
            scope.truncate(scope.len() - 2);
            r
        }
        (Tx::Let(x, b, body), Tx::Let(y, b2, body2)) => {
            if !eq_x(b, b2, scope) {
                return false;
            }
            scope.push((x.clone(), y.clone()));
            let r = eq_x(body, body2, scope);
            scope.pop();
            r
        }
        (Tx::Op(o, l, r), Tx::Op(o2, l2, r2)) => o == o2 && eq_x(l, l2, scope) && eq_x(r, r2, scope),
        (Tx::Compose(l, r), Tx::Compose(l2, r2)) | (Tx::CrcApp(l, r), Tx::CrcApp(l2, r2)) => {
            eq_x(l, l2, scope) && eq_x(r, r2, scope)
        }
        (Tx::App2(a, b, c), Tx::App2(a2, b2, c2)) | (Tx::If(a, b, c), Tx::If(a2, b2, c2)) => {
            eq_x(a, a2, scope) && eq_x(b, b2, scope) && eq_x(c, c2, scope)
        }
        (Tx::CoercedVal(u, d), Tx::CoercedVal(u2, d2)) => d == d2 && eq_x(u, u2, &mut Vec::new()),
        (Tx::CrcLit(s), Tx::CrcLit(t)) => s == t,
        (Tx::Const(a), Tx::Const(b)) => a == b,
        (Tx::Blame(p), Tx::Blame(q)) => p == q,
        (Tx::GlobalRef(f), Tx::GlobalRef(g)) => f == g,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lam_sx::term as x;
    use crate::types::{TypeS, TypeX};

    #[test]
    fn renaming_binders_is_invisible() {
        use crate::lam_s::term::*;
        assert!(alpha_eq_s(&abs("x", TypeS::INT, var("x")), &abs("y", TypeS::INT, var("y"))));
        assert!(!alpha_eq_s(&abs("x", TypeS::INT, var("z")), &abs("y", TypeS::INT, var("y"))));
        assert!(!alpha_eq_s(&abs("x", TypeS::INT, var("x")), &abs("x", TypeS::BOOL, var("x"))));
    }

    #[test]
    fn shadowing_is_respected() {
        let a = x::abs2("x", TypeX::INT, "k", TypeX::INT, x::let_("x", x::var("k"), x::var("x")));
        let b = x::abs2("y", TypeX::INT, "j", TypeX::INT, x::let_("z", x::var("j"), x::var("z")));
        let c = x::abs2("y", TypeX::INT, "j", TypeX::INT, x::let_("z", x::var("j"), x::var("y")));
        assert!(alpha_eq_x(&a, &b));
        assert!(!alpha_eq_x(&a, &c));
    }
}

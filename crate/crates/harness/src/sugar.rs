//! A readable view of λSx states: continuation lets are inlined and
//! identity coercion applications erased.

use std::rc::Rc;

use coercion_core::lam_sx::subst::substitute;
use coercion_core::lam_sx::{TermX, Tx};

pub fn sugar_x(m: &TermX) -> TermX {
    let s = sugar_x;
    Rc::new(match &**m {
        Tx::Let(x, b, n) => return substitute(&s(n), x, &s(b)),
        Tx::CrcApp(n, k) if matches!(&**k, Tx::CrcLit(c) if c.is_identity()) => return s(n),
        Tx::Abs2 { x, x_ty, k, k_ty, body } => {
            Tx::Abs2 { x: x.clone(), x_ty: x_ty.clone(), k: k.clone(), k_ty: k_ty.clone(), body: s(body) }
        }
        Tx::Op(o, l, r) => Tx::Op(*o, s(l), s(r)),
        Tx::App2(f, a, k) => Tx::App2(s(f), s(a), s(k)),
        Tx::Compose(l, r) => Tx::Compose(s(l), s(r)),
        Tx::CrcApp(n, k) => Tx::CrcApp(s(n), s(k)),
        Tx::If(c, t, e) => Tx::If(s(c), s(t), s(e)),
        Tx::CoercedVal(u, d) => Tx::CoercedVal(s(u), d.clone()),
        Tx::Const(_) | Tx::Var(_) | Tx::CrcLit(_) | Tx::Blame(_) | Tx::GlobalRef(_) => return m.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use coercion_surface::{parse_term_x, print_term_x};

    #[test]
    fn lets_and_identities_disappear() {
        let m = parse_term_x("let k1 = Bool?^p ;; id{Bool} in even ((4 - 1)<id{Int}>, k1)").unwrap();
        assert_eq!(print_term_x(&sugar_x(&m), true), "even (4 - 1, Bool?^p ;; id{Bool})");
    }
}

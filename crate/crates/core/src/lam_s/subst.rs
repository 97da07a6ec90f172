use std::collections::BTreeSet;
use std::rc::Rc;

use super::term::{Term, TermS};
use crate::name::{fresh, Name};

/// `m[x := v]`, renaming binders that would capture a free variable of `v`.
pub fn substitute(m: &Term, x: &str, v: &Term) -> Term {
    let fv = v.free_vars();
    subst(m, x, v, &fv)
}

fn subst(m: &Term, x: &str, v: &Term, fv: &BTreeSet<Name>) -> Term {
    match &**m {
        TermS::Var(y) => {
            if &**y == x {
                v.clone()
            } else {
                m.clone()
            }
        }
        TermS::Const(_) | TermS::Blame(_) | TermS::GlobalRef(_) => m.clone(),
        TermS::Abs(y, a, body) => {
            if &**y == x || !body.free_vars().contains(x) {
                return m.clone();
            }
            if fv.contains(y) {
                let mut avoid = fv.clone();
                body.all_names(&mut avoid);
                avoid.insert(Name::from(x));
                let z = fresh(y, &avoid);
                let renamed = subst(body, y, &Rc::new(TermS::Var(z.clone())), &BTreeSet::new());
                Rc::new(TermS::Abs(z, a.clone(), subst(&renamed, x, v, fv)))
            } else {
                Rc::new(TermS::Abs(y.clone(), a.clone(), subst(body, x, v, fv)))
            }
        }
        TermS::Op(o, l, r) => Rc::new(TermS::Op(*o, subst(l, x, v, fv), subst(r, x, v, fv))),
        TermS::App(f, a) => Rc::new(TermS::App(subst(f, x, v, fv), subst(a, x, v, fv))),
        TermS::CrcApp(n, s) => Rc::new(TermS::CrcApp(subst(n, x, v, fv), s.clone())),
        // `U<<d>>` is closed.
        TermS::CoercedVal(..) => m.clone(),
        TermS::If(c, t, e) => Rc::new(TermS::If(subst(c, x, v, fv), subst(t, x, v, fv), subst(e, x, v, fv))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_eq_s;
    use crate::coercion::CoercionS;
    use crate::lam_s::term::*;
    use crate::types::{Ground, TypeS};

    #[test]
    fn substitutes_under_binders() {
        let m = abs("y", TypeS::INT, var("x"));
        assert_eq!(substitute(&m, "x", &int(5)), abs("y", TypeS::INT, int(5)));
    }

    #[test]
    fn respects_shadowing() {
        let m = abs("x", TypeS::INT, var("x"));
        assert_eq!(substitute(&m, "x", &int(5)), m);
    }

    #[test]
    fn reaches_coercion_subjects() {
        let m = crc(var("x"), CoercionS::inj(Ground::INT));
        assert_eq!(substitute(&m, "x", &int(5)), crc(int(5), CoercionS::inj(Ground::INT)));
    }

    #[test]
    fn avoids_capture() {
        let m = abs("y", TypeS::INT, app(var("x"), var("y")));
        let out = substitute(&m, "x", &var("y"));
        let expected = abs("z", TypeS::INT, app(var("y"), var("z")));
        assert!(alpha_eq_s(&out, &expected));
        assert!(out.free_vars().contains("y"));
    }
}

use std::collections::BTreeSet;
use std::rc::Rc;

use super::term::{TermX, Tx};
use crate::name::{fresh, Name};

/// Simultaneous capture-avoiding substitution `m[x1 := v1, ...]`.
pub fn substitute_many(m: &TermX, sigma: &[(Name, TermX)]) -> TermX {
    let mut fv = BTreeSet::new();
    for (_, v) in sigma {
        fv.extend(v.free_vars());
    }
    subst(m, sigma, &fv)
}

pub fn substitute(m: &TermX, x: &str, v: &TermX) -> TermX {
    substitute_many(m, &[(Name::from(x), v.clone())])
}

fn without(sigma: &[(Name, TermX)], bound: &[&Name]) -> Vec<(Name, TermX)> {
    sigma.iter().filter(|(x, _)| !bound.contains(&x)).cloned().collect()
}

/// Renames `y` when it would capture a variable of the substituted terms.
fn rebind(y: &Name, body: &TermX, avoid: &BTreeSet<Name>, taken: &mut BTreeSet<Name>) -> (Name, TermX) {
    if !avoid.contains(y) {
        return (y.clone(), body.clone());
    }
    let mut all = avoid.clone();
    all.extend(taken.iter().cloned());
    body.all_names(&mut all);
    let z = fresh(y, &all);
    taken.insert(z.clone());
    let renamed = subst(body, &[(y.clone(), Rc::new(Tx::Var(z.clone())))], &BTreeSet::new());
    (z, renamed)
}

fn mentions(body: &TermX, sigma: &[(Name, TermX)]) -> bool {
    let fv = body.free_vars();
    sigma.iter().any(|(x, _)| fv.contains(x))
}

fn subst(m: &TermX, sigma: &[(Name, TermX)], fv: &BTreeSet<Name>) -> TermX {
    if sigma.is_empty() {
        return m.clone();
    }
    let go = |n: &TermX| subst(n, sigma, fv);
    match &**m {
        Tx::Var(y) => match sigma.iter().find(|(x, _)| x == y) {
            Some((_, v)) => v.clone(),
            None => m.clone(),
        },
        Tx::Const(_) | Tx::Blame(_) | Tx::GlobalRef(_) | Tx::CrcLit(_) | Tx::CoercedVal(..) => m.clone(),
        Tx::Abs2 { x, x_ty, k, k_ty, body } => {
            let inner = without(sigma, &[x, k]);
            if !mentions(body, &inner) {
                return m.clone();
            }
            let mut taken: BTreeSet<Name> = [x.clone(), k.clone()].into();
            let (x2, body) = rebind(x, body, fv, &mut taken);
            let (k2, body) = rebind(k, &body, fv, &mut taken);
            Rc::new(Tx::Abs2 { x: x2, x_ty: x_ty.clone(), k: k2, k_ty: k_ty.clone(), body: subst(&body, &inner, fv) })
        }
        Tx::Let(y, bound, body) => {
            let inner = without(sigma, &[y]);
            if !mentions(body, &inner) {
                return Rc::new(Tx::Let(y.clone(), go(bound), body.clone()));
            }
            let (y2, body) = rebind(y, body, fv, &mut BTreeSet::new());
            Rc::new(Tx::Let(y2, go(bound), subst(&body, &inner, fv)))
        }
        Tx::Op(o, l, r) => Rc::new(Tx::Op(*o, go(l), go(r))),
        Tx::App2(f, a, k) => Rc::new(Tx::App2(go(f), go(a), go(k))),
        Tx::Compose(l, r) => Rc::new(Tx::Compose(go(l), go(r))),
        Tx::CrcApp(n, k) => Rc::new(Tx::CrcApp(go(n), go(k))),
        Tx::If(c, t, e) => Rc::new(Tx::If(go(c), go(t), go(e))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_eq_x;
    use crate::coercion::CoercionX;
    use crate::lam_sx::term::*;
    use crate::types::{Ground, TypeX};

    #[test]
    fn substitutes_both_parameters_at_once() {
        let m = crc(var("x"), var("k"));
        let s = lit(CoercionX::inj(Ground::INT));
        let out = substitute_many(&m, &[(Name::from("x"), var("k")), (Name::from("k"), s.clone())]);
        assert_eq!(out, crc(var("k"), s));
    }

    #[test]
    fn let_binders_shadow() {
        let m = let_("x", var("x"), var("x"));
        assert_eq!(substitute(&m, "x", &int(1)), let_("x", int(1), var("x")));
    }

    #[test]
    fn avoids_capture_under_two_binders() {
        let m = abs2("y", TypeX::INT, "k", TypeX::INT, crc(var("x"), var("k")));
        let out = substitute(&m, "x", &var("k"));
        let expected = abs2("y", TypeX::INT, "j", TypeX::INT, crc(var("k"), var("j")));
        assert!(alpha_eq_x(&out, &expected));
    }
}

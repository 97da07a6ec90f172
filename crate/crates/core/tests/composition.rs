//! Coercion composition: the worked examples, one case per rule, and a
//! randomized comparison against a direct semantic reading of coercions.

use std::rc::Rc;

use coercion_core::coercion::{BlameLabel, Coercion, CoercionS, CoercionX};
use coercion_core::translate::{trans_coercion, trans_type};
use coercion_core::types::{Base, CrcType, Ground, TypeS, TypeX};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = CoercionS;

fn p() -> BlameLabel {
    BlameLabel::new("p")
}

fn q() -> BlameLabel {
    BlameLabel::new("q")
}

fn int_inj() -> C {
    C::inj(Ground::INT)
}

fn int_proj(l: &BlameLabel) -> C {
    C::proj(Ground::INT, l)
}

fn id_int() -> C {
    C::id(TypeS::INT)
}

fn dyn_fun() -> TypeS {
    TypeS::fun(TypeS::Dyn, TypeS::Dyn)
}

fn fun(s: C, t: C) -> C {
    Coercion::Fun(Rc::new(s), Rc::new(t))
}

fn cmp(s: &C, t: &C) -> C {
    let r = s.compose(t).unwrap_or_else(|e| panic!("{s} ⨟ {t}: {e}"));
    assert!(r.is_canonical(), "{s} ⨟ {t} = {r} is not canonical");
    r
}

// The semantic reading: a coercion maps a value to a value or to blame.

#[derive(Clone)]
enum Val {
    Int(i64),
    Bool(bool),
    Fun(Rc<dyn Fn(Val) -> Res>),
    Tagged(Ground, Box<Val>),
}

type Res = Result<Val, BlameLabel>;

fn apply(c: &C, v: Val) -> Res {
    match c {
        Coercion::IdStar | Coercion::Id(_) => Ok(v),
        Coercion::InjSeq(g, gr) => Ok(Val::Tagged(*gr, Box::new(apply(g, v)?))),
        Coercion::ProjSeq(gr, l, i) => match v {
            Val::Tagged(h, inner) if h == *gr => apply(i, *inner),
            Val::Tagged(..) => Err(l.clone()),
            _ => panic!("projection applied to an untagged value"),
        },
        Coercion::Fail(_, l, _) => Err(l.clone()),
        Coercion::Fun(s, t) => match v {
            Val::Fun(f) => {
                let (s, t) = (s.clone(), t.clone());
                Ok(Val::Fun(Rc::new(move |x| apply(&t, f(apply(&s, x)?)?))))
            }
            _ => panic!("function coercion applied to a non-function"),
        },
    }
}

#[derive(Debug, PartialEq)]
enum Obs {
    Int(i64),
    Bool(bool),
    Tagged(Ground, Box<Obs>),
    Fun(Vec<Obs>),
    Opaque,
    Blame(BlameLabel),
}

fn probes(ty: &TypeS) -> Vec<Val> {
    match ty {
        TypeS::Base(Base::Int) => vec![Val::Int(0), Val::Int(7)],
        TypeS::Base(Base::Bool) => vec![Val::Bool(true), Val::Bool(false)],
        TypeS::Dyn => vec![
            Val::Tagged(Ground::INT, Box::new(Val::Int(3))),
            Val::Tagged(Ground::BOOL, Box::new(Val::Bool(true))),
            Val::Tagged(Ground::DynFun, Box::new(Val::Fun(Rc::new(Ok)))),
        ],
        TypeS::Fun(a, b) => {
            let k = probes(b).swap_remove(0);
            let mut out = vec![Val::Fun(Rc::new(move |_| Ok(k.clone())))];
            if a == b {
                out.push(Val::Fun(Rc::new(Ok)));
            }
            out
        }
    }
}

fn ground_type(g: Ground) -> TypeS {
    TypeS::ground(g)
}

fn observe(r: Res, ty: &TypeS, depth: usize) -> Obs {
    match r {
        Err(l) => Obs::Blame(l),
        Ok(Val::Int(n)) => Obs::Int(n),
        Ok(Val::Bool(b)) => Obs::Bool(b),
        Ok(Val::Tagged(g, v)) => Obs::Tagged(g, Box::new(observe(Ok(*v), &ground_type(g), depth))),
        Ok(Val::Fun(f)) => {
            let Some((a, b)) = ty.as_arrow() else { panic!("function observed at {ty}") };
            if depth == 0 {
                return Obs::Opaque;
            }
            Obs::Fun(probes(a).into_iter().map(|x| observe(f(x), b, depth - 1)).collect())
        }
    }
}

/// `s ⨟ t` behaves like `s` followed by `t` on every probe of type `a`.
fn assert_semantic(s: &C, t: &C, a: &TypeS, c: &TypeS) {
    let r = cmp(s, t);
    for v in probes(a) {
        let direct = observe(apply(s, v.clone()).and_then(|w| apply(t, w)), c, 3);
        let composed = observe(apply(&r, v), c, 3);
        assert_eq!(direct, composed, "{s} ⨟ {t} = {r} at {a}");
    }
}

#[test]
fn worked_examples() {
    let bool_inj = C::inj(Ground::BOOL);
    let bool_proj = C::proj(Ground::BOOL, &p());
    assert_eq!(cmp(&bool_inj, &bool_proj), C::id(TypeS::BOOL));

    let fun_inj = C::inj(Ground::DynFun);
    assert_eq!(cmp(&fun_inj, &int_proj(&p())), C::fail(Ground::DynFun, &p(), Ground::INT));

    let left = fun(int_proj(&p()), C::inj(Ground::BOOL));
    let right = fun(int_inj(), C::IdStar);
    assert_eq!(cmp(&left, &right), fun(id_int(), C::inj(Ground::BOOL)));

    let proj_inj = cmp(&int_proj(&p()), &int_inj());
    assert_eq!(proj_inj, Coercion::ProjSeq(Ground::INT, p(), Rc::new(int_inj())));

    assert_eq!(cmp(&int_inj(), &proj_inj), int_inj());
}

#[test]
fn one_case_per_rule() {
    let fail = C::fail(Ground::INT, &p(), Ground::BOOL);
    let wrapper = fun(int_proj(&p()), int_inj());

    // CC-IdDynL
    assert_eq!(cmp(&C::IdStar, &int_proj(&p())), int_proj(&p()));
    // CC-ProjL
    assert_eq!(
        cmp(&int_proj(&p()), &fail),
        Coercion::ProjSeq(Ground::INT, p(), Rc::new(fail.clone()))
    );
    // CC-InjId
    assert_eq!(cmp(&int_inj(), &C::IdStar), int_inj());
    // CC-Collapse
    assert_eq!(cmp(&int_inj(), &int_proj(&p())), id_int());
    // CC-FailL
    assert_eq!(cmp(&fail, &C::inj(Ground::BOOL)), fail);
    // CC-Conflict
    assert_eq!(cmp(&int_inj(), &C::proj(Ground::BOOL, &p())), fail);
    // CC-FailR
    assert_eq!(cmp(&id_int(), &fail), fail);
    // CC-InjR
    assert_eq!(cmp(&id_int(), &int_inj()), int_inj());
    assert_eq!(cmp(&wrapper, &C::inj(Ground::DynFun)), Coercion::InjSeq(Rc::new(wrapper.clone()), Ground::DynFun));
    // CC-IdL
    assert_eq!(cmp(&id_int(), &id_int()), id_int());
    assert_eq!(cmp(&C::id(TypeS::fun(TypeS::INT, TypeS::INT)), &wrapper), wrapper);
    // CC-IdR
    assert_eq!(cmp(&wrapper, &C::id(dyn_fun())), wrapper);
    // CC-Fun, collapsing to an identity
    let there = fun(int_proj(&q()), int_inj());
    let back = fun(int_inj(), int_proj(&p()));
    assert_eq!(cmp(&there, &back), C::id(TypeS::fun(TypeS::INT, TypeS::INT)));
    // CC-Fun, otherwise
    assert_eq!(
        cmp(&back, &there),
        fun(
            Coercion::ProjSeq(Ground::INT, q(), Rc::new(int_inj())),
            Coercion::ProjSeq(Ground::INT, p(), Rc::new(int_inj()))
        )
    );
}

#[test]
fn mismatched_types_are_rejected() {
    let wrapper = fun(int_proj(&p()), int_inj());
    assert!(wrapper.compose(&id_int()).is_err());
    assert!(int_inj().compose(&id_int()).is_err());
}

#[test]
fn coercion_passing_function_collapse() {
    let ti = TypeS::INT;
    let left = fun(C::id(ti.clone()), C::inj(Ground::BOOL));
    let right = fun(C::id(ti.clone()), C::proj(Ground::BOOL, &q()));
    let ab = TypeS::fun(TypeS::INT, TypeS::BOOL);
    // The pair is observationally the identity on Int -> Bool.
    for v in probes(&ab) {
        let direct = observe(apply(&left, v.clone()).and_then(|w| apply(&right, w)), &ab, 3);
        assert_eq!(direct, observe(Ok(v), &ab, 3));
    }
    let lx = trans_coercion(&left);
    let rx = trans_coercion(&right);
    let out = lx.compose(&rx).unwrap();
    assert_eq!(out, CoercionX::id(TypeX::fun2(TypeX::INT, TypeX::BOOL)));
}

fn random_type(rng: &mut ChaCha8Rng, depth: usize) -> TypeS {
    let n = if depth == 0 { 3 } else { 5 };
    match rng.gen_range(0..n) {
        0 => TypeS::INT,
        1 => TypeS::BOOL,
        2 => TypeS::Dyn,
        _ => TypeS::fun(random_type(rng, depth - 1), random_type(rng, depth - 1)),
    }
}

fn label(rng: &mut ChaCha8Rng) -> BlameLabel {
    BlameLabel::new(["p", "q", "r"].choose(rng).unwrap())
}

fn other_ground(rng: &mut ChaCha8Rng, g: Ground) -> Ground {
    *[Ground::INT, Ground::BOOL, Ground::DynFun].iter().filter(|h| **h != g).collect::<Vec<_>>().choose(rng).unwrap().to_owned()
}

/// A random canonical coercion of type `a ⇝ b`.
fn gen(rng: &mut ChaCha8Rng, a: &TypeS, b: &TypeS) -> C {
    match (a, b) {
        (TypeS::Dyn, TypeS::Dyn) if rng.gen_bool(0.3) => C::IdStar,
        (TypeS::Dyn, _) => {
            let g = match b.ground_of() {
                Some(g) if rng.gen_bool(0.85) => g,
                _ => *[Ground::INT, Ground::BOOL, Ground::DynFun].choose(rng).unwrap(),
            };
            Coercion::ProjSeq(g, label(rng), Rc::new(intermediate(rng, &ground_type(g), b)))
        }
        _ => intermediate(rng, a, b),
    }
}

fn intermediate(rng: &mut ChaCha8Rng, a: &TypeS, b: &TypeS) -> C {
    let g = a.ground_of().expect("intermediate coercions start at a non-Dyn type");
    let compatible = b.is_dyn() || b.ground_of() == Some(g);
    if !compatible || rng.gen_bool(0.08) {
        let h = other_ground(rng, g);
        return C::fail(g, &label(rng), h);
    }
    if b.is_dyn() {
        return Coercion::InjSeq(Rc::new(ground(rng, a, &ground_type(g))), g);
    }
    ground(rng, a, b)
}

fn ground(rng: &mut ChaCha8Rng, a: &TypeS, b: &TypeS) -> C {
    match (a.as_arrow(), b.as_arrow()) {
        (Some((a1, a2)), Some((b1, b2))) => C::mk_fun(gen(rng, b1, a1), gen(rng, a2, b2)),
        _ => C::id(a.clone()),
    }
}

#[test]
fn random_compositions_agree_with_sequential_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..4000 {
        let (a, b, c) = (random_type(&mut rng, 2), random_type(&mut rng, 2), random_type(&mut rng, 2));
        let s = gen(&mut rng, &a, &b);
        let t = gen(&mut rng, &b, &c);
        assert!(s.is_canonical() && t.is_canonical(), "generator produced {s} / {t}");
        let r = cmp(&s, &t);
        let (src, tgt) = r.type_of().unwrap();
        assert!(src.generalizes(&a.to_shape()), "{r} source {src:?} vs {a}");
        assert!(tgt.generalizes(&c.to_shape()), "{r} target {tgt:?} vs {c}");
        assert_semantic(&s, &t, &a, &c);

        let rx = trans_coercion(&s).compose(&trans_coercion(&t)).unwrap();
        assert!(rx.is_canonical());
        assert_eq!(rx, trans_coercion(&r));
        let (src_x, _) = rx.type_of().unwrap();
        assert!(src_x.generalizes(&trans_type(&a).to_shape()));
    }
}

#[test]
fn composition_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let tys: Vec<TypeS> = (0..4).map(|_| random_type(&mut rng, 2)).collect();
        let s = gen(&mut rng, &tys[0], &tys[1]);
        let t = gen(&mut rng, &tys[1], &tys[2]);
        let u = gen(&mut rng, &tys[2], &tys[3]);
        assert_eq!(cmp(&cmp(&s, &t), &u), cmp(&s, &cmp(&t, &u)), "{s} ; {t} ; {u}");
    }
}

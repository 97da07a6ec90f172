//! Seeded generation of well-typed λS programs.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use coercion_core::coercion::{BlameLabel, CoercionS};
use coercion_core::lam_s::term as t;
use coercion_core::lam_s::{typecheck_program, Def, Env, Program, Term};
use coercion_core::name::Name;
use coercion_core::ops::Op;
use coercion_core::types::{Base, CrcType, Ground, TypeS};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: u32,
    pub target_type: TypeS,
    /// Probability of wrapping a generated subterm in a coercion.
    pub coercion_density: f64,
    pub op_weight: u32,
    pub app_weight: u32,
    pub abs_weight: u32,
}

impl GenConfig {
    pub fn new(seed: u64, max_depth: u32, target_type: TypeS) -> GenConfig {
        GenConfig {
            seed,
            max_depth,
            target_type,
            coercion_density: 0.3,
            op_weight: 3,
            app_weight: 3,
            abs_weight: 2,
        }
    }

    /// A base-type configuration whose target alternates with the seed.
    pub fn for_seed(seed: u64, max_depth: u32) -> GenConfig {
        let target = if seed.is_multiple_of(2) { TypeS::INT } else { TypeS::BOOL };
        GenConfig::new(seed, max_depth, target)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("no well-typed program after {0} attempts")]
    GenerationExhausted(u32),
    #[error("generation weights must not all be zero")]
    BadWeights,
}

const ATTEMPTS: u32 = 16;
const REC: &str = "f";
const REC_PARAM: &str = "n";

pub struct Generator {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    next_var: u32,
    /// Result type of the recursive definition, when the program has one.
    rec: Option<TypeS>,
    in_rec_body: bool,
    /// False while generating the base case of the recursive definition.
    rec_allowed: bool,
}

fn ground_type(g: Ground) -> TypeS {
    TypeS::ground(g)
}

fn ground_of(a: &TypeS) -> Ground {
    a.ground_of().expect("non-Dyn types have a ground")
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Generator {
        Generator { rng: ChaCha8Rng::seed_from_u64(cfg.seed), cfg, next_var: 0, rec: None, in_rec_body: false, rec_allowed: true }
    }

    fn label(&mut self) -> BlameLabel {
        BlameLabel::new(&format!("p{}", self.rng.gen_range(0..6)))
    }

    fn fresh_var(&mut self) -> Name {
        self.next_var += 1;
        Name::from(format!("x{}", self.next_var).as_str())
    }

    fn base(&mut self) -> TypeS {
        if self.rng.gen() {
            TypeS::INT
        } else {
            TypeS::BOOL
        }
    }

    pub fn random_type(&mut self, depth: u32) -> TypeS {
        match self.rng.gen_range(0..if depth == 0 { 3 } else { 5 }) {
            0 => TypeS::INT,
            1 => TypeS::BOOL,
            2 => TypeS::Dyn,
            _ => {
                let a = self.random_type(depth - 1);
                let b = self.random_type(depth - 1);
                TypeS::fun(a, b)
            }
        }
    }

    fn random_ground(&mut self) -> Ground {
        *[Ground::INT, Ground::BOOL, Ground::DynFun].choose(&mut self.rng).expect("nonempty")
    }

    /// A type consistent with `a`, used as the source of a coercion into `a`.
    pub fn related_type(&mut self, a: &TypeS) -> TypeS {
        match (a, self.rng.gen_range(0..4)) {
            (TypeS::Dyn, 0) => TypeS::Dyn,
            (TypeS::Dyn, _) => self.random_type(1),
            (_, 0 | 1) => TypeS::Dyn,
            (TypeS::Fun(d, c), 2) => {
                let d = self.related_type(d);
                let c = self.related_type(c);
                TypeS::fun(d, c)
            }
            _ => a.clone(),
        }
    }

    /// A canonical coercion from `a` to `b`; the two must be consistent.
    pub fn coercion(&mut self, a: &TypeS, b: &TypeS) -> CoercionS {
        let compose = |s: CoercionS, t: CoercionS| s.compose(&t).expect("generated coercions line up");
        match (a, b) {
            (TypeS::Dyn, TypeS::Dyn) => {
                if self.rng.gen_bool(0.8) {
                    CoercionS::IdStar
                } else {
                    let g = self.random_ground();
                    let p = self.label();
                    let through = self.coercion(&ground_type(g), &ground_type(g));
                    compose(compose(CoercionS::proj(g, &p), through), CoercionS::inj(g))
                }
            }
            (TypeS::Dyn, b) => {
                let g = ground_of(b);
                let p = self.label();
                let rest = self.coercion(&ground_type(g), b);
                compose(CoercionS::proj(g, &p), rest)
            }
            (a, TypeS::Dyn) => {
                let g = ground_of(a);
                let first = self.coercion(a, &ground_type(g));
                compose(first, CoercionS::inj(g))
            }
            (TypeS::Fun(a1, b1), TypeS::Fun(a2, b2)) => {
                let dom = self.coercion(a2, a1);
                let cod = self.coercion(b1, b2);
                CoercionS::mk_fun(dom, cod)
            }
            _ => CoercionS::id(b.clone()),
        }
    }

    fn constant(&mut self, b: Base) -> Term {
        match b {
            Base::Int => t::int(self.rng.gen_range(-3..12)),
            Base::Bool => t::boolean(self.rng.gen()),
        }
    }

    fn leaf(&mut self, a: &TypeS, env: &[(Name, TypeS)]) -> Term {
        let vars: Vec<&Name> = env.iter().filter(|(_, b)| b == a).map(|(x, _)| x).collect();
        if !vars.is_empty() && self.rng.gen_bool(0.6) {
            return t::var(vars.choose(&mut self.rng).expect("nonempty"));
        }
        match a {
            TypeS::Base(b) => self.constant(*b),
            TypeS::Dyn => {
                let g = self.random_ground();
                let v = self.leaf(&ground_type(g), env);
                t::crc(v, CoercionS::inj(g))
            }
            TypeS::Fun(d, c) => {
                let x = self.fresh_var();
                let mut inner = env.to_vec();
                inner.push((x.clone(), (**d).clone()));
                let body = self.leaf(c, &inner);
                t::abs(&x, (**d).clone(), body)
            }
        }
    }

    /// `ω (ω<(Dyn -> Dyn)!>)` with `ω = \x:Dyn. (x<(Dyn -> Dyn)?^q>) x`.
    fn omega(&mut self) -> Term {
        let p = self.label();
        let x = self.fresh_var();
        let w = t::abs(&x, TypeS::Dyn, t::app(t::crc(t::var(&x), CoercionS::proj(Ground::DynFun, &p)), t::var(&x)));
        t::app(w.clone(), t::crc(w, CoercionS::inj(Ground::DynFun)))
    }

    /// `M<G!><H?^p; ...>` with `G != H`, which blames `p` once `M` is a value.
    fn failing_pair(&mut self, a: &TypeS, env: &[(Name, TypeS)], depth: u32) -> Option<Term> {
        let h = match a {
            TypeS::Dyn => self.random_ground(),
            a => ground_of(a),
        };
        let g = [Ground::INT, Ground::BOOL, Ground::DynFun].into_iter().filter(|g| *g != h).choose(&mut self.rng)?;
        let m = self.term(&ground_type(g), env, depth);
        let p = self.label();
        let rest = self.coercion(&ground_type(h), a);
        let out = CoercionS::proj(h, &p).compose(&rest).ok()?;
        Some(t::crc(t::crc(m, CoercionS::inj(g)), out))
    }

    pub fn term(&mut self, a: &TypeS, env: &[(Name, TypeS)], depth: u32) -> Term {
        if depth == 0 {
            return self.leaf(a, env);
        }
        let d = depth - 1;
        if self.rng.gen_bool(self.cfg.coercion_density) {
            let src = self.related_type(a);
            let m = self.term(&src, env, d);
            let s = self.coercion(&src, a);
            return t::crc(m, s);
        }
        if self.rng.gen_bool(0.025) {
            if let Some(m) = self.failing_pair(a, env, d) {
                return m;
            }
        }
        if self.rng.gen_bool(0.002) {
            let s = self.coercion(&TypeS::Dyn, a);
            return t::crc(self.omega(), s);
        }
        let is_base = matches!(a, TypeS::Base(_));
        let is_fun = matches!(a, TypeS::Fun(..));
        let can_rec = self.rec_allowed && self.rec.as_ref().is_some_and(|r| r == a);
        let weights = [
            2,
            if is_base { self.cfg.op_weight } else { 0 },
            self.cfg.app_weight,
            if is_fun { self.cfg.abs_weight * 2 } else { self.cfg.abs_weight.min(1) },
            1,
            if can_rec { 2 } else { 0 },
        ];
        let choice = WeightedIndex::new(weights).map(|w| w.sample(&mut self.rng)).unwrap_or(0);
        match choice {
            1 => {
                let ops: &[Op] = match a {
                    TypeS::Base(Base::Int) => &[Op::Add, Op::Sub, Op::Mul],
                    _ => &[Op::Eq, Op::Lt],
                };
                let op = *ops.choose(&mut self.rng).expect("nonempty");
                let l = self.term(&TypeS::INT, env, d);
                let r = self.term(&TypeS::INT, env, d);
                t::op(op, l, r)
            }
            2 => {
                let b = self.random_type(1);
                let f = self.term(&TypeS::fun(b.clone(), a.clone()), env, d);
                let x = self.term(&b, env, d);
                t::app(f, x)
            }
            3 => match a {
                TypeS::Fun(dom, cod) => {
                    let x = self.fresh_var();
                    let mut inner = env.to_vec();
                    inner.push((x.clone(), (**dom).clone()));
                    let body = self.term(cod, &inner, d);
                    t::abs(&x, (**dom).clone(), body)
                }
                _ => {
                    let b = self.random_type(1);
                    let x = self.fresh_var();
                    let mut inner = env.to_vec();
                    inner.push((x.clone(), b.clone()));
                    let body = self.term(a, &inner, d);
                    let arg = self.term(&b, env, d);
                    t::app(t::abs(&x, b, body), arg)
                }
            },
            4 => {
                let c = self.term(&TypeS::BOOL, env, d);
                let th = self.term(a, env, d);
                let el = self.term(a, env, d);
                t::if_(c, th, el)
            }
            5 => self.rec_call(),
            _ => self.leaf(a, env),
        }
    }

    fn rec_call(&mut self) -> Term {
        let arg = if self.in_rec_body {
            t::op(Op::Sub, t::var(REC_PARAM), t::int(1))
        } else {
            t::int(self.rng.gen_range(0..12))
        };
        t::app(t::global(REC), arg)
    }

    fn def(&mut self, ret: &TypeS) -> Def {
        let env = vec![(Name::from(REC_PARAM), TypeS::INT)];
        let depth = self.cfg.max_depth.min(4);
        self.rec_allowed = false;
        let base = self.term(ret, &env, depth / 2);
        self.rec_allowed = true;
        self.in_rec_body = true;
        let step = self.term(ret, &env, depth);
        self.in_rec_body = false;
        let guard = t::op(Op::Lt, t::var(REC_PARAM), t::int(1));
        Def {
            name: Name::from(REC),
            param: Name::from(REC_PARAM),
            param_ty: TypeS::INT,
            ret_ty: ret.clone(),
            body: t::if_(guard, base, step),
        }
    }

    fn attempt(&mut self) -> Program {
        self.next_var = 0;
        self.rec = None;
        let mut defs = Vec::new();
        if self.rng.gen_bool(0.3) {
            let ret = match self.rng.gen_range(0..3) {
                0 => TypeS::Dyn,
                _ => self.base(),
            };
            self.rec = Some(ret.clone());
            defs.push(self.def(&ret));
        }
        let target = self.cfg.target_type.clone();
        let main = self.term(&target, &[], self.cfg.max_depth);
        Program::new(defs, main)
    }

    pub fn program(&mut self) -> Result<Program, GenError> {
        if [self.cfg.op_weight, self.cfg.app_weight, self.cfg.abs_weight].iter().all(|w| *w == 0) {
            return Err(GenError::BadWeights);
        }
        for _ in 0..ATTEMPTS {
            let p = self.attempt();
            let env = Env::for_program(&p);
            let ok = typecheck_program(&p).is_ok()
                && coercion_core::lam_s::check(&env, p.main(), &self.cfg.target_type).is_ok();
            if ok {
                return Ok(p);
            }
        }
        Err(GenError::GenerationExhausted(ATTEMPTS))
    }
}

/// Generates a closed, well-typed λS program of `cfg.target_type`.
pub fn gen_well_typed(cfg: &GenConfig) -> Result<Program, GenError> {
    Generator::new(cfg.clone()).program()
}

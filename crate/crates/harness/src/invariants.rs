//! Per-step invariants of both evaluators, checked along a run.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use coercion_core::coercion::{Coercion, CoercionS};
use coercion_core::lam_s::metrics::metric_f;
use coercion_core::lam_s::oracle::{decompose, Decomposition};
use coercion_core::lam_s::{check, step, typecheck_program, Env, Frame, Kind, Program, StepResult, Term};
use coercion_core::lam_sx::metrics::metric_fx;
use coercion_core::lam_sx::oracle::{decompose_x, DecompositionX};
use coercion_core::lam_sx::{check_x, step_x, EnvX, StepResultX, TermX};
use coercion_core::translate::{trans_coercion, trans_type, translate_program, Options};
use coercion_core::types::{CrcType, TypeS};

use crate::differential::witness;
use crate::gen::{GenConfig, Generator};
use crate::report::{Observed, Verdict};

fn canonical_s(m: &Term) -> Result<(), String> {
    let mut bad = None;
    m.for_each_coercion(&mut |c, _| {
        if bad.is_none() && !c.is_canonical() {
            bad = Some(c.render(true));
        }
    });
    bad.map_or(Ok(()), |c| Err(format!("non-canonical coercion {c}")))
}

fn canonical_x(m: &TermX) -> Result<(), String> {
    let mut bad = None;
    m.for_each_coercion(&mut |c, _| {
        if bad.is_none() && !c.is_canonical() {
            bad = Some(c.render(true));
        }
    });
    bad.map_or(Ok(()), |c| Err(format!("non-canonical coercion {c}")))
}

fn adjacent_coercion_frames(path: &[Frame]) -> bool {
    path.windows(2).any(|w| w == [Frame::CrcSubj, Frame::CrcSubj])
}

/// What a λSx run reached, for reporting alongside the λS checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InvariantStats {
    pub steps_s: usize,
    pub steps_x: usize,
    pub max_metric_fx: usize,
}

/// Checks preservation, determinacy against the search oracle, canonical
/// coercions and, on c-steps, the strict decrease of `metric_f`, for at most
/// `max_steps` steps of each calculus.
pub fn check_invariants(p: &Program, max_steps: usize, opts: Options) -> (Verdict, InvariantStats) {
    let mut stats = InvariantStats::default();
    let fail = |name: &str, i: usize, detail: String| Verdict::violation(name, witness(p), i, detail);
    let ty = match typecheck_program(p) {
        Ok(ty) => ty,
        Err(e) => return (fail("preservation", 0, e.to_string()), stats),
    };
    let env = Env::for_program(p);
    let mut cur = p.main().clone();
    if let Err(e) = canonical_s(&cur) {
        return (fail("canonical", 0, e), stats);
    }
    for i in 0..max_steps {
        let oracle = decompose(&cur);
        let s = match step(p, &cur) {
            Ok(StepResult::Stepped(s)) => s,
            Ok(StepResult::IsValue(_)) => {
                if oracle != Ok(Decomposition::Value) {
                    return (fail("determinacy", i, format!("oracle gave {oracle:?} for a value")), stats);
                }
                break;
            }
            Ok(StepResult::IsBlame(q)) => {
                if oracle != Ok(Decomposition::Blame(q)) {
                    return (fail("determinacy", i, format!("oracle gave {oracle:?} for blame")), stats);
                }
                break;
            }
            Err(e) => return (fail("progress", i, e.to_string()), stats),
        };
        stats.steps_s = i + 1;
        let expected = Decomposition::Redex { path: s.path.clone(), kind: s.kind };
        if oracle.as_ref() != Ok(&expected) {
            return (fail("determinacy", i, format!("step took {:?} {}, oracle gave {oracle:?}", s.path, s.kind)), stats);
        }
        if let Err(e) = check(&env, &s.next, &ty) {
            return (fail("preservation", i, format!("after {}: {e}", s.rule)), stats);
        }
        if let Err(e) = canonical_s(&s.next) {
            return (fail("canonical", i, e), stats);
        }
        match s.kind {
            Kind::C => {
                let (before, after) = (metric_f(&cur), metric_f(&s.next));
                if after >= before {
                    return (fail("metric", i, format!("{} took f from {before} to {after}", s.rule)), stats);
                }
            }
            Kind::E => {
                if adjacent_coercion_frames(&s.path) {
                    return (fail("context", i, format!("{} fired under two coercion frames", s.rule)), stats);
                }
            }
        }
        cur = s.next;
    }

    let px = match translate_program(p, opts) {
        Ok(px) => px,
        Err(e) => return (fail("translation", 0, e.to_string()), stats),
    };
    let envx = EnvX::for_program(&px);
    let tyx = trans_type(&ty);
    let mut cur = px.main().clone();
    stats.max_metric_fx = metric_fx(&cur);
    for i in 0..max_steps {
        let oracle = decompose_x(&cur);
        let s = match step_x(&px, &cur) {
            Ok(StepResultX::Stepped(s)) => s,
            Ok(StepResultX::IsValue(_)) => {
                if oracle != Ok(DecompositionX::Value) {
                    return (fail("determinacy-x", i, format!("oracle gave {oracle:?} for a value")), stats);
                }
                break;
            }
            Ok(StepResultX::IsBlame(q)) => {
                if oracle != Ok(DecompositionX::Blame(q)) {
                    return (fail("determinacy-x", i, format!("oracle gave {oracle:?} for blame")), stats);
                }
                break;
            }
            Err(e) => return (fail("progress-x", i, e.to_string()), stats),
        };
        stats.steps_x = i + 1;
        let expected = DecompositionX::Redex { path: s.path.clone(), kind: s.kind };
        if oracle.as_ref() != Ok(&expected) {
            return (fail("determinacy-x", i, format!("step took {:?} {}, oracle gave {oracle:?}", s.path, s.kind)), stats);
        }
        if let Err(e) = check_x(&envx, &s.next, &tyx) {
            return (fail("preservation-x", i, format!("after {}: {e}", s.rule)), stats);
        }
        if let Err(e) = canonical_x(&s.next) {
            return (fail("canonical-x", i, e), stats);
        }
        stats.max_metric_fx = stats.max_metric_fx.max(metric_fx(&s.next));
        cur = s.next;
    }
    (Verdict::Agree { outcome: Observed::Value(ty.to_string()) }, stats)
}

fn compose_pair(g: &mut Generator, rng: &mut ChaCha8Rng) -> (TypeS, TypeS, TypeS, CoercionS, CoercionS) {
    let b = g.random_type(2);
    let a = if rng.gen() { g.related_type(&b) } else { b.clone() };
    let c = if rng.gen() { g.related_type(&b) } else { TypeS::Dyn };
    let s = g.coercion(&a, &b);
    let t = g.coercion(&b, &c);
    (a, b, c, s, t)
}

fn closure_failure<T: CrcType>(s: &Coercion<T>, t: &Coercion<T>, a: &T, c: &T) -> Option<String> {
    let st = match s.compose(t) {
        Ok(st) => st,
        Err(e) => return Some(e.to_string()),
    };
    let text = || format!("{} ; {} = {}", s.render(true), t.render(true), st.render(true));
    if !st.is_canonical() || st.classify().is_err() {
        return Some(format!("not canonical: {}", text()));
    }
    match st.type_of() {
        Ok((src, tgt)) if src.meet(&a.to_shape()).is_some() && tgt.meet(&c.to_shape()).is_some() => None,
        Ok((src, tgt)) => Some(format!("{} has type {} to {}", text(), src.render(T::ARROW), tgt.render(T::ARROW))),
        Err(e) => Some(format!("{}: {e}", text())),
    }
}

/// Composes `pairs` random composable coercion pairs in both calculi,
/// checking the result is canonical, has the expected type, and that
/// composition commutes with the coercion translation. Returns the first
/// failure.
pub fn compose_closure(seed: u64, pairs: usize) -> Option<String> {
    let mut g = Generator::new(GenConfig::new(seed, 2, TypeS::Dyn));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..pairs {
        let (a, _, c, s, t) = compose_pair(&mut g, &mut rng);
        if let Some(e) = closure_failure(&s, &t, &a, &c) {
            return Some(e);
        }
        let (sx, tx) = (trans_coercion(&s), trans_coercion(&t));
        if let Some(e) = closure_failure(&sx, &tx, &trans_type(&a), &trans_type(&c)) {
            return Some(e);
        }
        let st = s.compose(&t).expect("checked above");
        if sx.compose(&tx).ok() != Some(trans_coercion(&st)) {
            return Some(format!("translation does not commute with {} ; {}", s.render(true), t.render(true)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_well_typed;

    #[test]
    fn generated_programs_keep_invariants() {
        for seed in 0..40 {
            let p = gen_well_typed(&GenConfig::for_seed(seed, 5)).unwrap();
            let (v, _) = check_invariants(&p, 2000, Options::default());
            assert!(!v.is_failure(), "seed {seed}: {v:?}");
        }
    }

    #[test]
    fn composition_is_closed() {
        assert_eq!(compose_closure(7, 2000), None);
    }

    #[test]
    fn adjacency_is_read_from_frames() {
        assert!(adjacent_coercion_frames(&[Frame::AppArg, Frame::CrcSubj, Frame::CrcSubj]));
        assert!(!adjacent_coercion_frames(&[Frame::CrcSubj, Frame::OpL, Frame::CrcSubj]));
    }
}

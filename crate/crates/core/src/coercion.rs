//! Space-efficient coercions in canonical form and their composition.
//!
//! The same constructors serve both calculi; only the type parameter (and so
//! the arrow used by function coercions) differs.
//!
//! ```text
//! s ::= id⋆ | G?p ; i | i          (space-efficient)
//! i ::= g ; G! | g | ⊥^{G p H}     (intermediate)
//! g ::= id_A | s -> t              (ground, A ≠ ⋆, not both identities)
//! ```

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::types::{CrcType, Ground, Shape, TypeS, TypeX};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlameLabel(Rc<str>);

impl BlameLabel {
    pub fn new(s: &str) -> BlameLabel {
        assert!(!s.is_empty(), "blame labels are nonempty");
        BlameLabel(Rc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coercion<T> {
    IdStar,
    ProjSeq(Ground, BlameLabel, Rc<Coercion<T>>),
    InjSeq(Rc<Coercion<T>>, Ground),
    Id(T),
    Fun(Rc<Coercion<T>>, Rc<Coercion<T>>),
    Fail(Ground, BlameLabel, Ground),
}

pub type CoercionS = Coercion<TypeS>;
pub type CoercionX = Coercion<TypeX>;

/// The grammar level a canonical coercion belongs to (the most specific one).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stratum {
    /// `id⋆` or `G?p ; i`.
    Space,
    /// `g ; G!` or `⊥^{G p H}`.
    Intermediate,
    /// `id_A` or `s -> t`.
    Ground,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CoercionError {
    #[error("ill-formed coercion: {0}")]
    IllFormed(String),
    #[error("coercion not in canonical form: {0}")]
    NotCanonical(String),
    #[error("cannot compose {left} with {right}: target and source types differ")]
    CompositionTypeMismatch { left: String, right: String },
}

impl<T: CrcType> Coercion<T> {
    /// `id_A`, which is `id⋆` when `A` is `Dyn`.
    pub fn id(ty: T) -> Self {
        if ty.is_dyn() {
            Coercion::IdStar
        } else {
            Coercion::Id(ty)
        }
    }

    /// `G!`, short for `id_G ; G!`.
    pub fn inj(g: Ground) -> Self {
        Coercion::InjSeq(Rc::new(Coercion::Id(T::ground(g))), g)
    }

    /// `G?p`, short for `G?p ; id_G`.
    pub fn proj(g: Ground, p: &BlameLabel) -> Self {
        Coercion::ProjSeq(g, p.clone(), Rc::new(Coercion::Id(T::ground(g))))
    }

    pub fn fail(g: Ground, p: &BlameLabel, h: Ground) -> Self {
        Coercion::Fail(g, p.clone(), h)
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Coercion::IdStar | Coercion::Id(_))
    }

    /// Delayed coercions `g ; G!` and `s -> t` are the ones kept on values.
    pub fn is_delayed(&self) -> bool {
        matches!(self, Coercion::InjSeq(..) | Coercion::Fun(..))
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Coercion::Fail(..))
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Coercion::IdStar | Coercion::Id(_) | Coercion::Fail(..) => 1,
            Coercion::ProjSeq(_, _, i) => 1 + i.size(),
            Coercion::InjSeq(g, _) => 1 + g.size(),
            Coercion::Fun(s, t) => 1 + s.size() + t.size(),
        }
    }

    /// Checks the canonical-form invariant and reports the stratum.
    pub fn classify(&self) -> Result<Stratum, CoercionError> {
        let bad = |why: &str| Err(CoercionError::NotCanonical(format!("{why} in {self}")));
        match self {
            Coercion::IdStar => Ok(Stratum::Space),
            Coercion::ProjSeq(_, _, i) => match i.classify()? {
                Stratum::Space => bad("projection body must be intermediate"),
                _ => Ok(Stratum::Space),
            },
            Coercion::InjSeq(g, _) => match g.classify()? {
                Stratum::Ground => Ok(Stratum::Intermediate),
                _ => bad("injection body must be ground"),
            },
            Coercion::Fail(g, _, h) => {
                if g == h {
                    bad("failure with equal ground types")
                } else {
                    Ok(Stratum::Intermediate)
                }
            }
            Coercion::Id(a) => {
                if a.is_dyn() {
                    bad("identity at Dyn must be id⋆")
                } else {
                    Ok(Stratum::Ground)
                }
            }
            Coercion::Fun(s, t) => {
                s.classify()?;
                t.classify()?;
                if s.is_identity() && t.is_identity() {
                    bad("function coercion of two identities")
                } else {
                    Ok(Stratum::Ground)
                }
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.classify().is_ok()
    }

    /// Source and target of the coercion. The source of a failure is only
    /// known up to its ground type and its target is unconstrained, which
    /// shows up as holes in the returned shapes.
    pub fn type_of(&self) -> Result<(Shape, Shape), CoercionError> {
        match self {
            Coercion::IdStar => Ok((Shape::Dyn, Shape::Dyn)),
            Coercion::Id(a) => {
                let s = a.to_shape();
                Ok((s.clone(), s))
            }
            Coercion::InjSeq(g, gr) => {
                let (src, tgt) = g.type_of()?;
                tgt.meet(&gr.shape()).ok_or_else(|| {
                    CoercionError::IllFormed(format!("{self}: body does not end at {}", ground_text::<T>(*gr)))
                })?;
                Ok((src, Shape::Dyn))
            }
            Coercion::ProjSeq(gr, _, i) => {
                let (src, tgt) = i.type_of()?;
                src.meet(&gr.shape()).ok_or_else(|| {
                    CoercionError::IllFormed(format!("{self}: body does not start at {}", ground_text::<T>(*gr)))
                })?;
                Ok((Shape::Dyn, tgt))
            }
            Coercion::Fun(s, t) => {
                let (s_src, s_tgt) = s.type_of()?;
                let (t_src, t_tgt) = t.type_of()?;
                Ok((Shape::arrow(s_tgt, t_src), Shape::arrow(s_src, t_tgt)))
            }
            Coercion::Fail(g, _, _) => Ok((g.compatible_shape(), Shape::Any)),
        }
    }

    /// `s -> t`, collapsing to `id_{A -> B}` when both sides are identities.
    pub fn mk_fun(s: Self, t: Self) -> Self {
        match (&s, &t) {
            (Coercion::IdStar | Coercion::Id(_), Coercion::IdStar | Coercion::Id(_)) => {
                Coercion::Id(T::arrow(s.identity_type(), t.identity_type()))
            }
            _ => Coercion::Fun(Rc::new(s), Rc::new(t)),
        }
    }

    fn identity_type(&self) -> T {
        match self {
            Coercion::IdStar => T::dynamic(),
            Coercion::Id(a) => a.clone(),
            _ => unreachable!("identity_type on a non-identity"),
        }
    }

    /// Composition `s ⨟ t`. Fails when the target of `s` and the source of
    /// `t` are incompatible.
    pub fn compose(&self, t: &Self) -> Result<Self, CoercionError> {
        let (_, s_tgt) = self.type_of()?;
        let (t_src, _) = t.type_of()?;
        if s_tgt.meet(&t_src).is_none() {
            return Err(self.mismatch(t));
        }
        self.comp(t)
    }

    fn mismatch(&self, t: &Self) -> CoercionError {
        CoercionError::CompositionTypeMismatch { left: self.to_string(), right: t.to_string() }
    }

    fn comp(&self, t: &Self) -> Result<Self, CoercionError> {
        use Coercion::*;
        Ok(match (self, t) {
            // CC-IdDynL
            (IdStar, _) => t.clone(),
            // CC-ProjL
            (ProjSeq(g, p, i), _) => ProjSeq(*g, p.clone(), Rc::new(i.comp(t)?)),
            // CC-InjId
            (InjSeq(..), IdStar) => self.clone(),
            // CC-Collapse and CC-Conflict
            (InjSeq(g, gr), ProjSeq(hr, p, i)) => {
                if gr == hr {
                    g.comp(i)?
                } else {
                    Fail(*gr, p.clone(), *hr)
                }
            }
            (InjSeq(..), _) => return Err(self.mismatch(t)),
            // CC-FailL
            (Fail(..), _) => self.clone(),
            // CC-FailR
            (Id(_) | Fun(..), Fail(..)) => t.clone(),
            // CC-InjR
            (Id(_) | Fun(..), InjSeq(h, hr)) => InjSeq(Rc::new(self.comp(h)?), *hr),
            // CC-IdL
            (Id(_), Id(_) | Fun(..)) => t.clone(),
            // CC-IdR
            (Fun(..), Id(_)) => self.clone(),
            // CC-Fun
            (Fun(s, t1), Fun(s2, t2)) => Self::mk_fun(s2.comp(s)?, t1.comp(t2)?),
            (Id(_) | Fun(..), IdStar | ProjSeq(..)) => return Err(self.mismatch(t)),
        })
    }

    /// Rebuilds the coercion over another type language.
    pub fn map_types<U: CrcType>(&self, f: &impl Fn(&T) -> U) -> Coercion<U> {
        match self {
            Coercion::IdStar => Coercion::IdStar,
            Coercion::ProjSeq(g, p, i) => Coercion::ProjSeq(*g, p.clone(), Rc::new(i.map_types(f))),
            Coercion::InjSeq(g, gr) => Coercion::InjSeq(Rc::new(g.map_types(f)), *gr),
            Coercion::Id(a) => Coercion::Id(f(a)),
            Coercion::Fun(s, t) => Coercion::Fun(Rc::new(s.map_types(f)), Rc::new(t.map_types(f))),
            Coercion::Fail(g, p, h) => Coercion::Fail(*g, p.clone(), *h),
        }
    }

    /// Surface rendering. With `sugar`, `id_G ; G!` prints as `G!` and
    /// `G?p ; id_G` as `G?^p`.
    pub fn render(&self, sugar: bool) -> String {
        let mut out = String::new();
        self.render_into(sugar, &mut out);
        out
    }

    fn render_into(&self, sugar: bool, out: &mut String) {
        match self {
            Coercion::IdStar => out.push_str("id{Dyn}"),
            Coercion::Id(a) => {
                out.push_str("id{");
                out.push_str(&a.to_string());
                out.push('}');
            }
            Coercion::Fail(g, p, h) => {
                out.push_str(&format!("bot{{{}, {p}, {}}}", ground_text::<T>(*g), ground_text::<T>(*h)));
            }
            Coercion::InjSeq(g, gr) => {
                if !(sugar && matches!(&**g, Coercion::Id(_))) {
                    g.render_operand(sugar, out);
                    out.push(';');
                }
                out.push_str(&ground_text::<T>(*gr));
                out.push('!');
            }
            Coercion::ProjSeq(gr, p, i) => {
                out.push_str(&format!("{}?^{p}", ground_text::<T>(*gr)));
                if !(sugar && matches!(&**i, Coercion::Id(_))) {
                    out.push(';');
                    i.render_full_into(sugar, out);
                }
            }
            Coercion::Fun(s, t) => {
                s.render_operand(sugar, out);
                out.push(' ');
                out.push_str(T::ARROW);
                out.push(' ');
                t.render_operand(sugar, out);
            }
        }
    }

    // Inside a projection sequence the injection keeps its identity visible,
    // so `Int?^p;id{Int};Int!` reads as three steps.
    fn render_full_into(&self, sugar: bool, out: &mut String) {
        match self {
            Coercion::InjSeq(g, gr) => {
                g.render_operand(sugar, out);
                out.push(';');
                out.push_str(&ground_text::<T>(*gr));
                out.push('!');
            }
            _ => self.render_operand(sugar, out),
        }
    }

    fn render_operand(&self, sugar: bool, out: &mut String) {
        let atomic = match self {
            Coercion::IdStar | Coercion::Id(_) | Coercion::Fail(..) => true,
            Coercion::InjSeq(g, _) => sugar && matches!(&**g, Coercion::Id(_)),
            Coercion::ProjSeq(_, _, i) => sugar && matches!(&**i, Coercion::Id(_)),
            Coercion::Fun(..) => false,
        };
        if atomic {
            self.render_into(sugar, out);
        } else {
            out.push('(');
            self.render_into(sugar, out);
            out.push(')');
        }
    }
}

/// Ground type in surface syntax for the calculus of `T`.
pub fn ground_text<T: CrcType>(g: Ground) -> String {
    match g {
        Ground::Base(b) => b.to_string(),
        Ground::DynFun => format!("(Dyn {} Dyn)", T::ARROW),
    }
}

impl<T: CrcType> fmt::Display for Coercion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Base;

    type C = CoercionS;

    fn p() -> BlameLabel {
        BlameLabel::new("p")
    }

    fn int() -> TypeS {
        TypeS::INT
    }

    #[test]
    fn mk_fun_collapses_identities() {
        let c = C::mk_fun(C::id(TypeS::INT), C::id(TypeS::BOOL));
        assert_eq!(c, C::Id(TypeS::fun(TypeS::INT, TypeS::BOOL)));
        let c = C::mk_fun(C::inj(Ground::INT), C::IdStar);
        assert!(matches!(c, C::Fun(..)));
        let c = C::mk_fun(C::id(int()), C::inj(Ground::INT));
        assert!(matches!(c, C::Fun(..)));
        let c = C::mk_fun(C::IdStar, C::IdStar);
        assert_eq!(c, C::Id(TypeS::fun(TypeS::Dyn, TypeS::Dyn)));
    }

    #[test]
    fn types_of_coercions() {
        let inj = C::inj(Ground::INT);
        assert_eq!(inj.type_of().unwrap(), (Shape::Base(Base::Int), Shape::Dyn));
        assert_eq!(C::IdStar.type_of().unwrap(), (Shape::Dyn, Shape::Dyn));
        let f = C::mk_fun(C::inj(Ground::INT), C::proj(Ground::INT, &p()));
        let (a, b) = f.type_of().unwrap();
        assert_eq!(a, TypeS::fun(TypeS::Dyn, TypeS::Dyn).to_shape());
        assert_eq!(b, TypeS::fun(TypeS::INT, TypeS::INT).to_shape());
    }

    #[test]
    fn misaligned_injection_is_ill_formed() {
        let c = C::InjSeq(Rc::new(C::Id(TypeS::BOOL)), Ground::INT);
        assert!(matches!(c.type_of(), Err(CoercionError::IllFormed(_))));
    }

    #[test]
    fn classify_rejects_non_canonical() {
        assert!(C::Id(TypeS::Dyn).classify().is_err());
        assert!(C::Fail(Ground::INT, p(), Ground::INT).classify().is_err());
        let both_ids = C::Fun(Rc::new(C::id(int())), Rc::new(C::IdStar));
        assert!(both_ids.classify().is_err());
        let nested = C::ProjSeq(Ground::INT, p(), Rc::new(C::IdStar));
        assert!(nested.classify().is_err());
        assert_eq!(C::inj(Ground::BOOL).classify().unwrap(), Stratum::Intermediate);
        assert_eq!(C::proj(Ground::BOOL, &p()).classify().unwrap(), Stratum::Space);
        assert_eq!(C::id(int()).classify().unwrap(), Stratum::Ground);
    }

    #[test]
    fn rendering_with_and_without_sugar() {
        let inj = C::inj(Ground::INT);
        assert_eq!(inj.render(true), "Int!");
        assert_eq!(inj.render(false), "id{Int};Int!");
        let seq = C::proj(Ground::INT, &p()).compose(&inj).unwrap();
        assert_eq!(seq.render(true), "Int?^p;id{Int};Int!");
        let f = C::mk_fun(C::inj(Ground::INT), C::proj(Ground::INT, &p()));
        assert_eq!(f.render(true), "Int! -> Int?^p");
        let fail = C::fail(Ground::DynFun, &p(), Ground::INT);
        assert_eq!(fail.render(true), "bot{(Dyn -> Dyn), p, Int}");
        assert_eq!(CoercionX::inj(Ground::DynFun).render(true), "(Dyn => Dyn)!");
    }

    #[test]
    fn composition_rejects_mismatched_types() {
        let f = C::mk_fun(C::inj(Ground::INT), C::IdStar);
        let err = f.compose(&C::id(int())).unwrap_err();
        assert!(matches!(err, CoercionError::CompositionTypeMismatch { .. }));
        assert!(C::id(int()).compose(&C::id(TypeS::BOOL)).is_err());
    }
}

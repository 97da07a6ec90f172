//! Types of both calculi, ground types, and partial shapes.
//!
//! A [`Shape`] is a type that may contain holes ([`Shape::Any`]). Holes come
//! from terms that inhabit every type: `blame p`, and anything whose outermost
//! coercion is a failure. Each hole is independent, so two shapes are
//! compatible exactly when [`Shape::meet`] succeeds.

use std::fmt;
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Int,
    Bool,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Int => f.write_str("Int"),
            Base::Bool => f.write_str("Bool"),
        }
    }
}

/// Type tags carried by values of type `Dyn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ground {
    Base(Base),
    /// `Dyn -> Dyn` in λS, `Dyn => Dyn` in λSx.
    DynFun,
}

impl Ground {
    pub const INT: Ground = Ground::Base(Base::Int);
    pub const BOOL: Ground = Ground::Base(Base::Bool);

    /// The shape of every non-`Dyn` type consistent with this ground type.
    pub fn compatible_shape(self) -> Shape {
        match self {
            Ground::Base(b) => Shape::Base(b),
            Ground::DynFun => Shape::arrow(Shape::Any, Shape::Any),
        }
    }

    pub fn shape(self) -> Shape {
        match self {
            Ground::Base(b) => Shape::Base(b),
            Ground::DynFun => Shape::arrow(Shape::Dyn, Shape::Dyn),
        }
    }
}

/// Operations shared by the type languages of λS and λSx, so that coercions
/// and their composition can be written once.
pub trait CrcType: Clone + PartialEq + Eq + fmt::Debug + fmt::Display {
    /// Token used for function types and function coercions.
    const ARROW: &'static str;

    fn dynamic() -> Self;
    fn base(b: Base) -> Self;
    fn arrow(dom: Self, cod: Self) -> Self;
    fn is_dyn(&self) -> bool;
    fn as_arrow(&self) -> Option<(&Self, &Self)>;
    fn to_shape(&self) -> Shape;
    /// Converts a hole-free shape; `None` if the shape has holes or
    /// constructors foreign to this calculus.
    fn from_shape(s: &Shape) -> Option<Self>;

    fn ground(g: Ground) -> Self {
        match g {
            Ground::Base(b) => Self::base(b),
            Ground::DynFun => Self::arrow(Self::dynamic(), Self::dynamic()),
        }
    }

    /// The ground type of a non-`Dyn` type with a ground counterpart.
    fn ground_of(&self) -> Option<Ground>;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeS {
    Dyn,
    Base(Base),
    Fun(Rc<TypeS>, Rc<TypeS>),
}

impl TypeS {
    pub const INT: TypeS = TypeS::Base(Base::Int);
    pub const BOOL: TypeS = TypeS::Base(Base::Bool);

    pub fn fun(a: TypeS, b: TypeS) -> TypeS {
        TypeS::Fun(Rc::new(a), Rc::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            TypeS::Dyn | TypeS::Base(_) => 1,
            TypeS::Fun(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl CrcType for TypeS {
    const ARROW: &'static str = "->";

    fn dynamic() -> Self {
        TypeS::Dyn
    }
    fn base(b: Base) -> Self {
        TypeS::Base(b)
    }
    fn arrow(dom: Self, cod: Self) -> Self {
        TypeS::fun(dom, cod)
    }
    fn is_dyn(&self) -> bool {
        matches!(self, TypeS::Dyn)
    }
    fn as_arrow(&self) -> Option<(&Self, &Self)> {
        match self {
            TypeS::Fun(a, b) => Some((a, b)),
            _ => None,
        }
    }
    fn to_shape(&self) -> Shape {
        match self {
            TypeS::Dyn => Shape::Dyn,
            TypeS::Base(b) => Shape::Base(*b),
            TypeS::Fun(a, b) => Shape::arrow(a.to_shape(), b.to_shape()),
        }
    }
    fn from_shape(s: &Shape) -> Option<Self> {
        Some(match s {
            Shape::Dyn => TypeS::Dyn,
            Shape::Base(b) => TypeS::Base(*b),
            Shape::Arrow(a, b) => TypeS::fun(Self::from_shape(a)?, Self::from_shape(b)?),
            Shape::Any | Shape::Crc(..) | Shape::Var(_) => return None,
        })
    }
    fn ground_of(&self) -> Option<Ground> {
        match self {
            TypeS::Dyn => None,
            TypeS::Base(b) => Some(Ground::Base(*b)),
            TypeS::Fun(..) => Some(Ground::DynFun),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeX {
    Dyn,
    Base(Base),
    /// `A ~> B`, the type of coercions.
    Crc(Rc<TypeX>, Rc<TypeX>),
    /// `A => B`: takes an `A` and a continuation coercion with source `B`.
    Fun2(Rc<TypeX>, Rc<TypeX>),
    /// Rigid type variable minted while checking an abstraction.
    TyVar(u32),
}

impl TypeX {
    pub const INT: TypeX = TypeX::Base(Base::Int);
    pub const BOOL: TypeX = TypeX::Base(Base::Bool);

    pub fn fun2(a: TypeX, b: TypeX) -> TypeX {
        TypeX::Fun2(Rc::new(a), Rc::new(b))
    }

    pub fn crc(a: TypeX, b: TypeX) -> TypeX {
        TypeX::Crc(Rc::new(a), Rc::new(b))
    }

    pub fn has_tyvar(&self) -> bool {
        match self {
            TypeX::TyVar(_) => true,
            TypeX::Dyn | TypeX::Base(_) => false,
            TypeX::Crc(a, b) | TypeX::Fun2(a, b) => a.has_tyvar() || b.has_tyvar(),
        }
    }
}

impl CrcType for TypeX {
    const ARROW: &'static str = "=>";

    fn dynamic() -> Self {
        TypeX::Dyn
    }
    fn base(b: Base) -> Self {
        TypeX::Base(b)
    }
    fn arrow(dom: Self, cod: Self) -> Self {
        TypeX::fun2(dom, cod)
    }
    fn is_dyn(&self) -> bool {
        matches!(self, TypeX::Dyn)
    }
    fn as_arrow(&self) -> Option<(&Self, &Self)> {
        match self {
            TypeX::Fun2(a, b) => Some((a, b)),
            _ => None,
        }
    }
    fn to_shape(&self) -> Shape {
        match self {
            TypeX::Dyn => Shape::Dyn,
            TypeX::Base(b) => Shape::Base(*b),
            TypeX::Fun2(a, b) => Shape::arrow(a.to_shape(), b.to_shape()),
            TypeX::Crc(a, b) => Shape::crc(a.to_shape(), b.to_shape()),
            TypeX::TyVar(v) => Shape::Var(*v),
        }
    }
    fn from_shape(s: &Shape) -> Option<Self> {
        Some(match s {
            Shape::Dyn => TypeX::Dyn,
            Shape::Base(b) => TypeX::Base(*b),
            Shape::Arrow(a, b) => TypeX::fun2(Self::from_shape(a)?, Self::from_shape(b)?),
            Shape::Crc(a, b) => TypeX::crc(Self::from_shape(a)?, Self::from_shape(b)?),
            Shape::Var(v) => TypeX::TyVar(*v),
            Shape::Any => return None,
        })
    }
    fn ground_of(&self) -> Option<Ground> {
        match self {
            TypeX::Base(b) => Some(Ground::Base(*b)),
            TypeX::Fun2(..) => Some(Ground::DynFun),
            TypeX::Dyn | TypeX::Crc(..) | TypeX::TyVar(_) => None,
        }
    }
}

/// A type with independent holes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Any,
    Dyn,
    Base(Base),
    Arrow(Rc<Shape>, Rc<Shape>),
    Crc(Rc<Shape>, Rc<Shape>),
    Var(u32),
}

impl Shape {
    pub fn arrow(a: Shape, b: Shape) -> Shape {
        Shape::Arrow(Rc::new(a), Rc::new(b))
    }

    pub fn crc(a: Shape, b: Shape) -> Shape {
        Shape::Crc(Rc::new(a), Rc::new(b))
    }

    /// Greatest lower bound in the "more specific" order, or `None` if the
    /// two shapes share no instance.
    pub fn meet(&self, other: &Shape) -> Option<Shape> {
        Some(match (self, other) {
            (Shape::Any, s) | (s, Shape::Any) => s.clone(),
            (Shape::Dyn, Shape::Dyn) => Shape::Dyn,
            (Shape::Base(a), Shape::Base(b)) if a == b => Shape::Base(*a),
            (Shape::Var(a), Shape::Var(b)) if a == b => Shape::Var(*a),
            (Shape::Arrow(a1, b1), Shape::Arrow(a2, b2)) => {
                Shape::arrow(a1.meet(a2)?, b1.meet(b2)?)
            }
            (Shape::Crc(a1, b1), Shape::Crc(a2, b2)) => Shape::crc(a1.meet(a2)?, b1.meet(b2)?),
            _ => return None,
        })
    }

    /// True when every instance of `other` is an instance of `self`.
    pub fn generalizes(&self, other: &Shape) -> bool {
        match (self, other) {
            (Shape::Any, _) => true,
            (Shape::Arrow(a1, b1), Shape::Arrow(a2, b2)) | (Shape::Crc(a1, b1), Shape::Crc(a2, b2)) => {
                a1.generalizes(a2) && b1.generalizes(b2)
            }
            (a, b) => a == b,
        }
    }

    pub fn has_holes(&self) -> bool {
        match self {
            Shape::Any => true,
            Shape::Dyn | Shape::Base(_) | Shape::Var(_) => false,
            Shape::Arrow(a, b) | Shape::Crc(a, b) => a.has_holes() || b.has_holes(),
        }
    }

    /// Replaces every hole with `Dyn`.
    pub fn fill(&self) -> Shape {
        match self {
            Shape::Any => Shape::Dyn,
            Shape::Arrow(a, b) => Shape::arrow(a.fill(), b.fill()),
            Shape::Crc(a, b) => Shape::crc(a.fill(), b.fill()),
            s => s.clone(),
        }
    }

    pub fn substitute_var(&self, v: u32, with: &Shape) -> Shape {
        match self {
            Shape::Var(w) if *w == v => with.clone(),
            Shape::Arrow(a, b) => Shape::arrow(a.substitute_var(v, with), b.substitute_var(v, with)),
            Shape::Crc(a, b) => Shape::crc(a.substitute_var(v, with), b.substitute_var(v, with)),
            s => s.clone(),
        }
    }

    pub fn mentions_var(&self, v: u32) -> bool {
        match self {
            Shape::Var(w) => *w == v,
            Shape::Arrow(a, b) | Shape::Crc(a, b) => a.mentions_var(v) || b.mentions_var(v),
            _ => false,
        }
    }

    /// Renders the shape using `arrow` for function types and `_` for holes.
    pub fn render(&self, arrow: &str) -> String {
        let mut out = String::new();
        self.render_into(arrow, false, &mut out);
        out
    }

    fn render_into(&self, arrow: &str, left: bool, out: &mut String) {
        match self {
            Shape::Any => out.push('_'),
            Shape::Dyn => out.push_str("Dyn"),
            Shape::Base(b) => out.push_str(&b.to_string()),
            Shape::Var(v) => out.push_str(&format!("'X{v}")),
            Shape::Arrow(a, b) | Shape::Crc(a, b) => {
                let tok = if matches!(self, Shape::Crc(..)) { "~>" } else { arrow };
                if left {
                    out.push('(');
                }
                a.render_into(arrow, true, out);
                out.push(' ');
                out.push_str(tok);
                out.push(' ');
                b.render_into(arrow, false, out);
                if left {
                    out.push(')');
                }
            }
        }
    }
}

/// Type consistency `A ∼ B` of λS.
pub fn consistent(a: &TypeS, b: &TypeS) -> bool {
    match (a, b) {
        (TypeS::Dyn, _) | (_, TypeS::Dyn) => true,
        (TypeS::Base(x), TypeS::Base(y)) => x == y,
        (TypeS::Fun(a1, b1), TypeS::Fun(a2, b2)) => consistent(a1, a2) && consistent(b1, b2),
        _ => false,
    }
}

impl fmt::Display for TypeS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_shape().render("->"))
    }
}

impl fmt::Display for TypeX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_shape().render("=>"))
    }
}

impl fmt::Display for Ground {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ground::Base(b) => write!(f, "{b}"),
            Ground::DynFun => f.write_str("(Dyn -> Dyn)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistency_table() {
        let int = TypeS::INT;
        assert!(consistent(&int, &TypeS::Dyn));
        assert!(consistent(&int, &int));
        let l = TypeS::fun(TypeS::INT, TypeS::Dyn);
        let r = TypeS::fun(TypeS::BOOL, TypeS::Dyn);
        assert!(!consistent(&l, &r));
        assert!(consistent(&l, &TypeS::fun(TypeS::Dyn, TypeS::BOOL)));
        assert!(!consistent(&TypeS::INT, &TypeS::fun(TypeS::Dyn, TypeS::Dyn)));
    }

    #[test]
    fn meet_treats_holes_independently() {
        let s = Shape::arrow(Shape::Any, Shape::Any);
        let t = Shape::arrow(Shape::Base(Base::Int), Shape::Base(Base::Bool));
        assert_eq!(s.meet(&t), Some(t.clone()));
        assert!(s.generalizes(&t));
        assert!(!t.generalizes(&s));
        assert_eq!(Shape::Dyn.meet(&Shape::Base(Base::Int)), None);
    }

    #[test]
    fn rendering() {
        let t = TypeS::fun(TypeS::fun(TypeS::Dyn, TypeS::Dyn), TypeS::INT);
        assert_eq!(t.to_string(), "(Dyn -> Dyn) -> Int");
        let x = TypeX::crc(TypeX::INT, TypeX::fun2(TypeX::Dyn, TypeX::TyVar(3)));
        assert_eq!(x.to_string(), "Int ~> Dyn => 'X3");
    }
}

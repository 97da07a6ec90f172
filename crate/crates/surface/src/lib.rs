//! Concrete syntax for λS and λSx: lexing, parsing, and printing.
//!
//! ```
//! use coercion_surface::{parse_term_s, print_term_s};
//! let m = parse_term_s(r"(\x:Int. x + 1) 4").unwrap();
//! assert_eq!(print_term_s(&m, true), r"(\x:Int. x + 1) 4");
//! ```

use std::fmt;
use std::path::Path;

use coercion_core::coercion::{CoercionS, CoercionX};
use coercion_core::lam_s::{Program, Term};
use coercion_core::lam_sx::{ProgramX, TermX};
use coercion_core::types::{TypeS, TypeX};

mod lexer;
mod lower;
mod parser;
mod print;

pub use coercion_core::alpha::{alpha_eq_s, alpha_eq_x};
pub use parser::{DefSyntax, Expr, ProgramSyntax, SurfaceType};
pub use print::{print_program_s, print_program_x, print_term_s, print_term_x, trace_line};

use parser::Parser;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected ", self.line, self.column)?;
        match self.expected.as_slice() {
            [] => f.write_str("something else")?,
            [one] => f.write_str(one)?,
            [init @ .., last] => write!(f, "{} or {last}", init.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    LamS,
    LamSx,
}

impl Dialect {
    /// `.lams` files are λS and `.lamsx` files are λSx.
    pub fn from_path(path: &Path) -> Option<Dialect> {
        match path.extension()?.to_str()? {
            "lams" => Some(Dialect::LamS),
            "lamsx" => Some(Dialect::LamSx),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Dialect::LamS => "lams",
            Dialect::LamSx => "lamsx",
        }
    }
}

fn whole<T: SurfaceType, X>(src: &str, f: impl FnOnce(&mut Parser<T>) -> Result<X, ParseError>) -> Result<X, ParseError> {
    let mut p = Parser::new(src)?;
    let x = f(&mut p)?;
    p.finish()?;
    Ok(x)
}

pub fn parse_program_s(src: &str) -> Result<Program, ParseError> {
    whole(src, |p: &mut Parser<TypeS>| p.program()).map(|p| lower::program_s(&p))
}

pub fn parse_program_x(src: &str) -> Result<ProgramX, ParseError> {
    whole(src, |p: &mut Parser<TypeX>| p.program()).map(|p| lower::program_x(&p))
}

/// Parses a closed term with no top-level definitions.
pub fn parse_term_s(src: &str) -> Result<Term, ParseError> {
    parse_program_s(src).map(|p| p.main().clone())
}

pub fn parse_term_x(src: &str) -> Result<TermX, ParseError> {
    parse_program_x(src).map(|p| p.main().clone())
}

pub fn parse_type_s(src: &str) -> Result<TypeS, ParseError> {
    whole(src, |p: &mut Parser<TypeS>| p.ty())
}

pub fn parse_type_x(src: &str) -> Result<TypeX, ParseError> {
    whole(src, |p: &mut Parser<TypeX>| p.ty())
}

pub fn parse_coercion_s(src: &str) -> Result<CoercionS, ParseError> {
    whole(src, |p: &mut Parser<TypeS>| p.crc())
}

pub fn parse_coercion_x(src: &str) -> Result<CoercionX, ParseError> {
    whole(src, |p: &mut Parser<TypeX>| p.crc())
}

#[cfg(test)]
mod tests {
    use super::*;
    use coercion_core::coercion::{BlameLabel, Coercion};
    use coercion_core::lam_s::term as s;
    use coercion_core::lam_sx::term as x;
    use coercion_core::ops::Op;
    use coercion_core::types::Ground;

    #[test]
    fn coercions() {
        let c = parse_coercion_s("Int! -> Int?^p").unwrap();
        assert_eq!(c, Coercion::mk_fun(Coercion::inj(Ground::INT), Coercion::proj(Ground::INT, &BlameLabel::new("p"))));
        assert_eq!(c.render(true), "Int! -> Int?^p");
        assert_eq!(parse_coercion_s("Int?^p ; Int!").unwrap().render(true), "Int?^p;id{Int};Int!");
        assert_eq!(parse_coercion_s("(Dyn -> Dyn)!").unwrap(), Coercion::inj(Ground::DynFun));
        assert_eq!(parse_coercion_x("(Dyn => Dyn)?^q").unwrap(), Coercion::proj(Ground::DynFun, &BlameLabel::new("q")));
        assert!(parse_coercion_s("bot{Int, p, Int}").is_err());
        assert!(parse_coercion_s("Int! ; Bool!").is_err());
    }

    #[test]
    fn precedence() {
        let m = parse_term_s("f 1 + 2 * 3 < 4").unwrap();
        let expected = s::op(
            Op::Lt,
            s::op(Op::Add, s::app(s::var("f"), s::int(1)), s::op(Op::Mul, s::int(2), s::int(3))),
            s::int(4),
        );
        assert_eq!(m, expected);
        let m = parse_term_s("x<Int!> < 2").unwrap();
        assert_eq!(m, s::op(Op::Lt, s::crc(s::var("x"), Coercion::inj(Ground::INT)), s::int(2)));
    }

    #[test]
    fn nested_angle_brackets() {
        let k = || x::lit(Coercion::inj(Ground::INT));
        let m = parse_term_x("a<b<Int!>>").unwrap();
        assert_eq!(m, x::crc(x::var("a"), x::crc(x::var("b"), k())));
        let m = parse_term_x("5<<Int!>>").unwrap();
        assert_eq!(m, x::coerced(x::int(5), Coercion::inj(Ground::INT)));
    }

    #[test]
    fn globals_are_resolved() {
        let p = parse_program_s("letrec f (n:Int) : Int = f n in (\\f:Int. f) (f 1)").unwrap();
        assert_eq!(p.defs[0].body, s::app(s::global("f"), s::var("n")));
        let main = p.main();
        assert_eq!(main, &s::app(s::abs("f", TypeS::INT, s::var("f")), s::app(s::global("f"), s::int(1))));
    }

    #[test]
    fn negative_literals() {
        assert_eq!(parse_term_s("(-3) - 1").unwrap(), s::op(Op::Sub, s::int(-3), s::int(1)));
        assert_eq!(print_term_s(&s::op(Op::Sub, s::int(1), s::int(-3)), true), "1 - (-3)");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_term_s("\\x:Int.\n  x +").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        assert_eq!(e.to_string(), "2:6: expected a term, found end of input");
    }

    #[test]
    fn dialect_from_extension() {
        assert_eq!(Dialect::from_path(Path::new("a/b.lams")), Some(Dialect::LamS));
        assert_eq!(Dialect::from_path(Path::new("b.lamsx")), Some(Dialect::LamSx));
        assert_eq!(Dialect::from_path(Path::new("b.txt")), None);
    }
}

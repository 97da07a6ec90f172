//! Recursive-descent parser shared by both dialects.
//!
//! The dialect is selected by the type language: `TypeS` parses λS, where
//! `<...>` holds a coercion, and `TypeX` parses λSx, where it holds a term.
//!
//! Precedence, loosest first: `\`, `let` and `if`; `;;`; `=` and `<`; `+`
//! and `-`; `*`; application and postfix coercion (one left-associative
//! level); atoms.

use std::marker::PhantomData;

use coercion_core::coercion::{BlameLabel, Coercion};
use coercion_core::ops::{Lit, Op};
use coercion_core::types::{Base, CrcType, Ground, TypeS, TypeX};

use crate::lexer::{lex, Tok, Token};
use crate::ParseError;

pub trait SurfaceType: CrcType {
    const IS_X: bool;
    fn crc_type(a: Self, b: Self) -> Option<Self>;
    fn tyvar(n: u32) -> Option<Self>;
}

impl SurfaceType for TypeS {
    const IS_X: bool = false;
    fn crc_type(_: Self, _: Self) -> Option<Self> {
        None
    }
    fn tyvar(_: u32) -> Option<Self> {
        None
    }
}

impl SurfaceType for TypeX {
    const IS_X: bool = true;
    fn crc_type(a: Self, b: Self) -> Option<Self> {
        Some(TypeX::crc(a, b))
    }
    fn tyvar(n: u32) -> Option<Self> {
        Some(TypeX::TyVar(n))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr<T> {
    Lit(Lit),
    Var(String),
    Lam(String, T, Box<Expr<T>>),
    Lam2 { x: String, x_ty: T, k: String, k_ty: T, body: Box<Expr<T>> },
    App(Box<Expr<T>>, Box<Expr<T>>),
    App2(Box<Expr<T>>, Box<Expr<T>>, Box<Expr<T>>),
    Op(Op, Box<Expr<T>>, Box<Expr<T>>),
    /// `M<N>`; in λS the inner expression is always a coercion literal.
    Crc(Box<Expr<T>>, Box<Expr<T>>),
    Coerced(Box<Expr<T>>, Coercion<T>),
    CrcLit(Coercion<T>),
    Compose(Box<Expr<T>>, Box<Expr<T>>),
    Let(String, Box<Expr<T>>, Box<Expr<T>>),
    If(Box<Expr<T>>, Box<Expr<T>>, Box<Expr<T>>),
    Blame(BlameLabel),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefSyntax<T> {
    pub name: String,
    pub x: String,
    pub x_ty: T,
    /// λSx only: the continuation parameter.
    pub k: Option<(String, T)>,
    /// λS only: the declared result type.
    pub ret_ty: Option<T>,
    pub body: Expr<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProgramSyntax<T> {
    pub defs: Vec<DefSyntax<T>>,
    pub main: Expr<T>,
}

const KEYWORDS: &[&str] = &[
    "letrec", "and", "in", "let", "if", "then", "else", "blame", "true", "false", "id", "bot", "Dyn", "Int", "Bool",
];

type PResult<X> = Result<X, ParseError>;

pub struct Parser<T> {
    toks: Vec<Token>,
    pos: usize,
    _t: PhantomData<T>,
}

fn b<X>(x: X) -> Box<X> {
    Box::new(x)
}

impl<T: SurfaceType> Parser<T> {
    pub fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, _t: PhantomData })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
        }
    }

    fn err_at(&self, at: usize, message: String) -> ParseError {
        let t = &self.toks[at];
        ParseError { line: t.line, column: t.col, expected: vec![message], found: t.tok.to_string() }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err(&[&format!("'{s}'")]))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&[&format!("'{kw}'")]))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.err(&["an identifier"])),
        }
    }

    /// Consumes one `>`, splitting a `>>` token when needed.
    fn close_angle(&mut self) -> PResult<()> {
        if self.is_sym(">>") {
            let t = self.toks[self.pos].clone();
            self.toks[self.pos].tok = Tok::Sym(">");
            self.toks.insert(self.pos + 1, Token { tok: Tok::Sym(">"), line: t.line, col: t.col + 1 });
        }
        self.expect_sym(">")
    }

    fn close_double_angle(&mut self) -> PResult<()> {
        if self.eat_sym(">>") {
            return Ok(());
        }
        self.close_angle()?;
        self.close_angle()
    }

    pub fn finish(&self) -> PResult<()> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            Err(self.err(&["end of input"]))
        }
    }

    // Types

    pub fn ty(&mut self) -> PResult<T> {
        let a = self.ty_atom()?;
        let arrow = match self.peek() {
            Tok::Sym(s @ ("->" | "=>" | "~>")) => *s,
            _ => return Ok(a),
        };
        let start = self.pos;
        self.bump();
        let c = self.ty()?;
        if arrow == T::ARROW {
            Ok(T::arrow(a, c))
        } else if arrow == "~>" {
            T::crc_type(a, c).ok_or_else(|| self.err_at(start, format!("'{}'", T::ARROW)))
        } else {
            Err(self.err_at(start, format!("'{}'", T::ARROW)))
        }
    }

    fn ty_atom(&mut self) -> PResult<T> {
        let t = match self.peek().clone() {
            Tok::Ident(s) if s == "Dyn" => T::dynamic(),
            Tok::Ident(s) if s == "Int" => T::base(Base::Int),
            Tok::Ident(s) if s == "Bool" => T::base(Base::Bool),
            Tok::TyVar(n) if T::IS_X => T::tyvar(n).expect("λSx has type variables"),
            Tok::Sym("(") => {
                self.bump();
                let t = self.ty()?;
                self.expect_sym(")")?;
                return Ok(t);
            }
            _ => return Err(self.err(&["a type"])),
        };
        self.bump();
        Ok(t)
    }

    // Coercions

    fn at_ground_paren(&self) -> bool {
        self.is_sym("(")
            && matches!(self.peek_at(1), Tok::Ident(s) if s == "Dyn")
            && matches!(self.peek_at(2), Tok::Sym(s) if *s == T::ARROW)
            && matches!(self.peek_at(3), Tok::Ident(s) if s == "Dyn")
            && matches!(self.peek_at(4), Tok::Sym(")"))
    }

    fn ground(&mut self) -> PResult<Ground> {
        if self.at_ground_paren() {
            for _ in 0..5 {
                self.bump();
            }
            return Ok(Ground::DynFun);
        }
        let g = match self.peek() {
            Tok::Ident(s) if s == "Int" => Ground::INT,
            Tok::Ident(s) if s == "Bool" => Ground::BOOL,
            _ => return Err(self.err(&["a ground type"])),
        };
        self.bump();
        Ok(g)
    }

    fn label(&mut self) -> PResult<BlameLabel> {
        match self.peek() {
            Tok::Ident(s) if s.starts_with(|c: char| c.is_ascii_alphabetic()) => {
                let l = BlameLabel::new(s);
                self.bump();
                Ok(l)
            }
            _ => Err(self.err(&["a blame label"])),
        }
    }

    fn at_crc_start(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) if s == "id" || s == "bot" => matches!(self.peek_at(1), Tok::Sym("{")),
            Tok::Ident(s) if s == "Int" || s == "Bool" => matches!(self.peek_at(1), Tok::Sym("!" | "?")),
            Tok::Sym("(") => self.at_ground_paren() && matches!(self.peek_at(5), Tok::Sym("!" | "?")),
            _ => false,
        }
    }

    pub fn crc(&mut self) -> PResult<Coercion<T>> {
        let s = self.crc_seq()?;
        if self.is_sym(T::ARROW) {
            self.bump();
            let t = self.crc()?;
            return Ok(Coercion::mk_fun(s, t));
        }
        Ok(s)
    }

    fn crc_seq(&mut self) -> PResult<Coercion<T>> {
        let start = self.pos;
        let mut acc = self.crc_prim()?;
        while self.eat_sym(";") {
            let next = self.crc_prim()?;
            acc = acc.compose(&next).map_err(|e| self.err_at(start, format!("a well-typed sequence ({e})")))?;
        }
        Ok(acc)
    }

    fn crc_prim(&mut self) -> PResult<Coercion<T>> {
        if self.is_kw("id") {
            self.bump();
            self.expect_sym("{")?;
            let t = self.ty()?;
            self.expect_sym("}")?;
            return Ok(Coercion::id(t));
        }
        if self.is_kw("bot") {
            self.bump();
            self.expect_sym("{")?;
            let g = self.ground()?;
            self.expect_sym(",")?;
            let p = self.label()?;
            self.expect_sym(",")?;
            let at = self.pos;
            let h = self.ground()?;
            self.expect_sym("}")?;
            if g == h {
                return Err(self.err_at(at, "a ground type different from the first".into()));
            }
            return Ok(Coercion::fail(g, &p, h));
        }
        if self.is_sym("(") && !self.at_ground_paren() {
            self.bump();
            let c = self.crc()?;
            self.expect_sym(")")?;
            return Ok(c);
        }
        let g = self.ground()?;
        if self.eat_sym("!") {
            return Ok(Coercion::inj(g));
        }
        self.expect_sym("?")?;
        self.expect_sym("^")?;
        let p = self.label()?;
        Ok(Coercion::proj(g, &p))
    }

    // Terms

    pub fn term(&mut self) -> PResult<Expr<T>> {
        if self.eat_sym("\\") {
            return self.lambda();
        }
        if T::IS_X && self.is_kw("let") {
            self.bump();
            let x = self.ident()?;
            self.expect_sym("=")?;
            let m = self.term()?;
            self.expect_kw("in")?;
            let n = self.term()?;
            return Ok(Expr::Let(x, b(m), b(n)));
        }
        if self.is_kw("if") {
            self.bump();
            let c = self.term()?;
            self.expect_kw("then")?;
            let t = self.term()?;
            self.expect_kw("else")?;
            let e = self.term()?;
            return Ok(Expr::If(b(c), b(t), b(e)));
        }
        let mut l = self.cmp()?;
        while T::IS_X && self.eat_sym(";;") {
            let r = self.cmp()?;
            l = Expr::Compose(b(l), b(r));
        }
        Ok(l)
    }

    fn lambda(&mut self) -> PResult<Expr<T>> {
        if T::IS_X {
            self.expect_sym("(")?;
            let x = self.ident()?;
            self.expect_sym(":")?;
            let x_ty = self.ty()?;
            self.expect_sym(",")?;
            let k = self.ident()?;
            self.expect_sym(":")?;
            let k_ty = self.ty()?;
            self.expect_sym(")")?;
            self.expect_sym(".")?;
            let body = self.term()?;
            return Ok(Expr::Lam2 { x, x_ty, k, k_ty, body: b(body) });
        }
        let x = self.ident()?;
        self.expect_sym(":")?;
        let a = self.ty()?;
        self.expect_sym(".")?;
        let body = self.term()?;
        Ok(Expr::Lam(x, a, b(body)))
    }

    fn cmp(&mut self) -> PResult<Expr<T>> {
        let l = self.add()?;
        let op = match self.peek() {
            Tok::Sym("=") => Op::Eq,
            Tok::Sym("<") => Op::Lt,
            _ => return Ok(l),
        };
        self.bump();
        let r = self.add()?;
        Ok(Expr::Op(op, b(l), b(r)))
    }

    fn add(&mut self) -> PResult<Expr<T>> {
        let mut l = self.mul()?;
        loop {
            let op = match self.peek() {
                Tok::Sym("+") => Op::Add,
                Tok::Sym("-") => Op::Sub,
                _ => return Ok(l),
            };
            self.bump();
            let r = self.mul()?;
            l = Expr::Op(op, b(l), b(r));
        }
    }

    fn mul(&mut self) -> PResult<Expr<T>> {
        let mut l = self.app()?;
        while self.eat_sym("*") {
            let r = self.app()?;
            l = Expr::Op(Op::Mul, b(l), b(r));
        }
        Ok(l)
    }

    fn at_atom_start(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::Sym("(") => true,
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()) || matches!(s.as_str(), "true" | "false"),
            _ => false,
        }
    }

    /// The contents of `<...>` followed by the closing bracket.
    fn angle(&mut self) -> PResult<Expr<T>> {
        let inner = if T::IS_X { self.term()? } else { Expr::CrcLit(self.crc()?) };
        self.close_angle()?;
        Ok(inner)
    }

    fn app(&mut self) -> PResult<Expr<T>> {
        let mut m = self.atom()?;
        loop {
            if self.eat_sym("<<") {
                let d = self.crc()?;
                self.close_double_angle()?;
                m = Expr::Coerced(b(m), d);
            } else if self.is_sym("<") {
                let save = (self.pos, self.toks.clone());
                self.bump();
                match self.angle() {
                    Ok(inner) => m = Expr::Crc(b(m), b(inner)),
                    Err(_) => {
                        (self.pos, self.toks) = save;
                        return Ok(m);
                    }
                }
            } else if T::IS_X && self.is_sym("(") {
                self.bump();
                let a = self.term()?;
                self.expect_sym(",")?;
                let k = self.term()?;
                self.expect_sym(")")?;
                m = Expr::App2(b(m), b(a), b(k));
            } else if !T::IS_X && self.at_atom_start() {
                let a = self.atom()?;
                m = Expr::App(b(m), b(a));
            } else {
                return Ok(m);
            }
        }
    }

    fn atom(&mut self) -> PResult<Expr<T>> {
        if T::IS_X && self.at_crc_start() {
            return Ok(Expr::CrcLit(self.crc()?));
        }
        if T::IS_X && self.is_sym("(") {
            let save = (self.pos, self.toks.clone());
            match self.crc() {
                Ok(c) => return Ok(Expr::CrcLit(c)),
                Err(_) => (self.pos, self.toks) = save,
            }
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Lit(Lit::Int(n)))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                Ok(Expr::Lit(Lit::Bool(s == "true")))
            }
            Tok::Ident(s) if s == "blame" => {
                self.bump();
                Ok(Expr::Blame(self.label()?))
            }
            Tok::Sym("(") => {
                self.bump();
                let m = self.term()?;
                self.expect_sym(")")?;
                Ok(m)
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident()?)),
            _ => Err(self.err(&["a term"])),
        }
    }

    pub fn program(&mut self) -> PResult<ProgramSyntax<T>> {
        let mut defs = Vec::new();
        if self.is_kw("letrec") {
            self.bump();
            loop {
                defs.push(self.def()?);
                if self.is_kw("and") {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect_kw("in")?;
        }
        let main = self.term()?;
        self.finish()?;
        Ok(ProgramSyntax { defs, main })
    }

    fn def(&mut self) -> PResult<DefSyntax<T>> {
        let name = self.ident()?;
        self.expect_sym("(")?;
        let x = self.ident()?;
        self.expect_sym(":")?;
        let x_ty = self.ty()?;
        let (k, ret_ty) = if T::IS_X {
            self.expect_sym(",")?;
            let k = self.ident()?;
            self.expect_sym(":")?;
            let k_ty = self.ty()?;
            self.expect_sym(")")?;
            (Some((k, k_ty)), None)
        } else {
            self.expect_sym(")")?;
            self.expect_sym(":")?;
            (None, Some(self.ty()?))
        };
        self.expect_sym("=")?;
        let body = self.term()?;
        Ok(DefSyntax { name, x, x_ty, k, ret_ty, body })
    }
}

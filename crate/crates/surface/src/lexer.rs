use std::fmt;

use crate::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Ident(String),
    TyVar(u32),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::TyVar(n) => write!(f, "'X{n}"),
            Tok::Sym(s) => write!(f, "{s}"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Longest symbols first so that `;;` wins over `;` and `->` over `-`.
const SYMBOLS: &[&str] = &[
    "<<", ">>", "->", "=>", "~>", ";;", "\\", ".", ":", ",", "(", ")", "{", "}", "<", ">", ";", "!", "?", "^", "+",
    "-", "*", "=",
];

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let bump = |i: &mut usize, col: &mut usize, n: usize| {
        *i += n;
        *col += n;
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            bump(&mut i, &mut col, 1);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let after_paren = matches!(out.last(), Some(Token { tok: Tok::Sym("("), .. }));
        let negative = c == '-' && after_paren && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || negative {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let n = text.parse::<i64>().map_err(|_| ParseError {
                line,
                column: col,
                expected: vec!["an integer literal that fits in 64 bits".into()],
                found: text.clone(),
            })?;
            let len = j - i;
            bump(&mut i, &mut col, len);
            out.push(Token { tok: Tok::Int(n), line: start_line, col: start_col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let len = j - i;
            bump(&mut i, &mut col, len);
            out.push(Token { tok: Tok::Ident(text), line: start_line, col: start_col });
            continue;
        }
        if c == '\'' && chars.get(i + 1) == Some(&'X') && chars.get(i + 2).is_some_and(|d| d.is_ascii_digit()) {
            let mut j = i + 2;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let n: String = chars[i + 2..j].iter().collect();
            let n = n.parse().map_err(|_| ParseError {
                line,
                column: col,
                expected: vec!["a type variable index".into()],
                found: n.clone(),
            })?;
            let len = j - i;
            bump(&mut i, &mut col, len);
            out.push(Token { tok: Tok::TyVar(n), line: start_line, col: start_col });
            continue;
        }
        let sym = SYMBOLS.iter().find(|s| {
            let s: Vec<char> = s.chars().collect();
            chars[i..].starts_with(&s)
        });
        match sym {
            Some(s) => {
                bump(&mut i, &mut col, s.chars().count());
                out.push(Token { tok: Tok::Sym(s), line: start_line, col: start_col });
            }
            None => {
                return Err(ParseError { line, column: col, expected: vec!["a token".into()], found: c.to_string() });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

//! Precedence-aware printers whose output parses back to the same term.

use coercion_core::lam_s::{Kind, Program, Term, TermS};
use coercion_core::lam_sx::{ProgramX, TermX, Tx};
use coercion_core::ops::{Lit, Op};
use coercion_core::types::{TypeS, TypeX};

const LOW: u8 = 0;
const SEQ: u8 = 1;
const CMP: u8 = 2;
const ADD: u8 = 3;
const MUL: u8 = 4;
const APP: u8 = 5;
const ATOM: u8 = 6;

fn op_level(o: Op) -> u8 {
    match o {
        Op::Eq | Op::Lt => CMP,
        Op::Add | Op::Sub => ADD,
        Op::Mul => MUL,
    }
}

fn lit(l: &Lit, out: &mut String) {
    match l {
        Lit::Int(n) if *n < 0 => out.push_str(&format!("({n})")),
        _ => out.push_str(&l.to_string()),
    }
}

/// Operand levels of a binary operator: left-associative except comparisons.
fn operand_levels(o: Op) -> (u8, u8) {
    match op_level(o) {
        CMP => (ADD, ADD),
        l => (l, l + 1),
    }
}

fn level_s(m: &TermS) -> u8 {
    match m {
        TermS::Abs(..) | TermS::If(..) => LOW,
        TermS::Op(o, ..) => op_level(*o),
        TermS::App(..) | TermS::CrcApp(..) | TermS::CoercedVal(..) | TermS::Blame(_) => APP,
        TermS::Const(_) | TermS::Var(_) | TermS::GlobalRef(_) => ATOM,
    }
}

struct Printer {
    sugar: bool,
    out: String,
    /// Inside `<...>` an unparenthesized `a < b` could read as `a<b ...>`.
    in_angle: bool,
}

impl Printer {
    fn open(&mut self, need: u8, have: u8) -> bool {
        let paren = have < need;
        if paren {
            self.out.push('(');
        }
        paren
    }

    fn close(&mut self, paren: bool) {
        if paren {
            self.out.push(')');
        }
    }

    fn term_s(&mut self, m: &TermS, need: u8) {
        let paren = self.open(need, level_s(m));
        match m {
            TermS::Const(l) => lit(l, &mut self.out),
            TermS::Var(x) | TermS::GlobalRef(x) => self.out.push_str(x),
            TermS::Abs(x, a, body) => {
                self.out.push_str(&format!("\\{x}:{a}. "));
                self.term_s(body, LOW);
            }
            TermS::Op(o, l, r) => {
                let (lv, rv) = operand_levels(*o);
                self.term_s(l, lv);
                self.out.push_str(&format!(" {} ", o.symbol()));
                self.term_s(r, rv);
            }
            TermS::App(f, a) => {
                self.term_s(f, APP);
                self.out.push(' ');
                self.term_s(a, ATOM);
            }
            TermS::CrcApp(n, s) => {
                self.term_s(n, APP);
                self.out.push_str(&format!("<{}>", s.render(self.sugar)));
            }
            TermS::CoercedVal(u, d) => {
                self.term_s(u, APP);
                self.out.push_str(&format!("<<{}>>", d.render(self.sugar)));
            }
            TermS::Blame(p) => self.out.push_str(&format!("blame {p}")),
            TermS::If(c, t, e) => {
                self.out.push_str("if ");
                self.term_s(c, LOW);
                self.out.push_str(" then ");
                self.term_s(t, LOW);
                self.out.push_str(" else ");
                self.term_s(e, LOW);
            }
        }
        self.close(paren);
    }

    fn term_x(&mut self, m: &Tx, need: u8) {
        let lt_in_angle = self.in_angle && matches!(m, Tx::Op(Op::Lt, ..));
        let paren = self.open(if lt_in_angle { ATOM } else { need }, level_x(m));
        let saved = self.in_angle;
        if paren {
            self.in_angle = false;
        }
        match m {
            Tx::Const(l) => lit(l, &mut self.out),
            Tx::Var(x) | Tx::GlobalRef(x) => self.out.push_str(x),
            Tx::Abs2 { x, x_ty, k, k_ty, body } => {
                self.out.push_str(&format!("\\ ({x}:{x_ty}, {k}:{k_ty}). "));
                self.term_x(body, LOW);
            }
            Tx::Op(o, l, r) => {
                let (lv, rv) = operand_levels(*o);
                self.term_x(l, lv);
                self.out.push_str(&format!(" {} ", o.symbol()));
                self.term_x(r, rv);
            }
            Tx::App2(f, a, k) => {
                self.term_x(f, APP);
                self.out.push_str(" (");
                let outer = std::mem::replace(&mut self.in_angle, false);
                self.term_x(a, LOW);
                self.out.push_str(", ");
                self.term_x(k, LOW);
                self.in_angle = outer;
                self.out.push(')');
            }
            Tx::Let(x, b, n) => {
                self.out.push_str(&format!("let {x} = "));
                self.term_x(b, LOW);
                self.out.push_str(" in ");
                self.term_x(n, LOW);
            }
            Tx::Compose(l, r) => {
                self.term_x(l, SEQ);
                self.out.push_str(" ;; ");
                self.term_x(r, CMP);
            }
            Tx::CrcApp(n, k) => {
                self.term_x(n, APP);
                self.out.push('<');
                let outer = std::mem::replace(&mut self.in_angle, true);
                self.term_x(k, LOW);
                self.in_angle = outer;
                self.out.push('>');
            }
            Tx::CoercedVal(u, d) => {
                self.term_x(u, APP);
                self.out.push_str(&format!("<<{}>>", d.render(self.sugar)));
            }
            Tx::CrcLit(s) => self.out.push_str(&s.render(self.sugar)),
            Tx::Blame(p) => self.out.push_str(&format!("blame {p}")),
            Tx::If(c, t, e) => {
                self.out.push_str("if ");
                self.term_x(c, LOW);
                self.out.push_str(" then ");
                self.term_x(t, LOW);
                self.out.push_str(" else ");
                self.term_x(e, LOW);
            }
        }
        self.in_angle = saved;
        self.close(paren);
    }
}

fn level_x(m: &Tx) -> u8 {
    match m {
        Tx::Abs2 { .. } | Tx::Let(..) | Tx::If(..) => LOW,
        Tx::Compose(..) => SEQ,
        Tx::CrcLit(_) => CMP,
        Tx::Op(o, ..) => op_level(*o),
        Tx::App2(..) | Tx::CrcApp(..) | Tx::CoercedVal(..) | Tx::Blame(_) => APP,
        Tx::Const(_) | Tx::Var(_) | Tx::GlobalRef(_) => ATOM,
    }
}

/// Prints a λS term. With `sugar`, coercions use their short forms.
pub fn print_term_s(m: &Term, sugar: bool) -> String {
    let mut p = Printer { sugar, out: String::new(), in_angle: false };
    p.term_s(m, LOW);
    p.out
}

pub fn print_term_x(m: &TermX, sugar: bool) -> String {
    let mut p = Printer { sugar, out: String::new(), in_angle: false };
    p.term_x(m, LOW);
    p.out
}

pub fn print_program_s(prog: &Program, sugar: bool) -> String {
    let mut out = String::new();
    for (i, d) in prog.defs.iter().enumerate() {
        out.push_str(if i == 0 { "letrec " } else { "and " });
        let ret: &TypeS = &d.ret_ty;
        out.push_str(&format!("{} ({}:{}) : {} =\n  {}\n", d.name, d.param, d.param_ty, ret, print_term_s(&d.body, sugar)));
    }
    if !prog.defs.is_empty() {
        out.push_str("in ");
    }
    out.push_str(&print_term_s(prog.main(), sugar));
    out.push('\n');
    out
}

pub fn print_program_x(prog: &ProgramX, sugar: bool) -> String {
    let mut out = String::new();
    for (i, d) in prog.defs.iter().enumerate() {
        out.push_str(if i == 0 { "letrec " } else { "and " });
        let k_ty: &TypeX = &d.k_ty;
        out.push_str(&format!(
            "{} ({}:{}, {}:{}) =\n  {}\n",
            d.name,
            d.x,
            d.x_ty,
            d.k,
            k_ty,
            print_term_x(&d.body, sugar)
        ));
    }
    if !prog.defs.is_empty() {
        out.push_str("in ");
    }
    out.push_str(&print_term_x(prog.main(), sugar));
    out.push('\n');
    out
}

/// One line of an evaluation trace: `step <n> <e|c> <rule>: <term>`.
pub fn trace_line(n: usize, kind: Kind, rule: &str, term: &str) -> String {
    let k = match kind {
        Kind::E => 'e',
        Kind::C => 'c',
    };
    format!("step {n} {k} {rule}: {term}")
}

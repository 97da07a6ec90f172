//! A search-based decomposition of λSx terms, independent of [`super::step`].

use super::step::FrameX;
use super::term::{TermX, Tx};
use crate::coercion::{BlameLabel, Coercion};
use crate::lam_s::oracle::DecomposeError;
use crate::lam_s::Kind;
use crate::ops::Lit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionX {
    Redex { path: Vec<FrameX>, kind: Kind },
    Value,
    Blame(BlameLabel),
}

fn children(m: &Tx) -> Vec<(FrameX, &TermX)> {
    match m {
        Tx::Op(_, l, r) => vec![(FrameX::OpL, l), (FrameX::OpR, r)],
        Tx::App2(f, a, k) => vec![(FrameX::AppFun, f), (FrameX::AppArg, a), (FrameX::AppCrc, k)],
        Tx::Let(_, b, _) => vec![(FrameX::LetBound, b)],
        Tx::Compose(l, r) => vec![(FrameX::CmpL, l), (FrameX::CmpR, r)],
        Tx::CrcApp(n, k) => vec![(FrameX::CrcSubj, n), (FrameX::CrcArg, k)],
        Tx::If(c, _, _) => vec![(FrameX::IfCond, c)],
        _ => Vec::new(),
    }
}

/// The children to the left of `frame` must already be values.
fn frame_valid(frame: FrameX, parent: &Tx) -> bool {
    let kids = children(parent);
    kids.iter().take_while(|(f, _)| *f != frame).all(|(_, c)| c.is_value())
}

fn is_e_redex(m: &Tx) -> bool {
    match m {
        Tx::Op(_, l, r) => matches!((&**l, &**r), (Tx::Const(_), Tx::Const(_))),
        Tx::App2(f, a, k) => {
            a.is_value()
                && k.is_value()
                && match &**f {
                    Tx::Abs2 { .. } | Tx::GlobalRef(_) => true,
                    Tx::CoercedVal(u, d) => u.is_uncoerced_value() && matches!(d, Coercion::Fun(..)),
                    _ => false,
                }
        }
        Tx::If(c, _, _) => matches!(&**c, Tx::Const(Lit::Bool(_))),
        _ => false,
    }
}

fn is_c_redex(m: &Tx) -> bool {
    match m {
        Tx::Let(_, b, _) => b.is_value(),
        Tx::Compose(l, r) => matches!((&**l, &**r), (Tx::CrcLit(_), Tx::CrcLit(_))),
        Tx::CrcApp(n, k) => match (&**n, &**k) {
            (Tx::CoercedVal(u, _), Tx::CrcLit(_)) => u.is_uncoerced_value(),
            (u, Tx::CrcLit(s)) => u.is_uncoerced_value() && !matches!(s, Coercion::ProjSeq(..)),
            _ => false,
        },
        _ => false,
    }
}

fn search(m: &TermX, path: &mut Vec<FrameX>, found: &mut Vec<(Vec<FrameX>, Kind)>) {
    let kind = if is_e_redex(m) || (matches!(&**m, Tx::Blame(_)) && !path.is_empty()) {
        Some(Kind::E)
    } else if is_c_redex(m) {
        Some(Kind::C)
    } else {
        None
    };
    if let Some(k) = kind {
        found.push((path.clone(), k));
    }
    for (f, c) in children(m) {
        if frame_valid(f, m) {
            path.push(f);
            search(c, path, found);
            path.pop();
        }
    }
}

pub fn decompose_x(m: &TermX) -> Result<DecompositionX, DecomposeError> {
    let mut found = Vec::new();
    search(m, &mut Vec::new(), &mut found);
    match found.len() {
        0 => match &**m {
            Tx::Blame(p) => Ok(DecompositionX::Blame(p.clone())),
            t if t.is_value() => Ok(DecompositionX::Value),
            _ => Err(DecomposeError::None),
        },
        1 => {
            let (path, kind) = found.pop().expect("one element");
            Ok(DecompositionX::Redex { path, kind })
        }
        n => Err(DecomposeError::Multiple(n, Vec::new())),
    }
}

//! A search-based decomposition of λS terms, independent of [`super::step`].
//!
//! Every position reachable through evaluation frames is enumerated, then
//! kept only if its frames form a valid context (`E` for e-redexes and
//! blame, `F` for c-redexes). A well-typed closed term has at most one.

use thiserror::Error;

use super::step::{Frame, Kind};
use super::term::{Term, TermS};
use crate::coercion::{BlameLabel, Coercion};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// The redex position and whether it is contracted by an e- or c-rule.
    /// A `blame` under a nonempty context counts as an e-redex.
    Redex { path: Vec<Frame>, kind: Kind },
    Value,
    Blame(BlameLabel),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("{0} decompositions found: {1:?}")]
    Multiple(usize, Vec<Vec<Frame>>),
    #[error("no decomposition for a term that is neither a value nor blame")]
    None,
}

fn children(m: &TermS) -> Vec<(Frame, &Term)> {
    match m {
        TermS::Op(_, l, r) => vec![(Frame::OpL, l), (Frame::OpR, r)],
        TermS::App(f, a) => vec![(Frame::AppFun, f), (Frame::AppArg, a)],
        TermS::CrcApp(n, _) => vec![(Frame::CrcSubj, n)],
        TermS::If(c, _, _) => vec![(Frame::IfCond, c)],
        _ => Vec::new(),
    }
}

fn positions<'a>(m: &'a Term, path: &mut Vec<(Frame, &'a Term)>, out: &mut Vec<(Vec<(Frame, &'a Term)>, &'a Term)>) {
    out.push((path.clone(), m));
    for (f, c) in children(m) {
        path.push((f, m));
        positions(c, path, out);
        path.pop();
    }
}

/// Checks the side conditions of each frame, given the node it sits in.
fn frames_valid(path: &[(Frame, &Term)]) -> bool {
    let mut prev_crc = false;
    for (f, parent) in path {
        let ok = match (f, &***parent) {
            (Frame::OpR, TermS::Op(_, l, _)) => l.is_value(),
            (Frame::AppArg, TermS::App(g, _)) => g.is_value(),
            _ => true,
        };
        let is_crc = *f == Frame::CrcSubj;
        if !ok || (is_crc && prev_crc) {
            return false;
        }
        prev_crc = is_crc;
    }
    true
}

fn is_e_redex(m: &TermS) -> bool {
    match m {
        TermS::Op(_, l, r) => matches!((&**l, &**r), (TermS::Const(_), TermS::Const(_))),
        TermS::App(f, a) => {
            a.is_value()
                && match &**f {
                    TermS::Abs(..) | TermS::GlobalRef(_) => true,
                    TermS::CoercedVal(u, d) => u.is_uncoerced_value() && matches!(d, Coercion::Fun(..)),
                    _ => false,
                }
        }
        TermS::If(c, _, _) => matches!(&**c, TermS::Const(crate::ops::Lit::Bool(_))),
        _ => false,
    }
}

fn is_c_redex(m: &TermS) -> bool {
    match m {
        TermS::CrcApp(n, s) => match &**n {
            TermS::CrcApp(..) => true,
            TermS::CoercedVal(u, _) => u.is_uncoerced_value(),
            TermS::Const(_) | TermS::Abs(..) | TermS::GlobalRef(_) => !matches!(s, Coercion::ProjSeq(..)),
            _ => false,
        },
        _ => false,
    }
}

pub fn decompose(m: &Term) -> Result<Decomposition, DecomposeError> {
    let mut all = Vec::new();
    positions(m, &mut Vec::new(), &mut all);
    let mut found = Vec::new();
    for (path, sub) in all {
        if !frames_valid(&path) {
            continue;
        }
        let under_f = path.last().is_none_or(|(f, _)| *f != Frame::CrcSubj);
        let kind = if is_e_redex(sub) || (matches!(&**sub, TermS::Blame(_)) && !path.is_empty()) {
            Kind::E
        } else if is_c_redex(sub) && under_f {
            Kind::C
        } else {
            continue;
        };
        found.push((path.iter().map(|(f, _)| *f).collect::<Vec<_>>(), kind));
    }
    match found.len() {
        0 => match &**m {
            TermS::Blame(p) => Ok(Decomposition::Blame(p.clone())),
            t if t.is_value() => Ok(Decomposition::Value),
            _ => Err(DecomposeError::None),
        },
        1 => {
            let (path, kind) = found.pop().expect("one element");
            Ok(Decomposition::Redex { path, kind })
        }
        n => Err(DecomposeError::Multiple(n, found.into_iter().map(|(p, _)| p).collect())),
    }
}

//! Verdicts, space reports, and their JSON-line encoding.

use std::fmt;

use serde::Serialize;

use coercion_core::lam_s::{Outcome, Term, TermS};
use coercion_core::lam_sx::{TermX, Tx};
use coercion_core::translate::trans_coercion;

/// An evaluation result in a form comparable across the two calculi.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Observed {
    Value(String),
    Blame(String),
    Fuel,
}

impl fmt::Display for Observed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observed::Value(v) => f.write_str(v),
            Observed::Blame(p) => write!(f, "blame {p}"),
            Observed::Fuel => f.write_str("out of fuel"),
        }
    }
}

fn uncoerced_s(u: &TermS) -> String {
    match u {
        TermS::Const(l) => l.to_string(),
        _ => "<function>".into(),
    }
}

fn uncoerced_x(u: &Tx) -> String {
    match u {
        Tx::Const(l) => l.to_string(),
        _ => "<function>".into(),
    }
}

/// Constants print as themselves and functions as `<function>`; a delayed
/// coercion is shown in its λSx form so both sides render alike.
pub fn observe_s(o: &Outcome<Term>) -> Observed {
    match o {
        Outcome::Result(v) => Observed::Value(match &**v {
            TermS::CoercedVal(u, d) => format!("{}<<{}>>", uncoerced_s(u), trans_coercion(d).render(true)),
            u => uncoerced_s(u),
        }),
        Outcome::Blamed(p) => Observed::Blame(p.to_string()),
        Outcome::OutOfFuel => Observed::Fuel,
    }
}

pub fn observe_x(o: &Outcome<TermX>) -> Observed {
    match o {
        Outcome::Result(v) => Observed::Value(match &**v {
            Tx::CoercedVal(u, d) => format!("{}<<{}>>", uncoerced_x(u), d.render(true)),
            u => uncoerced_x(u),
        }),
        Outcome::Blamed(p) => Observed::Blame(p.to_string()),
        Outcome::OutOfFuel => Observed::Fuel,
    }
}

/// Witnesses are programs in λS surface syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Agree {
        outcome: Observed,
    },
    Disagree {
        left: Observed,
        right: Observed,
        witness: String,
    },
    InvariantViolation {
        name: String,
        witness: String,
        step: usize,
        detail: String,
    },
}

impl Verdict {
    pub fn is_failure(&self) -> bool {
        !matches!(self, Verdict::Agree { .. })
    }

    pub fn outcome(&self) -> Option<&Observed> {
        match self {
            Verdict::Agree { outcome } => Some(outcome),
            _ => None,
        }
    }

    pub fn violation(name: &str, witness: String, step: usize, detail: impl Into<String>) -> Verdict {
        Verdict::InvariantViolation { name: name.into(), witness, step, detail: detail.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Lams,
    Lamsx,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Lams => "lams",
            Dialect::Lamsx => "lamsx",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaceReport {
    pub dialect: Dialect,
    pub n: u64,
    pub steps: u64,
    pub max_coercion_size: usize,
    pub max_term_size: usize,
    pub max_metric_f: usize,
}

/// One line of a corpus report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub seed: u64,
    pub check: &'static str,
    #[serde(flatten)]
    pub verdict: Verdict,
}

pub fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report types serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_order_is_stable() {
        let r = Record { seed: 3, check: "differential", verdict: Verdict::Agree { outcome: Observed::Value("5".into()) } };
        assert_eq!(json_line(&r), r#"{"seed":3,"check":"differential","verdict":"agree","outcome":{"kind":"value","value":"5"}}"#);
        let s = SpaceReport { dialect: Dialect::Lams, n: 4, steps: 9, max_coercion_size: 2, max_term_size: 7, max_metric_f: 10 };
        assert_eq!(
            json_line(&s),
            r#"{"dialect":"lams","n":4,"steps":9,"maxCoercionSize":2,"maxTermSize":7,"maxMetricF":10}"#
        );
    }
}

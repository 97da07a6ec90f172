//! The mutually recursive even/odd benchmark, whose λS run keeps coercions
//! and terms bounded while its tail calls cross casts.

use coercion_core::lam_s::metrics as ms;
use coercion_core::lam_s::term as t;
use coercion_core::lam_s::{run, Kind, Outcome, Program};
use coercion_core::lam_sx::metrics as mx;
use coercion_core::lam_sx::run_x;
use coercion_core::translate::{translate_program, Options};
use coercion_surface::{parse_program_s, print_term_s, print_term_x};

use crate::report::{Dialect, SpaceReport};
use crate::sugar::sugar_x;

pub const EVEN_ODD: &str = "\
letrec even (x:Int) : Dyn =
  if x = 0 then true<Bool!> else (odd (x - 1))<Bool!>
and odd (x:Int) : Bool =
  if x = 0 then false else (even (x - 1))<Bool?^p>
in odd 4
";

/// The benchmark program with main term `odd n`.
pub fn even_odd(n: u64) -> Program {
    let p = parse_program_s(EVEN_ODD).expect("benchmark source parses");
    Program::new(p.defs, t::app(t::global("odd"), t::int(n as i64)))
}

/// Enough steps for `odd n` in either calculus.
pub fn fuel_for(n: u64) -> u64 {
    100 * n + 1000
}

/// Sizes of one evaluation state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSize {
    pub coercion: usize,
    pub term: usize,
    pub metric: usize,
}

/// Runs `odd n`, calling `on_state` for every state including the last.
pub fn space_run(dialect: Dialect, n: u64, mut on_state: impl FnMut(StateSize)) -> Result<SpaceReport, String> {
    let p = even_odd(n);
    let mut report =
        SpaceReport { dialect, n, steps: 0, max_coercion_size: 0, max_term_size: 0, max_metric_f: 0 };
    let mut record = |sz: StateSize, r: &mut SpaceReport| {
        r.max_coercion_size = r.max_coercion_size.max(sz.coercion);
        r.max_term_size = r.max_term_size.max(sz.term);
        r.max_metric_f = r.max_metric_f.max(sz.metric);
        on_state(sz);
    };
    let fuel = fuel_for(n);
    match dialect {
        Dialect::Lams => {
            let size = |m: &coercion_core::lam_s::TermS| StateSize {
                coercion: ms::max_coercion_size(m),
                term: ms::term_size(m),
                metric: ms::metric_f(m),
            };
            let out = run(&p, p.main(), fuel, |_, s| {
                report.steps += 1;
                record(size(&s.next), &mut report);
            })
            .map_err(|e| e.to_string())?;
            record(size(p.main()), &mut report);
            if matches!(out, Outcome::OutOfFuel) {
                return Err(format!("odd {n} ran out of fuel"));
            }
        }
        Dialect::Lamsx => {
            let px = translate_program(&p, Options::default()).map_err(|e| e.to_string())?;
            let size = |m: &coercion_core::lam_sx::Tx| StateSize {
                coercion: mx::max_coercion_size(m),
                term: mx::term_size(m),
                metric: mx::metric_fx(m),
            };
            let out = run_x(&px, px.main(), fuel, |_, s| {
                report.steps += 1;
                record(size(&s.next), &mut report);
            })
            .map_err(|e| e.to_string())?;
            record(size(px.main()), &mut report);
            if matches!(out, Outcome::OutOfFuel) {
                return Err(format!("odd {n} ran out of fuel"));
            }
        }
    }
    Ok(report)
}

/// One line of a benchmark trace; the first has no rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    /// Index of the step that produced this state; 0 for the initial state.
    pub step: u64,
    pub kind: Option<Kind>,
    pub rule: &'static str,
    pub term: String,
}

/// The trace of `odd n`. λSx states are shown through [`sugar_x`], and
/// steps that leave the sugared state unchanged are dropped.
pub fn even_odd_trace(dialect: Dialect, n: u64, max_steps: u64) -> Result<Vec<TraceEntry>, String> {
    let p = even_odd(n);
    let start = |term| TraceEntry { step: 0, kind: None, rule: "start", term };
    let mut out;
    let mut i = 0;
    match dialect {
        Dialect::Lams => {
            out = vec![start(print_term_s(p.main(), true))];
            run(&p, p.main(), max_steps, |_, s| {
                i += 1;
                out.push(TraceEntry { step: i, kind: Some(s.kind), rule: s.rule.name(), term: print_term_s(&s.next, true) });
            })
            .map_err(|e| e.to_string())?;
        }
        Dialect::Lamsx => {
            let px = translate_program(&p, Options::default()).map_err(|e| e.to_string())?;
            out = vec![start(print_term_x(&sugar_x(px.main()), true))];
            run_x(&px, px.main(), max_steps, |_, s| {
                i += 1;
                let term = print_term_x(&sugar_x(&s.next), true);
                if out.last().map(|e| &e.term) != Some(&term) {
                    out.push(TraceEntry { step: i, kind: Some(s.kind), rule: s.rule.name(), term });
                }
            })
            .map_err(|e| e.to_string())?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_do_not_grow_with_n() {
        for dialect in [Dialect::Lams, Dialect::Lamsx] {
            let small = space_run(dialect, 10, |_| {}).unwrap();
            let large = space_run(dialect, 1000, |_| {}).unwrap();
            assert_eq!(small.max_coercion_size, large.max_coercion_size, "{dialect}");
            assert_eq!(small.max_term_size, large.max_term_size, "{dialect}");
            assert!(large.steps > small.steps);
        }
    }

    #[test]
    fn traces_start_at_main() {
        let s = even_odd_trace(Dialect::Lams, 4, 3).unwrap();
        assert_eq!(s[0].term, "odd 4");
        let x = even_odd_trace(Dialect::Lamsx, 4, 3).unwrap();
        assert_eq!(x[0].term, "odd (4, id{Bool})");
    }
}

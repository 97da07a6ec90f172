//! Runs a program in λS and its translation in λSx and compares results.

use coercion_core::lam_s::{evaluate, typecheck_program, Program};
use coercion_core::lam_sx::evaluate_x;
use coercion_core::translate::{translate_program, Options};
use coercion_surface::print_program_s;

use crate::report::{observe_s, observe_x, Verdict};

/// Step budgets for the two sides; λSx takes extra administrative steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    pub lam_s: u64,
    pub lam_sx: u64,
}

impl Fuel {
    pub fn scaled(lam_s: u64) -> Fuel {
        Fuel { lam_s, lam_sx: lam_s.saturating_mul(10) }
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::scaled(100_000)
    }
}

pub fn witness(p: &Program) -> String {
    print_program_s(p, true)
}

/// Agreement means the same constant, the same blame label, or both runs
/// out of fuel.
pub fn differential(p: &Program, fuel: Fuel, opts: Options) -> Verdict {
    if let Err(e) = typecheck_program(p) {
        return Verdict::violation("typing", witness(p), 0, e.to_string());
    }
    let px = match translate_program(p, opts) {
        Ok(px) => px,
        Err(e) => return Verdict::violation("translation", witness(p), 0, e.to_string()),
    };
    let left = match evaluate(p, p.main(), fuel.lam_s) {
        Ok(o) => observe_s(&o),
        Err(e) => return Verdict::violation("progress", witness(p), 0, e.to_string()),
    };
    let right = match evaluate_x(&px, px.main(), fuel.lam_sx) {
        Ok(o) => observe_x(&o),
        Err(e) => return Verdict::violation("progress-x", witness(p), 0, e.to_string()),
    };
    if left == right {
        Verdict::Agree { outcome: left }
    } else {
        Verdict::Disagree { left, right, witness: witness(p) }
    }
}

/// Runs [`differential`] with the Tr-Op optimization off, then on, and
/// returns the first failure or the common agreement.
pub fn differential_both(p: &Program, fuel: Fuel) -> Verdict {
    let off = differential(p, fuel, Options { opt_trop: false });
    if off.is_failure() {
        return off;
    }
    let on = differential(p, fuel, Options { opt_trop: true });
    if on.is_failure() {
        return on;
    }
    off
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Observed;
    use coercion_surface::parse_program_s;

    #[test]
    fn example_program_agrees() {
        let p = parse_program_s(r"((\x:Dyn. (x<Int?^p> + 2)<Int!>)<Int! -> Int?^p> 3)<Int!>").unwrap();
        let v = differential(&p, Fuel::default(), Options::default());
        assert_eq!(v, Verdict::Agree { outcome: Observed::Value("5<<Int!>>".into()) });
    }

    #[test]
    fn unwrapped_example_yields_a_constant() {
        let p = parse_program_s(r"(((\x:Dyn. (x<Int?^p> + 2)<Int!>)<Int! -> Int?^p> 3)<Int!>)<Int?^q>").unwrap();
        let v = differential_both(&p, Fuel::default());
        assert_eq!(v, Verdict::Agree { outcome: Observed::Value("5".into()) });
    }

    #[test]
    fn omega_runs_out_of_fuel_on_both_sides() {
        let w = r"(\x:Dyn. (x<(Dyn -> Dyn)?^p>) x)";
        let p = parse_program_s(&format!("({w} ({w}<(Dyn -> Dyn)!>))<Int?^q>")).unwrap();
        let v = differential_both(&p, Fuel::scaled(1000));
        assert_eq!(v, Verdict::Agree { outcome: Observed::Fuel });
    }

    #[test]
    fn blame_agrees() {
        let p = parse_program_s("1<Int!><Bool?^q>").unwrap();
        let v = differential(&p, Fuel::default(), Options { opt_trop: true });
        assert_eq!(v, Verdict::Agree { outcome: Observed::Blame("q".into()) });
    }
}

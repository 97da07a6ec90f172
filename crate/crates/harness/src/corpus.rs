//! Seeded corpora, run in parallel with rayon or sequentially, with results
//! always in seed order.

use std::ops::Range;

use coercion_core::translate::Options;

use crate::differential::{differential_both, Fuel};
use crate::gen::{gen_well_typed, GenConfig};
use crate::invariants::check_invariants;
use crate::props::typed_translation;
use crate::report::{Observed, Record, Verdict};
use crate::simulation::simulation_check;

/// Applies `f` to every seed; the result vector is indexed by seed offset.
#[cfg(feature = "parallel")]
pub fn run_seeds<R: Send>(seeds: Range<u64>, f: impl Fn(u64) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    seeds.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn run_seeds<R: Send>(seeds: Range<u64>, f: impl Fn(u64) -> R + Sync + Send) -> Vec<R> {
    run_seeds_sequential(seeds, f)
}

pub fn run_seeds_sequential<R>(seeds: Range<u64>, f: impl Fn(u64) -> R) -> Vec<R> {
    seeds.map(f).collect()
}

/// The checks a corpus run can perform on each generated program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Differential,
    Simulation,
    Invariants,
    TypedTranslation,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Differential => "differential",
            Check::Simulation => "simulation",
            Check::Invariants => "invariants",
            Check::TypedTranslation => "typed-translation",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub depth: u32,
    pub fuel: Fuel,
    /// Step bound for the simulation and invariant checks.
    pub max_steps: usize,
    /// Translation options for every check except the differential one,
    /// which always runs with Tr-Op both off and on.
    pub opts: Options,
}

impl Default for CorpusConfig {
    fn default() -> CorpusConfig {
        CorpusConfig { depth: 8, fuel: Fuel::default(), max_steps: 5_000, opts: Options::default() }
    }
}

/// Generates the program for `seed` and runs one check on it.
pub fn check_seed(seed: u64, check: Check, cfg: &CorpusConfig) -> Record {
    let verdict = match gen_well_typed(&GenConfig::for_seed(seed, cfg.depth)) {
        Err(e) => Verdict::violation("generation", String::new(), 0, e.to_string()),
        Ok(p) => match check {
            Check::Differential => differential_both(&p, cfg.fuel),
            Check::Simulation => simulation_check(&p, cfg.max_steps, cfg.opts),
            Check::Invariants => check_invariants(&p, cfg.max_steps, cfg.opts).0,
            Check::TypedTranslation => match typed_translation(&p, cfg.opts) {
                Ok(()) => Verdict::Agree { outcome: Observed::Value("typed".into()) },
                Err(e) => Verdict::violation("typed-translation", crate::differential::witness(&p), 0, e),
            },
        },
    };
    Record { seed, check: check.name(), verdict }
}

pub fn run_corpus(seeds: Range<u64>, check: Check, cfg: &CorpusConfig) -> Vec<Record> {
    run_seeds(seeds, |seed| check_seed(seed, check, cfg))
}

/// Outcome counts over a list of records.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub values: usize,
    pub blame: usize,
    pub fuel: usize,
    pub disagree: usize,
    pub violations: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Summary {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in records {
            match &r.verdict {
                Verdict::Agree { outcome: Observed::Value(_) } => s.values += 1,
                Verdict::Agree { outcome: Observed::Blame(_) } => s.blame += 1,
                Verdict::Agree { outcome: Observed::Fuel } => s.fuel += 1,
                Verdict::Disagree { .. } => s.disagree += 1,
                Verdict::InvariantViolation { .. } => s.violations += 1,
            }
        }
        s
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} programs: {} values, {} blame, {} out of fuel, {} disagreements, {} violations",
            self.total, self.values, self.blame, self.fuel, self.disagree, self.violations
        )
    }
}

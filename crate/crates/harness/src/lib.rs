//! Generators and checkers relating the λS evaluator to the λSx evaluator
//! of translated programs.

pub mod corpus;
pub mod differential;
pub mod gen;
pub mod invariants;
pub mod props;
pub mod report;
pub mod simulation;
pub mod space;
pub mod sugar;

pub use corpus::{check_seed, run_corpus, run_seeds, run_seeds_sequential, Check, CorpusConfig, Summary};
pub use differential::{differential, Fuel};
pub use gen::{gen_well_typed, GenConfig, GenError, Generator};
pub use report::{json_line, Dialect, Observed, Record, SpaceReport, Verdict};
pub use simulation::simulation_check;
pub use space::{even_odd, even_odd_trace, space_run};

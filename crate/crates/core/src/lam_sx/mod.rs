//! The continuation-passing coercion calculus λSx.

pub mod metrics;
pub mod oracle;
pub mod step;
pub mod subst;
pub mod term;
pub mod typing;

pub use step::{evaluate_x, run_x, step_x, FrameX, RuleX, StepResultX, StepX, StuckX};
pub use term::{DefX, ProgramX, TermX, Tx};
pub use typing::{check_x, synth_x, typecheck_program_x, typecheck_x, EnvX, TypeErrorX};

//! The space-efficient coercion calculus λS.

pub mod metrics;
pub mod oracle;
pub mod step;
pub mod subst;
pub mod term;
pub mod typing;

pub use step::{evaluate, run, step, Frame, Kind, Outcome, Rule, Step, StepResult, Stuck};
pub use term::{Def, Program, Term, TermS};
pub use typing::{annotate, check, synth, typecheck, typecheck_program, ANode, ATerm, Env, TypeError};

//! Space-efficient coercions in two calculi and the translation between them.

pub mod alpha;
pub mod coercion;
pub mod lam_s;
pub mod lam_sx;
pub mod name;
pub mod ops;
pub mod translate;
pub mod types;

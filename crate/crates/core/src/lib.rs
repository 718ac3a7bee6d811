//! Goal-oriented conjecturing for proofs by induction over a small typed
//! functional language.

pub mod conjecture;
pub mod corpus;
pub mod rewrite;
pub mod strategy;
pub mod tactics;
pub mod term;
pub mod theory;

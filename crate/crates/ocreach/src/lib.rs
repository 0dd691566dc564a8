//! Reachability of parametric semilinear targets in one-counter automata with binary weights.

pub mod acyclic;
pub mod arith;
pub mod automaton;
pub mod bench;
pub mod cover;
pub mod decide;
pub mod error;
pub mod gen;
pub mod hardness;
pub mod laurent;
pub mod targets;

pub use error::{Error, Result};

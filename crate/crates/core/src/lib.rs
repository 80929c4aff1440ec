//! Exact computations with finite-dimensional dg algebras, twisted complexes,
//! weight truncations and t-structures.

pub mod corpus;
pub mod dg;
pub mod error;
#[cfg(test)]
mod oracle;
pub mod sample;
pub mod scalars;
pub mod twisted;
pub mod tower;
pub mod tstruct;
pub mod weight;

pub use error::{Error, Result};

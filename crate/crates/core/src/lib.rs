//! Environment-assisted quantum capacities of bipartite unitaries.
//!
//! A gate V: A⊗E → B⊗F together with a fixed environment input η induces a channel from A to
//! B. This crate builds those channels, classifies them as degradable or anti-degradable,
//! optimizes coherent information over inputs and environments, and evaluates the two-copy
//! and entangled-helper constructions in which two such channels activate each other.

pub mod canonical;
pub mod capacity;
pub mod channels;
pub mod degradability;
pub mod error;
pub mod linalg;
pub mod optimize;

pub use error::{Error, Result};

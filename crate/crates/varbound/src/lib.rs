//! Strengthened forward and reverse variance-sum uncertainty bounds for
//! finite-dimensional Hermitian observables and pure states.
//!
//! The crate is layered bottom-up:
//! - [`hilbert`]: states, observables, and moment computations;
//! - [`geometry`]: the normed-space sandwich inequalities on raw vectors;
//! - [`bounds`]: the four two-observable bound families, their combination,
//!   and the classic baseline bounds;
//! - [`multi`]: the n-observable generalization and coefficient search;
//! - [`systems`]: the three worked example systems with closed-form oracles;
//! - [`harness`]: randomized verification over all of the above.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod hilbert;
pub mod multi;
pub mod systems;

pub use error::{Error, Result};

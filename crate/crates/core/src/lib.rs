//! Numerical-radius estimation and refined power-mean bounds for operator tuples.

// `!(x >= 0.0)` style checks reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod radius;
pub mod rng;
pub mod scalar;
pub mod tolerance;

pub use error::{RadError, Result};

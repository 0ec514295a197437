//! Simulation and numerical verification of heavy-tailed compound Poisson
//! scaling limits and the fractional operators that generate them.

pub mod convergence;
pub mod error;
pub mod io;
pub mod numerics;
pub mod operators;
pub mod sampling;
pub mod symbols;

pub use error::{Error, Result};

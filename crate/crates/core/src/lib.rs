//! Bounds, exact oracles and Monte Carlo estimates for the maximum-likelihood
//! decoding failure probability of Raptor codes over finite fields.

pub mod bounds;
pub mod enumerators;
pub mod errexp;
pub mod error;
pub mod galois;
pub mod montecarlo;
pub mod outercodes;
pub mod raptor;

pub use error::{Error, Result};

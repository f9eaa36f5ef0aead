//! Minimum-error discrimination of pure-state ensembles and entropic lower
//! bounds on the error probability.

pub mod bounds;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod infotheory;
pub mod measurement;
pub mod montecarlo;
pub mod numerics;
pub mod poisson;

pub use error::{Error, Result};

//! Gamma regression that tolerates gross outliers.
//!
//! The model keeps the usual gamma GLM likelihood in the bulk of the data but
//! swaps the tails of the response density for log-Pareto branches, so a few
//! wild observations cannot drag the fit. The crate provides the density
//! itself, maximum likelihood and Bayesian (HMC) estimation, a Cantoni-style
//! M-estimator for comparison, and a premium-versus-protection simulation
//! harness.

pub mod bayes;
pub mod data;
pub mod density;
mod error;
pub mod estimation;
pub mod optim;
pub mod rng;
pub mod simstudy;
pub mod special;

pub use error::{Error, Result};

//! Privacy-aware sequential learning: binary-signal information cascades
//! under randomized response, Gaussian-signal learning under smooth and
//! staircase randomized response, empirical privacy certification, and
//! seeded Monte Carlo ensembles.

pub mod binary;
pub mod continuous;
pub mod core;
pub mod montecarlo;
pub mod numerics;
pub mod verify;

pub use crate::core::{
    BinaryParams, BudgetSpec, GaussianParams, ParamError, Probability, PublicBelief, WorldState,
};

//! Security-latency analysis for short-packet transmissions.
//!
//! The crate evaluates, optimizes, and simulates the behavior of a
//! retransmit-until-secure link in the finite-blocklength regime:
//!
//! * [`metrics`] — single-attempt probabilities: normal-approximation
//!   decoding error, the KL-divergence detection bound at an eavesdropper,
//!   and the effective secure probability (ESP) combining them;
//! * [`latency`] — closed-form renewal analysis of the average secure
//!   latency and its sensitivity to the ESP;
//! * [`derivatives`] — analytic derivatives of the probabilities in
//!   blocklength and SNR;
//! * [`optimize`] — optimal blocklength at fixed SNR, optimal SNR at fixed
//!   blocklength (each with a closed-form and an implicit-stationary
//!   branch), and their joint alternation;
//! * [`sim`] — a seeded, deterministic slot-level Monte Carlo that
//!   validates the closed forms.
//!
//! All functions are pure; concurrent use needs no synchronization.

mod error;

pub mod derivatives;
pub mod latency;
pub mod metrics;
pub mod optimize;
pub mod sim;
pub mod special;

pub use error::{Error, Result};
pub use latency::RenewalStats;
pub use metrics::{LinkParams, SecurityProbabilities};
pub use optimize::{Branch, OptVariable, OptimizationResult, SolverConfig, TrafficParams};
pub use sim::{SimulationConfig, SimulationReport};

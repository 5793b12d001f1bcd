//! Computational laboratory for a two-player game of strategic
//! experimentation with exponential bandits in discrete time, where players
//! alternate moves, see each other's arm choices, but never see payoffs.
//!
//! The crate provides, for this game:
//! - exact Bayesian belief updating over public histories, in two belief
//!   conventions (`beliefs`),
//! - closed-form cutoffs and experiment counts (`cutoffs`),
//! - a catalog of named strategy profiles (`profiles`),
//! - an exact expected-payoff evaluator plus closed-form payoff formulas
//!   (`payoffs`), and the public-outcome benchmark game (`public`),
//! - equilibrium verification by one-shot deviation checking (`verify`),
//! - Monte Carlo simulation with deterministic seeding (`simulate`).
//!
//! Everything numeric is f64; tolerances are centralized in `tol`.

pub mod belief;
pub mod cutoffs;
pub mod history;
pub mod par;
pub mod params;
pub mod payoffs;
pub mod profiles;
pub mod public;
pub mod tol;
pub mod beliefs;
pub mod simulate;
pub mod verify;

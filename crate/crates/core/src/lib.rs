//! Exact solver and reproducible Monte Carlo simulator for finite
//! absorbing Markov chains.
//!
//! A chain is described as a probability-labeled digraph over named
//! states ([`chain::ChainSpec`]), validated into a canonical
//! transient/absorbing partition ([`chain::CanonicalChain`]), and then
//! analyzed three independent ways:
//!
//! * [`solve`] — exact absorption probabilities, expected costs and
//!   visit counts via Gaussian elimination over arbitrary-precision
//!   rationals; no rounding anywhere.
//! * [`series`] — direct summation of the underlying probability series
//!   as a floating-point cross-check.
//! * [`sim`] — a seeded Monte Carlo engine whose step sampling is exact
//!   (integer threshold comparisons, no floating-point cumulative sums)
//!   and whose results are a pure function of the master seed.
//!
//! [`models`] builds the standard walks (two-ended ruin walk, birth-death
//! process, reflecting walk, uniform graph walks) and [`chainfile`]
//! parses and prints the `.chain` text format.

pub mod chain;
pub mod chainfile;
pub mod linalg;
pub mod models;
pub mod rational;
pub mod series;
pub mod sim;
pub mod solve;

pub use chain::{lazy_transform, validate, CanonicalChain, ChainError, ChainSpec, Edge, StateDecl};
pub use rational::Rational;
pub use solve::{
    absorption_distribution, absorption_probabilities, expected_cost, expected_steps,
    expected_visits, solve_report, survival_after_n, SolveReport,
};

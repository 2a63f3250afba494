//! Tabular solvers for two-player zero-sum extensive-form games.
//!
//! The crate provides:
//!
//! - [`game`]: the extensive-form game interface plus exact Kuhn and Leduc
//!   poker implementations,
//! - [`tables`]: per-information-set state (cumulative regrets, average
//!   strategy, learned baselines) and regret matching / regret matching+,
//! - [`cfr`]: full-tree CFR and CFR+ iterations and the exact
//!   counterfactual-value oracle,
//! - [`mccfr`]: outcome-sampling MCCFR and its variance-reduced variants
//!   built on control-variate baselines with bootstrapped value estimates,
//! - [`eval`]: exact best response, exploitability, and an empirical
//!   variance probe for the sampled estimators,
//! - [`run`]: a seeded, deterministic experiment driver producing
//!   convergence and variance series.
//!
//! All solvers are single-threaded per run; parallelism, when wanted, is
//! across independent runs with distinct seeds.

pub mod cfr;
pub mod error;
pub mod eval;
pub mod game;
pub mod mccfr;
pub mod rng;
pub mod run;
pub mod strategy;
pub mod tables;

pub use error::SolverError;
pub use game::{Action, Game, History, InfoStateKey, PlayerId, Utility};

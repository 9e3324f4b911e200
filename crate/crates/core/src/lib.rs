//! Equilibrium solver and policy lab for a two-period game between human
//! creators, AI-assisted creators and a competitive AI firm, governed by a
//! training-data fee `f` and the copyrightability `phi` of AI output.
//!
//! Bottom-up: [`params`] and [`training`] hold primitives, [`creator`] the
//! skill thresholds, [`metrics`] per-period aggregates, [`firm`] the
//! Period-2 quality/price choice, [`period1`] the Period-1 policy with
//! rational expectations about data sales, [`equilibrium`] the full
//! two-period solve and [`policy`] sweeps and optimal levers. [`oracle`] is
//! a brute-force discretized reimplementation used to check all of it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod creator;
pub mod equilibrium;
pub mod error;
pub mod firm;
pub mod metrics;
pub mod oracle;
pub mod params;
pub mod period1;
pub mod policy;
pub mod roots;
pub mod training;

pub use creator::{Choice, Compensation, Thresholds};
pub use equilibrium::{solve, EquilibriumReport};
pub use error::ModelError;
pub use firm::{Binding, FirmDecision};
pub use metrics::PeriodOutcome;
pub use params::{CaseTag, DataStock, ModelParams, Regime, Validated};
pub use period1::{Period1Solution, Scenario};

//! Pricing of European options under counterparty, funding, collateral and
//! capital value adjustments.
//!
//! The risky value solves a (semi)linear Black–Scholes type equation, which
//! is discretized with local discontinuous Galerkin elements in the spot
//! and IMEX Runge–Kutta schemes in time. A stratified regression Monte Carlo
//! solver of the equivalent forward-backward SDE and a quadrature
//! decomposition of the linear adjustment serve as independent checks.

pub mod analytic;
pub mod capital;
pub mod config;
pub mod drivers;
pub mod error;
pub mod fbsde;
pub mod harness;
pub mod imex;
pub mod ldg;
pub mod quadrature;
pub mod solver;

pub use config::{CapitalParams, MarketParams, MtmConvention, OptionKind, OptionSpec, RunConfig};
pub use error::{Error, Result};

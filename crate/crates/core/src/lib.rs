//! Volatility modeling and forecasting for daily exchange-rate returns.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimator;
pub mod evaluation;
pub mod ewma;
pub mod exec;
pub mod forecast;
pub mod garch;
pub mod ivmodel;
pub mod marketdata;
pub mod optim;
pub mod pipeline;
pub mod selection;
pub mod simulate;
pub mod synthetic;
mod stats;

pub use error::{Error, Result};

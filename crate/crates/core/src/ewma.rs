//! Exponentially weighted moving-average variance.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marketdata::ReturnSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialVariance {
    FirstSquared,
    /// Mean of the first `k` squared returns (fewer if the series is shorter).
    MeanOfFirst(usize),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EwmaConfig {
    pub lambda: f64,
    pub initial_variance: InitialVariance,
}

impl Default for EwmaConfig {
    fn default() -> Self {
        Self {
            lambda: 0.97,
            initial_variance: InitialVariance::MeanOfFirst(20),
        }
    }
}

impl EwmaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::Config(format!(
                "ewma lambda must lie in (0, 1), got {}",
                self.lambda
            )));
        }
        if let InitialVariance::Fixed(v) = self.initial_variance {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config("fixed initial variance must be >= 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EwmaState {
    pub variance: f64,
    pub last_date: Option<NaiveDate>,
}

/// Runs the recursion over `returns`.
///
/// The output has `returns.len() + 1` entries: element 0 is the seed
/// variance and element `t + 1` is the variance forecast formed after
/// observing return `t`.
pub fn ewma_filter(returns: &ReturnSeries, config: &EwmaConfig) -> Result<Vec<f64>> {
    ewma_filter_values(returns.values(), config)
}

pub fn ewma_filter_values(returns: &[f64], config: &EwmaConfig) -> Result<Vec<f64>> {
    config.validate()?;
    if returns.len() < 2 {
        return Err(Error::EmptySeries);
    }
    let seed = match config.initial_variance {
        InitialVariance::FirstSquared => returns[0] * returns[0],
        InitialVariance::MeanOfFirst(k) => {
            let k = k.clamp(1, returns.len());
            returns[..k].iter().map(|r| r * r).sum::<f64>() / k as f64
        }
        InitialVariance::Fixed(v) => v,
    };
    let lambda = config.lambda;
    let mut out = Vec::with_capacity(returns.len() + 1);
    out.push(seed);
    let mut var = seed;
    for r in returns {
        var = ewma_step(lambda, var, *r);
        out.push(var);
    }
    Ok(out)
}

#[inline]
pub fn ewma_step(lambda: f64, prev_variance: f64, prev_return: f64) -> f64 {
    lambda * prev_variance + (1.0 - lambda) * prev_return * prev_return
}

/// State after consuming the whole series.
pub fn ewma_state(returns: &ReturnSeries, config: &EwmaConfig) -> Result<EwmaState> {
    let path = ewma_filter(returns, config)?;
    Ok(EwmaState {
        variance: *path.last().expect("non-empty"),
        last_date: returns.dates().last().copied(),
    })
}

/// Flat forecast: the horizon volatility is the current daily volatility.
pub fn ewma_forecast(state: &EwmaState, horizon: usize) -> f64 {
    debug_assert!(horizon >= 1);
    state.variance.max(0.0).sqrt()
}

//! European call pricing and implied-volatility inversion.

use roots::{find_root_brent, SimpleConvergency};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const SIGMA_LOWER: f64 = 1e-6;
pub const SIGMA_UPPER: f64 = 5.0;
/// Largest accepted |model price − observed price| after inversion.
pub const PRICE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsInputs {
    pub spot: f64,
    pub strike: f64,
    /// Continuously compounded annual rate, decimal.
    pub rate: f64,
    /// Years.
    pub maturity: f64,
    /// Annualized volatility, decimal.
    pub sigma: f64,
}

impl BsInputs {
    pub fn validate(&self) -> Result<()> {
        let ok = self.spot > 0.0
            && self.strike > 0.0
            && self.maturity > 0.0
            && self.sigma > 0.0
            && self.rate.is_finite()
            && self.spot.is_finite()
            && self.strike.is_finite()
            && self.maturity.is_finite()
            && self.sigma.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInputs(format!(
                "need S, K, t, sigma > 0 and finite r, got {self:?}"
            )))
        }
    }

    pub fn with_sigma(self, sigma: f64) -> Self {
        Self { sigma, ..self }
    }

    /// Discounted strike K·e^(−rt).
    pub fn discounted_strike(&self) -> f64 {
        self.strike * (-self.rate * self.maturity).exp()
    }

    /// No-arbitrage band (max(S − K·e^(−rt), 0), S) for a call.
    pub fn price_band(&self) -> (f64, f64) {
        ((self.spot - self.discounted_strike()).max(0.0), self.spot)
    }
}

pub fn norm_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// (d₁, d₂).
pub fn d1_d2(inputs: &BsInputs) -> (f64, f64) {
    let vol_t = inputs.sigma * inputs.maturity.sqrt();
    let d1 = ((inputs.spot / inputs.strike).ln() + (inputs.rate + 0.5 * inputs.sigma * inputs.sigma) * inputs.maturity)
        / vol_t;
    (d1, d1 - vol_t)
}

pub fn bs_call_price(inputs: &BsInputs) -> Result<f64> {
    inputs.validate()?;
    let (d1, d2) = d1_d2(inputs);
    Ok(norm_cdf(d1) * inputs.spot - norm_cdf(d2) * inputs.discounted_strike())
}

/// ∂C/∂σ = S·φ(d₁)·√t.
pub fn bs_vega(inputs: &BsInputs) -> Result<f64> {
    inputs.validate()?;
    let (d1, _) = d1_d2(inputs);
    let pdf = (-0.5 * d1 * d1).exp() / (2.0 * std::f64::consts::PI).sqrt();
    Ok(inputs.spot * pdf * inputs.maturity.sqrt())
}

/// Volatility reproducing an observed call price. `inputs.sigma` is ignored.
pub fn implied_vol(price: f64, inputs: &BsInputs) -> Result<f64> {
    inputs.with_sigma(1.0).validate()?;
    let (lower, upper) = inputs.price_band();
    if !(price > lower && price < upper) {
        return Err(Error::PriceOutOfBand { price, lower, upper });
    }
    let objective = |s: f64| bs_call_price(&inputs.with_sigma(s)).map_or(f64::NAN, |c| c / price - 1.0);
    let mut conv = SimpleConvergency {
        eps: 1e-15,
        max_iter: 200,
    };
    let sigma = find_root_brent(SIGMA_LOWER, SIGMA_UPPER, objective, &mut conv).map_err(|_| Error::NoConvergence)?;
    if (objective(sigma) * price).abs() > PRICE_TOLERANCE {
        return Err(Error::NoConvergence);
    }
    Ok(sigma)
}

/// σ_annual·√(horizon_days / trading_days).
pub fn scale_annual_to_horizon(implied_annual: f64, horizon_days: usize, trading_days: usize) -> f64 {
    implied_annual * (horizon_days as f64 / trading_days as f64).sqrt()
}

use crate::error::{Error, Result};
use crate::marketdata::ReturnSeries;
use crate::stats;

use super::{expected_abs_innovation, Family, GarchParams, GarchSpec};

/// Conditional variances are never allowed below this value (squared percent).
pub(crate) const VARIANCE_FLOOR: f64 = 1e-12;

/// Residuals, conditional variances and standardized residuals, all aligned
/// with the input returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Innovations {
    pub residuals: Vec<f64>,
    pub variances: Vec<f64>,
    pub standardized: Vec<f64>,
    /// Number of times a variance hit the floor.
    pub clamp_events: usize,
}

impl Innovations {
    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// One family's variance equation, written in terms of its natural state:
/// σ² for GARCH/GJR, ln σ² for EGARCH and σ for TGARCH.
pub(crate) struct Recursion<'a> {
    family: Family,
    params: &'a GarchParams,
    e_abs: f64,
}

impl<'a> Recursion<'a> {
    pub(crate) fn new(spec: &GarchSpec, params: &'a GarchParams) -> Self {
        let e_abs = if spec.family == Family::Egarch {
            expected_abs_innovation(spec.distribution, params.nu).unwrap_or(f64::NAN)
        } else {
            0.0
        };
        Self {
            family: spec.family,
            params,
            e_abs,
        }
    }

    /// Next state from lagged values; `eps(i)`, `var(i)` and `state(i)` give
    /// ε, σ² and the state at lag `i >= 1`.
    #[inline]
    pub(crate) fn next_state(
        &self,
        eps: impl Fn(usize) -> f64,
        var: impl Fn(usize) -> f64,
        state: impl Fn(usize) -> f64,
    ) -> f64 {
        let p = self.params;
        let mut h = p.omega;
        match self.family {
            Family::Garch | Family::Gjr => {
                for (i, a) in p.alpha.iter().enumerate() {
                    let e = eps(i + 1);
                    let mut coef = *a;
                    if let Some(g) = p.gamma.get(i) {
                        if e < 0.0 {
                            coef += g;
                        }
                    }
                    h += coef * e * e;
                }
            }
            Family::Egarch => {
                for (i, a) in p.alpha.iter().enumerate() {
                    let z = eps(i + 1) / var(i + 1).sqrt();
                    h += a * (z.abs() - self.e_abs);
                }
                for (i, g) in p.gamma.iter().enumerate() {
                    h += g * eps(i + 1) / var(i + 1).sqrt();
                }
            }
            Family::Tgarch => {
                for (i, a) in p.alpha.iter().enumerate() {
                    let e = eps(i + 1);
                    let g = p.gamma.get(i).copied().unwrap_or(0.0);
                    let pos = e.max(0.0);
                    let neg = e.min(0.0);
                    h += a * ((1.0 - g) * pos - (1.0 + g) * neg);
                }
            }
        }
        for (j, b) in p.beta.iter().enumerate() {
            h += b * state(j + 1);
        }
        h
    }

    #[inline]
    pub(crate) fn variance(&self, state: f64) -> f64 {
        match self.family {
            Family::Garch | Family::Gjr => state,
            Family::Egarch => state.exp(),
            Family::Tgarch => state * state,
        }
    }

    #[inline]
    pub(crate) fn state_of_variance(&self, var: f64) -> f64 {
        match self.family {
            Family::Garch | Family::Gjr => var,
            Family::Egarch => var.ln(),
            Family::Tgarch => var.sqrt(),
        }
    }

    /// Applies the variance floor; returns the (possibly replaced) state and
    /// whether the floor was hit.
    #[inline]
    pub(crate) fn clamp(&self, state: f64) -> (f64, bool) {
        let low = match self.family {
            Family::Garch | Family::Gjr => state < VARIANCE_FLOOR,
            Family::Egarch => state < VARIANCE_FLOOR.ln(),
            Family::Tgarch => state < VARIANCE_FLOOR.sqrt(),
        };
        if low {
            (self.state_of_variance(VARIANCE_FLOOR), true)
        } else {
            (state, false)
        }
    }
}

pub fn variance_filter(
    spec: &GarchSpec,
    params: &GarchParams,
    returns: &ReturnSeries,
) -> Result<Innovations> {
    variance_filter_values(spec, params, returns.values())
}

pub fn variance_filter_values(
    spec: &GarchSpec,
    params: &GarchParams,
    returns: &[f64],
) -> Result<Innovations> {
    params.validate(spec)?;
    let needed = spec.max_lag();
    if returns.len() <= needed {
        return Err(Error::SeriesTooShort {
            needed,
            got: returns.len(),
        });
    }
    Ok(filter_unchecked(spec, params, returns))
}

/// Runs the recursion without validating parameters. Pre-sample residuals
/// are zero and pre-sample variances equal the sample variance of the
/// residuals.
pub(crate) fn filter_unchecked(spec: &GarchSpec, params: &GarchParams, returns: &[f64]) -> Innovations {
    let rec = Recursion::new(spec, params);
    let n = returns.len();
    let residuals: Vec<f64> = returns.iter().map(|r| r - params.mu).collect();
    let seed_var = presample_variance(&residuals);
    let seed_state = rec.state_of_variance(seed_var);

    let mut variances = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    let mut clamp_events = 0;
    for t in 0..n {
        let eps = |i: usize| if i <= t { residuals[t - i] } else { 0.0 };
        let var = |i: usize| if i <= t { variances[t - i] } else { seed_var };
        let state = |i: usize| if i <= t { states[t - i] } else { seed_state };
        let raw = rec.next_state(eps, var, state);
        let (h, clamped) = rec.clamp(raw);
        clamp_events += usize::from(clamped);
        variances.push(rec.variance(h));
        states.push(h);
    }
    let standardized = residuals
        .iter()
        .zip(&variances)
        .map(|(e, v)| e / v.sqrt())
        .collect();
    Innovations {
        residuals,
        variances,
        standardized,
        clamp_events,
    }
}

pub(crate) fn presample_variance(residuals: &[f64]) -> f64 {
    let v = stats::sample_var(residuals);
    if v.is_finite() {
        v.max(VARIANCE_FLOOR)
    } else {
        VARIANCE_FLOOR
    }
}

/// σ²ₜ from explicit lags: `eps_lags[0]` is εₜ₋₁, `var_lags[0]` is σ²ₜ₋₁.
pub fn one_step_variance(
    spec: &GarchSpec,
    params: &GarchParams,
    eps_lags: &[f64],
    var_lags: &[f64],
) -> Result<f64> {
    params.validate(spec)?;
    if eps_lags.len() < spec.p || var_lags.len() < spec.max_lag() {
        return Err(Error::InvalidState(format!(
            "{spec} needs {} residual and {} variance lags",
            spec.p,
            spec.max_lag()
        )));
    }
    let rec = Recursion::new(spec, params);
    let raw = rec.next_state(
        |i| eps_lags[i - 1],
        |i| var_lags[i - 1],
        |i| rec.state_of_variance(var_lags[i - 1]),
    );
    Ok(rec.variance(rec.clamp(raw).0))
}

//! Multi-step variance forecasts and out-of-sample backtests.
//!
//! A forecast origin `t` is an index into the full return series. The model
//! sees returns up to and including `t`; its forecast is compared with the
//! sample standard deviation of returns `t+1 ..= t+horizon`.

use std::fmt;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{fit_values, OptimizerConfig};
use crate::ewma::{ewma_filter, EwmaConfig};
use crate::exec::{self, Execution};
use crate::garch::{variance_filter_values, Family, GarchParams, GarchSpec, Innovations, Recursion};
use crate::marketdata::{realized_vol, ReturnSeries, SampleSplit};
use crate::simulate::InnovationSampler;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForecastMode {
    Rolling,
    Expanding,
}

impl ForecastMode {
    pub fn label(self) -> &'static str {
        match self {
            ForecastMode::Rolling => "rolling",
            ForecastMode::Expanding => "expanding",
        }
    }
}

impl fmt::Display for ForecastMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForecastMethod {
    pub mode: ForecastMode,
    /// Estimation window length, used only in rolling mode.
    pub window: usize,
    pub horizon: usize,
    pub refit_every: usize,
    /// Also start each fit from the previous origin's optimum. Forces sequential
    /// processing of origins.
    pub warm_start: bool,
}

impl ForecastMethod {
    pub fn rolling(window: usize, horizon: usize) -> Self {
        Self {
            mode: ForecastMode::Rolling,
            window,
            horizon,
            refit_every: 1,
            warm_start: true,
        }
    }

    pub fn expanding(horizon: usize) -> Self {
        Self {
            mode: ForecastMode::Expanding,
            window: 0,
            horizon,
            refit_every: 1,
            warm_start: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == ForecastMode::Rolling && self.window < 50 {
            return Err(Error::Config(format!(
                "rolling window must be at least 50, got {}",
                self.window
            )));
        }
        if self.horizon == 0 || self.refit_every == 0 {
            return Err(Error::Config("horizon and refit_every must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MonteCarloConfig {
    pub paths: usize,
    pub seed: u64,
    pub antithetic: bool,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            paths: 1000,
            seed: 0,
            antithetic: true,
            execution: Execution::Sequential,
        }
    }
}

/// An origin for which no forecast was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedOrigin {
    pub date: NaiveDate,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastSeries {
    pub dates: Vec<NaiveDate>,
    pub predicted: Vec<f64>,
    pub realized: Vec<f64>,
    pub model_label: String,
    pub method_label: String,
    pub skipped: Vec<SkippedOrigin>,
}

impl ForecastSeries {
    pub fn new(model_label: impl Into<String>, method_label: impl Into<String>) -> Self {
        Self {
            dates: Vec::new(),
            predicted: Vec::new(),
            realized: Vec::new(),
            model_label: model_label.into(),
            method_label: method_label.into(),
            skipped: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.predicted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicted.is_empty()
    }

    pub fn push(&mut self, date: NaiveDate, predicted: f64, realized: f64) {
        self.dates.push(date);
        self.predicted.push(predicted);
        self.realized.push(realized);
    }

    /// Number of origins attempted (produced plus skipped).
    pub fn n_origins(&self) -> usize {
        self.len() + self.skipped.len()
    }

    /// CSV with header `origin_date,model_label,predicted,realized`.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["origin_date", "model_label", "predicted", "realized"])?;
        for i in 0..self.len() {
            wtr.write_record([
                self.dates[i].to_string(),
                self.model_label.clone(),
                self.predicted[i].to_string(),
                self.realized[i].to_string(),
            ])?;
        }
        wtr.flush()
    }

    pub fn read_csv(path: &Path, method_label: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::FileUnreadable {
                path: path.to_path_buf(),
                source,
            },
            other => Error::MalformedRow {
                line: 0,
                reason: format!("{other:?}"),
            },
        })?;
        let mut out = ForecastSeries::new(String::new(), method_label);
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::MalformedRow {
                line: e.position().map_or(0, |p| p.line() as usize),
                reason: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let bad = |what: &str| Error::MalformedRow {
                line,
                reason: format!("bad {what}"),
            };
            let date = NaiveDate::parse_from_str(rec.get(0).unwrap_or(""), "%Y-%m-%d")
                .map_err(|_| bad("origin_date"))?;
            out.model_label = rec.get(1).ok_or_else(|| bad("model_label"))?.to_string();
            let pred: f64 = rec.get(2).and_then(|s| s.parse().ok()).ok_or_else(|| bad("predicted"))?;
            let real: f64 = rec.get(3).and_then(|s| s.parse().ok()).ok_or_else(|| bad("realized"))?;
            out.push(date, pred, real);
        }
        Ok(out)
    }
}

/// Trailing residuals and variances, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastState {
    pub residuals: Vec<f64>,
    pub variances: Vec<f64>,
}

impl ForecastState {
    pub fn from_innovations(inn: &Innovations, lags: usize) -> Self {
        let n = inn.len();
        let start = n.saturating_sub(lags.max(1));
        Self {
            residuals: inn.residuals[start..].to_vec(),
            variances: inn.variances[start..].to_vec(),
        }
    }

    /// Lag `i >= 1` counted back from the last element.
    fn eps(&self, i: usize) -> f64 {
        self.residuals[self.residuals.len() - i]
    }

    fn var(&self, i: usize) -> f64 {
        self.variances[self.variances.len() - i]
    }
}

/// E[σ²ₜ₊ₕ] for h = 1..=horizon.
///
/// GARCH and GJR are iterated analytically; EGARCH and TGARCH are averaged
/// over seeded Monte Carlo paths.
pub fn variance_path_forecast(
    spec: &GarchSpec,
    params: &GarchParams,
    state: &ForecastState,
    horizon: usize,
    mc: &MonteCarloConfig,
) -> Result<Vec<f64>> {
    params.validate(spec)?;
    let lags = spec.max_lag();
    if state.residuals.len() < lags || state.variances.len() < lags || state.variances.is_empty() {
        return Err(Error::InvalidState(format!(
            "{spec} needs {lags} trailing residuals and variances"
        )));
    }
    match spec.family {
        Family::Garch | Family::Gjr => Ok(analytic_path(params, state, horizon)),
        Family::Egarch | Family::Tgarch => monte_carlo_path(spec, params, state, horizon, mc),
    }
}

fn analytic_path(params: &GarchParams, state: &ForecastState, horizon: usize) -> Vec<f64> {
    let mut path: Vec<f64> = Vec::with_capacity(horizon);
    for h in 1..=horizon {
        let mut v = params.omega;
        for (i, a) in params.alpha.iter().enumerate() {
            let lag = i + 1;
            let g = params.gamma.get(i).copied().unwrap_or(0.0);
            if lag >= h {
                let e = state.eps(lag - h + 1);
                let coef = if e < 0.0 { a + g } else { *a };
                v += coef * e * e;
            } else {
                v += (a + 0.5 * g) * path[h - lag - 1];
            }
        }
        for (j, b) in params.beta.iter().enumerate() {
            let lag = j + 1;
            let past = if lag >= h {
                state.var(lag - h + 1)
            } else {
                path[h - lag - 1]
            };
            v += b * past;
        }
        path.push(v);
    }
    path
}

fn monte_carlo_path(
    spec: &GarchSpec,
    params: &GarchParams,
    state: &ForecastState,
    horizon: usize,
    mc: &MonteCarloConfig,
) -> Result<Vec<f64>> {
    if mc.paths == 0 {
        return Err(Error::Config("Monte Carlo needs at least one path".into()));
    }
    let sampler = InnovationSampler::new(spec.distribution, params.nu)?;
    let rec = Recursion::new(spec, params);
    let groups = if mc.antithetic { mc.paths.div_ceil(2) } else { mc.paths };
    let per_group = exec::map_range(mc.execution, groups, |g| {
        let mut rng = ChaCha8Rng::seed_from_u64(mc.seed.wrapping_add((g as u64).wrapping_mul(0xA076_1D64_78BD_642F)));
        let draws: Vec<f64> = (0..horizon).map(|_| sampler.sample(&mut rng)).collect();
        let signs: &[f64] = if mc.antithetic { &[1.0, -1.0] } else { &[1.0] };
        signs
            .iter()
            .enumerate()
            .filter(|(k, _)| !mc.antithetic || g * 2 + k < mc.paths)
            .map(|(_, sign)| simulate_forward(&rec, state, &draws, *sign))
            .collect::<Vec<_>>()
    });
    // Mean taken as deviations from the first path.
    let reference = per_group[0][0].clone();
    let mut dev = vec![0.0; horizon];
    let mut count = 0usize;
    for path in per_group.iter().flatten() {
        for ((d, v), r) in dev.iter_mut().zip(path).zip(&reference) {
            *d += v - r;
        }
        count += 1;
    }
    Ok(reference
        .iter()
        .zip(dev)
        .map(|(r, d)| r + d / count as f64)
        .collect())
}

fn simulate_forward(rec: &Recursion<'_>, state: &ForecastState, draws: &[f64], sign: f64) -> Vec<f64> {
    let horizon = draws.len();
    let mut eps: Vec<f64> = Vec::with_capacity(horizon);
    let mut vars: Vec<f64> = Vec::with_capacity(horizon);
    let mut states: Vec<f64> = Vec::with_capacity(horizon);
    for h in 0..horizon {
        let eps_at = |i: usize| if i <= h { eps[h - i] } else { state.eps(i - h) };
        let var_at = |i: usize| if i <= h { vars[h - i] } else { state.var(i - h) };
        let state_at = |i: usize| {
            if i <= h {
                states[h - i]
            } else {
                rec.state_of_variance(state.var(i - h))
            }
        };
        let (s, _) = rec.clamp(rec.next_state(eps_at, var_at, state_at));
        let v = rec.variance(s);
        eps.push(v.sqrt() * sign * draws[h]);
        vars.push(v);
        states.push(s);
    }
    vars
}

/// Root of the average forward variance over the horizon, in daily-vol units.
pub fn horizon_vol(path: &[f64], horizon: usize) -> f64 {
    let h = horizon.min(path.len());
    if h == 0 {
        return 0.0;
    }
    (path[..h].iter().sum::<f64>() / h as f64).max(0.0).sqrt()
}

/// Origin indices (into the full series) for a split: every `step`-th
/// out-of-sample index whose following `horizon` returns lie inside the
/// sample.
pub fn forecast_origins(split: &SampleSplit, horizon: usize, step: usize) -> Vec<usize> {
    let holdout = split.out_of_sample.len();
    (0..holdout.saturating_sub(horizon))
        .step_by(step.max(1))
        .map(|k| split.split_index + k)
        .collect()
}

fn check_split(returns: &ReturnSeries, split: &SampleSplit, horizon: usize) -> Result<()> {
    if split.split_index + split.out_of_sample.len() != returns.len() {
        return Err(Error::MisalignedSeries("split does not match the return series".into()));
    }
    if split.out_of_sample.len() < horizon + 1 {
        return Err(Error::TooFewObservations {
            needed: horizon + 1,
            got: split.out_of_sample.len(),
        });
    }
    Ok(())
}

/// Out-of-sample backtest of one GARCH-family specification.
pub fn backtest(
    spec: &GarchSpec,
    returns: &ReturnSeries,
    split: &SampleSplit,
    method: &ForecastMethod,
    config: &OptimizerConfig,
    mc: &MonteCarloConfig,
) -> Result<ForecastSeries> {
    let series = backtest_keep_failures(spec, returns, split, method, config, mc)?;
    if series.is_empty() {
        return Err(Error::NoValidOrigins);
    }
    Ok(series)
}

/// As [`backtest`], but a run in which every origin failed is returned as an
/// empty series carrying the per-origin reasons.
pub fn backtest_keep_failures(
    spec: &GarchSpec,
    returns: &ReturnSeries,
    split: &SampleSplit,
    method: &ForecastMethod,
    config: &OptimizerConfig,
    mc: &MonteCarloConfig,
) -> Result<ForecastSeries> {
    method.validate()?;
    check_split(returns, split, method.horizon)?;
    let proxy = realized_vol(returns, method.horizon)?;
    let origins = forecast_origins(split, method.horizon, method.refit_every);
    let values = returns.values();
    let dates = returns.dates();

    let run_origin = |idx: usize, t: usize, warm: Option<&GarchParams>| -> std::result::Result<(f64, GarchParams), String> {
        let start = match method.mode {
            ForecastMode::Rolling => {
                if t + 1 < method.window {
                    return Err(format!(
                        "rolling window of {} exceeds the {} available observations",
                        method.window,
                        t + 1
                    ));
                }
                t + 1 - method.window
            }
            ForecastMode::Expanding => 0,
        };
        let window = &values[start..=t];
        let fitted = fit_values(spec, window, config, warm).map_err(|e| e.to_string())?;
        let inn = variance_filter_values(spec, &fitted.params, window).map_err(|e| e.to_string())?;
        let state = ForecastState::from_innovations(&inn, spec.max_lag());
        let origin_mc = MonteCarloConfig {
            seed: mc.seed ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            ..*mc
        };
        let path = variance_path_forecast(spec, &fitted.params, &state, method.horizon, &origin_mc)
            .map_err(|e| e.to_string())?;
        let vol = horizon_vol(&path, method.horizon);
        if !vol.is_finite() {
            return Err("non-finite forecast".to_string());
        }
        Ok((vol, fitted.params))
    };

    let outcomes: Vec<std::result::Result<f64, String>> = if method.warm_start {
        let mut warm: Option<GarchParams> = None;
        origins
            .iter()
            .enumerate()
            .map(|(idx, &t)| match run_origin(idx, t, warm.as_ref()) {
                Ok((vol, params)) => {
                    warm = Some(params);
                    Ok(vol)
                }
                Err(e) => Err(e),
            })
            .collect()
    } else {
        exec::map_range(mc.execution, origins.len(), |idx| {
            run_origin(idx, origins[idx], None).map(|(v, _)| v)
        })
    };

    let mut series = ForecastSeries::new(spec.to_string(), method.mode.label());
    for (&t, outcome) in origins.iter().zip(outcomes) {
        match outcome {
            Ok(vol) => series.push(dates[t], vol, proxy.proxy[t + 1]),
            Err(reason) => series.skipped.push(SkippedOrigin {
                date: dates[t],
                reason,
            }),
        }
    }
    Ok(series)
}

/// EWMA flat-forecast backtest over every out-of-sample origin.
pub fn ewma_backtest(
    returns: &ReturnSeries,
    split: &SampleSplit,
    config: &EwmaConfig,
    horizon: usize,
) -> Result<ForecastSeries> {
    ewma_backtest_every(returns, split, config, horizon, 1)
}

/// As [`ewma_backtest`] with origins spaced `step` apart.
pub fn ewma_backtest_every(
    returns: &ReturnSeries,
    split: &SampleSplit,
    config: &EwmaConfig,
    horizon: usize,
    step: usize,
) -> Result<ForecastSeries> {
    check_split(returns, split, horizon)?;
    let proxy = realized_vol(returns, horizon)?;
    let path = ewma_filter(returns, config)?;
    let mut series = ForecastSeries::new(format!("EWMA({})", config.lambda), "recursive");
    for t in forecast_origins(split, horizon, step) {
        series.push(returns.dates()[t], path[t + 1].max(0.0).sqrt(), proxy.proxy[t + 1]);
    }
    Ok(series)
}

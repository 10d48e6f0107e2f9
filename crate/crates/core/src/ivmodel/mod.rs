//! Black-Scholes implied volatility and the implied-volatility regressions
//!
//! Model 1 regresses the realized proxy over the next `horizon` days on the
//! implied vol observed at the origin; Model 2 adds the trailing proxy.

mod black_scholes;
mod regression;

use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub use black_scholes::{
    bs_call_price, bs_vega, d1_d2, implied_vol, norm_cdf, scale_annual_to_horizon, BsInputs, PRICE_TOLERANCE,
    SIGMA_LOWER, SIGMA_UPPER,
};
pub use regression::{ols, OlsFit, OlsReport};

use crate::error::{Error, Result};
use crate::forecast::ForecastSeries;
use crate::marketdata::{realized_vol, ReturnSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IvVariant {
    Model1,
    Model2,
}

impl IvVariant {
    pub fn label(self) -> &'static str {
        match self {
            IvVariant::Model1 => "IV-Model1",
            IvVariant::Model2 => "IV-Model2",
        }
    }
}

/// Units the implied-vol regressor is expressed in before fitting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IvUnits {
    /// Per-day percent vol, like the realized proxy.
    #[default]
    Daily,
    /// Percent vol over the whole horizon window.
    Window,
    /// Annualized percent, as quoted.
    Annual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IvScaling {
    pub units: IvUnits,
    pub trading_days: usize,
    pub horizon: usize,
}

impl Default for IvScaling {
    fn default() -> Self {
        Self {
            units: IvUnits::Daily,
            trading_days: 252,
            horizon: 20,
        }
    }
}

impl IvScaling {
    pub fn convert(&self, implied_annual: f64) -> f64 {
        match self.units {
            IvUnits::Annual => implied_annual,
            IvUnits::Window => scale_annual_to_horizon(implied_annual, self.horizon, self.trading_days),
            IvUnits::Daily => {
                scale_annual_to_horizon(implied_annual, self.horizon, self.trading_days) / (self.horizon as f64).sqrt()
            }
        }
    }
}

/// Dated annualized implied vols as read from a CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct IvQuotes {
    pub dates: Vec<NaiveDate>,
    pub implied_annual: Vec<f64>,
}

/// Reads a `date,implied_annual` CSV (percent, annualized).
pub fn load_iv(path: &Path) -> Result<IvQuotes> {
    let file = std::fs::File::open(path).map_err(|source| Error::FileUnreadable {
        path: path.to_path_buf(),
        source,
    })?;
    read_iv(file)
}

pub fn read_iv<R: std::io::Read>(reader: R) -> Result<IvQuotes> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::MalformedRow {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::MalformedRow {
            line: 1,
            reason: format!("missing column `{name}`"),
        })
    };
    let (date_col, iv_col) = (column("date")?, column("implied_annual")?);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let raw_date = record.get(date_col).unwrap_or("");
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|_| Error::MalformedRow {
            line,
            reason: format!("bad date `{raw_date}`"),
        })?;
        let raw_iv = record.get(iv_col).unwrap_or("");
        let iv = match raw_iv.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => v,
            _ => {
                return Err(Error::MalformedRow {
                    line,
                    reason: format!("bad implied_annual `{raw_iv}`"),
                })
            }
        };
        rows.push((date, iv));
    }
    if rows.is_empty() {
        return Err(Error::EmptySeries);
    }
    rows.sort_by_key(|r| r.0);
    if rows.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::MalformedRow {
            line: 0,
            reason: "duplicate date in implied-vol file".into(),
        });
    }
    let (dates, implied_annual) = rows.into_iter().unzip();
    Ok(IvQuotes { dates, implied_annual })
}

/// Regression rows keyed by forecast origin.
#[derive(Debug, Clone, PartialEq)]
pub struct IvSeries {
    pub dates: Vec<NaiveDate>,
    /// Index of each origin in the return series.
    pub origins: Vec<usize>,
    pub implied_annual: Vec<f64>,
    /// Proxy over the window ending at the origin.
    pub realized_lag: Vec<f64>,
    /// Proxy over the `horizon` returns after the origin.
    pub target: Vec<f64>,
}

impl IvSeries {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    fn select(&self, keep: impl Fn(usize) -> bool) -> IvSeries {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(self.origins[i])).collect();
        IvSeries {
            dates: idx.iter().map(|&i| self.dates[i]).collect(),
            origins: idx.iter().map(|&i| self.origins[i]).collect(),
            implied_annual: idx.iter().map(|&i| self.implied_annual[i]).collect(),
            realized_lag: idx.iter().map(|&i| self.realized_lag[i]).collect(),
            target: idx.iter().map(|&i| self.target[i]).collect(),
        }
    }

    /// Rows whose target window lies entirely before `split_index`, and rows
    /// whose origin is at or after it.
    pub fn split(&self, split_index: usize, horizon: usize) -> (IvSeries, IvSeries) {
        (
            self.select(|t| t + horizon < split_index),
            self.select(|t| t >= split_index),
        )
    }

    /// Keeps only the listed origins.
    pub fn restrict_to(&self, origins: &[usize]) -> IvSeries {
        self.select(|t| origins.binary_search(&t).is_ok())
    }

    fn check(&self) -> Result<()> {
        let n = self.len();
        if [self.origins.len(), self.implied_annual.len(), self.realized_lag.len(), self.target.len()]
            .iter()
            .any(|l| *l != n)
        {
            return Err(Error::MisalignedSeries("implied-vol columns differ in length".into()));
        }
        Ok(())
    }
}

/// Joins implied-vol quotes with the return series. A row exists for every
/// return date with a quote, a full trailing proxy window and a full target
/// window after it.
pub fn align_iv(returns: &ReturnSeries, quotes: &IvQuotes, window: usize, horizon: usize) -> Result<IvSeries> {
    let lag = realized_vol(returns, window)?;
    let fwd = realized_vol(returns, horizon)?;
    let n = returns.len();
    let mut out = IvSeries {
        dates: Vec::new(),
        origins: Vec::new(),
        implied_annual: Vec::new(),
        realized_lag: Vec::new(),
        target: Vec::new(),
    };
    for t in window - 1..n.saturating_sub(horizon) {
        let date = returns.dates()[t];
        let Ok(q) = quotes.dates.binary_search(&date) else {
            continue;
        };
        out.dates.push(date);
        out.origins.push(t);
        out.implied_annual.push(quotes.implied_annual[q]);
        out.realized_lag.push(lag.proxy[t + 1 - window]);
        out.target.push(fwd.proxy[t + 1]);
    }
    if out.is_empty() {
        return Err(Error::MisalignedSeries("no implied-vol quote matches a usable return date".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IvRegressionModel {
    pub variant: IvVariant,
    pub scaling: IvScaling,
    pub fit: OlsFit,
}

impl IvRegressionModel {
    pub fn beta0(&self) -> f64 {
        self.fit.coefficients[0]
    }

    pub fn beta1(&self) -> f64 {
        self.fit.coefficients[1]
    }

    pub fn beta2(&self) -> Option<f64> {
        self.fit.coefficients.get(2).copied()
    }

    /// Model prediction before flooring.
    pub fn raw_predict(&self, implied_annual: f64, realized_lag: f64) -> f64 {
        let mut y = self.beta0() + self.beta1() * self.scaling.convert(implied_annual);
        if let Some(b2) = self.beta2() {
            y += b2 * realized_lag;
        }
        y
    }

    pub fn report(&self) -> String {
        OlsReport {
            fit: &self.fit,
            dep_variable: "realized_vol",
            model: self.variant.label(),
        }
        .to_string()
    }
}

/// Fits on the first `train_len` rows (all rows when `None`).
pub fn fit_iv_regression(
    variant: IvVariant,
    data: &IvSeries,
    train_len: Option<usize>,
    scaling: IvScaling,
) -> Result<IvRegressionModel> {
    data.check()?;
    let n = train_len.unwrap_or(data.len());
    if n > data.len() {
        return Err(Error::TooFewObservations {
            needed: n,
            got: data.len(),
        });
    }
    let implied: Vec<f64> = data.implied_annual[..n].iter().map(|v| scaling.convert(*v)).collect();
    let lag = &data.realized_lag[..n];
    let y = &data.target[..n];
    let fit = match variant {
        IvVariant::Model1 => ols(&[&implied], &["implied"], y)?,
        IvVariant::Model2 => ols(&[&implied, lag], &["implied", "realized_lag"], y)?,
    };
    Ok(IvRegressionModel { variant, scaling, fit })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IvPrediction {
    pub series: ForecastSeries,
    /// Predictions that were negative and set to zero.
    pub floored: usize,
}

pub fn predict_iv_regression(model: &IvRegressionModel, data: &IvSeries) -> Result<IvPrediction> {
    data.check()?;
    let mut series = ForecastSeries::new(model.variant.label(), "ols");
    let mut floored = 0;
    for i in 0..data.len() {
        let raw = model.raw_predict(data.implied_annual[i], data.realized_lag[i]);
        if raw < 0.0 {
            floored += 1;
        }
        series.push(data.dates[i], raw.max(0.0), data.target[i]);
    }
    Ok(IvPrediction { series, floored })
}

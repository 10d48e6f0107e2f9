//! Price ingestion, return construction, cleaning, realized-volatility proxy
//! and sample splitting.
//!
//! Returns are simple percent changes (`100 * (p[t] / p[t-1] - 1)`) dated at
//! the later day. All dispersion measures use the n-1 sample convention.

use std::fmt;
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats;

/// Daily close prices in ascending date order.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    close: Vec<f64>,
}

impl PriceSeries {
    pub fn new(dates: Vec<NaiveDate>, close: Vec<f64>) -> Result<Self> {
        if dates.len() != close.len() {
            return Err(Error::MisalignedSeries(format!(
                "{} dates vs {} closes",
                dates.len(),
                close.len()
            )));
        }
        if close.len() < 2 {
            return Err(Error::EmptySeries);
        }
        if let Some(i) = close.iter().position(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::InvalidInputs(format!(
                "close at index {i} is not positive"
            )));
        }
        check_increasing(&dates)?;
        Ok(Self { dates, close })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn close(&self) -> &[f64] {
        &self.close
    }

    pub fn len(&self) -> usize {
        self.close.len()
    }

    pub fn is_empty(&self) -> bool {
        self.close.is_empty()
    }
}

/// Daily percent returns.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    dates: Vec<NaiveDate>,
    returns: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(dates: Vec<NaiveDate>, returns: Vec<f64>) -> Result<Self> {
        if dates.len() != returns.len() {
            return Err(Error::MisalignedSeries(format!(
                "{} dates vs {} returns",
                dates.len(),
                returns.len()
            )));
        }
        if let Some(i) = returns.iter().position(|r| !r.is_finite()) {
            return Err(Error::InvalidInputs(format!("return at index {i} is not finite")));
        }
        check_increasing(&dates)?;
        Ok(Self { dates, returns })
    }

    /// Wraps raw values, dating them on consecutive business days from
    /// 2000-01-03. Used for simulated data.
    pub fn from_values(returns: Vec<f64>) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
        let dates = business_days(start, returns.len());
        Self::new(dates, returns)
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.returns
    }

    pub fn len(&self) -> usize {
        self.returns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.returns.is_empty()
    }

    /// Sub-series over `range` (indices into this series).
    pub fn slice(&self, range: std::ops::Range<usize>) -> ReturnSeries {
        ReturnSeries {
            dates: self.dates[range.clone()].to_vec(),
            returns: self.returns[range].to_vec(),
        }
    }

    pub fn negated(&self) -> ReturnSeries {
        ReturnSeries {
            dates: self.dates.clone(),
            returns: self.returns.iter().map(|r| -r).collect(),
        }
    }
}

fn check_increasing(dates: &[NaiveDate]) -> Result<()> {
    if let Some(i) = dates.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInputs(format!(
            "dates not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}

/// `n` consecutive weekdays starting at `start` (rolled forward off weekends).
pub fn business_days(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut d = start;
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d += Duration::days(1);
    }
    out
}

/// Summary statistics in the order of a pandas `describe()` plus skew/kurt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionStats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub skew: f64,
    /// Excess kurtosis.
    pub kurt: f64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl fmt::Display for DistributionStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "count {:>20.6}", self.count as f64)?;
        writeln!(f, "mean  {:>20.6}", self.mean)?;
        writeln!(f, "std   {:>20.6}", self.std)?;
        writeln!(f, "skew  {:>20.6}", self.skew)?;
        writeln!(f, "kurt  {:>20.6}", self.kurt)?;
        writeln!(f, "min   {:>20.6}", self.min)?;
        writeln!(f, "25%   {:>20.6}", self.q25)?;
        writeln!(f, "50%   {:>20.6}", self.median)?;
        writeln!(f, "75%   {:>20.6}", self.q75)?;
        writeln!(f, "max   {:>20.6}", self.max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolProxySeries {
    /// Date of the last return inside each window.
    pub dates: Vec<NaiveDate>,
    pub proxy: Vec<f64>,
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSplit {
    pub in_sample: ReturnSeries,
    pub out_of_sample: ReturnSeries,
    pub split_index: usize,
}

/// Column names used when reading a price CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CsvSchema {
    pub date_column: String,
    pub close_column: String,
    /// Skip rows with an empty, `null` or non-positive close instead of
    /// failing the load.
    pub skip_invalid_rows: bool,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            date_column: "Date".to_string(),
            close_column: "Close".to_string(),
            skip_invalid_rows: false,
        }
    }
}

pub fn load_prices(path: &Path, schema: &CsvSchema) -> Result<PriceSeries> {
    let file = std::fs::File::open(path).map_err(|source| Error::FileUnreadable {
        path: path.to_path_buf(),
        source,
    })?;
    read_prices(file, schema)
}

pub fn read_prices<R: std::io::Read>(reader: R, schema: &CsvSchema) -> Result<PriceSeries> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::MalformedRow {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MalformedRow {
                line: 1,
                reason: format!("missing column `{name}`"),
            })
    };
    let date_col = column(&schema.date_column)?;
    let close_col = column(&schema.close_column)?;

    let mut rows: Vec<(NaiveDate, f64, usize)> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let date_raw = record.get(date_col).unwrap_or("");
        let close_raw = record.get(close_col).unwrap_or("");
        let date = NaiveDate::parse_from_str(date_raw, "%Y-%m-%d").map_err(|_| {
            Error::MalformedRow {
                line,
                reason: format!("bad date `{date_raw}`"),
            }
        })?;
        let close = match close_raw.parse::<f64>() {
            Ok(c) if c.is_finite() && c > 0.0 => c,
            _ if schema.skip_invalid_rows => continue,
            Ok(c) => {
                return Err(Error::MalformedRow {
                    line,
                    reason: format!("non-positive close {c}"),
                })
            }
            Err(_) => {
                return Err(Error::MalformedRow {
                    line,
                    reason: format!("bad close `{close_raw}`"),
                })
            }
        };
        rows.push((date, close, line));
    }
    if rows.is_empty() {
        return Err(Error::EmptySeries);
    }
    rows.sort_by_key(|r| r.0);
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::MalformedRow {
            line: w[1].2,
            reason: format!("duplicate date {}", w[1].0),
        });
    }
    let (dates, close): (Vec<_>, Vec<_>) = rows.into_iter().map(|(d, c, _)| (d, c)).unzip();
    PriceSeries::new(dates, close)
}

pub fn compute_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    if prices.len() < 2 {
        return Err(Error::EmptySeries);
    }
    let returns = prices
        .close
        .windows(2)
        .map(|w| 100.0 * (w[1] / w[0] - 1.0))
        .collect();
    ReturnSeries::new(prices.dates[1..].to_vec(), returns)
}

/// Replaces each interior close whose percent move from the previous close
/// exceeds `threshold` by the midpoint of its original neighbours. Single
/// left-to-right pass over the original values; endpoints never change.
pub fn smooth_outliers(prices: &PriceSeries, threshold: f64) -> Result<PriceSeries> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidInputs("threshold must be positive".into()));
    }
    let orig = &prices.close;
    let mut close = orig.clone();
    for i in 1..orig.len().saturating_sub(1) {
        let change = 100.0 * (orig[i] / close[i - 1] - 1.0);
        if change.abs() > threshold {
            close[i] = 0.5 * (orig[i - 1] + orig[i + 1]);
        }
    }
    Ok(PriceSeries {
        dates: prices.dates.clone(),
        close,
    })
}

pub fn distribution_stats(returns: &ReturnSeries) -> Result<DistributionStats> {
    let xs = returns.values();
    let n = xs.len();
    if n < 4 {
        return Err(Error::TooFewObservations { needed: 4, got: n });
    }
    let nf = n as f64;
    let mean = stats::mean(xs);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let std = (m2 * nf / (nf - 1.0)).sqrt();
    // Adjusted Fisher-Pearson skewness and bias-corrected excess kurtosis;
    // both are zero for constant input.
    let (skew, kurt) = if m2 > 0.0 {
        let g1 = m3 / m2.powf(1.5);
        let g2 = m4 / (m2 * m2) - 3.0;
        let skew = (nf * (nf - 1.0)).sqrt() / (nf - 2.0) * g1;
        let kurt = (nf - 1.0) / ((nf - 2.0) * (nf - 3.0)) * ((nf + 1.0) * g2 + 6.0);
        (skew, kurt)
    } else {
        (0.0, 0.0)
    };
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(DistributionStats {
        count: n,
        mean,
        std,
        skew,
        kurt,
        min: sorted[0],
        q25: stats::quantile_sorted(&sorted, 0.25),
        median: stats::quantile_sorted(&sorted, 0.5),
        q75: stats::quantile_sorted(&sorted, 0.75),
        max: sorted[n - 1],
    })
}

/// Rolling `window`-day sample standard deviation of returns.
pub fn realized_vol(returns: &ReturnSeries, window: usize) -> Result<VolProxySeries> {
    if window < 2 {
        return Err(Error::InvalidInputs("proxy window must be at least 2".into()));
    }
    let xs = returns.values();
    if xs.len() < window {
        return Err(Error::TooFewObservations {
            needed: window,
            got: xs.len(),
        });
    }
    let proxy = xs.windows(window).map(stats::sample_std).collect();
    Ok(VolProxySeries {
        dates: returns.dates()[window - 1..].to_vec(),
        proxy,
        window,
    })
}

pub fn split_sample(returns: &ReturnSeries, holdout: usize) -> Result<SampleSplit> {
    let len = returns.len();
    if holdout == 0 || holdout >= len {
        return Err(Error::HoldoutTooLarge { holdout, len });
    }
    let split_index = len - holdout;
    Ok(SampleSplit {
        in_sample: returns.slice(0..split_index),
        out_of_sample: returns.slice(split_index..len),
        split_index,
    })
}

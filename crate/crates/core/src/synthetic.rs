//! Seeded demonstration data: GJR-GARCH prices and a matching implied-vol
//! series.

use std::io::Write;

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};

use crate::error::Result;
use crate::garch::{Distribution, Family, GarchParams, GarchSpec};
use crate::marketdata::{business_days, PriceSeries};
use crate::simulate::simulate;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n_returns: usize,
    pub seed: u64,
    pub start_price: f64,
    pub start_date: NaiveDate,
    pub spec: GarchSpec,
    pub params: GarchParams,
    /// Log-normal noise scale applied to the implied vol.
    pub iv_noise: f64,
    pub horizon: usize,
    pub trading_days: usize,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_returns: 1302,
            seed: 20240501,
            start_price: 1.25,
            start_date: NaiveDate::from_ymd_opt(2019, 1, 2).expect("valid date"),
            spec: GarchSpec::new(Family::Gjr, 1, 1, 1, Distribution::StudentT).expect("valid spec"),
            params: GarchParams {
                mu: 0.0,
                omega: 0.0072,
                alpha: vec![0.02],
                gamma: vec![0.12],
                beta: vec![0.90],
                nu: Some(6.0),
            },
            iv_noise: 0.08,
            horizon: 20,
            trading_days: 252,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub prices: PriceSeries,
    /// Annualized percent implied vol per price date after the first.
    pub iv_dates: Vec<NaiveDate>,
    pub iv: Vec<f64>,
    /// True conditional variances of the generator, one per return.
    pub true_variances: Vec<f64>,
}

pub fn generate(config: &SyntheticConfig) -> Result<SyntheticData> {
    let path = simulate(&config.spec, &config.params, config.n_returns, 1000, config.seed)?;
    let dates = business_days(config.start_date, config.n_returns + 1);
    let mut close = Vec::with_capacity(config.n_returns + 1);
    close.push(config.start_price);
    for r in &path.returns {
        let last = *close.last().expect("non-empty");
        close.push(last * (1.0 + r / 100.0));
    }
    let prices = PriceSeries::new(dates.clone(), close)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5EED_1F00);
    let noise = Normal::new(0.0, config.iv_noise).expect("finite noise scale");
    let n = path.variances.len();
    let iv = (0..n)
        .map(|t| {
            let ahead = &path.variances[(t + 1).min(n - 1)..(t + 1 + config.horizon).min(n)];
            let mean = ahead.iter().sum::<f64>() / ahead.len() as f64;
            let annual = (mean * config.trading_days as f64).sqrt();
            annual * noise.sample(&mut rng).exp()
        })
        .collect();
    Ok(SyntheticData {
        prices,
        iv_dates: dates[1..].to_vec(),
        iv,
        true_variances: path.variances,
    })
}

/// `Date,Close` with ten decimals.
pub fn write_prices_csv<W: Write>(prices: &PriceSeries, w: W) -> std::io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["Date", "Close"])?;
    for (d, c) in prices.dates().iter().zip(prices.close()) {
        wtr.write_record([d.to_string(), format!("{c:.10}")])?;
    }
    wtr.flush()
}

/// `date,implied_annual` with six decimals.
pub fn write_iv_csv<W: Write>(dates: &[NaiveDate], iv: &[f64], w: W) -> std::io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["date", "implied_annual"])?;
    for (d, v) in dates.iter().zip(iv) {
        wtr.write_record([d.to_string(), format!("{v:.6}")])?;
    }
    wtr.flush()
}

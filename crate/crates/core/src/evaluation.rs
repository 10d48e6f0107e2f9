//! Forecast accuracy metrics and comparison tables.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forecast::ForecastSeries;

fn check_pairs(predicted: &[f64], realized: &[f64]) -> Result<()> {
    if predicted.len() != realized.len() {
        return Err(Error::MisalignedSeries("predicted and realized differ in length".into()));
    }
    if predicted.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(())
}

pub fn rmse_values(predicted: &[f64], realized: &[f64]) -> Result<f64> {
    check_pairs(predicted, realized)?;
    let sse: f64 = predicted.iter().zip(realized).map(|(p, y)| (y - p) * (y - p)).sum();
    Ok((sse / predicted.len() as f64).sqrt())
}

pub fn mae_values(predicted: &[f64], realized: &[f64]) -> Result<f64> {
    check_pairs(predicted, realized)?;
    let sae: f64 = predicted.iter().zip(realized).map(|(p, y)| (y - p).abs()).sum();
    Ok(sae / predicted.len() as f64)
}

pub fn rmse(forecast: &ForecastSeries) -> Result<f64> {
    rmse_values(&forecast.predicted, &forecast.realized)
}

pub fn mae(forecast: &ForecastSeries) -> Result<f64> {
    mae_values(&forecast.predicted, &forecast.realized)
}

/// Which origins each series is scored on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alignment {
    /// All scored series must share the same origins.
    Strict,
    /// Origins common to every scored series.
    #[default]
    Intersection,
    /// Each series on all of its own origins.
    Union,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub model_label: String,
    pub method_label: String,
    /// `None` when the series produced no forecasts.
    pub rmse: Option<f64>,
    pub mae: Option<f64>,
    pub n_forecasts: usize,
    pub n_skipped: usize,
    /// Forecasts entering the metrics.
    pub n_scored: usize,
    /// 1-based; equal metrics share a rank.
    pub rank_rmse: Option<usize>,
    pub rank_mae: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub alignment: Alignment,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Rmse,
    Mae,
}

impl ReportRow {
    fn metric(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::Rmse => self.rmse,
            Metric::Mae => self.mae,
        }
    }
}

impl EvaluationReport {
    /// Scored rows ordered best first; ties by model then method label.
    pub fn ranking(&self, metric: Metric) -> Vec<&ReportRow> {
        let mut scored: Vec<&ReportRow> = self.rows.iter().filter(|r| r.metric(metric).is_some()).collect();
        scored.sort_by(|a, b| {
            a.metric(metric)
                .unwrap()
                .total_cmp(&b.metric(metric).unwrap())
                .then_with(|| a.model_label.cmp(&b.model_label))
                .then_with(|| a.method_label.cmp(&b.method_label))
        });
        scored
    }

    pub fn row(&self, model_label: &str, method_label: &str) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.model_label == model_label && r.method_label == method_label)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record([
            "model_label",
            "method_label",
            "rmse",
            "mae",
            "n_forecasts",
            "n_skipped",
            "n_scored",
            "rank_rmse",
            "rank_mae",
        ])?;
        let opt = |v: Option<f64>| v.map_or("N/A".to_string(), |x| x.to_string());
        let rank = |v: Option<usize>| v.map_or("N/A".to_string(), |x| x.to_string());
        for r in &self.rows {
            wtr.write_record([
                r.model_label.clone(),
                r.method_label.clone(),
                opt(r.rmse),
                opt(r.mae),
                r.n_forecasts.to_string(),
                r.n_skipped.to_string(),
                r.n_scored.to_string(),
                rank(r.rank_rmse),
                rank(r.rank_mae),
            ])?;
        }
        wtr.flush()
    }
}

impl fmt::Display for EvaluationReport {
    /// Aligned plain-text table.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let model_w = self.rows.iter().map(|r| r.model_label.len()).chain([5]).max().unwrap_or(5);
        let method_w = self.rows.iter().map(|r| r.method_label.len()).chain([6]).max().unwrap_or(6);
        writeln!(
            f,
            "{:<model_w$}  {:<method_w$}  {:>8}  {:>8}  {:>5}  {:>7}  {:>4}  {:>4}",
            "Model", "Method", "RMSE", "MAE", "N", "Skipped", "#R", "#M"
        )?;
        let cell = |v: Option<f64>| v.map_or("N/A".to_string(), |x| format!("{x:.4}"));
        let rank = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        for r in &self.rows {
            writeln!(
                f,
                "{:<model_w$}  {:<method_w$}  {:>8}  {:>8}  {:>5}  {:>7}  {:>4}  {:>4}",
                r.model_label,
                r.method_label,
                cell(r.rmse),
                cell(r.mae),
                r.n_scored,
                r.n_skipped,
                rank(r.rank_rmse),
                rank(r.rank_mae)
            )?;
        }
        Ok(())
    }
}

fn competition_ranks(rows: &mut [ReportRow], metric: Metric) {
    let mut order: Vec<(usize, f64)> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.metric(metric).map(|v| (i, v)))
        .collect();
    order.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut ranks = vec![None; rows.len()];
    for (pos, &(i, v)) in order.iter().enumerate() {
        let rank = if pos > 0 && order[pos - 1].1 == v {
            ranks[order[pos - 1].0].expect("ranked")
        } else {
            pos + 1
        };
        ranks[i] = Some(rank);
    }
    for (row, rank) in rows.iter_mut().zip(ranks) {
        match metric {
            Metric::Rmse => row.rank_rmse = rank,
            Metric::Mae => row.rank_mae = rank,
        }
    }
}

fn scored_pairs(fc: &ForecastSeries, keep: Option<&BTreeSet<NaiveDate>>) -> (Vec<f64>, Vec<f64>) {
    (0..fc.len())
        .filter(|&i| keep.is_none_or(|k| k.contains(&fc.dates[i])))
        .map(|i| (fc.predicted[i], fc.realized[i]))
        .unzip()
}

/// One row per series; series without forecasts become N/A rows.
pub fn build_report(forecasts: &[ForecastSeries], alignment: Alignment) -> Result<EvaluationReport> {
    let live: Vec<&ForecastSeries> = forecasts.iter().filter(|f| !f.is_empty()).collect();
    let common: Option<BTreeSet<NaiveDate>> = match alignment {
        Alignment::Union => None,
        Alignment::Strict => {
            if let Some(first) = live.first() {
                if let Some(bad) = live.iter().find(|f| f.dates != first.dates) {
                    return Err(Error::MisalignedSeries(format!(
                        "{} {} has different origins from {} {}",
                        bad.model_label, bad.method_label, first.model_label, first.method_label
                    )));
                }
            }
            None
        }
        Alignment::Intersection => {
            let mut sets = live.iter().map(|f| f.dates.iter().copied().collect::<BTreeSet<_>>());
            let first = sets.next();
            let common = first.map(|s| sets.fold(s, |acc, x| acc.intersection(&x).copied().collect()));
            if matches!(&common, Some(c) if c.is_empty()) {
                return Err(Error::MisalignedSeries("forecast series share no origins".into()));
            }
            common
        }
    };

    let mut rows = Vec::with_capacity(forecasts.len());
    for fc in forecasts {
        let (pred, real) = scored_pairs(fc, common.as_ref());
        let (rmse, mae) = if pred.is_empty() {
            (None, None)
        } else {
            (Some(rmse_values(&pred, &real)?), Some(mae_values(&pred, &real)?))
        };
        rows.push(ReportRow {
            model_label: fc.model_label.clone(),
            method_label: fc.method_label.clone(),
            rmse,
            mae,
            n_forecasts: fc.len(),
            n_skipped: fc.skipped.len(),
            n_scored: pred.len(),
            rank_rmse: None,
            rank_mae: None,
        });
    }
    competition_ranks(&mut rows, Metric::Rmse);
    competition_ranks(&mut rows, Metric::Mae);
    Ok(EvaluationReport { alignment, rows })
}

//! Batch pipeline: prepare → grid → backtest → evaluate.
//!
//! Every stage reads its inputs from disk and writes plain CSV/text files
//! under the output directory:
//!
//! ```text
//! data/       {pair}_prices_clean.csv  {pair}_returns.csv  {pair}_stats.txt  {pair}_proxy.csv
//! grids/      {pair}_{family}_{dist}_{aic|bic}.csv  {pair}_summary.csv
//! forecasts/  {pair}_{model}_{method}.csv  {pair}_manifest.csv  {pair}_failures.csv
//! reports/    {pair}_evaluation.csv  {pair}_evaluation.txt  {pair}_iv_model{1,2}.txt
//! ```
//!
//! A stage computes everything in memory and only then writes, so a failing
//! stage leaves no partial output behind.

mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

pub use config::{
    DataConfig, EvaluationConfig, ForecastConfig, GridConfig, IvConfig, PairConfig, PipelineConfig, SelectBy,
};

use crate::error::{Error, Result};
use crate::estimator::OptimizerConfig;
use crate::evaluation::{build_report, EvaluationReport};
use crate::exec;
use crate::forecast::{
    backtest_keep_failures, ewma_backtest, forecast_origins, ForecastMethod, ForecastMode, ForecastSeries,
    SkippedOrigin,
};
use crate::garch::{Distribution, Family, GarchSpec};
use crate::ivmodel::{align_iv, fit_iv_regression, load_iv, predict_iv_regression, IvScaling, IvVariant};
use crate::marketdata::{
    compute_returns, distribution_stats, load_prices, realized_vol, smooth_outliers, split_sample, CsvSchema,
    PriceSeries, ReturnSeries,
};
use crate::selection::{grid_search, Criterion, GridOptions, GridResult};

/// Paths of the stage directories under the output root.
#[derive(Debug, Clone)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn data(&self) -> PathBuf {
        self.root.join("data")
    }

    pub fn grids(&self) -> PathBuf {
        self.root.join("grids")
    }

    pub fn forecasts(&self) -> PathBuf {
        self.root.join("forecasts")
    }

    pub fn reports(&self) -> PathBuf {
        self.root.join("reports")
    }

    pub fn clean_prices(&self, pair: &str) -> PathBuf {
        self.data().join(format!("{pair}_prices_clean.csv"))
    }

    pub fn grid_summary(&self, pair: &str) -> PathBuf {
        self.grids().join(format!("{pair}_summary.csv"))
    }

    pub fn manifest(&self, pair: &str) -> PathBuf {
        self.forecasts().join(format!("{pair}_manifest.csv"))
    }

    pub fn failures(&self, pair: &str) -> PathBuf {
        self.forecasts().join(format!("{pair}_failures.csv"))
    }
}

/// Files written and non-fatal warnings raised by a stage.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageReport {
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl StageReport {
    fn absorb(&mut self, other: StageReport) {
        self.written.extend(other.written);
        self.warnings.extend(other.warnings);
    }
}

/// Buffered stage output, flushed only once the whole stage has succeeded.
#[derive(Default)]
struct Pending {
    files: Vec<(PathBuf, Vec<u8>)>,
    warnings: Vec<String>,
}

impl Pending {
    fn add(&mut self, path: PathBuf, bytes: Vec<u8>) {
        self.files.push((path, bytes));
    }

    fn add_csv<F>(&mut self, path: PathBuf, write: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    {
        let mut buf = Vec::new();
        write(&mut buf)?;
        self.add(path, buf);
        Ok(())
    }

    fn flush(self) -> Result<StageReport> {
        let mut written = Vec::with_capacity(self.files.len());
        for (path, bytes) in self.files {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&path, bytes)?;
            written.push(path);
        }
        Ok(StageReport {
            written,
            warnings: self.warnings,
        })
    }
}

/// Lower-case ASCII with runs of other characters collapsed to `_`.
pub fn slug(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::Writer::from_writer(buf)
}

fn csv_err(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

fn write_price_csv(prices: &PriceSeries, buf: &mut Vec<u8>) -> std::io::Result<()> {
    let mut w = csv_writer(buf);
    w.write_record(["Date", "Close"]).map_err(csv_err)?;
    for (d, c) in prices.dates().iter().zip(prices.close()) {
        w.write_record([d.to_string(), c.to_string()]).map_err(csv_err)?;
    }
    w.flush()
}

fn write_dated_column(header: [&str; 2], dates: &[NaiveDate], values: &[f64], buf: &mut Vec<u8>) -> std::io::Result<()> {
    let mut w = csv_writer(buf);
    w.write_record(header).map_err(csv_err)?;
    for (d, v) in dates.iter().zip(values) {
        w.write_record([d.to_string(), v.to_string()]).map_err(csv_err)?;
    }
    w.flush()
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// Returns of the cleaned prices written by `prepare`.
fn load_clean_returns(layout: &Layout, pair: &str) -> Result<ReturnSeries> {
    let path = layout.clean_prices(pair);
    if !path.is_file() {
        return Err(Error::MissingInputs(format!(
            "{} not found; run `prepare` first",
            path.display()
        )));
    }
    compute_returns(&load_prices(&path, &CsvSchema::default())?)
}

pub fn prepare(cfg: &PipelineConfig) -> Result<StageReport> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.output_dir);
    let mut out = Pending::default();
    for pair in &cfg.pairs {
        let name = &pair.name;
        let raw = load_prices(&pair.prices, &cfg.data.schema)?;
        let raw_returns = compute_returns(&raw)?;
        let cleaned = smooth_outliers(&raw, cfg.data.cleaning_threshold)?;
        let smoothed = raw.close().iter().zip(cleaned.close()).filter(|(a, b)| a != b).count();
        let returns = compute_returns(&cleaned)?;
        split_sample(&returns, cfg.data.holdout)?;
        let proxy = realized_vol(&returns, cfg.data.proxy_window)?;

        let mut stats = String::new();
        let _ = writeln!(stats, "pair {name}");
        let source = pair.prices.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
        let _ = writeln!(stats, "source {source}");
        let _ = writeln!(
            stats,
            "closes smoothed {smoothed} (threshold {}%)",
            cfg.data.cleaning_threshold
        );
        if smoothed > 0 {
            let _ = writeln!(stats, "\n[before cleaning]\n{}", distribution_stats(&raw_returns)?);
            let _ = writeln!(stats, "[after cleaning]\n{}", distribution_stats(&returns)?);
        } else {
            let _ = writeln!(stats, "\n[returns]\n{}", distribution_stats(&returns)?);
        }

        out.add_csv(layout.clean_prices(name), |b| write_price_csv(&cleaned, b))?;
        out.add_csv(layout.data().join(format!("{name}_returns.csv")), |b| {
            write_dated_column(["Date", "Return"], returns.dates(), returns.values(), b)
        })?;
        out.add(layout.data().join(format!("{name}_stats.txt")), stats.into_bytes());
        out.add_csv(layout.data().join(format!("{name}_proxy.csv")), |b| {
            write_dated_column(["Date", "realized_vol"], &proxy.dates, &proxy.proxy, b)
        })?;
    }
    out.flush()
}

fn matrix_file(layout: &Layout, pair: &str, g: &GridResult, c: Criterion) -> PathBuf {
    layout.grids().join(format!(
        "{pair}_{}_{}_{}.csv",
        g.family.name().to_ascii_lowercase(),
        g.distribution.short(),
        c.label()
    ))
}

fn write_grid_summary(grids: &[GridResult], buf: &mut Vec<u8>) -> std::io::Result<()> {
    let mut w = csv_writer(buf);
    w.write_record([
        "family",
        "distribution",
        "n_obs",
        "best_by_aic",
        "aic",
        "best_by_bic",
        "bic",
        "failed_cells",
        "delta_aic_t_minus_normal",
        "delta_bic_t_minus_normal",
    ])
    .map_err(csv_err)?;
    for g in grids {
        let score = |spec: GarchSpec, c: Criterion| {
            g.cell(spec.p, spec.q)
                .map(|cell| if c == Criterion::Aic { cell.aic } else { cell.bic })
        };
        // Difference at the (1,1) cell of this family.
        let base = |d: Distribution| {
            grids
                .iter()
                .find(|x| x.family == g.family && x.distribution == d)
                .and_then(|x| x.cell(1, 1))
        };
        let (da, db) = match (base(Distribution::StudentT), base(Distribution::Normal)) {
            (Some(t), Some(n)) => (Some(t.aic - n.aic), Some(t.bic - n.bic)),
            _ => (None, None),
        };
        w.write_record([
            g.family.name().to_string(),
            g.distribution.short().to_string(),
            g.n_obs.to_string(),
            g.best_by_aic.to_string(),
            opt_num(score(g.best_by_aic, Criterion::Aic)),
            g.best_by_bic.to_string(),
            opt_num(score(g.best_by_bic, Criterion::Bic)),
            g.failures.len().to_string(),
            opt_num(da),
            opt_num(db),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

pub fn grid(cfg: &PipelineConfig) -> Result<StageReport> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.output_dir);
    let optimizer = cfg.optimizer();
    let options = GridOptions {
        asymmetry: cfg.grid.asymmetry,
        execution: cfg.execution(),
    };
    let combos: Vec<(Family, Distribution)> = cfg
        .grid
        .families
        .iter()
        .flat_map(|f| cfg.grid.distributions.iter().map(move |d| (*f, *d)))
        .collect();
    let mut out = Pending::default();
    for pair in &cfg.pairs {
        let returns = load_clean_returns(&layout, &pair.name)?;
        let split = split_sample(&returns, cfg.data.holdout)?;
        let grids = exec::map_slice(cfg.execution(), &combos, |(f, d)| {
            grid_search(*f, *d, &split.in_sample, cfg.grid.p_max, cfg.grid.q_max, &optimizer, &options)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        for g in &grids {
            for c in [Criterion::Aic, Criterion::Bic] {
                out.add_csv(matrix_file(&layout, &pair.name, g, c), |b| g.write_matrix_csv(c, b))?;
            }
            for f in &g.failures {
                out.warnings.push(format!(
                    "{}: {} {} cell ({},{}) failed: {}",
                    pair.name, g.family, g.distribution, f.p, f.q, f.reason
                ));
            }
        }
        out.add_csv(layout.grid_summary(&pair.name), |b| write_grid_summary(&grids, b))?;
    }
    out.flush()
}

/// One row of a grid summary file.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSummaryRow {
    pub family: Family,
    pub distribution: Distribution,
    pub best_by_aic: GarchSpec,
    pub aic: Option<f64>,
    pub best_by_bic: GarchSpec,
    pub bic: Option<f64>,
    pub delta_aic: Option<f64>,
    pub delta_bic: Option<f64>,
}

pub fn read_grid_summary(path: &Path) -> Result<Vec<GridSummaryRow>> {
    if !path.is_file() {
        return Err(Error::MissingInputs(format!(
            "{} not found; run `grid` first or pin forecast.specs",
            path.display()
        )));
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::MalformedRow {
        line: 0,
        reason: e.to_string(),
    })?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::MalformedRow {
            line,
            reason: e.to_string(),
        })?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let num = |k: usize| -> Result<Option<f64>> {
            let s = field(k);
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| Error::MalformedRow {
                line,
                reason: format!("bad number `{s}`"),
            })
        };
        rows.push(GridSummaryRow {
            family: field(0).parse()?,
            distribution: field(1).parse()?,
            best_by_aic: field(3).parse()?,
            aic: num(4)?,
            best_by_bic: field(5).parse()?,
            bic: num(6)?,
            delta_aic: num(8)?,
            delta_bic: num(9)?,
        });
    }
    Ok(rows)
}

fn baseline(family: Family, distribution: Distribution) -> GarchSpec {
    let o = usize::from(family.is_asymmetric());
    GarchSpec::new(family, 1, o, 1, distribution).expect("(1,1) orders are valid")
}

/// Per family: the (1,1) baseline and the grid winner under the better
/// distribution, in family order without duplicates.
pub fn select_specs(rows: &[GridSummaryRow], forecast: &ForecastConfig) -> Vec<GarchSpec> {
    let mut families: Vec<Family> = rows.iter().map(|r| r.family).collect();
    families.sort();
    families.dedup();
    let mut specs = Vec::new();
    for family in families {
        let score = |r: &GridSummaryRow| match forecast.select_by {
            SelectBy::Aic => r.aic,
            SelectBy::Bic => r.bic,
        };
        let Some(best) = rows
            .iter()
            .filter(|r| r.family == family && score(r).is_some_and(f64::is_finite))
            .min_by(|a, b| score(a).unwrap().total_cmp(&score(b).unwrap()))
        else {
            continue;
        };
        let winner = match forecast.select_by {
            SelectBy::Aic => best.best_by_aic,
            SelectBy::Bic => best.best_by_bic,
        };
        if forecast.baseline {
            specs.push(baseline(family, best.distribution));
        }
        if !specs.contains(&winner) {
            specs.push(winner);
        }
    }
    specs
}

struct SeriesOutcome {
    file: String,
    series: ForecastSeries,
    /// Set when the model could not be run at all.
    error: Option<String>,
}

fn outcome(pair: &str, series: ForecastSeries, error: Option<String>) -> SeriesOutcome {
    SeriesOutcome {
        file: format!("{pair}_{}_{}.csv", slug(&series.model_label), slug(&series.method_label)),
        series,
        error,
    }
}

fn forecast_method(f: &ForecastConfig, mode: ForecastMode) -> ForecastMethod {
    ForecastMethod {
        mode,
        window: f.window,
        horizon: f.horizon,
        refit_every: f.refit_every,
        warm_start: match mode {
            ForecastMode::Rolling => f.rolling_warm_start,
            ForecastMode::Expanding => f.expanding_warm_start,
        },
    }
}

fn write_manifest(outcomes: &[SeriesOutcome], buf: &mut Vec<u8>) -> std::io::Result<()> {
    let mut w = csv_writer(buf);
    w.write_record(["file", "model_label", "method_label", "n_forecasts", "n_skipped", "status"])
        .map_err(csv_err)?;
    for o in outcomes {
        let s = &o.series;
        let status = if s.is_empty() {
            "failed"
        } else if s.skipped.is_empty() {
            "ok"
        } else {
            "partial"
        };
        w.write_record([
            o.file.as_str(),
            &s.model_label,
            &s.method_label,
            &s.len().to_string(),
            &s.skipped.len().to_string(),
            status,
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

fn write_failures(outcomes: &[SeriesOutcome], buf: &mut Vec<u8>) -> std::io::Result<()> {
    let mut w = csv_writer(buf);
    w.write_record(["model_label", "method_label", "origin_date", "reason"])
        .map_err(csv_err)?;
    for o in outcomes {
        let s = &o.series;
        if let Some(e) = &o.error {
            w.write_record([s.model_label.as_str(), &s.method_label, "", e])
                .map_err(csv_err)?;
        }
        for sk in &s.skipped {
            w.write_record([s.model_label.as_str(), &s.method_label, &sk.date.to_string(), &sk.reason])
                .map_err(csv_err)?;
        }
    }
    w.flush()
}

fn iv_outcomes(
    cfg: &PipelineConfig,
    pair: &PairConfig,
    returns: &ReturnSeries,
    split_index: usize,
    origins: &[usize],
    out: &mut Pending,
    layout: &Layout,
) -> Result<Vec<SeriesOutcome>> {
    let Some(path) = pair.iv.as_ref().filter(|_| cfg.iv.enabled) else {
        if cfg.iv.enabled {
            out.warnings.push(format!(
                "{}: no implied-vol file configured; IV models skipped",
                pair.name
            ));
        }
        return Ok(Vec::new());
    };
    let horizon = cfg.forecast.horizon;
    let quotes = load_iv(path)?;
    let scaling = IvScaling {
        units: cfg.iv.units,
        trading_days: cfg.iv.trading_days,
        horizon,
    };
    let mut results = Vec::new();
    let aligned = align_iv(returns, &quotes, cfg.data.proxy_window, horizon);
    for variant in [IvVariant::Model1, IvVariant::Model2] {
        let run = || -> Result<(ForecastSeries, String, usize)> {
            let data = aligned.as_ref().map_err(|e| Error::MisalignedSeries(e.to_string()))?;
            let (train, test) = data.split(split_index, horizon);
            let model = fit_iv_regression(variant, &train, cfg.iv.train_len, scaling)?;
            let pred = predict_iv_regression(&model, &test.restrict_to(origins))?;
            Ok((pred.series, model.report(), pred.floored))
        };
        match run() {
            Ok((series, report, floored)) => {
                if floored > 0 {
                    out.warnings.push(format!(
                        "{}: {} floored {floored} negative predictions at zero",
                        pair.name,
                        variant.label()
                    ));
                }
                let file = layout.reports().join(format!("{}_{}.txt", pair.name, slug(variant.label())));
                out.add(file, report.into_bytes());
                results.push(outcome(&pair.name, series, None));
            }
            Err(e) => {
                out.warnings.push(format!("{}: {} failed: {e}", pair.name, variant.label()));
                let series = ForecastSeries::new(variant.label(), "ols");
                results.push(outcome(&pair.name, series, Some(e.to_string())));
            }
        }
    }
    Ok(results)
}

pub fn backtest(cfg: &PipelineConfig) -> Result<StageReport> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.output_dir);
    let optimizer = OptimizerConfig {
        restarts: cfg.forecast.restarts,
        ..cfg.optimizer()
    };
    let mc = cfg.monte_carlo();
    let pinned = cfg.forecast.pinned_specs()?;
    let mut out = Pending::default();
    for pair in &cfg.pairs {
        let returns = load_clean_returns(&layout, &pair.name)?;
        let split = split_sample(&returns, cfg.data.holdout)?;
        let specs = if pinned.is_empty() {
            select_specs(&read_grid_summary(&layout.grid_summary(&pair.name))?, &cfg.forecast)
        } else {
            pinned.clone()
        };
        let combos: Vec<(GarchSpec, ForecastMode)> = specs
            .iter()
            .flat_map(|s| cfg.forecast.methods.iter().map(move |m| (*s, *m)))
            .collect();

        let ewma = ewma_backtest(&returns, &split, &cfg.ewma, cfg.forecast.horizon)?;
        let mut outcomes = vec![outcome(&pair.name, ewma, None)];
        let fitted = exec::map_slice(cfg.execution(), &combos, |(spec, mode)| {
            let method = forecast_method(&cfg.forecast, *mode);
            match backtest_keep_failures(spec, &returns, &split, &method, &optimizer, &mc) {
                Ok(series) => outcome(&pair.name, series, None),
                Err(e) => outcome(
                    &pair.name,
                    ForecastSeries::new(spec.to_string(), mode.label()),
                    Some(e.to_string()),
                ),
            }
        });
        outcomes.extend(fitted);
        let origins = forecast_origins(&split, cfg.forecast.horizon, 1);
        outcomes.extend(iv_outcomes(cfg, pair, &returns, split.split_index, &origins, &mut out, &layout)?);

        for o in &outcomes {
            if o.series.is_empty() {
                out.warnings.push(format!(
                    "{}: {} {} produced no forecasts",
                    pair.name, o.series.model_label, o.series.method_label
                ));
            }
            out.add_csv(layout.forecasts().join(&o.file), |b| o.series.write_csv(b))?;
        }
        out.add_csv(layout.manifest(&pair.name), |b| write_manifest(&outcomes, b))?;
        out.add_csv(layout.failures(&pair.name), |b| write_failures(&outcomes, b))?;
    }
    out.flush()
}

/// Reads every series listed in a pair's manifest, with skipped origins
/// restored from the failure file.
pub fn load_forecasts(layout: &Layout, pair: &str) -> Result<Vec<ForecastSeries>> {
    let manifest = layout.manifest(pair);
    if !manifest.is_file() {
        return Err(Error::MissingInputs(format!(
            "{} not found; run `backtest` first",
            manifest.display()
        )));
    }
    let bad = |line: usize, reason: String| Error::MalformedRow { line, reason };

    let mut skipped: BTreeMap<(String, String), Vec<SkippedOrigin>> = BTreeMap::new();
    let failures = layout.failures(pair);
    if failures.is_file() {
        let mut rdr = csv::Reader::from_path(&failures).map_err(|e| bad(0, e.to_string()))?;
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| bad(i + 2, e.to_string()))?;
            let Ok(date) = NaiveDate::parse_from_str(rec.get(2).unwrap_or(""), "%Y-%m-%d") else {
                continue;
            };
            skipped
                .entry((rec.get(0).unwrap_or("").to_string(), rec.get(1).unwrap_or("").to_string()))
                .or_default()
                .push(SkippedOrigin {
                    date,
                    reason: rec.get(3).unwrap_or("").to_string(),
                });
        }
    }

    let mut rdr = csv::Reader::from_path(&manifest).map_err(|e| bad(0, e.to_string()))?;
    let mut series = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(i + 2, e.to_string()))?;
        let (file, model, method) = match (rec.get(0), rec.get(1), rec.get(2)) {
            (Some(f), Some(m), Some(me)) => (f, m, me),
            _ => return Err(bad(i + 2, "manifest row needs file, model_label, method_label".into())),
        };
        let path = layout.forecasts().join(file);
        if !path.is_file() {
            return Err(Error::MissingInputs(format!("{} listed in the manifest is missing", path.display())));
        }
        let mut fc = ForecastSeries::read_csv(&path, method)?;
        fc.model_label = model.to_string();
        fc.skipped = skipped.remove(&(model.to_string(), method.to_string())).unwrap_or_default();
        series.push(fc);
    }
    if series.is_empty() {
        return Err(Error::MissingInputs(format!("{} lists no forecasts", manifest.display())));
    }
    Ok(series)
}

pub fn evaluate(cfg: &PipelineConfig) -> Result<StageReport> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.output_dir);
    let mut out = Pending::default();
    for pair in &cfg.pairs {
        let series = load_forecasts(&layout, &pair.name)?;
        let report: EvaluationReport = build_report(&series, cfg.evaluation.alignment)?;
        out.add_csv(layout.reports().join(format!("{}_evaluation.csv", pair.name)), |b| report.write_csv(b))?;
        out.add(
            layout.reports().join(format!("{}_evaluation.txt", pair.name)),
            report.to_string().into_bytes(),
        );
    }
    out.flush()
}

pub fn run_all(cfg: &PipelineConfig) -> Result<StageReport> {
    let mut report = StageReport::default();
    for stage in [prepare, grid, backtest, evaluate] {
        report.absorb(stage(cfg)?);
    }
    Ok(report)
}

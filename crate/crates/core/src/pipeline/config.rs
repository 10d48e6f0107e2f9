use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::OptimizerConfig;
use crate::evaluation::Alignment;
use crate::ewma::EwmaConfig;
use crate::exec::Execution;
use crate::forecast::{ForecastMode, MonteCarloConfig};
use crate::garch::{Distribution, Family, GarchSpec};
use crate::ivmodel::IvUnits;
use crate::marketdata::CsvSchema;
use crate::selection::AsymmetryOrder;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    /// Used as the file-name prefix for every artifact of this pair.
    pub name: String,
    pub prices: PathBuf,
    #[serde(default)]
    pub iv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    #[serde(flatten)]
    pub schema: CsvSchema,
    /// Daily percent move above which an interior close is smoothed.
    pub cleaning_threshold: f64,
    pub proxy_window: usize,
    pub holdout: usize,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            schema: CsvSchema::default(),
            cleaning_threshold: 8.0,
            proxy_window: 20,
            holdout: 365,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub p_max: usize,
    pub q_max: usize,
    pub families: Vec<Family>,
    pub distributions: Vec<Distribution>,
    pub asymmetry: AsymmetryOrder,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            p_max: 5,
            q_max: 5,
            families: Family::ALL.to_vec(),
            distributions: vec![Distribution::Normal, Distribution::StudentT],
            asymmetry: AsymmetryOrder::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectBy {
    Aic,
    #[default]
    Bic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForecastConfig {
    pub window: usize,
    pub horizon: usize,
    pub refit_every: usize,
    pub methods: Vec<ForecastMode>,
    /// Model labels such as `GJR(1,1,1)-t`. When empty the grid summary
    /// decides.
    pub specs: Vec<String>,
    /// Add the (1,1) / (1,1,1) model of every grid family.
    pub baseline: bool,
    pub select_by: SelectBy,
    /// Used for baselines when no grid summary is available.
    pub distribution: Distribution,
    /// Jittered restarts per origin fit (overrides the optimizer setting).
    pub restarts: usize,
    pub rolling_warm_start: bool,
    pub expanding_warm_start: bool,
    pub monte_carlo: MonteCarloConfig,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        Self {
            window: 200,
            horizon: 20,
            refit_every: 1,
            methods: vec![ForecastMode::Rolling, ForecastMode::Expanding],
            specs: Vec::new(),
            baseline: true,
            select_by: SelectBy::Bic,
            distribution: Distribution::StudentT,
            restarts: 0,
            rolling_warm_start: true,
            expanding_warm_start: false,
            monte_carlo: MonteCarloConfig::default(),
        }
    }
}

impl ForecastConfig {
    pub fn pinned_specs(&self) -> Result<Vec<GarchSpec>> {
        self.specs.iter().map(|s| s.parse()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IvConfig {
    pub enabled: bool,
    /// Leading training rows; all pre-holdout rows when absent.
    pub train_len: Option<usize>,
    pub units: IvUnits,
    pub trading_days: usize,
}

impl Default for IvConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            train_len: None,
            units: IvUnits::Daily,
            trading_days: 252,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationConfig {
    pub alignment: Alignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub parallel: bool,
    pub pairs: Vec<PairConfig>,
    pub data: DataConfig,
    pub ewma: EwmaConfig,
    pub grid: GridConfig,
    pub forecast: ForecastConfig,
    pub iv: IvConfig,
    pub optimizer: OptimizerConfig,
    pub evaluation: EvaluationConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("fxvol-output"),
            seed: 0,
            workers: 0,
            parallel: true,
            pairs: Vec::new(),
            data: DataConfig::default(),
            ewma: EwmaConfig::default(),
            grid: GridConfig::default(),
            forecast: ForecastConfig::default(),
            iv: IvConfig::default(),
            optimizer: OptimizerConfig::default(),
            evaluation: EvaluationConfig::default(),
        }
    }
}

/// Writes `value` at a dotted `key` path, creating tables on the way.
fn set_dotted(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| Error::Config(format!("empty key in `{key}`")))?;
    let mut cur = table;
    for part in parts {
        let entry = cur
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{part}` in `{key}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Parses the right-hand side of `key=value` as a TOML value, falling back to
/// a plain string.
fn parse_override_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

impl PipelineConfig {
    /// Parses TOML text and applies `key=value` overrides. Relative paths are
    /// resolved against `base_dir`.
    pub fn from_toml(text: &str, overrides: &[String], base_dir: &Path) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for item in overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{item}` is not key=value")))?;
            set_dotted(&mut table, key.trim(), parse_override_value(raw.trim()))?;
        }
        let mut cfg: PipelineConfig = table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.resolve_paths(base_dir);
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::FileUnreadable {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, overrides, base)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output_dir);
        for pair in &mut self.pairs {
            fix(&mut pair.prices);
            if let Some(iv) = pair.iv.as_mut() {
                fix(iv);
            }
        }
    }

    pub fn execution(&self) -> Execution {
        if self.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    /// Optimizer settings with the run seed applied.
    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            seed: self.seed,
            ..self.optimizer
        }
    }

    pub fn monte_carlo(&self) -> MonteCarloConfig {
        MonteCarloConfig {
            seed: self.seed,
            execution: self.execution(),
            ..self.forecast.monte_carlo
        }
    }

    /// Checks bounds and that every referenced input file exists.
    pub fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::Config("no currency pairs configured".into()));
        }
        let mut names: Vec<&str> = self.pairs.iter().map(|p| p.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("pair names must be unique".into()));
        }
        for pair in &self.pairs {
            if pair.name.is_empty() || !pair.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(Error::Config(format!(
                    "pair name `{}` must be non-empty ASCII letters, digits, `_` or `-`",
                    pair.name
                )));
            }
            if !pair.prices.is_file() {
                return Err(Error::MissingInputs(format!(
                    "price file {} for pair {} does not exist",
                    pair.prices.display(),
                    pair.name
                )));
            }
            if let Some(iv) = pair.iv.as_ref().filter(|p| !p.is_file()) {
                return Err(Error::MissingInputs(format!(
                    "implied-vol file {} for pair {} does not exist",
                    iv.display(),
                    pair.name
                )));
            }
        }
        let d = &self.data;
        if !(d.cleaning_threshold > 0.0) || d.proxy_window < 2 || d.holdout == 0 {
            return Err(Error::Config(
                "cleaning_threshold must be > 0, proxy_window >= 2 and holdout >= 1".into(),
            ));
        }
        self.ewma.validate()?;
        self.optimizer.validate()?;
        let g = &self.grid;
        if g.p_max == 0 || g.q_max == 0 || g.families.is_empty() || g.distributions.is_empty() {
            return Err(Error::Config("grid needs p_max, q_max >= 1 and at least one family and distribution".into()));
        }
        let f = &self.forecast;
        if f.horizon == 0 || f.refit_every == 0 || f.window < 50 || f.monte_carlo.paths == 0 {
            return Err(Error::Config(
                "forecast horizon, refit_every and Monte Carlo paths must be >= 1 and window >= 50".into(),
            ));
        }
        f.pinned_specs()?;
        if self.iv.trading_days < f.horizon {
            return Err(Error::Config("iv.trading_days must be >= forecast.horizon".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_constants() {
        let c = PipelineConfig::default();
        assert_eq!(c.data.cleaning_threshold, 8.0);
        assert_eq!(c.data.proxy_window, 20);
        assert_eq!(c.data.holdout, 365);
        assert_eq!(c.ewma.lambda, 0.97);
        assert_eq!((c.grid.p_max, c.grid.q_max), (5, 5));
        assert_eq!(c.grid.distributions.len(), 2);
        assert_eq!((c.forecast.window, c.forecast.horizon, c.forecast.refit_every), (200, 20, 1));
    }

    #[test]
    fn parses_toml_with_overrides() {
        let text = r#"
            seed = 3
            output_dir = "out"
            [[pairs]]
            name = "GBPUSD"
            prices = "gbpusd.csv"
            [data]
            date_column = "day"
            holdout = 100
            [grid]
            families = ["GARCH", "GJR"]
            distributions = ["t"]
            asymmetry = "tied_to_p"
            [forecast]
            specs = ["GARCH(1,1)-t"]
            monte_carlo = { paths = 50 }
        "#;
        let overrides = vec![
            "seed=11".to_string(),
            "forecast.horizon = 10".to_string(),
            "grid.p_max=2".to_string(),
            "evaluation.alignment=union".to_string(),
        ];
        let c = PipelineConfig::from_toml(text, &overrides, Path::new("/base")).unwrap();
        assert_eq!(c.seed, 11);
        assert_eq!(c.forecast.horizon, 10);
        assert_eq!(c.grid.p_max, 2);
        assert_eq!(c.grid.asymmetry, AsymmetryOrder::TiedToP);
        assert_eq!(c.grid.distributions, vec![Distribution::StudentT]);
        assert_eq!(c.data.schema.date_column, "day");
        assert_eq!(c.data.holdout, 100);
        assert_eq!(c.forecast.monte_carlo.paths, 50);
        assert_eq!(c.evaluation.alignment, Alignment::Union);
        assert_eq!(c.pairs[0].prices, PathBuf::from("/base/gbpusd.csv"));
        assert_eq!(c.output_dir, PathBuf::from("/base/out"));
        assert_eq!(c.optimizer().seed, 11);
        assert!(matches!(c.validate(), Err(Error::MissingInputs(_))));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(PipelineConfig::from_toml("sed = 1", &[], Path::new(".")).is_err());
        assert!(PipelineConfig::from_toml("", &["nokey".into()], Path::new(".")).is_err());
        let c = PipelineConfig::from_toml("", &["forecast.specs=[\"FOO(1)\"]".into()], Path::new(".")).unwrap();
        assert!(c.forecast.pinned_specs().is_err());
        assert!(matches!(PipelineConfig::default().validate(), Err(Error::Config(_))));
    }
}

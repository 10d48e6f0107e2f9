//! Lag-order grid search and normal-vs-t comparison.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{fit, FitResult, OptimizerConfig};
use crate::exec::{self, Execution};
use crate::garch::{Distribution, Family, GarchSpec};
use crate::marketdata::ReturnSeries;

/// How many γ lags asymmetric cells carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymmetryOrder {
    Fixed(usize),
    TiedToP,
}

impl Default for AsymmetryOrder {
    fn default() -> Self {
        AsymmetryOrder::Fixed(1)
    }
}

impl AsymmetryOrder {
    fn order(self, family: Family, p: usize) -> usize {
        if !family.is_asymmetric() {
            return 0;
        }
        match self {
            AsymmetryOrder::Fixed(o) => o.min(p),
            AsymmetryOrder::TiedToP => p,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridOptions {
    pub asymmetry: AsymmetryOrder,
    pub execution: Execution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Aic,
    Bic,
}

impl Criterion {
    pub fn label(self) -> &'static str {
        match self {
            Criterion::Aic => "aic",
            Criterion::Bic => "bic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub spec: GarchSpec,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub converged: bool,
}

impl GridCell {
    fn score(&self, c: Criterion) -> f64 {
        match c {
            Criterion::Aic => self.aic,
            Criterion::Bic => self.bic,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFailure {
    pub p: usize,
    pub q: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub family: Family,
    pub distribution: Distribution,
    pub p_max: usize,
    pub q_max: usize,
    pub n_obs: usize,
    /// Row-major over p = 1..=p_max, q = 1..=q_max; `None` for failed fits.
    pub cells: Vec<Option<GridCell>>,
    pub best_by_aic: GarchSpec,
    pub best_by_bic: GarchSpec,
    pub failures: Vec<GridFailure>,
}

impl GridResult {
    pub fn cell(&self, p: usize, q: usize) -> Option<&GridCell> {
        if p == 0 || q == 0 || p > self.p_max || q > self.q_max {
            return None;
        }
        self.cells[(p - 1) * self.q_max + (q - 1)].as_ref()
    }

    /// `p_max × q_max` matrix of scores, NaN where the fit failed.
    pub fn matrix(&self, criterion: Criterion) -> Vec<Vec<f64>> {
        (1..=self.p_max)
            .map(|p| {
                (1..=self.q_max)
                    .map(|q| self.cell(p, q).map_or(f64::NAN, |c| c.score(criterion)))
                    .collect()
            })
            .collect()
    }

    pub fn best(&self, criterion: Criterion) -> GarchSpec {
        match criterion {
            Criterion::Aic => self.best_by_aic,
            Criterion::Bic => self.best_by_bic,
        }
    }

    /// Rows are p, columns q. Failed cells are left empty.
    pub fn write_matrix_csv<W: Write>(&self, criterion: Criterion, w: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["p\\q".to_string()];
        header.extend((1..=self.q_max).map(|q| q.to_string()));
        wtr.write_record(&header)?;
        for p in 1..=self.p_max {
            let mut row = vec![p.to_string()];
            row.extend((1..=self.q_max).map(|q| {
                self.cell(p, q)
                    .map_or(String::new(), |c| c.score(criterion).to_string())
            }));
            wtr.write_record(&row)?;
        }
        wtr.flush()
    }
}

/// Lowest finite score; ties go to smaller p+q, then smaller p. Converged
/// cells are preferred; unconverged ones are used only if nothing converged.
fn select(cells: &[Option<GridCell>], criterion: Criterion) -> Option<GarchSpec> {
    let pick = |require_converged: bool| {
        cells
            .iter()
            .flatten()
            .filter(|c| c.score(criterion).is_finite() && (c.converged || !require_converged))
            .min_by(|a, b| {
                a.score(criterion)
                    .total_cmp(&b.score(criterion))
                    .then((a.spec.p + a.spec.q).cmp(&(b.spec.p + b.spec.q)))
                    .then(a.spec.p.cmp(&b.spec.p))
            })
            .map(|c| c.spec)
    };
    pick(true).or_else(|| pick(false))
}

/// Fits every `(p, q)` in `1..=p_max × 1..=q_max`.
pub fn grid_search(
    family: Family,
    distribution: Distribution,
    returns: &ReturnSeries,
    p_max: usize,
    q_max: usize,
    config: &OptimizerConfig,
    options: &GridOptions,
) -> Result<GridResult> {
    if p_max == 0 || q_max == 0 {
        return Err(Error::Config("grid bounds must be >= 1".into()));
    }
    let specs = (1..=p_max)
        .flat_map(|p| (1..=q_max).map(move |q| (p, q)))
        .map(|(p, q)| GarchSpec::new(family, p, options.asymmetry.order(family, p), q, distribution))
        .collect::<Result<Vec<_>>>()?;
    let fits = exec::map_slice(options.execution, &specs, |spec| fit(spec, returns, config));

    let mut cells = Vec::with_capacity(specs.len());
    let mut failures = Vec::new();
    let mut n_obs = returns.len();
    for (spec, outcome) in specs.iter().zip(fits) {
        match outcome {
            Ok(res) => {
                n_obs = res.n_obs;
                cells.push(Some(GridCell {
                    spec: *spec,
                    loglik: res.loglik,
                    aic: res.aic,
                    bic: res.bic,
                    converged: res.converged,
                }));
            }
            Err(e) => {
                failures.push(GridFailure {
                    p: spec.p,
                    q: spec.q,
                    reason: e.to_string(),
                });
                cells.push(None);
            }
        }
    }
    let best_by_aic = select(&cells, Criterion::Aic).ok_or(Error::AllCellsFailed)?;
    let best_by_bic = select(&cells, Criterion::Bic).ok_or(Error::AllCellsFailed)?;
    Ok(GridResult {
        family,
        distribution,
        p_max,
        q_max,
        n_obs,
        cells,
        best_by_aic,
        best_by_bic,
        failures,
    })
}

/// The same lag orders fitted under normal and Student-t innovations.
#[derive(Debug)]
pub struct DistributionComparison {
    pub normal: Result<FitResult>,
    pub student_t: Result<FitResult>,
}

impl DistributionComparison {
    /// AIC(t) − AIC(normal); negative when t wins.
    pub fn delta_aic(&self) -> Option<f64> {
        Some(self.student_t.as_ref().ok()?.aic - self.normal.as_ref().ok()?.aic)
    }

    /// BIC(t) − BIC(normal).
    pub fn delta_bic(&self) -> Option<f64> {
        Some(self.student_t.as_ref().ok()?.bic - self.normal.as_ref().ok()?.bic)
    }
}

/// Fits `spec`'s orders under both distributions on the same data.
pub fn compare_distributions(
    spec: &GarchSpec,
    returns: &ReturnSeries,
    config: &OptimizerConfig,
    execution: Execution,
) -> DistributionComparison {
    let arms = [Distribution::Normal, Distribution::StudentT];
    let mut fits = exec::map_slice(execution, &arms, |d| {
        let s = GarchSpec {
            distribution: *d,
            ..*spec
        };
        fit(&s, returns, config)
    });
    let student_t = fits.pop().expect("two arms");
    let normal = fits.pop().expect("two arms");
    DistributionComparison { normal, student_t }
}

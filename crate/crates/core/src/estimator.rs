//! Maximum-likelihood estimation of GARCH-family models.
//!
//! The search runs in an unconstrained coordinate system: positive
//! coefficients go through `ln`, Student-t degrees of freedom through
//! `ln(nu - 2)`, GJR asymmetry through `ln(alpha + gamma)` and TGARCH
//! asymmetry through `atanh`. EGARCH coefficients are unrestricted. A
//! Nelder-Mead pass locates the basin and BFGS polishes the optimum.
//! Standard errors come from the inverse numerical Hessian of the negative
//! log-likelihood in the natural parameterization.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garch::{
    loglik_unchecked, Distribution, Family, GarchParams, GarchSpec, MeanModel,
};
use crate::marketdata::ReturnSeries;
use crate::optim;
use crate::stats;

/// Values below this are lifted before taking logs.
pub const BOUNDARY_NUDGE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    /// Relative log-likelihood improvement below which the search stops.
    pub tolerance: f64,
    /// Additional jittered starts beyond the default initial point.
    pub restarts: usize,
    pub seed: u64,
    /// Smallest estimation sample accepted by [`fit`].
    pub min_obs: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            tolerance: 1e-9,
            restarts: 1,
            seed: 0,
            min_obs: 50,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || self.max_iterations == 0 {
            return Err(Error::Config(
                "optimizer tolerance must be > 0 and max_iterations >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub spec: GarchSpec,
    pub params: GarchParams,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    /// In the order of [`GarchSpec::param_names`]; NaN where the Hessian
    /// gives no usable variance.
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub n_obs: usize,
    pub converged: bool,
    pub iterations: usize,
    pub clamp_events: usize,
    /// Σα + Σβ (+ ½Σγ for GJR); not meaningful for EGARCH/TGARCH.
    pub persistence: f64,
}

impl FitResult {
    pub fn n_params(&self) -> usize {
        self.spec.n_params()
    }

    /// Whether a GARCH/GJR optimum is covariance stationary. Always true for
    /// the other families.
    pub fn is_stationary(&self) -> bool {
        match self.spec.family {
            Family::Garch | Family::Gjr => self.persistence < 1.0,
            _ => true,
        }
    }

    /// t-statistic of a named parameter, e.g. `gamma[1]`.
    pub fn t_stat(&self, name: &str) -> Option<f64> {
        let idx = self.spec.param_names().iter().position(|n| n == name)?;
        self.t_stats.get(idx).copied()
    }
}

pub fn information_criteria(loglik: f64, k: usize, n: usize) -> (f64, f64) {
    let k = k as f64;
    let aic = 2.0 * k - 2.0 * loglik;
    let bic = k * (n as f64).ln() - 2.0 * loglik;
    (aic, bic)
}

/// Maps feasible parameters into the unconstrained search space.
pub fn transform_to_unconstrained(spec: &GarchSpec, params: &GarchParams) -> Result<Vec<f64>> {
    params.validate(spec)?;
    let lift = |x: f64| x.max(BOUNDARY_NUDGE).ln();
    let mut u = Vec::with_capacity(spec.n_params());
    if spec.mean == MeanModel::Constant {
        u.push(params.mu);
    }
    match spec.family {
        Family::Egarch => {
            u.push(params.omega);
            u.extend_from_slice(&params.alpha);
            u.extend_from_slice(&params.gamma);
            u.extend_from_slice(&params.beta);
        }
        Family::Garch | Family::Gjr | Family::Tgarch => {
            u.push(lift(params.omega));
            u.extend(params.alpha.iter().map(|a| lift(*a)));
            for (i, g) in params.gamma.iter().enumerate() {
                if spec.family == Family::Gjr {
                    let a = params.alpha[i].max(BOUNDARY_NUDGE);
                    u.push(lift(a + g));
                } else {
                    let bound = 1.0 - BOUNDARY_NUDGE;
                    u.push(g.clamp(-bound, bound).atanh());
                }
            }
            u.extend(params.beta.iter().map(|b| lift(*b)));
        }
    }
    if let Some(nu) = params.nu {
        u.push(lift(nu - 2.0));
    }
    Ok(u)
}

pub fn transform_from_unconstrained(spec: &GarchSpec, u: &[f64]) -> Result<GarchParams> {
    if u.len() != spec.n_params() {
        return Err(Error::InvalidParams(format!(
            "expected {} unconstrained values, got {}",
            spec.n_params(),
            u.len()
        )));
    }
    Ok(decode(spec, u))
}

fn decode(spec: &GarchSpec, u: &[f64]) -> GarchParams {
    let mut it = u.iter().copied();
    let mu = match spec.mean {
        MeanModel::Constant => it.next().unwrap(),
        MeanModel::Zero => 0.0,
    };
    let positive = spec.family != Family::Egarch;
    let map = |x: f64| if positive { x.exp() } else { x };
    let omega = map(it.next().unwrap());
    let alpha: Vec<f64> = it.by_ref().take(spec.p).map(map).collect();
    let gamma: Vec<f64> = it
        .by_ref()
        .take(spec.o)
        .enumerate()
        .map(|(i, x)| match spec.family {
            Family::Gjr => x.exp() - alpha[i],
            Family::Tgarch => x.tanh(),
            _ => x,
        })
        .collect();
    let beta: Vec<f64> = it.by_ref().take(spec.q).map(map).collect();
    let nu = match spec.distribution {
        Distribution::StudentT => it.next().map(|x| 2.0 + x.exp()),
        Distribution::Normal => None,
    };
    GarchParams {
        mu,
        omega,
        alpha,
        gamma,
        beta,
        nu,
    }
}

/// Default starting point: sample mean, persistence near 0.9 and ω chosen so
/// the implied long-run variance matches the sample variance.
pub fn default_start(spec: &GarchSpec, returns: &[f64]) -> GarchParams {
    let mu = match spec.mean {
        MeanModel::Constant => stats::mean(returns),
        MeanModel::Zero => 0.0,
    };
    let resid: Vec<f64> = returns.iter().map(|r| r - mu).collect();
    let var = stats::sample_var(&resid).max(1e-8);
    let (p, o, q) = (spec.p as f64, spec.o as f64, spec.q as f64);
    let alpha = vec![0.05 / p; spec.p];
    let gamma = vec![if spec.o > 0 { 0.05 / o } else { 0.0 }; spec.o];
    let beta = vec![if spec.q > 0 { 0.85 / q } else { 0.0 }; spec.q];
    let sum_a: f64 = alpha.iter().sum();
    let sum_g: f64 = gamma.iter().sum();
    let sum_b: f64 = beta.iter().sum();
    let omega = match spec.family {
        Family::Garch => var * (1.0 - sum_a - sum_b),
        Family::Gjr => var * (1.0 - sum_a - 0.5 * sum_g - sum_b),
        Family::Egarch => (1.0 - sum_b) * var.ln(),
        Family::Tgarch => var.sqrt() * (1.0 - sum_b - 0.8 * sum_a),
    };
    let nu = (spec.distribution == Distribution::StudentT).then_some(8.0);
    GarchParams {
        mu,
        omega,
        alpha,
        gamma,
        beta,
        nu,
    }
}

pub fn fit(spec: &GarchSpec, returns: &ReturnSeries, config: &OptimizerConfig) -> Result<FitResult> {
    fit_values(spec, returns.values(), config, None)
}

/// Fits from `start` (e.g. the previous window's optimum) as well as the
/// default initial point, keeping the better optimum.
pub fn fit_from(
    spec: &GarchSpec,
    returns: &ReturnSeries,
    config: &OptimizerConfig,
    start: &GarchParams,
) -> Result<FitResult> {
    fit_values(spec, returns.values(), config, Some(start))
}

pub(crate) fn fit_values(
    spec: &GarchSpec,
    returns: &[f64],
    config: &OptimizerConfig,
    start: Option<&GarchParams>,
) -> Result<FitResult> {
    spec.validate()?;
    config.validate()?;
    let n = returns.len();
    let needed = config.min_obs.max(spec.max_lag() + 1);
    if n < needed {
        return Err(Error::SeriesTooShort { needed, got: n });
    }

    let objective = |u: &[f64]| -> f64 {
        let params = decode(spec, u);
        let (ll, _) = loglik_unchecked(spec, &params, returns);
        -ll / n as f64
    };

    let default_u = transform_to_unconstrained(spec, &default_start(spec, returns))?;
    let mut starts = Vec::new();
    if let Some(u) = start.and_then(|p| transform_to_unconstrained(spec, p).ok()) {
        starts.push(u);
    }
    if starts.first() != Some(&default_u) {
        starts.push(default_u);
    }
    let u0 = starts[0].clone();
    let scale = stats::sample_std(returns).max(1e-4);
    let steps: Vec<f64> = spec_steps(spec, scale);

    let jitter = Normal::new(0.0, 0.25).expect("valid normal");
    for r in 1..=config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        starts.push(u0.iter().map(|x| x + jitter.sample(&mut rng)).collect());
    }

    let nm_iter = config.max_iterations.min(200 + 60 * spec.n_params());
    let mut best: Option<optim::Minimum> = None;
    let mut iterations = 0;
    for s in &starts {
        let coarse = optim::nelder_mead(objective, s, &steps, nm_iter, 1e-8, 1e-4);
        let remaining = config.max_iterations.saturating_sub(coarse.iterations).max(1);
        let fine = optim::bfgs(objective, &coarse.x, remaining, config.tolerance, 1e-9);
        let polished = if fine.f <= coarse.f { fine } else { coarse.clone() };
        iterations += coarse.iterations + polished.iterations;
        let merged = optim::Minimum {
            iterations: coarse.iterations + polished.iterations,
            ..polished
        };
        if merged.f.is_finite() && best.as_ref().is_none_or(|b| merged.f < b.f) {
            best = Some(merged);
        }
    }
    let best = best.ok_or_else(|| {
        Error::OptimizationFailed(format!("{spec}: every start produced a non-finite likelihood"))
    })?;

    let params = decode(spec, &best.x);
    let (loglik, clamp_events) = loglik_unchecked(spec, &params, returns);
    if !loglik.is_finite() {
        return Err(Error::OptimizationFailed(format!("{spec}: non-finite optimum")));
    }
    let k = spec.n_params();
    let (aic, bic) = information_criteria(loglik, k, n);
    let std_errors = standard_errors(spec, &params, returns);
    let theta = params.to_vec(spec);
    let t_stats = theta
        .iter()
        .zip(&std_errors)
        .map(|(v, se)| if *se > 0.0 { v / se } else { f64::NAN })
        .collect();
    let persistence = params.persistence(spec);
    Ok(FitResult {
        spec: *spec,
        params,
        loglik,
        aic,
        bic,
        std_errors,
        t_stats,
        n_obs: n,
        converged: best.converged,
        iterations: iterations.max(best.iterations),
        clamp_events,
        persistence,
    })
}

fn spec_steps(spec: &GarchSpec, scale: f64) -> Vec<f64> {
    let mut steps = Vec::with_capacity(spec.n_params());
    if spec.mean == MeanModel::Constant {
        steps.push(0.05 * scale);
    }
    let coef = if spec.family == Family::Egarch { 0.1 } else { 0.3 };
    steps.extend(std::iter::repeat_n(coef, 1 + spec.p + spec.o + spec.q));
    if spec.distribution == Distribution::StudentT {
        steps.push(0.3);
    }
    steps
}

/// Square roots of the diagonal of the inverse Hessian of −ℓ at `params`.
pub fn standard_errors(spec: &GarchSpec, params: &GarchParams, returns: &[f64]) -> Vec<f64> {
    let theta = params.to_vec(spec);
    let k = theta.len();
    let f = |x: &[f64]| -> f64 {
        match GarchParams::from_vec(spec, x) {
            Ok(p) => -loglik_unchecked(spec, &p, returns).0,
            Err(_) => f64::NAN,
        }
    };
    let h: Vec<f64> = theta.iter().map(|x| 1e-4 * x.abs().max(1e-2)).collect();
    let hess = optim::central_hessian(&f, &theta, &h);
    if hess.iter().any(|v| !v.is_finite()) {
        return vec![f64::NAN; k];
    }
    let cov = match invert_symmetric(hess) {
        Some(c) => c,
        None => return vec![f64::NAN; k],
    };
    (0..k)
        .map(|i| {
            let v = cov[(i, i)];
            if v > 0.0 && v.is_finite() {
                v.sqrt()
            } else {
                f64::NAN
            }
        })
        .collect()
}

fn invert_symmetric(m: DMatrix<f64>) -> Option<DMatrix<f64>> {
    if let Some(chol) = m.clone().cholesky() {
        return Some(chol.inverse());
    }
    m.try_inverse()
}

//! GARCH-family conditional variance models.
//!
//! Four variance equations share one parameter layout:
//!
//! * `GARCH`:  σ²ₜ = ω + Σ αᵢ ε²ₜ₋ᵢ + Σ βⱼ σ²ₜ₋ⱼ
//! * `GJR`:    σ²ₜ = ω + Σ (αᵢ + γᵢ 1[εₜ₋ᵢ < 0]) ε²ₜ₋ᵢ + Σ βⱼ σ²ₜ₋ⱼ
//! * `EGARCH`: ln σ²ₜ = ω + Σ αᵢ (|zₜ₋ᵢ| − E|z|) + Σ γᵢ zₜ₋ᵢ + Σ βⱼ ln σ²ₜ₋ⱼ
//! * `TGARCH`: σₜ = ω + Σ αᵢ [(1 − γᵢ) ε⁺ₜ₋ᵢ − (1 + γᵢ) ε⁻ₜ₋ᵢ] + Σ βⱼ σₜ₋ⱼ
//!
//! with ε⁺ = max(ε, 0), ε⁻ = min(ε, 0) and zₜ = εₜ / σₜ. Returns are in
//! percent, so variances are in squared percent.

mod filter;
mod likelihood;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use filter::{one_step_variance, variance_filter, variance_filter_values, Innovations};
pub use likelihood::{
    expected_abs_innovation, log_likelihood, loglik_terms, unconditional_variance,
};
pub(crate) use filter::Recursion;
pub(crate) use likelihood::loglik_unchecked;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    Garch,
    Egarch,
    Gjr,
    Tgarch,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Garch, Family::Egarch, Family::Gjr, Family::Tgarch];

    pub fn is_asymmetric(self) -> bool {
        !matches!(self, Family::Garch)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Garch => "GARCH",
            Family::Egarch => "EGARCH",
            Family::Gjr => "GJR",
            Family::Tgarch => "TGARCH",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GARCH" => Ok(Family::Garch),
            "EGARCH" => Ok(Family::Egarch),
            "GJR" | "GJR-GARCH" => Ok(Family::Gjr),
            "TGARCH" => Ok(Family::Tgarch),
            other => Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    Normal,
    #[serde(alias = "t", alias = "student_t")]
    StudentT,
}

impl Distribution {
    pub fn short(self) -> &'static str {
        match self {
            Distribution::Normal => "normal",
            Distribution::StudentT => "t",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" | "n" => Ok(Distribution::Normal),
            "t" | "studentt" | "student_t" => Ok(Distribution::StudentT),
            other => Err(Error::InvalidSpec(format!("unknown distribution `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanModel {
    #[default]
    Constant,
    Zero,
}

/// Model family, lag orders and innovation distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GarchSpec {
    pub family: Family,
    /// ARCH order (number of α terms).
    pub p: usize,
    /// Asymmetry order (number of γ terms).
    pub o: usize,
    /// GARCH order (number of β terms).
    pub q: usize,
    pub distribution: Distribution,
    #[serde(default)]
    pub mean: MeanModel,
}

impl GarchSpec {
    pub fn new(
        family: Family,
        p: usize,
        o: usize,
        q: usize,
        distribution: Distribution,
    ) -> Result<Self> {
        let spec = Self {
            family,
            p,
            o,
            q,
            distribution,
            mean: MeanModel::Constant,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn garch(p: usize, q: usize, distribution: Distribution) -> Self {
        Self::new(Family::Garch, p, 0, q, distribution).expect("valid GARCH orders")
    }

    pub fn with_mean(mut self, mean: MeanModel) -> Self {
        self.mean = mean;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidSpec("p must be at least 1".into()));
        }
        if self.o > self.p {
            return Err(Error::InvalidSpec(format!(
                "o ({}) must not exceed p ({})",
                self.o, self.p
            )));
        }
        if self.family == Family::Garch && self.o != 0 {
            return Err(Error::InvalidSpec("plain GARCH has no asymmetry terms".into()));
        }
        Ok(())
    }

    /// Number of estimated parameters.
    pub fn n_params(&self) -> usize {
        let mean = usize::from(self.mean == MeanModel::Constant);
        let nu = usize::from(self.distribution == Distribution::StudentT);
        mean + 1 + self.p + self.o + self.q + nu
    }

    /// Longest lag in the variance equation.
    pub fn max_lag(&self) -> usize {
        self.p.max(self.q)
    }

    pub fn param_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.n_params());
        if self.mean == MeanModel::Constant {
            names.push("mu".to_string());
        }
        names.push("omega".to_string());
        names.extend((1..=self.p).map(|i| format!("alpha[{i}]")));
        names.extend((1..=self.o).map(|i| format!("gamma[{i}]")));
        names.extend((1..=self.q).map(|i| format!("beta[{i}]")));
        if self.distribution == Distribution::StudentT {
            names.push("nu".to_string());
        }
        names
    }

    /// Label without the distribution, e.g. `GJR(1,1,1)` or `GARCH(2,2)`.
    pub fn order_label(&self) -> String {
        match self.family {
            Family::Garch => format!("GARCH({},{})", self.p, self.q),
            f => format!("{}({},{},{})", f.name(), self.p, self.o, self.q),
        }
    }
}

impl fmt::Display for GarchSpec {
    /// `GJR(1,1,1)-t`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.order_label(), self.distribution.short())
    }
}

impl FromStr for GarchSpec {
    type Err = Error;

    /// Parses labels such as `GARCH(1,1)-t`, `GJR(2,1,2)-normal` or
    /// `EGARCH(1,1,1)` (normal innovations when no suffix is given).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse model label `{s}`"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let close = s.find(')').ok_or_else(bad)?;
        let family: Family = s[..open].parse()?;
        let orders = s[open + 1..close]
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let rest = s[close + 1..].trim_start_matches('-');
        let distribution = if rest.is_empty() {
            Distribution::Normal
        } else {
            rest.parse()?
        };
        match (family, orders.as_slice()) {
            (Family::Garch, [p, q]) => GarchSpec::new(family, *p, 0, *q, distribution),
            (_, [p, o, q]) => GarchSpec::new(family, *p, *o, *q, distribution),
            _ => Err(bad()),
        }
    }
}

/// Fitted or user-supplied coefficients for a [`GarchSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchParams {
    pub mu: f64,
    pub omega: f64,
    pub alpha: Vec<f64>,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub nu: Option<f64>,
}

impl GarchParams {
    /// Flattens to `[mu?, omega, alpha.., gamma.., beta.., nu?]`.
    pub fn to_vec(&self, spec: &GarchSpec) -> Vec<f64> {
        let mut v = Vec::with_capacity(spec.n_params());
        if spec.mean == MeanModel::Constant {
            v.push(self.mu);
        }
        v.push(self.omega);
        v.extend_from_slice(&self.alpha);
        v.extend_from_slice(&self.gamma);
        v.extend_from_slice(&self.beta);
        if let Some(nu) = self.nu {
            v.push(nu);
        }
        v
    }

    pub fn from_vec(spec: &GarchSpec, v: &[f64]) -> Result<Self> {
        if v.len() != spec.n_params() {
            return Err(Error::InvalidParams(format!(
                "expected {} parameters for {spec}, got {}",
                spec.n_params(),
                v.len()
            )));
        }
        let mut it = v.iter().copied();
        let mu = match spec.mean {
            MeanModel::Constant => it.next().unwrap(),
            MeanModel::Zero => 0.0,
        };
        let omega = it.next().unwrap();
        let alpha: Vec<f64> = it.by_ref().take(spec.p).collect();
        let gamma: Vec<f64> = it.by_ref().take(spec.o).collect();
        let beta: Vec<f64> = it.by_ref().take(spec.q).collect();
        let nu = match spec.distribution {
            Distribution::StudentT => it.next(),
            Distribution::Normal => None,
        };
        Ok(Self {
            mu,
            omega,
            alpha,
            gamma,
            beta,
            nu,
        })
    }

    /// Checks shapes and the family's admissible region.
    pub fn validate(&self, spec: &GarchSpec) -> Result<()> {
        spec.validate()?;
        if self.alpha.len() != spec.p || self.gamma.len() != spec.o || self.beta.len() != spec.q {
            return Err(Error::InvalidParams(format!(
                "coefficient counts ({}, {}, {}) do not match {spec}",
                self.alpha.len(),
                self.gamma.len(),
                self.beta.len()
            )));
        }
        let all = self.to_vec(spec);
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite coefficient".into()));
        }
        if spec.mean == MeanModel::Zero && self.mu != 0.0 {
            return Err(Error::InvalidParams("zero-mean model requires mu = 0".into()));
        }
        match (spec.distribution, self.nu) {
            (Distribution::StudentT, Some(nu)) if nu > 2.0 => {}
            (Distribution::StudentT, Some(nu)) => {
                return Err(Error::InvalidParams(format!("nu > 2 violated (nu = {nu})")))
            }
            (Distribution::StudentT, None) => {
                return Err(Error::InvalidParams("Student-t model requires nu".into()))
            }
            (Distribution::Normal, Some(_)) => {
                return Err(Error::InvalidParams("normal model takes no nu".into()))
            }
            (Distribution::Normal, None) => {}
        }
        match spec.family {
            Family::Egarch => {}
            Family::Garch | Family::Gjr | Family::Tgarch => {
                if !(self.omega > 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "omega > 0 violated (omega = {})",
                        self.omega
                    )));
                }
                if let Some((i, a)) = self.alpha.iter().enumerate().find(|(_, a)| **a < 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "alpha[{}] >= 0 violated ({a})",
                        i + 1
                    )));
                }
                if let Some((j, b)) = self.beta.iter().enumerate().find(|(_, b)| **b < 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "beta[{}] >= 0 violated ({b})",
                        j + 1
                    )));
                }
                for (i, g) in self.gamma.iter().enumerate() {
                    if spec.family == Family::Gjr && self.alpha[i] + g < 0.0 {
                        return Err(Error::InvalidParams(format!(
                            "alpha[{0}] + gamma[{0}] >= 0 violated",
                            i + 1
                        )));
                    }
                    if spec.family == Family::Tgarch && g.abs() > 1.0 {
                        return Err(Error::InvalidParams(format!(
                            "|gamma[{}]| <= 1 violated ({g})",
                            i + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Σα + Σβ (+ ½Σγ for GJR).
    pub fn persistence(&self, spec: &GarchSpec) -> f64 {
        let base: f64 = self.alpha.iter().sum::<f64>() + self.beta.iter().sum::<f64>();
        match spec.family {
            Family::Gjr => base + 0.5 * self.gamma.iter().sum::<f64>(),
            _ => base,
        }
    }
}

//! Ordinary least squares with the usual diagnostics.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use crate::error::{Error, Result};

/// Relative size of an R diagonal entry below which the design is rank
/// deficient.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    /// Intercept first, then one coefficient per regressor column.
    pub coefficients: Vec<f64>,
    pub names: Vec<String>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub f_stat: f64,
    pub f_p_value: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_obs: usize,
    pub df_resid: usize,
}

impl OlsFit {
    pub fn k(&self) -> usize {
        self.coefficients.len()
    }
}

/// OLS of `y` on an intercept plus the given regressor columns, solved by
/// Householder QR.
pub fn ols(columns: &[&[f64]], names: &[&str], y: &[f64]) -> Result<OlsFit> {
    let n = y.len();
    let k = columns.len() + 1;
    if columns.iter().any(|c| c.len() != n) || names.len() != columns.len() {
        return Err(Error::MisalignedSeries("regressor and target lengths differ".into()));
    }
    if n < k {
        return Err(Error::TooFewObservations { needed: k, got: n });
    }
    if y.iter().chain(columns.iter().flat_map(|c| c.iter())).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInputs("non-finite value in regression data".into()));
    }
    let x = DMatrix::from_fn(n, k, |i, j| if j == 0 { 1.0 } else { columns[j - 1][i] });
    let yv = DVector::from_column_slice(y);

    let qr = x.clone().qr();
    let r = qr.r();
    let scale = (0..k).map(|j| x.column(j).norm()).fold(0.0, f64::max);
    if (0..k).any(|j| r[(j, j)].abs() <= RANK_TOLERANCE * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::SingularDesign);
    }
    let qty = qr.q().transpose() * &yv;
    let beta = r.solve_upper_triangular(&qty).ok_or(Error::SingularDesign)?;

    let fitted = &x * &beta;
    let resid = &yv - &fitted;
    let ssr = resid.norm_squared();
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    let df_resid = n - k;
    let df_model = k - 1;
    let nf = n as f64;

    let r_squared = if tss > 0.0 { (1.0 - ssr / tss).clamp(0.0, 1.0) } else { 0.0 };
    let adj_r_squared = if tss > 0.0 && df_resid > 0 {
        1.0 - (1.0 - r_squared) * (nf - 1.0) / df_resid as f64
    } else {
        r_squared
    };
    let sigma2 = if df_resid > 0 { ssr / df_resid as f64 } else { f64::NAN };

    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or(Error::SingularDesign)?;
    let cov_unscaled = &r_inv * r_inv.transpose();
    let std_errors: Vec<f64> = (0..k).map(|j| (sigma2 * cov_unscaled[(j, j)]).sqrt()).collect();
    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let t_stats: Vec<f64> = coefficients.iter().zip(&std_errors).map(|(b, s)| b / s).collect();
    let p_values = match StudentsT::new(0.0, 1.0, df_resid as f64) {
        Ok(t) if df_resid > 0 => t_stats
            .iter()
            .map(|v| if v.is_finite() { 2.0 * t.sf(v.abs()) } else { f64::NAN })
            .collect(),
        _ => vec![f64::NAN; k],
    };

    let ess = tss - ssr;
    let f_stat = if df_model > 0 && df_resid > 0 {
        (ess / df_model as f64) / sigma2
    } else {
        f64::NAN
    };
    let f_p_value = match FisherSnedecor::new(df_model as f64, df_resid as f64) {
        Ok(f) if f_stat.is_finite() => f.sf(f_stat),
        _ => f64::NAN,
    };

    let loglik = -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + (ssr / nf).ln() + 1.0);
    let (aic, bic) = crate::estimator::information_criteria(loglik, k, n);
    let mut all_names = vec!["const".to_string()];
    all_names.extend(names.iter().map(|s| s.to_string()));
    Ok(OlsFit {
        coefficients,
        names: all_names,
        std_errors,
        t_stats,
        p_values,
        residuals: resid.iter().copied().collect(),
        r_squared,
        adj_r_squared,
        f_stat,
        f_p_value,
        loglik,
        aic,
        bic,
        n_obs: n,
        df_resid,
    })
}

/// Key-value block in the layout of a standard "OLS Regression Results"
/// summary.
pub struct OlsReport<'a> {
    pub fit: &'a OlsFit,
    pub dep_variable: &'a str,
    pub model: &'a str,
}

impl fmt::Display for OlsReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fit = self.fit;
        writeln!(f, "OLS Regression Results")?;
        writeln!(f, "Dep. Variable: {}", self.dep_variable)?;
        writeln!(f, "Model: {}", self.model)?;
        writeln!(f, "Method: Least Squares")?;
        writeln!(f, "No. Observations: {}", fit.n_obs)?;
        writeln!(f, "Df Residuals: {}", fit.df_resid)?;
        writeln!(f, "Df Model: {}", fit.k() - 1)?;
        writeln!(f, "R-squared: {:.6}", fit.r_squared)?;
        writeln!(f, "Adj. R-squared: {:.6}", fit.adj_r_squared)?;
        writeln!(f, "F-statistic: {:.6}", fit.f_stat)?;
        writeln!(f, "Prob (F-statistic): {:.6e}", fit.f_p_value)?;
        writeln!(f, "Log-Likelihood: {:.6}", fit.loglik)?;
        writeln!(f, "AIC: {:.6}", fit.aic)?;
        writeln!(f, "BIC: {:.6}", fit.bic)?;
        writeln!(f, "{:<8} {:>14} {:>14} {:>10} {:>10}", "", "coef", "std err", "t", "P>|t|")?;
        for i in 0..fit.k() {
            writeln!(
                f,
                "{:<8} {:>14.6} {:>14.6} {:>10.3} {:>10.3}",
                fit.names[i], fit.coefficients[i], fit.std_errors[i], fit.t_stats[i], fit.p_values[i]
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let fit = ols(&[&[0.0, 1.0]], &["x1"], &[1.0, 3.0]).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_target() {
        let fit = ols(&[&[0.0, 1.0, 2.0, 5.0]], &["x1"], &[2.0; 4]).unwrap();
        assert!(fit.coefficients[1].abs() < 1e-12);
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert_eq!(fit.r_squared, 0.0);
    }

    #[test]
    fn collinear_and_short_designs() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let x2 = [2.0, 4.0, 6.0, 8.0];
        assert!(matches!(ols(&[&x, &x2], &["a", "b"], &[1.0, 0.0, 2.0, 1.0]), Err(Error::SingularDesign)));
        assert!(matches!(ols(&[&[3.0; 4]], &["c"], &[1.0, 0.0, 2.0, 1.0]), Err(Error::SingularDesign)));
        assert!(matches!(ols(&[&x[..1]], &["a"], &[1.0]), Err(Error::TooFewObservations { .. })));
        assert!(matches!(ols(&[&x[..3]], &["a"], &[1.0; 4]), Err(Error::MisalignedSeries(_))));
    }

    #[test]
    fn diagnostics_against_known_values() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [1.7, 1.9, 2.6, 3.2, 3.4, 4.1];
        let fit = ols(&[&x], &["x1"], &y).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
        assert!(close(fit.coefficients[0], 1.1066666666666667), "{:?}", fit.coefficients);
        assert!(close(fit.coefficients[1], 0.48857142857142857));
        assert!(close(fit.r_squared, 0.9786690466893513));
        assert!(close(fit.adj_r_squared, 0.973336308361689));
        assert!(close(fit.f_stat, 183.52092050209214));
        assert!(close(fit.f_p_value, 0.00017185657925422587));
        assert!(close(fit.loglik, 4.050765077738771));
        assert!(close(fit.aic, -4.101530155477542));
        assert!(close(fit.bic, -4.518011217021432));
        assert!((fit.std_errors[0] - 0.14045278).abs() < 1e-8);
        assert!((fit.std_errors[1] - 0.03606495).abs() < 1e-8);
        assert!((fit.p_values[0] - 0.00140266).abs() < 1e-8);
        assert!(fit.adj_r_squared <= fit.r_squared);
        for i in 0..2 {
            assert!((fit.t_stats[i] - fit.coefficients[i] / fit.std_errors[i]).abs() < 1e-12);
        }
        let text = OlsReport {
            fit: &fit,
            dep_variable: "y",
            model: "OLS",
        }
        .to_string();
        for key in ["Dep. Variable:", "R-squared:", "Adj. R-squared:", "AIC:", "BIC:", "P>|t|", "No. Observations: 6"] {
            assert!(text.contains(key), "{key}");
        }
    }
}

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::marketdata::ReturnSeries;

use super::filter::{filter_unchecked, Innovations};
use super::{Distribution, Family, GarchParams, GarchSpec};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// E|z| for a unit-variance innovation.
pub fn expected_abs_innovation(distribution: Distribution, nu: Option<f64>) -> Result<f64> {
    match distribution {
        Distribution::Normal => Ok((2.0 / PI).sqrt()),
        Distribution::StudentT => {
            let nu = nu.ok_or_else(|| Error::InvalidParams("Student-t requires nu".into()))?;
            if !(nu > 2.0) {
                return Err(Error::InvalidParams(format!("nu > 2 violated (nu = {nu})")));
            }
            let ratio = (ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu)).exp();
            Ok(2.0 * (nu - 2.0).sqrt() * ratio / (PI.sqrt() * (nu - 1.0)))
        }
    }
}

/// Per-observation log densities of the residuals given their variances.
pub fn loglik_terms(distribution: Distribution, nu: Option<f64>, inn: &Innovations) -> Vec<f64> {
    match distribution {
        Distribution::Normal => inn
            .residuals
            .iter()
            .zip(&inn.variances)
            .map(|(e, v)| -0.5 * (LN_2PI + v.ln() + e * e / v))
            .collect(),
        Distribution::StudentT => {
            let nu = nu.unwrap_or(f64::NAN);
            let c = t_constant(nu);
            inn.residuals
                .iter()
                .zip(&inn.variances)
                .map(|(e, v)| c - 0.5 * v.ln() - 0.5 * (nu + 1.0) * (e * e / (v * (nu - 2.0))).ln_1p())
                .collect()
        }
    }
}

fn t_constant(nu: f64) -> f64 {
    ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (PI * (nu - 2.0)).ln()
}

/// Gaussian or standardized Student-t log-likelihood summed over every
/// observation.
pub fn log_likelihood(spec: &GarchSpec, params: &GarchParams, returns: &ReturnSeries) -> Result<f64> {
    params.validate(spec)?;
    let n = returns.len();
    if n <= spec.max_lag() {
        return Err(Error::SeriesTooShort {
            needed: spec.max_lag(),
            got: n,
        });
    }
    let (ll, _) = loglik_unchecked(spec, params, returns.values());
    if ll.is_finite() {
        Ok(ll)
    } else {
        Err(Error::NonFiniteLikelihood)
    }
}

/// Log-likelihood and clamp count without parameter validation. Returns NaN
/// for Student-t with nu <= 2.
pub(crate) fn loglik_unchecked(spec: &GarchSpec, params: &GarchParams, returns: &[f64]) -> (f64, usize) {
    if spec.distribution == Distribution::StudentT && !params.nu.is_some_and(|nu| nu > 2.0) {
        return (f64::NAN, 0);
    }
    let inn = filter_unchecked(spec, params, returns);
    let ll = match spec.distribution {
        Distribution::Normal => inn
            .residuals
            .iter()
            .zip(&inn.variances)
            .map(|(e, v)| v.ln() + e * e / v)
            .sum::<f64>()
            .mul_add(-0.5, -0.5 * LN_2PI * inn.len() as f64),
        Distribution::StudentT => loglik_terms(spec.distribution, params.nu, &inn).iter().sum(),
    };
    (ll, inn.clamp_events)
}

/// Long-run variance for GARCH and GJR; `None` for families without a
/// closed form here.
pub fn unconditional_variance(spec: &GarchSpec, params: &GarchParams) -> Result<Option<f64>> {
    match spec.family {
        Family::Garch | Family::Gjr => {
            let persistence = params.persistence(spec);
            if persistence >= 1.0 {
                return Err(Error::NonStationary(persistence));
            }
            Ok(Some(params.omega / (1.0 - persistence)))
        }
        Family::Egarch | Family::Tgarch => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(e: f64, v: f64) -> Innovations {
        Innovations {
            residuals: vec![e],
            variances: vec![v],
            standardized: vec![e / v.sqrt()],
            clamp_events: 0,
        }
    }

    #[test]
    fn normal_spot_values() {
        let ll = loglik_terms(Distribution::Normal, None, &single(0.0, 1.0))[0];
        assert!((ll - (-0.918_938_533_204_672_7)).abs() < 1e-12);
        let e2 = 1f64.exp().powi(2);
        let ll = loglik_terms(Distribution::Normal, None, &single(0.0, e2))[0];
        assert!((ll - (-0.918_938_533_204_672_7 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn student_t_tends_to_normal() {
        let ll = loglik_terms(Distribution::StudentT, Some(1e6), &single(0.0, 1.0))[0];
        assert!((ll - (-0.918_938_533_204_672_7)).abs() < 1e-5, "{ll}");
        let ll = loglik_terms(Distribution::StudentT, Some(1e6), &single(1.3, 2.0))[0];
        let n = loglik_terms(Distribution::Normal, None, &single(1.3, 2.0))[0];
        assert!((ll - n).abs() < 1e-5);
    }

    #[test]
    fn expected_abs_values() {
        let normal = expected_abs_innovation(Distribution::Normal, None).unwrap();
        assert!((normal - 0.797_884_6).abs() < 1e-7);
        let big = expected_abs_innovation(Distribution::StudentT, Some(1e6)).unwrap();
        assert!((big - normal).abs() < 1e-5);
        // nu = 3: 2 * 1 * Gamma(2) / (sqrt(pi) * 2 * Gamma(3/2)) = 2 / pi
        let three = expected_abs_innovation(Distribution::StudentT, Some(3.0)).unwrap();
        assert!((three - 2.0 / PI).abs() < 1e-13, "{three}");
        assert!(expected_abs_innovation(Distribution::StudentT, Some(2.0)).is_err());
        assert!(expected_abs_innovation(Distribution::StudentT, None).is_err());
    }

    #[test]
    fn expected_abs_matches_quadrature() {
        // Trapezoid integral of |z| f(z) for the unit-variance t(5).
        let nu: f64 = 5.0;
        let scale = ((nu - 2.0) / nu).sqrt();
        let c = (ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu)).exp() / (nu * PI).sqrt();
        let dens = |z: f64| {
            let x = z / scale;
            c * (1.0 + x * x / nu).powf(-0.5 * (nu + 1.0)) / scale
        };
        let h = 1e-3;
        let mut acc = 0.0;
        let mut z = 0.0;
        while z < 2000.0 {
            acc += 0.5 * h * (z * dens(z) + (z + h) * dens(z + h));
            z += h;
        }
        let quad = 2.0 * acc;
        let formula = expected_abs_innovation(Distribution::StudentT, Some(nu)).unwrap();
        assert!((quad - formula).abs() < 1e-5, "{quad} vs {formula}");
    }

    #[test]
    fn unconditional_values() {
        let spec = GarchSpec::garch(1, 1, Distribution::Normal);
        let p = GarchParams {
            mu: 0.0,
            omega: 0.05,
            alpha: vec![0.1],
            gamma: vec![],
            beta: vec![0.85],
            nu: None,
        };
        assert!((unconditional_variance(&spec, &p).unwrap().unwrap() - 1.0).abs() < 1e-12);
        let unit = GarchParams {
            beta: vec![0.9],
            ..p.clone()
        };
        assert!(matches!(
            unconditional_variance(&spec, &unit),
            Err(Error::NonStationary(_))
        ));
        let gjr = GarchSpec::new(Family::Gjr, 1, 1, 1, Distribution::Normal).unwrap();
        let g = GarchParams {
            alpha: vec![0.05],
            gamma: vec![0.1],
            ..p.clone()
        };
        assert!((unconditional_variance(&gjr, &g).unwrap().unwrap() - 1.0).abs() < 1e-12);
        let eg = GarchSpec::new(Family::Egarch, 1, 1, 1, Distribution::Normal).unwrap();
        assert_eq!(unconditional_variance(&eg, &g).unwrap(), None);
    }

    #[test]
    fn full_likelihood_matches_terms() {
        let spec = GarchSpec::garch(1, 1, Distribution::StudentT);
        let p = GarchParams {
            mu: 0.01,
            omega: 0.05,
            alpha: vec![0.1],
            gamma: vec![],
            beta: vec![0.85],
            nu: Some(6.0),
        };
        let r = ReturnSeries::from_values(vec![0.3, -1.2, 0.4, 2.0, -0.1, 0.0]).unwrap();
        let ll = log_likelihood(&spec, &p, &r).unwrap();
        let inn = crate::garch::variance_filter(&spec, &p, &r).unwrap();
        let sum: f64 = loglik_terms(spec.distribution, p.nu, &inn).iter().sum();
        assert!((ll - sum).abs() < 1e-12);
    }
}

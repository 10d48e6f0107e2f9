//! Seeded simulation of GARCH-family return paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal, StudentT};

use crate::error::{Error, Result};
use crate::garch::{Distribution, Family, GarchParams, GarchSpec, Recursion};

/// Unit-variance innovation draws for a given distribution.
#[derive(Debug, Clone, Copy)]
pub struct InnovationSampler {
    student: Option<(StudentT<f64>, f64)>,
}

impl InnovationSampler {
    pub fn new(distribution: Distribution, nu: Option<f64>) -> Result<Self> {
        let student = match distribution {
            Distribution::Normal => None,
            Distribution::StudentT => {
                let nu = nu
                    .filter(|v| *v > 2.0)
                    .ok_or_else(|| Error::InvalidParams("nu > 2 required".into()))?;
                let t = StudentT::new(nu).map_err(|e| Error::InvalidParams(e.to_string()))?;
                Some((t, ((nu - 2.0) / nu).sqrt()))
            }
        };
        Ok(Self { student })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.student {
            None => StandardNormal.sample(rng),
            Some((t, scale)) => t.sample(rng) * scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPath {
    pub returns: Vec<f64>,
    pub variances: Vec<f64>,
}

/// Simulates `n` returns after discarding `burn` warm-up draws.
pub fn simulate(spec: &GarchSpec, params: &GarchParams, n: usize, burn: usize, seed: u64) -> Result<SimulatedPath> {
    params.validate(spec)?;
    let sampler = InnovationSampler::new(spec.distribution, params.nu)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rec = Recursion::new(spec, params);
    let seed_var = long_run_guess(spec, params);
    let seed_state = rec.state_of_variance(seed_var);
    let total = n + burn;
    let mut eps = Vec::with_capacity(total);
    let mut vars = Vec::with_capacity(total);
    let mut states = Vec::with_capacity(total);
    for t in 0..total {
        let raw = rec.next_state(
            |i| if i <= t { eps[t - i] } else { 0.0 },
            |i| if i <= t { vars[t - i] } else { seed_var },
            |i| if i <= t { states[t - i] } else { seed_state },
        );
        let (h, _) = rec.clamp(raw);
        let v = rec.variance(h);
        let z = sampler.sample(&mut rng);
        eps.push(v.sqrt() * z);
        vars.push(v);
        states.push(h);
    }
    Ok(SimulatedPath {
        returns: eps[burn..].iter().map(|e| params.mu + e).collect(),
        variances: vars[burn..].to_vec(),
    })
}

fn long_run_guess(spec: &GarchSpec, params: &GarchParams) -> f64 {
    let sum_b: f64 = params.beta.iter().sum();
    let sum_a: f64 = params.alpha.iter().sum();
    let guess = match spec.family {
        Family::Garch | Family::Gjr => params.omega / (1.0 - params.persistence(spec)),
        Family::Egarch => (params.omega / (1.0 - sum_b)).exp(),
        Family::Tgarch => (params.omega / (1.0 - sum_b - 0.8 * sum_a)).powi(2),
    };
    if guess.is_finite() && guess > 0.0 {
        guess
    } else {
        params.omega.abs().max(1e-6)
    }
}

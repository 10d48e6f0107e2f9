//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails outside the documented tolerated set.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use fxvol::estimator::{fit, OptimizerConfig};
use fxvol::evaluation::{mae_values, rmse_values};
use fxvol::exec::{self, Execution};
use fxvol::forecast::{variance_path_forecast, ForecastState, MonteCarloConfig};
use fxvol::garch::{
    loglik_terms, variance_filter_values, Distribution, Family, GarchParams, GarchSpec, Innovations,
};
use fxvol::ivmodel::{bs_call_price, bs_vega, implied_vol, ols, BsInputs};
use fxvol::marketdata::{compute_returns, distribution_stats, smooth_outliers, PriceSeries, ReturnSeries};
use fxvol::selection::{compare_distributions, grid_search, GridOptions};
use fxvol::simulate::simulate;
use fxvol::synthetic::{generate, SyntheticConfig};

struct Outcome {
    pass: bool,
    /// A failure that is understood and recorded rather than a defect.
    tolerated: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            tolerated: false,
            detail,
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal_draws(r: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * r.sample::<f64, _>(StandardNormal)).collect()
}

fn sample_var(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
}

fn garch11(omega: f64, alpha: f64, beta: f64) -> GarchParams {
    GarchParams {
        mu: 0.0,
        omega,
        alpha: vec![alpha],
        gamma: vec![],
        beta: vec![beta],
        nu: None,
    }
}

fn simulated(spec: &GarchSpec, params: &GarchParams, n: usize, seed: u64) -> ReturnSeries {
    ReturnSeries::from_values(simulate(spec, params, n, 500, seed).unwrap().returns).unwrap()
}

// ---------------------------------------------------------------- 1

fn gamma_fn(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

fn e_abs(distribution: Distribution, nu: Option<f64>) -> f64 {
    match distribution {
        Distribution::Normal => (2.0 / std::f64::consts::PI).sqrt(),
        Distribution::StudentT => {
            let nu = nu.unwrap();
            2.0 * (nu - 2.0).sqrt() * gamma_fn((nu + 1.0) / 2.0)
                / (std::f64::consts::PI.sqrt() * (nu - 1.0) * gamma_fn(nu / 2.0))
        }
    }
}

/// Straight loop over the textbook variance equations.
fn naive_variances(spec: &GarchSpec, p: &GarchParams, r: &[f64]) -> Vec<f64> {
    let n = r.len();
    let eps: Vec<f64> = r.iter().map(|x| x - p.mu).collect();
    let seed = sample_var(&eps);
    let mut var = vec![0.0; n];
    for t in 0..n {
        let e = |i: usize| if t >= i { eps[t - i] } else { 0.0 };
        let v = |i: usize| if t >= i { var[t - i] } else { seed };
        let mut s = p.omega;
        match spec.family {
            Family::Garch | Family::Gjr => {
                for i in 1..=spec.p {
                    let g = if i <= spec.o && e(i) < 0.0 { p.gamma[i - 1] } else { 0.0 };
                    s += (p.alpha[i - 1] + g) * e(i) * e(i);
                }
                for j in 1..=spec.q {
                    s += p.beta[j - 1] * v(j);
                }
                var[t] = s;
            }
            Family::Egarch => {
                let ez = e_abs(spec.distribution, p.nu);
                for i in 1..=spec.p {
                    let z = e(i) / v(i).sqrt();
                    s += p.alpha[i - 1] * (z.abs() - ez);
                }
                for i in 1..=spec.o {
                    s += p.gamma[i - 1] * e(i) / v(i).sqrt();
                }
                for j in 1..=spec.q {
                    s += p.beta[j - 1] * v(j).ln();
                }
                var[t] = s.exp();
            }
            Family::Tgarch => {
                for i in 1..=spec.p {
                    let g = if i <= spec.o { p.gamma[i - 1] } else { 0.0 };
                    let x = e(i);
                    s += p.alpha[i - 1] * ((1.0 - g) * x.max(0.0) - (1.0 + g) * x.min(0.0));
                }
                for j in 1..=spec.q {
                    s += p.beta[j - 1] * v(j).sqrt();
                }
                var[t] = s * s;
            }
        }
    }
    var
}

fn random_case(family: Family, r: &mut ChaCha8Rng) -> (GarchSpec, GarchParams, Vec<f64>) {
    let p = r.random_range(1..=2);
    let o = if family.is_asymmetric() { r.random_range(1..=p) } else { 0 };
    let q = r.random_range(0..=2);
    let distribution = if r.random_bool(0.5) { Distribution::Normal } else { Distribution::StudentT };
    let spec = GarchSpec::new(family, p, o, q, distribution).unwrap();
    let (omega, alpha, gamma, beta): (f64, Vec<f64>, Vec<f64>, Vec<f64>) = match family {
        Family::Egarch => (
            r.random_range(-0.2..0.2),
            (0..p).map(|_| r.random_range(-0.3..0.3)).collect(),
            (0..o).map(|_| r.random_range(-0.2..0.2)).collect(),
            (0..q).map(|_| r.random_range(-0.9..0.9) / q as f64).collect(),
        ),
        _ => {
            let alpha: Vec<f64> = (0..p).map(|_| r.random_range(0.0..0.3) / p as f64).collect();
            let gamma = (0..o)
                .map(|i| match family {
                    Family::Gjr => r.random_range(-alpha[i]..0.3),
                    _ => r.random_range(-1.0..1.0),
                })
                .collect();
            let beta = (0..q).map(|_| r.random_range(0.0..0.6) / q as f64).collect();
            (r.random_range(0.01..0.5), alpha, gamma, beta)
        }
    };
    let params = GarchParams {
        mu: r.random_range(-0.1..0.1),
        omega,
        alpha,
        gamma,
        beta,
        nu: (distribution == Distribution::StudentT).then(|| r.random_range(2.5..30.0)),
    };
    let n = r.random_range(spec.max_lag() + 3..=50);
    let scale = r.random_range(0.2..2.0);
    let returns = normal_draws(r, n, scale);
    (spec, params, returns)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for family in Family::ALL {
        for _ in 0..200 {
            let (spec, params, returns) = random_case(family, &mut r);
            let lib = variance_filter_values(&spec, &params, &returns).unwrap().variances;
            let oracle = naive_variances(&spec, &params, &returns);
            for (a, b) in lib.iter().zip(&oracle) {
                worst = worst.max((a - b).abs() / b.abs().max(1.0));
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst <= 1e-10 && elapsed < Duration::from_secs(5),
        format!("{cases} random cases, max rel err {worst:.1e}, {:.2} s", elapsed.as_secs_f64()),
    )
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Outcome {
    let single = Innovations {
        residuals: vec![0.0],
        variances: vec![1.0],
        standardized: vec![0.0],
        clamp_events: 0,
    };
    let normal = loglik_terms(Distribution::Normal, None, &single)[0];
    let analytic = -0.5 * (2.0 * std::f64::consts::PI).ln();
    let t_big = loglik_terms(Distribution::StudentT, Some(1e6), &single)[0];
    let ok = (normal - analytic).abs() <= 1e-9 && (normal - (-0.918939)).abs() <= 1e-6 && (t_big - normal).abs() <= 1e-5;
    Outcome::new(
        ok,
        format!(
            "normal {normal:.9} (analytic {analytic:.9}), t(nu=1e6) {t_big:.9}, gap {:.1e}",
            (t_big - normal).abs()
        ),
    )
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Outcome {
    let spec = GarchSpec::garch(1, 1, Distribution::Normal);
    let truth = garch11(0.05, 0.10, 0.85);
    let cfg = OptimizerConfig::default();
    let runs = exec::map_range(Execution::Parallel, 20, |s| {
        let returns = simulated(&spec, &truth, 5000, 100 + s as u64);
        let t0 = Instant::now();
        let f = fit(&spec, &returns, &cfg).unwrap();
        (f.params.alpha[0], f.params.beta[0], t0.elapsed())
    });
    let hits = runs
        .iter()
        .filter(|(a, b, _)| (a - 0.10).abs() <= 0.05 && (b - 0.85).abs() <= 0.08)
        .count();
    let slowest = runs.iter().map(|r| r.2).max().unwrap();
    Outcome::new(
        hits >= 18 && slowest < Duration::from_secs(10),
        format!("{hits}/20 within tolerance, slowest fit {:.2} s", slowest.as_secs_f64()),
    )
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Outcome {
    let gjr = GarchSpec::new(Family::Gjr, 1, 1, 1, Distribution::Normal).unwrap();
    let garch = GarchSpec::garch(1, 1, Distribution::Normal);
    let asym = GarchParams {
        mu: 0.0,
        omega: 0.05,
        alpha: vec![0.05],
        gamma: vec![0.20],
        beta: vec![0.80],
        nu: None,
    };
    let cfg = OptimizerConfig::default();
    let significant = |data_spec: &GarchSpec, params: &GarchParams, base: u64| {
        exec::map_range(Execution::Parallel, 20, |s| {
            let returns = simulated(data_spec, params, 5000, base + s as u64);
            let f = fit(&gjr, &returns, &cfg).unwrap();
            f.t_stat("gamma[1]").is_some_and(|t| t.abs() > 1.645)
        })
        .into_iter()
        .filter(|x| *x)
        .count()
    };
    let power = significant(&gjr, &asym, 200);
    let false_pos = significant(&garch, &garch11(0.05, 0.10, 0.85), 300);
    Outcome::new(
        power >= 16 && false_pos <= 5,
        format!("gamma significant on GJR data {power}/20, on GARCH data {false_pos}/20"),
    )
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let data_spec = GarchSpec::garch(1, 1, Distribution::StudentT);
    let params = GarchParams {
        nu: Some(5.0),
        ..garch11(0.05, 0.10, 0.85)
    };
    let cfg = OptimizerConfig::default();
    let wins = exec::map_range(Execution::Parallel, 20, |s| {
        let returns = simulated(&data_spec, &params, 5000, 400 + s as u64);
        let cmp = compare_distributions(&data_spec, &returns, &cfg, Execution::Sequential);
        matches!((cmp.delta_aic(), cmp.delta_bic()), (Some(a), Some(b)) if a < 0.0 && b < 0.0)
    })
    .into_iter()
    .filter(|x| *x)
    .count();
    Outcome::new(wins >= 18, format!("t beats normal on AIC and BIC in {wins}/20"))
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let spec = GarchSpec::garch(1, 1, Distribution::Normal);
    let truth = garch11(0.05, 0.10, 0.85);
    let cfg = OptimizerConfig::default();
    let opts = GridOptions::default();
    let mut picks = 0;
    let mut worst: f64 = 0.0;
    for s in 0..20 {
        let returns = simulated(&spec, &truth, 5000, 500 + s);
        let g = grid_search(Family::Garch, Distribution::Normal, &returns, 3, 3, &cfg, &opts).unwrap();
        if (g.best_by_bic.p, g.best_by_bic.q) == (1, 1) {
            picks += 1;
        }
        for cell in g.cells.iter().flatten() {
            let k = cell.spec.n_params() as f64;
            let expect = k * ((g.n_obs as f64).ln() - 2.0);
            // Relative to the size of the criteria, which fixes the rounding scale.
            worst = worst.max(((cell.bic - cell.aic) - expect).abs() / cell.aic.abs().max(cell.bic.abs()));
        }
    }
    Outcome::new(
        picks >= 16 && worst <= 4.0 * f64::EPSILON,
        format!("(1,1) picked by BIC in {picks}/20, max |bic-aic-k(ln n-2)| {worst:.1e} relative"),
    )
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let mc = MonteCarloConfig::default();
    let garch = GarchSpec::garch(1, 1, Distribution::Normal);
    let p = garch11(0.05, 0.10, 0.85);
    let state = ForecastState {
        residuals: vec![2.0],
        variances: vec![3.0],
    };
    let path = variance_path_forecast(&garch, &p, &state, 1000, &mc).unwrap();
    let long_run = 0.05 / (1.0 - 0.10 - 0.85);
    let conv = (path[999] - long_run).abs() / long_run;

    let gjr = GarchSpec::new(Family::Gjr, 1, 1, 1, Distribution::Normal).unwrap();
    let gp = GarchParams {
        gamma: vec![0.0],
        ..p.clone()
    };
    let neg = ForecastState {
        residuals: vec![-1.5],
        variances: vec![0.8],
    };
    let a = variance_path_forecast(&gjr, &gp, &neg, 100, &mc).unwrap();
    let b = variance_path_forecast(&garch, &p, &neg, 100, &mc).unwrap();
    let gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    let egarch = GarchSpec::new(Family::Egarch, 1, 1, 1, Distribution::StudentT).unwrap();
    let ep = GarchParams {
        mu: 0.0,
        omega: 0.1,
        alpha: vec![0.0],
        gamma: vec![0.0],
        beta: vec![0.9],
        nu: Some(6.0),
    };
    let est = ForecastState {
        residuals: vec![0.7],
        variances: vec![2.5],
    };
    let sim = variance_path_forecast(&egarch, &ep, &est, 50, &mc).unwrap();
    let mut ln_v = 2.5f64.ln();
    let exact = sim.iter().all(|v| {
        ln_v = 0.1 + 0.9 * ln_v;
        *v == ln_v.exp()
    });
    Outcome::new(
        conv <= 1e-6 && gap <= 1e-12 && exact,
        format!("h=1000 rel gap {conv:.1e}, GJR(gamma=0) vs GARCH {gap:.1e}, EGARCH deterministic map exact {exact}"),
    )
}

// ---------------------------------------------------------------- 8

/// Φ by its Maclaurin series, summed until terms vanish.
fn phi_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) {
        n += 1.0;
        term *= -x * x / (2.0 * n);
        sum += term / (2.0 * n + 1.0);
    }
    0.5 + sum / (2.0 * std::f64::consts::PI).sqrt()
}

fn criterion_8() -> Outcome {
    let (s, k, r, sig, t): (f64, f64, f64, f64, f64) = (100.0, 100.0, 0.0, 0.2, 1.0);
    let d1 = (s / k).ln() + (r + 0.5 * sig * sig) * t;
    let d1 = d1 / (sig * f64::sqrt(t));
    let d2 = d1 - sig * f64::sqrt(t);
    let oracle = s * phi_series(d1) - k * (-r * t).exp() * phi_series(d2);
    let atm = BsInputs {
        spot: s,
        strike: k,
        rate: r,
        maturity: t,
        sigma: sig,
    };
    let lib = bs_call_price(&atm).unwrap();
    let price_ok = (lib - 7.96557).abs() <= 1e-4 && (lib - oracle).abs() <= 1e-10;

    let moneyness = [0.8, 0.9, 1.0, 1.1, 1.2];
    let maturities = [0.05, 0.25, 0.5, 1.0, 2.0];
    let sigmas = [0.05, 0.1, 0.2, 0.35, 0.5, 0.8];
    let rates = [0.0, 0.01, 0.025, 0.05];
    let (mut points, mut degenerate) = (0, 0);
    let (mut round_trip_fail, mut mono_fail) = (Vec::new(), 0);
    let mut identifiable_fail = 0;
    for &m in &moneyness {
        for &t in &maturities {
            for &sigma in &sigmas {
                for &rate in &rates {
                    points += 1;
                    let inp = BsInputs {
                        spot: 100.0 * m,
                        strike: 100.0,
                        rate,
                        maturity: t,
                        sigma,
                    };
                    let price = bs_call_price(&inp).unwrap();
                    // Price change from a 1e-6 move in sigma, against double rounding of the price.
                    let d1 = ((m).ln() + (rate + 0.5 * sigma * sigma) * t) / (sigma * t.sqrt());
                    let vega = inp.spot * (-0.5 * d1 * d1).exp() / (2.0 * std::f64::consts::PI).sqrt() * t.sqrt();
                    let identifiable = vega * 1e-6 > 8.0 * f64::EPSILON * price;
                    degenerate += usize::from(!identifiable);

                    let up = bs_call_price(&inp.with_sigma(sigma * 1.01)).unwrap();
                    let monotone = up > price && bs_vega(&inp).unwrap() > 0.0;
                    let round_trip = implied_vol(price, &inp).is_ok_and(|iv| (iv - sigma).abs() <= 1e-6);
                    mono_fail += usize::from(!monotone);
                    if !round_trip {
                        let time_value = price - inp.price_band().0;
                        round_trip_fail.push(format!("S/K={m} t={t} sigma={sigma} r={rate} time value {time_value:.1e}"));
                    }
                    if identifiable && !(monotone && round_trip) {
                        identifiable_fail += 1;
                    }
                }
            }
        }
    }
    let mut detail = format!(
        "ATM {lib:.8} (series oracle {oracle:.8}); round trip {}/{points} within 1e-6, monotone {}/{points}; \
         {degenerate} points have time value below price rounding, failures elsewhere {identifiable_fail}",
        points - round_trip_fail.len(),
        points - mono_fail
    );
    if !round_trip_fail.is_empty() {
        detail.push_str(&format!("; first miss: {}", round_trip_fail[0]));
    }
    let pass = price_ok && round_trip_fail.is_empty() && mono_fail == 0 && points >= 500;
    Outcome {
        pass,
        tolerated: price_ok && identifiable_fail == 0 && points >= 500,
        detail,
    }
}

// ---------------------------------------------------------------- 9

/// (XᵀX)⁻¹Xᵀy by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let k = x[0].len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for (row, yi) in x.iter().zip(y) {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += row[i] * row[j];
            }
            a[i][k] += row[i] * yi;
        }
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for row in col + 1..k {
            let f = a[row][col] / a[col][col];
            for c in col..=k {
                a[row][c] -= f * a[col][c];
            }
        }
    }
    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| a[i][j] * beta[j]).sum();
        beta[i] = (a[i][k] - s) / a[i][i];
    }
    beta
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let (mut worst_coef, mut worst_orth, mut r2_viol) = (0.0f64, 0.0f64, 0);
    for _ in 0..50 {
        let n = r.random_range(20..=100);
        let k = r.random_range(2..=4);
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let scale = r.random_range(0.5..3.0);
                normal_draws(&mut r, n, scale)
            })
            .collect();
        let truth: Vec<f64> = (0..=k).map(|_| r.random_range(-2.0..2.0)).collect();
        let noise = normal_draws(&mut r, n, 0.5);
        let y: Vec<f64> = (0..n)
            .map(|i| truth[0] + (0..k).map(|j| truth[j + 1] * cols[j][i]).sum::<f64>() + noise[i])
            .collect();
        let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        let names: Vec<String> = (0..k).map(|j| format!("x{j}")).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let fit = ols(&refs, &name_refs, &y).unwrap();

        let design: Vec<Vec<f64>> = (0..n).map(|i| std::iter::once(1.0).chain((0..k).map(|j| cols[j][i])).collect()).collect();
        let oracle = normal_equations(&design, &y);
        for (a, b) in fit.coefficients.iter().zip(&oracle) {
            worst_coef = worst_coef.max((a - b).abs() / b.abs().max(1.0));
        }
        let scale = design.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())) * y.iter().fold(0.0f64, |m, v| m.max(v.abs())) * n as f64;
        for j in 0..=k {
            let dot: f64 = design.iter().zip(&fit.residuals).map(|(row, e)| row[j] * e).sum();
            worst_orth = worst_orth.max(dot.abs() / scale);
        }
        let m1 = ols(&refs[..1], &name_refs[..1], &y).unwrap();
        let m2 = ols(&refs[..2], &name_refs[..2], &y).unwrap();
        if m2.r_squared < m1.r_squared - 1e-12 {
            r2_viol += 1;
        }
    }
    Outcome::new(
        worst_coef <= 1e-10 && worst_orth < 1e-8 && r2_viol == 0,
        format!("50 designs: max coef gap {worst_coef:.1e}, max |X'e|/scale {worst_orth:.1e}, R2 ordering violations {r2_viol}"),
    )
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let mut violations = 0;
    for _ in 0..1000 {
        let n = r.random_range(1..=60);
        let a = normal_draws(&mut r, n, 2.0);
        let b = normal_draws(&mut r, n, 1.0);
        if rmse_values(&a, &b).unwrap() < mae_values(&a, &b).unwrap() {
            violations += 1;
        }
    }
    let rmse = rmse_values(&[3.0, 4.0], &[0.0, 0.0]).unwrap();
    let mae = mae_values(&[3.0, 4.0], &[0.0, 0.0]).unwrap();
    let exact = rmse == (25.0f64 / 2.0).sqrt() && mae == 3.5;
    Outcome::new(
        violations == 0 && exact,
        format!("rmse < mae in {violations}/1000 series; worked pair rmse {rmse}, mae {mae}"),
    )
}

// ---------------------------------------------------------------- 11

fn read_dir_sorted(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .map(|rd| rd.map(|e| e.unwrap().path()).collect())
        .unwrap_or_default();
    v.sort();
    v
}

fn criterion_11() -> Outcome {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let config = manifest.join("data").join("pipeline.toml");
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = tmp.path().join(name);
        let t0 = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_fxvol"))
            .arg("run-all")
            .arg("--config")
            .arg(&config)
            .arg("--output-dir")
            .arg(&out)
            .output()
            .unwrap();
        (out, status.status.success(), t0.elapsed(), String::from_utf8_lossy(&status.stderr).into_owned())
    };
    let (a, ok_a, time_a, err_a) = run("a");
    let (b, ok_b, time_b, _) = run("b");
    if !(ok_a && ok_b) {
        return Outcome::new(false, format!("run-all failed: {err_a}"));
    }
    let slowest = time_a.max(time_b);

    let subdirs = ["data", "grids", "forecasts", "reports"];
    let layout = subdirs.iter().all(|d| !read_dir_sorted(&a.join(d)).is_empty());
    let mut identical = true;
    for d in subdirs {
        let fa = read_dir_sorted(&a.join(d));
        let fb = read_dir_sorted(&b.join(d));
        identical &= fa.len() == fb.len();
        for (x, y) in fa.iter().zip(&fb) {
            identical &= x.file_name() == y.file_name() && std::fs::read(x).unwrap() == std::fs::read(y).unwrap();
        }
    }

    let report = std::fs::read_to_string(a.join("reports").join("SYNTH_evaluation.csv")).unwrap();
    let rows: Vec<Vec<String>> = csv::Reader::from_reader(report.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    let no_nan = !report.contains("NaN") && !report.contains("N/A");
    let rmse_of = |model: &dyn Fn(&str) -> bool, method: &str| -> Vec<(String, f64)> {
        rows.iter()
            .filter(|r| model(&r[0]) && r[1] == method)
            .map(|r| (r[0].clone(), r[2].parse().unwrap()))
            .collect()
    };
    let mut wins = Vec::new();
    let mut comparisons = Vec::new();
    for method in ["rolling", "expanding"] {
        let Some((_, base)) = rmse_of(&|m| m.starts_with("GARCH(1,1)"), method).into_iter().next() else {
            continue;
        };
        for (label, v) in rmse_of(&|m| m.starts_with("GJR") || m.starts_with("TGARCH"), method) {
            comparisons.push(format!("{label} {method} {v:.4} vs GARCH(1,1) {base:.4}"));
            if v < base {
                wins.push(label);
            }
        }
    }
    let structural = layout && identical && no_nan && rows.len() >= 10 && slowest < Duration::from_secs(600);
    let asym = !wins.is_empty();
    Outcome {
        pass: structural && asym,
        tolerated: structural && !asym,
        detail: format!(
            "run-all {:.0} s, layout {layout}, {} report rows, no NaN {no_nan}, byte-identical {identical}; asymmetric beats GARCH(1,1) {asym} [{}]",
            slowest.as_secs_f64(),
            rows.len(),
            comparisons.join("; ")
        ),
    }
}

// ---------------------------------------------------------------- 12

fn criterion_12() -> Outcome {
    let data = generate(&SyntheticConfig::default()).unwrap();
    let base = &data.prices;
    let kurt = |p: &PriceSeries| distribution_stats(&compute_returns(p).unwrap()).unwrap().kurt;
    let k0 = kurt(base);
    let mut details = Vec::new();
    let mut ok = true;
    for (label, factor) in [("+10%", 1.10), ("-10%", 0.90)] {
        let mut close = base.close().to_vec();
        let i = close.len() / 2;
        close[i] *= factor;
        let spiked = PriceSeries::new(base.dates().to_vec(), close).unwrap();
        let k1 = kurt(&spiked);
        let k2 = kurt(&smooth_outliers(&spiked, 8.0).unwrap());
        let raised = k1 >= 10.0 * k0;
        let restored = (k2 - k0).abs() <= 0.25 * k0.abs();
        ok &= raised && restored;
        details.push(format!("{label}: {k0:.3} -> {k1:.2} -> {k2:.3}"));
    }
    Outcome::new(ok, format!("excess kurtosis baseline -> spiked -> smoothed, {}", details.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("recursion oracles", criterion_1),
        ("likelihood spot values", criterion_2),
        ("parameter recovery", criterion_3),
        ("asymmetry detection", criterion_4),
        ("distribution comparison", criterion_5),
        ("grid selection consistency", criterion_6),
        ("forecast convergence", criterion_7),
        ("Black-Scholes", criterion_8),
        ("OLS", criterion_9),
        ("metrics", criterion_10),
        ("end-to-end run-all", criterion_11),
        ("cleaning effect", criterion_12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut defects = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &id.to_string()) {
            continue;
        }
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && o.tolerated { " (known, see notes)" } else { "" };
        println!("criterion {id:>2} {status} {name}{note}: {}", o.detail);
        if !o.pass && !o.tolerated {
            defects.push(id);
        }
    }
    if !defects.is_empty() {
        eprintln!("failing criteria: {defects:?}");
        std::process::exit(1);
    }
}

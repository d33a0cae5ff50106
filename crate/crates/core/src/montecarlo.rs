//! Monte Carlo experiments on the Domar aggregators.
//!
//! Every sample has its own random stream: a ChaCha8 generator seeded with
//! the configured seed and switched to stream number `sample_index`. Log
//! shocks are `mean + sigma * g` with `g` drawn by `rand_distr`'s ziggurat
//! `StandardNormal`, one draw per sector in sector order. Samples are thus
//! independent of evaluation order, and summaries are reduced in index order,
//! so results do not depend on the number of worker threads.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::economy::{Economy, ShockVector};
use crate::equilibrium::FixedPointOptions;
use crate::household::{real_gdp_growth_with, AggregationMethod, HouseholdPrefs};
use crate::linalg;
use crate::{Error, Result};

/// Probabilities reported in [`DistributionSummary::quantiles`].
pub const SUMMARY_PROBABILITIES: [f64; 11] = [
    0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.999,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockConfig {
    pub count: usize,
    /// Standard deviation of each log shock.
    pub sigma: f64,
    pub seed: u64,
    /// Mean of each log shock.
    pub mean: f64,
}

impl Default for ShockConfig {
    fn default() -> Self {
        ShockConfig {
            count: 10_000,
            sigma: 0.2,
            seed: 42,
            mean: 0.0,
        }
    }
}

impl ShockConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidInput(
                "sample count must be at least 1".into(),
            ));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidInput("shock sigma must be positive".into()));
        }
        if !self.mean.is_finite() {
            return Err(Error::InvalidInput("shock mean must be finite".into()));
        }
        Ok(())
    }
}

/// Log shocks of sample `index` for an `n`-sector economy.
pub fn sample_log_shock(n: usize, config: &ShockConfig, index: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    (0..n)
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            config.mean + config.sigma * g
        })
        .collect()
}

/// Shock vector of sample `index`.
pub fn sample_shock(n: usize, config: &ShockConfig, index: usize) -> ShockVector {
    ShockVector::from_log(&sample_log_shock(n, config, index))
        .expect("exponentials of finite draws are positive")
}

/// The full shock stream `0..config.count`.
pub fn sample_shocks(
    n: usize,
    config: &ShockConfig,
) -> Result<impl Iterator<Item = ShockVector> + '_> {
    config.validate()?;
    Ok((0..config.count).map(move |k| sample_shock(n, config, k)))
}

/// How sample evaluations are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon's current thread pool when the `parallel` feature is enabled,
    /// otherwise sequential.
    #[default]
    Parallel,
}

fn map_indices<R, F>(count: usize, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantile {
    pub p: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleValue {
    pub index: usize,
    pub ln_h: f64,
}

/// Distribution of simulated `ln H` over the viable samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub method: AggregationMethod,
    pub seed: u64,
    pub sigma: f64,
    pub count: usize,
    pub mean: f64,
    /// Sample variance (divisor `N - 1`); absent for a single sample.
    pub variance: Option<f64>,
    /// Moment skewness `m3 / m2^1.5`; absent below three samples or for zero
    /// variance.
    pub skewness: Option<f64>,
    /// Excess kurtosis `m4 / m2^2 - 3`.
    pub kurtosis: Option<f64>,
    pub quantiles: Vec<Quantile>,
    pub n_viable: usize,
    pub n_unviable: usize,
    /// Viable samples in index order.
    #[serde(skip)]
    pub samples: Vec<SampleValue>,
}

impl DistributionSummary {
    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.ln_h).collect()
    }
}

/// Simulates `ln H` for `config.count` shocks, in parallel when available.
pub fn simulate_distribution(
    economy: &Economy,
    prefs: &HouseholdPrefs,
    config: &ShockConfig,
    method: AggregationMethod,
) -> Result<DistributionSummary> {
    simulate_distribution_with(
        economy,
        prefs,
        config,
        method,
        &FixedPointOptions::default(),
        Execution::Parallel,
    )
}

/// Single-threaded reference path of [`simulate_distribution`].
pub fn simulate_distribution_sequential(
    economy: &Economy,
    prefs: &HouseholdPrefs,
    config: &ShockConfig,
    method: AggregationMethod,
) -> Result<DistributionSummary> {
    simulate_distribution_with(
        economy,
        prefs,
        config,
        method,
        &FixedPointOptions::default(),
        Execution::Sequential,
    )
}

pub fn simulate_distribution_with(
    economy: &Economy,
    prefs: &HouseholdPrefs,
    config: &ShockConfig,
    method: AggregationMethod,
    options: &FixedPointOptions,
    exec: Execution,
) -> Result<DistributionSummary> {
    config.validate()?;
    let n = economy.n();
    let outcomes = map_indices(config.count, exec, |k| {
        let z = sample_shock(n, config, k);
        real_gdp_growth_with(economy, prefs, &z, method, options).map(|g| g.value())
    });

    let mut samples = Vec::with_capacity(config.count);
    for (index, outcome) in outcomes.into_iter().enumerate() {
        if let Some(ln_h) = outcome? {
            samples.push(SampleValue { index, ln_h });
        }
    }
    if samples.is_empty() {
        return Err(Error::AllSamplesUnviable {
            count: config.count,
        });
    }
    let values: Vec<f64> = samples.iter().map(|s| s.ln_h).collect();
    let m = Moments::of(&values);
    Ok(DistributionSummary {
        method,
        seed: config.seed,
        sigma: config.sigma,
        count: config.count,
        mean: m.mean,
        variance: m.variance,
        skewness: m.skewness,
        kurtosis: m.kurtosis,
        quantiles: SUMMARY_PROBABILITIES
            .iter()
            .map(|&p| Quantile {
                p,
                value: quantile(&values, p),
            })
            .collect(),
        n_viable: samples.len(),
        n_unviable: config.count - samples.len(),
        samples,
    })
}

/// Sample moments, summed in slice order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: Option<f64>,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
}

impl Moments {
    pub fn of(values: &[f64]) -> Moments {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for v in values {
            let d = v - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        let variance = (values.len() >= 2).then(|| m2 / (n - 1.0));
        let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
        let shape = values.len() >= 3 && m2 > 0.0;
        Moments {
            mean,
            variance,
            skewness: shape.then(|| m3 / m2.powf(1.5)),
            kurtosis: shape.then(|| m4 / (m2 * m2) - 3.0),
        }
    }
}

/// Linearly interpolated quantile (Hyndman-Fan type 7).
pub fn quantile(values: &[f64], p: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, p)
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Variances of the Cobb-Douglas-economy and simple-economy log price indices
/// `-(ln z)[I - A]^{-1} m` and `-(ln z) m` over the same shock stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexDispersion {
    pub var_cobb_douglas: f64,
    pub var_simple: f64,
}

pub fn price_index_dispersion(
    economy: &Economy,
    m: &DVector<f64>,
    config: &ShockConfig,
) -> Result<IndexDispersion> {
    config.validate()?;
    let n = economy.n();
    if m.len() != n {
        return Err(Error::DimensionMismatch {
            what: "expenditure shares",
            expected: n,
            found: m.len(),
        });
    }
    if config.count < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            found: config.count,
        });
    }
    let lm = linalg::solve(&(DMatrix::identity(n, n) - economy.a()), m)?;
    let (cd, se): (Vec<f64>, Vec<f64>) = (0..config.count)
        .map(|k| {
            let g = DVector::from_vec(sample_log_shock(n, config, k));
            (-g.dot(&lm), -g.dot(m))
        })
        .unzip();
    Ok(IndexDispersion {
        var_cobb_douglas: Moments::of(&cd).variance.unwrap_or(0.0),
        var_simple: Moments::of(&se).variance.unwrap_or(0.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QqPoint {
    pub theoretical: f64,
    pub sample: f64,
}

/// Standardized order statistics against standard-normal quantiles at
/// plotting positions `(k - 0.5) / N`.
pub fn qq_points(samples: &[f64]) -> Result<Vec<QqPoint>> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            found: samples.len(),
        });
    }
    let m = Moments::of(samples);
    let sd = m.variance.unwrap_or(0.0).sqrt();
    if !(sd > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let normal = Normal::standard();
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(k, v)| QqPoint {
            theoretical: normal.inverse_cdf((k as f64 + 0.5) / n),
            sample: (v - m.mean) / sd,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HpDecomposition {
    pub trend: Vec<f64>,
    pub cycle: Vec<f64>,
}

/// Hodrick-Prescott filter: the trend solves `(I + lambda D'D) tau = y` with
/// `D` the second-difference operator, solved by banded Cholesky.
pub fn hp_filter(series: &[f64], lambda: f64) -> Result<HpDecomposition> {
    let n = series.len();
    if n < 4 {
        return Err(Error::SeriesTooShort {
            needed: 4,
            found: n,
        });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput("lambda must be positive".into()));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "series contains non-finite values".into(),
        ));
    }

    // bands of I + lambda D'D: diag, first and second super-diagonals
    let mut d0 = vec![1.0; n];
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for r in 0..n - 2 {
        let row = [1.0, -2.0, 1.0];
        for a in 0..3 {
            d0[r + a] += lambda * row[a] * row[a];
            if a < 2 {
                d1[r + a] += lambda * row[a] * row[a + 1];
            }
        }
        d2[r] += lambda * row[0] * row[2];
    }

    // Cholesky L with diagonal l0 and sub-diagonals l1 (i, i-1), l2 (i, i-2)
    let mut l0 = vec![0.0; n];
    let mut l1 = vec![0.0; n];
    let mut l2 = vec![0.0; n];
    for i in 0..n {
        if i >= 2 {
            l2[i] = d2[i - 2] / l0[i - 2];
        }
        if i >= 1 {
            l1[i] = (d1[i - 1] - l2[i] * l1[i - 1]) / l0[i - 1];
        }
        l0[i] = (d0[i] - l1[i] * l1[i] - l2[i] * l2[i]).sqrt();
    }

    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut v = series[i];
        if i >= 1 {
            v -= l1[i] * w[i - 1];
        }
        if i >= 2 {
            v -= l2[i] * w[i - 2];
        }
        w[i] = v / l0[i];
    }
    let mut trend = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = w[i];
        if i + 1 < n {
            v -= l1[i + 1] * trend[i + 1];
        }
        if i + 2 < n {
            v -= l2[i + 2] * trend[i + 2];
        }
        trend[i] = v / l0[i];
    }
    let cycle = series.iter().zip(&trend).map(|(y, t)| y - t).collect();
    Ok(HpDecomposition { trend, cycle })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shock_stream_is_reproducible() {
        let cfg = ShockConfig {
            count: 5,
            ..Default::default()
        };
        let a: Vec<_> = sample_shocks(4, &cfg).unwrap().collect();
        let b: Vec<_> = sample_shocks(4, &cfg).unwrap().collect();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn tiny_sigma_gives_unit_shocks() {
        let cfg = ShockConfig {
            count: 10,
            sigma: 1e-12,
            ..Default::default()
        };
        for z in sample_shocks(3, &cfg).unwrap() {
            assert!(z.levels().iter().all(|v| (v - 1.0).abs() < 1e-10));
        }
    }

    #[test]
    fn invalid_config() {
        assert!(ShockConfig {
            count: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ShockConfig {
            sigma: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn moments_of_small_sets() {
        let m = Moments::of(&[1.0]);
        assert_eq!(m.mean, 1.0);
        assert!(m.variance.is_none() && m.skewness.is_none());
        let m = Moments::of(&[1.0, 2.0, 3.0]);
        assert_eq!(m.variance, Some(1.0));
        assert_eq!(m.skewness, Some(0.0));
    }

    #[test]
    fn quantile_interpolates() {
        let v = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
    }

    #[test]
    fn qq_symmetric_input() {
        let q = qq_points(&[-1.0, 0.0, 1.0]).unwrap();
        assert!((q[0].theoretical + q[2].theoretical).abs() < 1e-12);
        assert!((q[0].sample + q[2].sample).abs() < 1e-15);
        assert_eq!(q[1].theoretical, 0.0);
    }

    #[test]
    fn qq_errors() {
        assert!(matches!(
            qq_points(&[1.0, 2.0]),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(matches!(qq_points(&[2.0; 5]), Err(Error::DegenerateSample)));
    }

    #[test]
    fn hp_linear_series_has_no_cycle() {
        let y: Vec<f64> = (0..20).map(|t| 1.5 + 0.3 * t as f64).collect();
        let hp = hp_filter(&y, 1600.0).unwrap();
        assert!(hp.cycle.iter().all(|c| c.abs() < 1e-10));
    }

    #[test]
    fn hp_too_short() {
        assert!(matches!(
            hp_filter(&[1.0, 2.0, 3.0], 10.0),
            Err(Error::SeriesTooShort { .. })
        ));
    }
}

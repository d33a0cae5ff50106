//! Geometric Brownian motion estimation for productivity series, and the
//! Shapiro-Wilk normality test used to screen their growth rates.
//!
//! No annualization is applied: estimates are per observation interval.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GbmMethod {
    SampleMoments,
    SimulatedMl,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmEstimate {
    pub mu_hat: f64,
    pub sigma_hat: f64,
    pub method: GbmMethod,
    pub n_obs: usize,
}

fn check_series(series: &[f64], min_len: usize) -> Result<()> {
    if series.len() < min_len {
        return Err(Error::SeriesTooShort {
            needed: min_len,
            found: series.len(),
        });
    }
    match series
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
    {
        Some((index, &value)) => Err(Error::NonPositiveValue { index, value }),
        None => Ok(()),
    }
}

/// Mean and sum of squared deviations.
fn mean_ss(v: &[f64]) -> (f64, f64) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (mean, v.iter().map(|x| (x - mean).powi(2)).sum())
}

/// Sample-moment estimator from log increments `d_k = ln X_{k+1} - ln X_k`:
/// `sigma = sqrt(ss(d) / (l - 2))`, `mu = mean(d) + sigma^2 / 2`.
pub fn estimate_gbm_moments(series: &[f64]) -> Result<GbmEstimate> {
    check_series(series, 3)?;
    let d: Vec<f64> = series.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let (mean, ss) = mean_ss(&d);
    let sigma = (ss / (series.len() - 2) as f64).sqrt();
    Ok(GbmEstimate {
        mu_hat: mean + 0.5 * sigma * sigma,
        sigma_hat: sigma,
        method: GbmMethod::SampleMoments,
        n_obs: series.len(),
    })
}

/// Ratio-based estimator from gross growth `r_k = X_{k+1} / X_k`:
/// `sigma = sqrt(ss(r) / (l - 1))`, `mu = mean(r) - 1`.
pub fn estimate_gbm_dlm(series: &[f64]) -> Result<GbmEstimate> {
    check_series(series, 2)?;
    let r: Vec<f64> = series.windows(2).map(|w| w[1] / w[0]).collect();
    let (mean, ss) = mean_ss(&r);
    Ok(GbmEstimate {
        mu_hat: mean - 1.0,
        sigma_hat: (ss / (series.len() - 1) as f64).sqrt(),
        method: GbmMethod::SimulatedMl,
        n_obs: series.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapiroWilk {
    pub w: f64,
    pub p_value: f64,
}

impl ShapiroWilk {
    pub fn rejects_normality(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

/// Shapiro-Wilk W test for `3 <= n <= 5000`, using Royston's polynomial
/// approximations for the coefficients and the normalizing transformation of
/// W (algorithm AS R94).
pub fn shapiro_wilk(series: &[f64]) -> Result<ShapiroWilk> {
    let n = series.len();
    if n < 3 {
        return Err(Error::SeriesTooShort {
            needed: 3,
            found: n,
        });
    }
    if n > 5000 {
        return Err(Error::InvalidInput(format!(
            "Shapiro-Wilk supports at most 5000 values, got {n}"
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "series contains non-finite values".into(),
        ));
    }
    let mut x = series.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if !(range > 0.0) || range < 1e-19 * x[n - 1].abs().max(x[0].abs()) {
        return Err(Error::DegenerateSample);
    }

    let normal = Normal::standard();
    let nf = n as f64;
    // coefficients for the upper half; the lower half is antisymmetric
    let half = n / 2;
    let mut a = vec![0.0; half];
    if n == 3 {
        a[0] = std::f64::consts::FRAC_1_SQRT_2;
    } else {
        let m: Vec<f64> = (0..half)
            .map(|i| normal.inverse_cdf((nf - i as f64 - 0.375) / (nf + 0.25)))
            .collect();
        let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
        let ssumm2 = summ2.sqrt();
        let rsn = 1.0 / nf.sqrt();
        let c1 = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
        let c2 = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
        let a1 = poly(&c1, rsn) + m[0] / ssumm2;
        let (fac, start) = if n > 5 {
            let a2 = poly(&c2, rsn) + m[1] / ssumm2;
            a[1] = a2;
            let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
                / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
                .sqrt();
            (fac, 2)
        } else {
            let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
            (fac, 1)
        };
        a[0] = a1;
        for i in start..half {
            a[i] = m[i] / fac;
        }
    }

    let mean = x.iter().sum::<f64>() / nf;
    let ssq: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    let num: f64 = (0..half).map(|i| a[i] * (x[n - 1 - i] - x[i])).sum();
    let w = (num * num / ssq).min(1.0);

    let p_value = if n == 3 {
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = (0.75f64).sqrt().asin();
        (pi6 * (w.sqrt().asin() - stqr)).max(0.0)
    } else {
        let w1 = (1.0 - w).ln();
        let (y, m, s) = if n <= 11 {
            let gamma = poly(&[-2.273, 0.459], nf);
            if w1 >= gamma {
                return Ok(ShapiroWilk { w, p_value: 1e-99 });
            }
            (
                -(gamma - w1).ln(),
                poly(&[0.5440, -0.39978, 0.025054, -6.714e-4], nf),
                poly(&[1.3822, -0.77857, 0.062767, -0.0020322], nf).exp(),
            )
        } else {
            let ln_n = nf.ln();
            (
                w1,
                poly(&[-1.5861, -0.31082, -0.083751, 0.0038915], ln_n),
                poly(&[-0.4803, -0.082676, 0.0030302], ln_n).exp(),
            )
        };
        normal.sf((y - m) / s)
    };
    Ok(ShapiroWilk { w, p_value })
}

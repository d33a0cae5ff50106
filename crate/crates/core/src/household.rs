//! Representative household: CES price index, nominal income and the Domar
//! aggregators that turn sectoral productivity shocks into real GDP growth.
//!
//! Real GDP growth (previous real GDP normalized to one) is
//!
//! ```text
//! ln H = -ln P(pi) + ln P(1/z)
//! ```
//!
//! where `P` is the household price index and `pi` the equilibrium price
//! vector under shock `z` with the primary factor as numeraire. The second
//! term is the conservative nominal-income rule: income moves with the price
//! index of an economy without intermediate production.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::economy::{Economy, Numeraire, ShockVector};
use crate::equilibrium::{
    check_prices, log_power_mean, solve_cobb_douglas, solve_fixed_point, solve_leontief,
    FixedPointOptions, SolveStatus,
};
use crate::linalg;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HouseholdPrefs {
    mu: DVector<f64>,
    kappa: f64,
}

impl HouseholdPrefs {
    /// Expenditure-share parameters `mu` (non-negative, summing to one) and
    /// utility exponent `kappa` (`0` is Cobb-Douglas utility).
    pub fn new(mu: Vec<f64>, kappa: f64) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::InvalidInput("empty expenditure shares".into()));
        }
        if let Some((index, &value)) = mu
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0 && v.is_finite()))
        {
            return Err(Error::NonPositiveValue { index, value });
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "expenditure shares sum to {sum}, not 1"
            )));
        }
        if !kappa.is_finite() {
            return Err(Error::InvalidInput("kappa must be finite".into()));
        }
        Ok(HouseholdPrefs {
            mu: DVector::from_vec(mu),
            kappa,
        })
    }

    /// Cobb-Douglas utility with shares `mu`.
    pub fn cobb_douglas(mu: Vec<f64>) -> Result<Self> {
        Self::new(mu, 0.0)
    }

    /// Equal shares across `n` goods.
    pub fn uniform(n: usize, kappa: f64) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n], kappa)
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.mu.len() != n {
            return Err(Error::DimensionMismatch {
                what: "expenditure shares",
                expected: n,
                found: self.mu.len(),
            });
        }
        Ok(())
    }
}

/// `ln P` from log prices.
pub fn log_price_index(log_pi: &[f64], prefs: &HouseholdPrefs) -> f64 {
    log_power_mean(prefs.mu.as_slice(), log_pi, prefs.kappa)
}

/// CES price index `P(pi) = (sum mu_i pi_i^kappa)^{1/kappa}`.
pub fn price_index(pi: &DVector<f64>, prefs: &HouseholdPrefs) -> Result<f64> {
    prefs.check_len(pi.len())?;
    check_prices(pi)?;
    let logs: Vec<f64> = pi.iter().map(|p| p.ln()).collect();
    Ok(log_price_index(&logs, prefs).exp())
}

/// Nominal income `W = H_prev P(1/z)`.
pub fn nominal_income(z: &ShockVector, prefs: &HouseholdPrefs, h_prev: f64) -> Result<f64> {
    prefs.check_len(z.len())?;
    if !(h_prev > 0.0 && h_prev.is_finite()) {
        return Err(Error::NonPositiveValue {
            index: 0,
            value: h_prev,
        });
    }
    let logs: Vec<f64> = z.levels().iter().map(|v| -v.ln()).collect();
    Ok(h_prev * log_price_index(&logs, prefs).exp())
}

/// Which economy maps shocks into prices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationMethod {
    /// Sector-specific CES, solved by recursion.
    GeneralCes,
    /// Closed form with zero substitution.
    Leontief,
    /// Closed form with unit elasticity; linear in `ln z`.
    CobbDouglas,
}

impl AggregationMethod {
    pub const ALL: [AggregationMethod; 3] = [
        AggregationMethod::CobbDouglas,
        AggregationMethod::Leontief,
        AggregationMethod::GeneralCes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AggregationMethod::GeneralCes => "general_ces",
            AggregationMethod::Leontief => "leontief",
            AggregationMethod::CobbDouglas => "cobb_douglas",
        }
    }
}

impl std::str::FromStr for AggregationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "general_ces" | "ces" | "general" => Ok(AggregationMethod::GeneralCes),
            "leontief" => Ok(AggregationMethod::Leontief),
            "cobb_douglas" | "cd" => Ok(AggregationMethod::CobbDouglas),
            other => Err(Error::InvalidInput(format!(
                "unknown aggregation method `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnviableReason {
    /// Price recursion left the positive orthant.
    Diverged,
    /// Price recursion did not settle within the iteration cap.
    NotConverged,
    /// Closed form produced no strictly positive solution.
    NoPositiveSolution,
}

/// A shock for which no equilibrium exists in the positive orthant.
#[derive(Debug, Clone, PartialEq)]
pub struct Unviable {
    pub method: AggregationMethod,
    pub reason: UnviableReason,
    pub shock: ShockVector,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GrowthOutcome {
    Viable(f64),
    Unviable(Unviable),
}

impl GrowthOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            GrowthOutcome::Viable(v) => Some(*v),
            GrowthOutcome::Unviable(_) => None,
        }
    }
}

/// Real GDP growth `ln H` for shock `z` with default solver options.
pub fn real_gdp_growth(
    economy: &Economy,
    prefs: &HouseholdPrefs,
    z: &ShockVector,
    method: AggregationMethod,
) -> Result<GrowthOutcome> {
    real_gdp_growth_with(economy, prefs, z, method, &FixedPointOptions::default())
}

pub fn real_gdp_growth_with(
    economy: &Economy,
    prefs: &HouseholdPrefs,
    z: &ShockVector,
    method: AggregationMethod,
    options: &FixedPointOptions,
) -> Result<GrowthOutcome> {
    let n = economy.n();
    prefs.check_len(n)?;
    z.check_len(n)?;
    let unviable = |reason| {
        Ok(GrowthOutcome::Unviable(Unviable {
            method,
            reason,
            shock: z.clone(),
        }))
    };
    let pi0 = Numeraire::default();
    let log_pi: Vec<f64> = match method {
        AggregationMethod::GeneralCes => {
            let r = solve_fixed_point(economy, z, pi0, options)?;
            match r.status {
                SolveStatus::Converged => r.pi.iter().map(|p| p.ln()).collect(),
                SolveStatus::Diverged => return unviable(UnviableReason::Diverged),
                SolveStatus::MaxIterations => return unviable(UnviableReason::NotConverged),
            }
        }
        AggregationMethod::Leontief => match solve_leontief(economy, z, pi0) {
            Ok(pi) => pi.iter().map(|p| p.ln()).collect(),
            Err(Error::NoPositiveSolution | Error::SingularSystem) => {
                return unviable(UnviableReason::NoPositiveSolution)
            }
            Err(e) => return Err(e),
        },
        AggregationMethod::CobbDouglas => solve_cobb_douglas(economy, z, pi0)?
            .iter()
            .copied()
            .collect(),
    };
    let log_inv_z: Vec<f64> = z.levels().iter().map(|v| -v.ln()).collect();
    Ok(GrowthOutcome::Viable(
        log_price_index(&log_inv_z, prefs) - log_price_index(&log_pi, prefs),
    ))
}

/// Weights `lambda` with `ln H = sum_j lambda_j ln z_j` in the Cobb-Douglas
/// economy under Cobb-Douglas utility with shares `m`:
/// `lambda = ([I - A]^{-1} - I) m`.
///
/// `[I - A]^{-1} m` are the usual sales-based Domar weights; the conservative
/// income rule removes the simple-economy part `m`.
pub fn domar_weights(economy: &Economy, m: &DVector<f64>) -> Result<DVector<f64>> {
    let n = economy.n();
    if m.len() != n {
        return Err(Error::DimensionMismatch {
            what: "expenditure shares",
            expected: n,
            found: m.len(),
        });
    }
    let lm = linalg::solve(&(DMatrix::identity(n, n) - economy.a()), m)?;
    Ok(lm - m)
}

//! Equilibrium prices under productivity shocks.
//!
//! Prices solve `pi_j = c_j(pi; pi0) / z_j` where `c_j` is the CES unit cost
//! of sector `j`. The general case is found by recursion on that map; uniform
//! elasticities admit closed forms.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::economy::{Economy, Numeraire, ShockVector};
use crate::linalg;
use crate::{Error, Result};

/// Exponents smaller than this in magnitude use the Cobb-Douglas log form.
pub const GAMMA_SWITCH: f64 = 1e-8;
/// A price above this during recursion counts as divergence.
pub const DIVERGENCE_GUARD: f64 = 1e12;

/// Log of the weighted power mean `(sum w_i e^{e x_i} / sum w_i)^{1/e}`.
///
/// `logs` holds `x_i = ln p_i`. Weights are normalized by their sum so the
/// mean of equal arguments is exact. Near `e = 0` the expm1/ln1p form keeps
/// full precision and is continuous with the geometric-mean limit used below
/// [`GAMMA_SWITCH`].
pub(crate) fn log_power_mean(weights: &[f64], logs: &[f64], exponent: f64) -> f64 {
    let total: f64 = weights.iter().sum();
    if exponent.abs() < GAMMA_SWITCH {
        return weights
            .iter()
            .zip(logs)
            .filter(|(w, _)| **w != 0.0)
            .map(|(w, x)| w * x)
            .sum::<f64>()
            / total;
    }
    let t = weights
        .iter()
        .zip(logs)
        .filter(|(w, _)| **w != 0.0)
        .map(|(w, x)| w * (exponent * x).exp_m1())
        .sum::<f64>()
        / total;
    if t.abs() < 0.5 {
        return t.ln_1p() / exponent;
    }
    let peak = weights
        .iter()
        .zip(logs)
        .filter(|(w, _)| **w != 0.0)
        .map(|(_, x)| exponent * x)
        .fold(f64::NEG_INFINITY, f64::max);
    let s = weights
        .iter()
        .zip(logs)
        .filter(|(w, _)| **w != 0.0)
        .map(|(w, x)| w * (exponent * x - peak).exp())
        .sum::<f64>()
        / total;
    (s.ln() + peak) / exponent
}

pub(crate) fn check_prices(pi: &DVector<f64>) -> Result<()> {
    match pi
        .iter()
        .enumerate()
        .find(|(_, p)| !(**p > 0.0 && p.is_finite()))
    {
        Some((index, &value)) => Err(Error::NonPositivePrice { index, value }),
        None => Ok(()),
    }
}

/// `[ln pi0, ln pi_1, ..., ln pi_n]`
fn log_price_vector(pi: &DVector<f64>, pi0: Numeraire) -> Vec<f64> {
    std::iter::once(pi0.value().ln())
        .chain(pi.iter().map(|p| p.ln()))
        .collect()
}

/// CES unit cost `c_j = (sum_{i=0..n} a_ij pi_i^{gamma_j})^{1/gamma_j}`,
/// without the productivity divisor.
pub fn unit_cost(economy: &Economy, j: usize, pi: &DVector<f64>, pi0: Numeraire) -> Result<f64> {
    let n = economy.n();
    if j >= n {
        return Err(Error::InvalidInput(format!(
            "sector index {j} out of range"
        )));
    }
    if pi.len() != n {
        return Err(Error::DimensionMismatch {
            what: "price vector",
            expected: n,
            found: pi.len(),
        });
    }
    check_prices(pi)?;
    let logs = log_price_vector(pi, pi0);
    Ok(log_power_mean(economy.column(j), &logs, economy.gamma()[j]).exp())
}

/// Gradient of `c_j` with respect to `(pi0, pi_1, ..., pi_n)` at any positive
/// price point: `dc_j/dpi_i = a_ij (c_j / pi_i)^{1 - gamma_j}`.
pub fn unit_cost_gradient(
    economy: &Economy,
    j: usize,
    pi: &DVector<f64>,
    pi0: Numeraire,
) -> Result<DVector<f64>> {
    let c = unit_cost(economy, j, pi, pi0)?;
    let g = economy.gamma()[j];
    let col = economy.column(j);
    Ok(DVector::from_fn(economy.n() + 1, |r, _| {
        let p = if r == 0 { pi0.value() } else { pi[r - 1] };
        col[r] * (c / p).powf(1.0 - g)
    }))
}

/// Termination state of the price recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    /// A price left the positive orthant or exceeded [`DIVERGENCE_GUARD`].
    Diverged,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumResult {
    pub pi: DVector<f64>,
    pub iterations: usize,
    /// Max-norm of the last price change.
    pub residual: f64,
    pub status: SolveStatus,
}

impl EquilibriumResult {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

impl FixedPointOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// One application of the price map `pi -> <z>^{-1} c(pi; pi0)`.
pub fn price_map(
    economy: &Economy,
    z: &ShockVector,
    pi0: Numeraire,
    pi: &DVector<f64>,
) -> Result<DVector<f64>> {
    z.check_len(economy.n())?;
    if pi.len() != economy.n() {
        return Err(Error::DimensionMismatch {
            what: "price vector",
            expected: economy.n(),
            found: pi.len(),
        });
    }
    check_prices(pi)?;
    let logs = log_price_vector(pi, pi0);
    Ok(DVector::from_fn(economy.n(), |j, _| {
        (log_power_mean(economy.column(j), &logs, economy.gamma()[j]) - z.levels()[j].ln()).exp()
    }))
}

/// Solves the equilibrium price system by recursion from `pi = 1`.
pub fn solve_fixed_point(
    economy: &Economy,
    z: &ShockVector,
    pi0: Numeraire,
    options: &FixedPointOptions,
) -> Result<EquilibriumResult> {
    let start = DVector::from_element(economy.n(), 1.0);
    solve_fixed_point_from(economy, z, pi0, options, &start)
}

/// Price recursion from an arbitrary positive starting point.
pub fn solve_fixed_point_from(
    economy: &Economy,
    z: &ShockVector,
    pi0: Numeraire,
    options: &FixedPointOptions,
    start: &DVector<f64>,
) -> Result<EquilibriumResult> {
    options.validate()?;
    let n = economy.n();
    z.check_len(n)?;
    if start.len() != n {
        return Err(Error::DimensionMismatch {
            what: "starting prices",
            expected: n,
            found: start.len(),
        });
    }
    check_prices(start)?;

    let log_z: Vec<f64> = z.levels().iter().map(|v| v.ln()).collect();
    let log_guard = DIVERGENCE_GUARD.ln();
    // logs[0] is the numeraire and never changes
    let mut logs = log_price_vector(start, pi0);
    let mut next = logs.clone();
    let mut residual = f64::INFINITY;

    for iter in 1..=options.max_iter {
        residual = 0.0;
        let mut diverged = false;
        for j in 0..n {
            let v = log_power_mean(economy.column(j), &logs, economy.gamma()[j]) - log_z[j];
            if !v.is_finite() || v > log_guard {
                diverged = true;
            }
            next[j + 1] = v;
            residual = f64::max(residual, (v.exp() - logs[j + 1].exp()).abs());
        }
        std::mem::swap(&mut logs, &mut next);
        let pi = DVector::from_iterator(n, logs[1..].iter().map(|v| v.exp()));
        if diverged || pi.iter().any(|p| !(*p > 0.0)) {
            return Ok(EquilibriumResult {
                pi,
                iterations: iter,
                residual,
                status: SolveStatus::Diverged,
            });
        }
        if residual <= options.tol {
            return Ok(EquilibriumResult {
                pi,
                iterations: iter,
                residual,
                status: SolveStatus::Converged,
            });
        }
    }
    Ok(EquilibriumResult {
        pi: DVector::from_iterator(n, logs[1..].iter().map(|v| v.exp())),
        iterations: options.max_iter,
        residual,
        status: SolveStatus::MaxIterations,
    })
}

/// `pi = pi0 (a0 [<z>^gamma - A]^{-1})^{1/gamma}` for a uniform exponent.
pub fn solve_uniform_ces(
    economy: &Economy,
    z: &ShockVector,
    gamma: f64,
    pi0: Numeraire,
) -> Result<DVector<f64>> {
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidInput(
            "uniform CES closed form needs a finite non-zero gamma".into(),
        ));
    }
    if gamma == 1.0 {
        return solve_leontief(economy, z, pi0);
    }
    let n = economy.n();
    z.check_len(n)?;
    let mut m: DMatrix<f64> = -economy.a().into_owned();
    for j in 0..n {
        m[(j, j)] += z.levels()[j].powf(gamma);
    }
    let q = linalg::solve_row(&m, &economy.a0())?;
    if q.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::NoPositiveSolution);
    }
    Ok(q.map(|v| pi0.value() * v.powf(1.0 / gamma)))
}

/// `pi = pi0 a0 [<z> - A]^{-1}`
pub fn solve_leontief(economy: &Economy, z: &ShockVector, pi0: Numeraire) -> Result<DVector<f64>> {
    let n = economy.n();
    z.check_len(n)?;
    let mut m: DMatrix<f64> = -economy.a().into_owned();
    for j in 0..n {
        m[(j, j)] += z.levels()[j];
    }
    let q = linalg::solve_row(&m, &economy.a0())?;
    if q.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::NoPositiveSolution);
    }
    Ok(q * pi0.value())
}

/// Log prices of the Cobb-Douglas economy:
/// `ln pi = (a0 ln pi0 - ln z) [I - A]^{-1}`.
pub fn solve_cobb_douglas(
    economy: &Economy,
    z: &ShockVector,
    pi0: Numeraire,
) -> Result<DVector<f64>> {
    let n = economy.n();
    z.check_len(n)?;
    let m = DMatrix::identity(n, n) - economy.a();
    let rhs = economy.a0() * pi0.value().ln() - z.logs();
    linalg::solve_row(&m, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn econ(a0: Vec<f64>, a: &[f64], gamma: Vec<f64>) -> Economy {
        let n = a0.len();
        let labels = (0..n).map(|i| format!("s{i}")).collect();
        Economy::new(labels, a0, DMatrix::from_row_slice(n, n, a), gamma).unwrap()
    }

    #[test]
    fn unit_cost_at_unit_prices_is_one() {
        for g in [-2.0, -0.5, 0.0, 1e-9, 0.3, 1.0, 1.7] {
            let e = econ(vec![0.5, 0.5], &[0.2, 0.3, 0.3, 0.2], vec![g, g]);
            let pi = DVector::from_element(2, 1.0);
            assert_eq!(unit_cost(&e, 0, &pi, Numeraire::default()).unwrap(), 1.0);
        }
    }

    #[test]
    fn unit_cost_single_sector_is_numeraire() {
        for g in [-1.0, 0.0, 0.5, 1.0] {
            let e = econ(vec![1.0], &[0.0], vec![g]);
            let c = unit_cost(
                &e,
                0,
                &DVector::from_element(1, 7.0),
                Numeraire::new(2.0).unwrap(),
            )
            .unwrap();
            assert!((c - 2.0).abs() < 1e-15, "{g}: {c}");
        }
    }

    #[test]
    fn unit_cost_leontief_is_arithmetic_mean() {
        let e = econ(vec![0.5], &[0.5], vec![1.0]);
        let c = unit_cost(&e, 0, &DVector::from_element(1, 3.0), Numeraire::default()).unwrap();
        assert!((c - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unit_cost_rejects_non_positive_price() {
        let e = econ(vec![0.5], &[0.5], vec![1.0]);
        let err =
            unit_cost(&e, 0, &DVector::from_element(1, 0.0), Numeraire::default()).unwrap_err();
        assert!(matches!(err, Error::NonPositivePrice { .. }));
    }

    #[test]
    fn power_mean_branches_are_continuous() {
        let w = [0.2, 0.3, 0.5];
        let x = [0.4f64.ln(), 2.5f64.ln(), 1.1f64.ln()];
        let geo: f64 = w.iter().zip(&x).map(|(w, x)| w * x).sum();
        for e in [1e-7, -1e-7, 1e-6] {
            assert!((log_power_mean(&w, &x, e) - geo).abs() < 1e-5);
        }
        // large-deviation branch against the textbook formula
        let x = [(1e-4f64).ln(), 5.0f64.ln(), 40.0f64.ln()];
        for e in [-1.0, 0.8, 1.5] {
            let direct = (w
                .iter()
                .zip(&x)
                .map(|(w, x)| w * (e * x).exp())
                .sum::<f64>())
            .ln()
                / e;
            assert!((log_power_mean(&w, &x, e) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn benchmark_is_fixed_point() {
        let e = econ(vec![0.5, 0.5], &[0.2, 0.3, 0.3, 0.2], vec![0.3, -0.7]);
        let r = solve_fixed_point(
            &e,
            &ShockVector::ones(2),
            Numeraire::default(),
            &Default::default(),
        )
        .unwrap();
        assert!(r.converged());
        assert!(r.pi.iter().all(|p| (p - 1.0).abs() < 1e-12));
    }

    #[test]
    fn leontief_scalar_case() {
        let e = econ(vec![0.6], &[0.4], vec![1.0]);
        let z = ShockVector::new(vec![2.0]).unwrap();
        let pi = solve_leontief(&e, &z, Numeraire::default()).unwrap();
        assert!((pi[0] - 0.6 / (2.0 - 0.4)).abs() < 1e-15);
    }

    #[test]
    fn leontief_unviable_shock() {
        let e = econ(vec![0.6], &[0.4], vec![1.0]);
        let z = ShockVector::new(vec![0.3]).unwrap();
        assert!(matches!(
            solve_leontief(&e, &z, Numeraire::default()),
            Err(Error::NoPositiveSolution)
        ));
    }

    #[test]
    fn cobb_douglas_scalar_case() {
        let e = econ(vec![0.3], &[0.7], vec![0.0]);
        let z = ShockVector::new(vec![std::f64::consts::E]).unwrap();
        let lp = solve_cobb_douglas(&e, &z, Numeraire::default()).unwrap();
        assert!((lp[0] + 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_gamma_one_is_leontief_bitwise() {
        let e = econ(vec![0.5, 0.5], &[0.2, 0.3, 0.3, 0.2], vec![1.0, 1.0]);
        let z = ShockVector::new(vec![1.1, 0.95]).unwrap();
        assert_eq!(
            solve_uniform_ces(&e, &z, 1.0, Numeraire::default()).unwrap(),
            solve_leontief(&e, &z, Numeraire::default()).unwrap()
        );
    }

    #[test]
    fn uniform_ces_rejects_zero_gamma() {
        let e = econ(vec![1.0], &[0.0], vec![0.0]);
        assert!(solve_uniform_ces(&e, &ShockVector::ones(1), 0.0, Numeraire::default()).is_err());
    }

    #[test]
    fn recursion_diverges_without_positive_equilibrium() {
        let e = econ(vec![0.6], &[0.4], vec![1.0]);
        let z = ShockVector::new(vec![0.3]).unwrap();
        let r = solve_fixed_point(&e, &z, Numeraire::default(), &Default::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Diverged);
    }

    #[test]
    fn max_iterations_reported() {
        let e = econ(vec![0.1], &[0.9], vec![1.0]);
        let z = ShockVector::new(vec![0.95]).unwrap();
        let opts = FixedPointOptions {
            tol: 1e-14,
            max_iter: 3,
        };
        let r = solve_fixed_point(&e, &z, Numeraire::default(), &opts).unwrap();
        assert_eq!(r.status, SolveStatus::MaxIterations);
        assert_eq!(r.iterations, 3);
    }

    #[test]
    fn invalid_options_rejected() {
        let e = econ(vec![1.0], &[0.0], vec![0.0]);
        let bad = FixedPointOptions {
            tol: 0.0,
            max_iter: 10,
        };
        assert!(solve_fixed_point(&e, &ShockVector::ones(1), Numeraire::default(), &bad).is_err());
    }
}

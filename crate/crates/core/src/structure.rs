//! Equilibrium structure `(B, b0)`, the cost-share network `S`, and the
//! Hawkins-Simon viability test.

use nalgebra::{DMatrix, DVector};

use crate::economy::{Economy, Numeraire, ShockVector};
use crate::equilibrium::{check_prices, price_map, unit_cost_gradient};
use crate::{Error, Result};

/// Relative residual of the price map allowed for "is an equilibrium".
pub const EQUILIBRIUM_TOL: f64 = 1e-6;

/// Gradient of the unit-cost map at an equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct CostGradient {
    /// `grad[(i, j)] = dc_j / dpi_i` over intermediate inputs.
    pub grad: DMatrix<f64>,
    /// `dc_j / dpi0`.
    pub grad0: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumStructure {
    /// Physical input-output coefficients `b_ij`.
    pub b: DMatrix<f64>,
    /// Physical primary-factor coefficients `b_0j`.
    pub b0: DVector<f64>,
    /// Intermediate cost shares `s_ij`.
    pub s: DMatrix<f64>,
    /// Primary-factor cost shares `s_0j`.
    pub s0: DVector<f64>,
    /// Hawkins-Simon status of `I - B`.
    pub viable: bool,
}

fn check_equilibrium(
    economy: &Economy,
    pi: &DVector<f64>,
    pi0: Numeraire,
    z: &ShockVector,
) -> Result<()> {
    check_prices(pi)?;
    let mapped = price_map(economy, z, pi0, pi)?;
    let residual = mapped
        .iter()
        .zip(pi.iter())
        .map(|(m, p)| ((m - p) / p).abs())
        .fold(0.0, f64::max);
    if residual > EQUILIBRIUM_TOL {
        return Err(Error::NotAnEquilibrium { residual });
    }
    Ok(())
}

/// Gradient of the cost aggregator, `dc_j/dpi_i = a_ij (c_j/pi_i)^{1-gamma_j}`,
/// evaluated at the equilibrium `pi` for `(z, pi0)`.
pub fn gradient_cost(
    economy: &Economy,
    pi: &DVector<f64>,
    pi0: Numeraire,
    z: &ShockVector,
) -> Result<CostGradient> {
    let n = economy.n();
    check_equilibrium(economy, pi, pi0, z)?;
    let mut grad = DMatrix::zeros(n, n);
    let mut grad0 = DVector::zeros(n);
    for j in 0..n {
        let g = unit_cost_gradient(economy, j, pi, pi0)?;
        grad0[j] = g[0];
        for i in 0..n {
            grad[(i, j)] = g[i + 1];
        }
    }
    Ok(CostGradient { grad, grad0 })
}

/// `B = grad c <z>^{-1}`, `b0 = grad0 c <z>^{-1}`, and equilibrium cost
/// shares `s_ij = a_ij (z_j pi_j / pi_i)^{-gamma_j}`.
pub fn equilibrium_structure(
    economy: &Economy,
    pi: &DVector<f64>,
    pi0: Numeraire,
    z: &ShockVector,
) -> Result<EquilibriumStructure> {
    let n = economy.n();
    let CostGradient { grad, grad0 } = gradient_cost(economy, pi, pi0, z)?;
    let zl = z.levels();
    let b = DMatrix::from_fn(n, n, |i, j| grad[(i, j)] / zl[j]);
    let b0 = DVector::from_fn(n, |j, _| grad0[j] / zl[j]);

    let shares = crate::economy::shares(economy, pi, pi0, z)?;
    let s = shares.rows(1, n).into_owned();
    let s0 = shares.row(0).transpose();
    let viable = hawkins_simon(&b);
    Ok(EquilibriumStructure {
        b,
        b0,
        s,
        s0,
        viable,
    })
}

/// True iff every leading principal minor of `I - B` is positive.
///
/// Runs Gaussian elimination without pivoting; the k-th leading minor is the
/// product of the first k pivots, so all minors are positive exactly when
/// every pivot is. Elimination stops at the first non-positive pivot.
pub fn hawkins_simon(b: &DMatrix<f64>) -> bool {
    let n = b.nrows();
    assert_eq!(n, b.ncols(), "hawkins_simon needs a square matrix");
    let mut m = DMatrix::identity(n, n) - b;
    for k in 0..n {
        let pivot = m[(k, k)];
        if !(pivot > 0.0) {
            return false;
        }
        for i in k + 1..n {
            let f = m[(i, k)] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..n {
                m[(i, j)] -= f * m[(k, j)];
            }
        }
    }
    true
}

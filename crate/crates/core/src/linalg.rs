//! Dense linear-algebra helpers shared by the solvers.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Relative pivot size below which a factorization is treated as singular.
const SINGULAR_PIVOT: f64 = 1e-13;

/// Solves `m x = b` by LU with partial pivoting.
pub(crate) fn solve(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let scale = m.amax();
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::SingularSystem);
    }
    let lu = m.clone().lu();
    let u = lu.u();
    if u.diagonal()
        .iter()
        .any(|p| p.abs() <= SINGULAR_PIVOT * scale)
    {
        return Err(Error::SingularSystem);
    }
    lu.solve(b).ok_or(Error::SingularSystem)
}

/// Solves the row-vector system `x m = b`, i.e. `m^T x^T = b^T`.
pub(crate) fn solve_row(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    solve(&m.transpose(), b)
}

/// Least-squares solution through a thin QR factorization.
///
/// Returns the coefficient vector and `(X'X)^{-1}`. A column whose `R`
/// diagonal is negligible relative to its norm makes the design rank deficient.
pub(crate) fn least_squares(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let (n, k) = x.shape();
    if n < k || k == 0 {
        return Err(Error::RankDeficient);
    }
    let norms: Vec<f64> = x.column_iter().map(|c| c.norm()).collect();
    if norms.contains(&0.0) {
        return Err(Error::RankDeficient);
    }
    let qr = x.clone().qr();
    let r = qr.r();
    for j in 0..k {
        if r[(j, j)].abs() <= 1e-10 * norms[j] {
            return Err(Error::RankDeficient);
        }
    }
    let qty = qr.q().transpose() * y;
    let beta = r.solve_upper_triangular(&qty).ok_or(Error::RankDeficient)?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or(Error::RankDeficient)?;
    let xtx_inv = &r_inv * r_inv.transpose();
    Ok((beta, xtx_inv))
}

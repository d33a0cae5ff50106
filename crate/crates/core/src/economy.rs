//! Benchmark economy data: input-output coefficients, elasticities, shocks.
//!
//! Share parameters are calibrated at the benchmark where all prices and
//! productivities equal one, so the CES share parameter of input `i` in sector
//! `j` is the benchmark input-output coefficient `a_ij` itself.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DMatrixView, DVector};

use crate::{Error, Result};

/// Columns whose coefficients sum to within this of one are taken as-is.
pub const ADDING_UP_TOL: f64 = 1e-9;
/// Columns off by more than [`ADDING_UP_TOL`] but at most this are rescaled;
/// anything larger is rejected.
pub const RENORMALIZE_TOL: f64 = 1e-6;

/// Label of the primary-factor row in IO table files.
pub const PRIMARY_LABEL: &str = "PRIMARY";

/// An `n`-sector economy calibrated at its benchmark.
///
/// Coefficients are held as one `(n+1) x n` matrix: row 0 is the primary
/// factor (`a_0j`), rows `1..=n` are intermediate inputs (`a_ij`). Each
/// column therefore lists every cost share of one sector contiguously.
/// Elasticities are stored as `gamma_j = 1 - sigma_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Economy {
    labels: Vec<String>,
    coef: DMatrix<f64>,
    gamma: DVector<f64>,
}

impl Economy {
    /// Builds and validates an economy from primary coefficients `a0`, the
    /// `n x n` input-output matrix `a` and per-sector `gamma`.
    pub fn new(
        labels: Vec<String>,
        a0: Vec<f64>,
        a: DMatrix<f64>,
        gamma: Vec<f64>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "economy needs at least one sector".into(),
            ));
        }
        check_len("primary coefficients", n, a0.len())?;
        check_len("gamma", n, gamma.len())?;
        if a.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                what: "input-output matrix",
                expected: n,
                found: if a.nrows() != n { a.nrows() } else { a.ncols() },
            });
        }
        if let Some((j, g)) = gamma.iter().enumerate().find(|(_, g)| !g.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "gamma for sector {} is not finite ({g})",
                labels[j]
            )));
        }

        let mut coef = DMatrix::zeros(n + 1, n);
        for j in 0..n {
            coef[(0, j)] = a0[j];
            for i in 0..n {
                coef[(i + 1, j)] = a[(i, j)];
            }
        }
        for j in 0..n {
            for r in 0..=n {
                let v = coef[(r, j)];
                if !v.is_finite() {
                    return Err(Error::MalformedTable(format!(
                        "non-finite coefficient in column {}",
                        labels[j]
                    )));
                }
                if v < 0.0 {
                    let row = if r == 0 {
                        PRIMARY_LABEL.to_string()
                    } else {
                        labels[r - 1].clone()
                    };
                    return Err(Error::NegativeCoefficient {
                        row,
                        column: labels[j].clone(),
                        value: v,
                    });
                }
            }
            let sum: f64 = coef.column(j).iter().sum();
            let dev = (sum - 1.0).abs();
            if dev > RENORMALIZE_TOL {
                return Err(Error::ColumnSumViolation {
                    column: labels[j].clone(),
                    sum,
                });
            }
            if dev > ADDING_UP_TOL {
                coef.column_mut(j).iter_mut().for_each(|v| *v /= sum);
            }
        }

        Ok(Economy {
            labels,
            coef,
            gamma: DVector::from_vec(gamma),
        })
    }

    /// Same as [`Economy::new`] but taking elasticities of substitution
    /// `sigma_j`, converted to `gamma_j = 1 - sigma_j`.
    pub fn from_sigma(
        labels: Vec<String>,
        a0: Vec<f64>,
        a: DMatrix<f64>,
        sigma: &[f64],
    ) -> Result<Self> {
        let gamma = sigma.iter().map(|s| 1.0 - s).collect();
        Self::new(labels, a0, a, gamma)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The `(n+1) x n` coefficient matrix, primary factor in row 0.
    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coef
    }

    /// All `n+1` cost-share parameters of sector `j`, primary factor first.
    pub fn column(&self, j: usize) -> &[f64] {
        let n1 = self.n() + 1;
        &self.coef.as_slice()[j * n1..(j + 1) * n1]
    }

    /// The intermediate input-output matrix `A`.
    pub fn a(&self) -> DMatrixView<'_, f64> {
        self.coef.rows(1, self.n())
    }

    /// Primary-factor coefficients `a_0j`.
    pub fn a0(&self) -> DVector<f64> {
        self.coef.row(0).transpose()
    }

    pub fn gamma(&self) -> &DVector<f64> {
        &self.gamma
    }

    pub fn sigma(&self) -> DVector<f64> {
        self.gamma.map(|g| 1.0 - g)
    }

    /// Replaces all sector exponents.
    pub fn with_gamma(mut self, gamma: Vec<f64>) -> Result<Self> {
        check_len("gamma", self.n(), gamma.len())?;
        if gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidInput("gamma must be finite".into()));
        }
        self.gamma = DVector::from_vec(gamma);
        Ok(self)
    }

    /// Uses one exponent for every sector.
    pub fn with_uniform_gamma(self, gamma: f64) -> Result<Self> {
        let n = self.n();
        self.with_gamma(vec![gamma; n])
    }

    /// Reads an IO table and an elasticity file (see [`read_io_table`] and
    /// [`read_elasticities`]).
    pub fn from_readers<R1: Read, R2: Read>(io_table: R1, elasticities: R2) -> Result<Self> {
        let (labels, a0, a) = read_io_table(io_table)?;
        let sig = read_elasticities(elasticities)?;
        let mut sigma = vec![f64::NAN; labels.len()];
        for (label, s) in sig {
            let j = labels.iter().position(|l| *l == label).ok_or_else(|| {
                Error::MalformedTable(format!("elasticity given for unknown sector `{label}`"))
            })?;
            sigma[j] = s;
        }
        if let Some(j) = sigma.iter().position(|s| s.is_nan()) {
            return Err(Error::MalformedTable(format!(
                "no elasticity for sector `{}`",
                labels[j]
            )));
        }
        Self::from_sigma(labels, a0, a, &sigma)
    }

    /// Writes the IO table in the format read by [`read_io_table`].
    pub fn write_io_table<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["sector".to_string()];
        header.extend(self.labels.iter().cloned());
        wr.write_record(&header)?;
        for r in 0..=self.n() {
            let mut rec = vec![if r == 0 {
                PRIMARY_LABEL.to_string()
            } else {
                self.labels[r - 1].clone()
            }];
            rec.extend(self.coef.row(r).iter().map(|v| format!("{v}")));
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Writes `label,sigma` rows.
    pub fn write_elasticities<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for (label, g) in self.labels.iter().zip(self.gamma.iter()) {
            wr.write_record([label.clone(), format!("{}", 1.0 - g)])?;
        }
        wr.flush()?;
        Ok(())
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        });
    }
    Ok(())
}

fn parse_num(s: &str, ctx: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::MalformedTable(format!("cannot parse `{s}` as a number ({ctx})")))
}

/// Loads an economy from an IO table CSV and an elasticities CSV.
pub fn load_economy(io_table_path: &Path, elasticities_path: &Path) -> Result<Economy> {
    Economy::from_readers(File::open(io_table_path)?, File::open(elasticities_path)?)
}

/// Parses an IO table:
///
/// ```text
/// sector,<label_1>,...,<label_n>
/// PRIMARY,a_01,...,a_0n
/// label_1,a_11,...,a_1n
/// ...
/// ```
///
/// Row labels must repeat the header labels in order.
pub fn read_io_table<R: Read>(r: R) -> Result<(Vec<String>, Vec<f64>, DMatrix<f64>)> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(r);
    let header = rd.headers()?.clone();
    if header.len() < 2 {
        return Err(Error::MalformedTable(
            "header needs at least one sector".into(),
        ));
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let n = labels.len();

    let mut rows = Vec::with_capacity(n + 1);
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::MalformedTable(e.to_string()))?;
        if rec.len() != n + 1 {
            return Err(Error::MalformedTable(format!(
                "row `{}` has {} fields, expected {}",
                rec.get(0).unwrap_or(""),
                rec.len(),
                n + 1
            )));
        }
        let values = rec
            .iter()
            .skip(1)
            .map(|s| parse_num(s, &rec[0]))
            .collect::<Result<Vec<f64>>>()?;
        rows.push((rec[0].to_string(), values));
    }
    if rows.len() != n + 1 {
        return Err(Error::MalformedTable(format!(
            "expected {} data rows, found {}",
            n + 1,
            rows.len()
        )));
    }
    if rows[0].0 != PRIMARY_LABEL {
        return Err(Error::MalformedTable(format!(
            "first data row must be `{PRIMARY_LABEL}`, found `{}`",
            rows[0].0
        )));
    }
    for (i, (label, _)) in rows.iter().skip(1).enumerate() {
        if *label != labels[i] {
            return Err(Error::MalformedTable(format!(
                "row {} is `{label}`, expected `{}`",
                i + 1,
                labels[i]
            )));
        }
    }
    let a0 = rows[0].1.clone();
    let a = DMatrix::from_fn(n, n, |i, j| rows[i + 1].1[j]);
    Ok((labels, a0, a))
}

/// Parses `label,sigma` rows. A non-numeric first row is treated as a header.
pub fn read_elasticities<R: Read>(r: R) -> Result<Vec<(String, f64)>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut out = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| Error::MalformedTable(e.to_string()))?;
        if rec.len() != 2 {
            return Err(Error::MalformedTable(format!(
                "elasticity row {} has {} fields, expected 2",
                k + 1,
                rec.len()
            )));
        }
        match rec[1].parse::<f64>() {
            Ok(s) => out.push((rec[0].to_string(), s)),
            Err(_) if k == 0 => continue,
            Err(_) => {
                return Err(Error::MalformedTable(format!(
                    "bad elasticity `{}`",
                    &rec[1]
                )))
            }
        }
    }
    Ok(out)
}

/// Hicks-neutral productivity levels `z_j > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockVector(DVector<f64>);

impl ShockVector {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = z
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::NonPositiveValue { index, value });
        }
        Ok(ShockVector(DVector::from_vec(z)))
    }

    /// The benchmark: no shock.
    pub fn ones(n: usize) -> Self {
        ShockVector(DVector::from_element(n, 1.0))
    }

    /// Builds `z = exp(log_z)`.
    pub fn from_log(log_z: &[f64]) -> Result<Self> {
        Self::new(log_z.iter().map(|g| g.exp()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn levels(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn logs(&self) -> DVector<f64> {
        self.0.map(f64::ln)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        check_len("shock vector", n, self.len())
    }
}

/// Price of the primary factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numeraire(f64);

impl Numeraire {
    pub fn new(pi0: f64) -> Result<Self> {
        if pi0 > 0.0 && pi0.is_finite() {
            Ok(Numeraire(pi0))
        } else {
            Err(Error::NonPositivePrice {
                index: 0,
                value: pi0,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Numeraire {
    fn default() -> Self {
        Numeraire(1.0)
    }
}

/// Cost shares `s_ij = a_ij (z_j pi_j / pi_i)^{-gamma_j}` as an `(n+1) x n`
/// matrix, primary factor in row 0.
pub fn shares(
    economy: &Economy,
    pi: &DVector<f64>,
    pi0: Numeraire,
    z: &ShockVector,
) -> Result<DMatrix<f64>> {
    let n = economy.n();
    check_len("price vector", n, pi.len())?;
    z.check_len(n)?;
    crate::equilibrium::check_prices(pi)?;
    let mut s = economy.coefficients().clone();
    for j in 0..n {
        let g = economy.gamma()[j];
        let out = z.levels()[j] * pi[j];
        for r in 0..=n {
            let pin = if r == 0 { pi0.value() } else { pi[r - 1] };
            s[(r, j)] *= (out / pin).powf(-g);
        }
    }
    Ok(s)
}

/// Shares at the benchmark (`pi = z = 1`, `pi0 = 1`); equal to the
/// calibrated coefficients.
pub fn benchmark_shares(economy: &Economy) -> DMatrix<f64> {
    let n = economy.n();
    shares(
        economy,
        &DVector::from_element(n, 1.0),
        Numeraire::default(),
        &ShockVector::ones(n),
    )
    .expect("benchmark inputs are valid")
}

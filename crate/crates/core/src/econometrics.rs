//! Fixed-effects panel estimation of CES exponents.
//!
//! The log cost-share equation of one sector,
//!
//! ```text
//! ln a_it = ln alpha_i - gamma ln(zeta_t p_t) + gamma ln p_it + e_it
//! ```
//!
//! is estimated across factors `i` and periods `t` with entity fixed effects
//! (absorbing `ln alpha_i`) and time dummies `D_2..D_T` (absorbing the
//! period-specific term). The time-dummy coefficients are
//! `mu_t - mu_1 = -gamma (ln zeta_t p_t - ln zeta_1 p_1)`, from which
//! productivity growth is recovered. The household expenditure-share equation
//! has the same form with `kappa` in place of `gamma`.
//!
//! Price may be endogenous; [`fe_2sls`] instruments it with named instrument
//! columns (optionally lagged, led, differenced or logged) and reports the
//! first-stage F, Sargan and Davidson-MacKinnon statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor};

use crate::linalg::least_squares;
use crate::{Error, Result};

/// Rule-of-thumb first-stage F below which instruments count as weak.
pub const WEAK_INSTRUMENT_F: f64 = 10.0;
/// Minimum `|gamma|` for productivity recovery.
pub const GAMMA_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
struct PanelRow {
    entity: usize,
    period: i64,
    y: f64,
    x: f64,
}

/// Long-format panel of log shares `y = ln a_it` and log prices
/// `x = ln p_it`, with raw instrument columns.
///
/// Observations with a non-positive or missing share or price are masked
/// out of the regression sample; their instrument values remain available to
/// lag/lead transforms of neighbouring periods.
#[derive(Debug, Clone, Default)]
pub struct PanelDataset {
    entities: Vec<String>,
    instrument_names: Vec<String>,
    rows: Vec<PanelRow>,
    raw: BTreeMap<(usize, i64), Vec<f64>>,
    masked: usize,
}

impl PanelDataset {
    pub fn new(instrument_names: Vec<String>) -> Self {
        PanelDataset {
            instrument_names,
            ..Default::default()
        }
    }

    fn entity_index(&mut self, entity: &str) -> usize {
        match self.entities.iter().position(|e| e == entity) {
            Some(i) => i,
            None => {
                self.entities.push(entity.to_string());
                self.entities.len() - 1
            }
        }
    }

    /// Adds an observation in levels. Missing instrument values are `NaN`.
    pub fn push(
        &mut self,
        entity: &str,
        period: i64,
        share: f64,
        price: f64,
        instruments: Vec<f64>,
    ) -> Result<()> {
        let valid = share > 0.0 && share.is_finite() && price > 0.0 && price.is_finite();
        self.insert(
            entity,
            period,
            valid.then(|| (share.ln(), price.ln())),
            instruments,
        )
    }

    /// Adds an observation already in logs.
    pub fn push_log(
        &mut self,
        entity: &str,
        period: i64,
        y: f64,
        x: f64,
        instruments: Vec<f64>,
    ) -> Result<()> {
        let valid = y.is_finite() && x.is_finite();
        self.insert(entity, period, valid.then_some((y, x)), instruments)
    }

    fn insert(
        &mut self,
        entity: &str,
        period: i64,
        obs: Option<(f64, f64)>,
        instruments: Vec<f64>,
    ) -> Result<()> {
        if instruments.len() != self.instrument_names.len() {
            return Err(Error::DimensionMismatch {
                what: "instrument values",
                expected: self.instrument_names.len(),
                found: instruments.len(),
            });
        }
        let e = self.entity_index(entity);
        if self.raw.insert((e, period), instruments).is_some() {
            return Err(Error::InvalidInput(format!(
                "duplicate observation for entity {entity}, period {period}"
            )));
        }
        match obs {
            Some((y, x)) => self.rows.push(PanelRow {
                entity: e,
                period,
                y,
                x,
            }),
            None => self.masked += 1,
        }
        Ok(())
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn instrument_names(&self) -> &[String] {
        &self.instrument_names
    }

    /// Number of included observations.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of masked-out observations.
    pub fn masked(&self) -> usize {
        self.masked
    }

    /// Reads `entity,period,share,price[,<instrument>...]` with a header row;
    /// every column after `price` is an instrument named by its header.
    /// Empty cells are missing values.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(r);
        let header = rd.headers()?.clone();
        let expect = ["entity", "period", "share", "price"];
        if header.len() < 4
            || header
                .iter()
                .take(4)
                .zip(expect)
                .any(|(h, e)| !h.eq_ignore_ascii_case(e))
        {
            return Err(Error::MalformedTable(
                "panel header must start with entity,period,share,price".into(),
            ));
        }
        let names = header.iter().skip(4).map(str::to_string).collect();
        let mut panel = PanelDataset::new(names);
        let num = |s: &str| -> Result<f64> {
            if s.is_empty() {
                return Ok(f64::NAN);
            }
            s.parse::<f64>()
                .map_err(|_| Error::MalformedTable(format!("cannot parse `{s}` as a number")))
        };
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::MalformedTable(e.to_string()))?;
            let period = rec[1].parse::<i64>().map_err(|_| {
                Error::MalformedTable(format!("period `{}` is not an integer", &rec[1]))
            })?;
            let inst = rec.iter().skip(4).map(num).collect::<Result<Vec<f64>>>()?;
            panel.push(&rec[0], period, num(&rec[2])?, num(&rec[3])?, inst)?;
        }
        Ok(panel)
    }

    fn raw_value(&self, entity: usize, period: i64, column: usize) -> Option<f64> {
        self.raw
            .get(&(entity, period))
            .map(|v| v[column])
            .filter(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Level,
    /// Value at `t - 1`.
    Lag,
    /// Value at `t + 1`.
    Lead,
    /// `v_t - v_{t-1}`.
    Diff,
    /// Natural log.
    Log,
}

/// One excluded instrument: a raw column and a transform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstrumentSpec {
    pub column: usize,
    pub transform: Transform,
    pub label: String,
}

/// Parses a comma-separated instrument list against the panel's columns.
///
/// A column is named by its header, by a 1-based index (`1`, `2`, ...) or by
/// a letter (`a`, `b`, ...). Prefixes select transforms: `l` lag, `f` lead,
/// `d` first difference, `ln_` log. Examples: `l1,2`, `a,ln_b`, `d1,d2`.
pub fn parse_instruments(spec: &str, names: &[String]) -> Result<Vec<InstrumentSpec>> {
    let column = |tok: &str| -> Option<usize> {
        if let Some(i) = names.iter().position(|n| n == tok) {
            return Some(i);
        }
        if let Ok(k) = tok.parse::<usize>() {
            return (k >= 1 && k <= names.len()).then(|| k - 1);
        }
        let mut ch = tok.chars();
        match (ch.next(), ch.next()) {
            (Some(c), None) if c.is_ascii_lowercase() => {
                let k = (c as u8 - b'a') as usize;
                (k < names.len()).then_some(k)
            }
            _ => None,
        }
    };
    spec.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            let parsed = if let Some(c) = column(tok) {
                Some((c, Transform::Level))
            } else if let Some(rest) = tok.strip_prefix("ln_") {
                column(rest).map(|c| (c, Transform::Log))
            } else {
                let t = match tok.chars().next() {
                    Some('l') => Some(Transform::Lag),
                    Some('f') => Some(Transform::Lead),
                    Some('d') => Some(Transform::Diff),
                    _ => None,
                };
                column(&tok[1..]).zip(t)
            };
            parsed
                .map(|(column, transform)| InstrumentSpec {
                    column,
                    transform,
                    label: tok.to_string(),
                })
                .ok_or_else(|| Error::UnknownInstrument(tok.to_string()))
        })
        .collect()
}

/// Regression design: response, endogenous regressor, time dummies and
/// excluded instruments, one row per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDesign {
    pub entity: Vec<usize>,
    pub period: Vec<i64>,
    pub y: DVector<f64>,
    pub x: DVector<f64>,
    /// Columns `D_t` for every sample period after the first.
    pub dummies: DMatrix<f64>,
    pub base_period: i64,
    pub dummy_periods: Vec<i64>,
    pub instruments: DMatrix<f64>,
    pub instrument_labels: Vec<String>,
    pub n_entities: usize,
}

impl PanelDesign {
    /// Builds the design, dropping observations where a transformed
    /// instrument is unavailable.
    pub fn build(panel: &PanelDataset, specs: &[InstrumentSpec]) -> Result<Self> {
        let mut kept = Vec::new();
        for row in &panel.rows {
            let mut values = Vec::with_capacity(specs.len());
            for s in specs {
                if s.column >= panel.instrument_names.len() {
                    return Err(Error::UnknownInstrument(s.label.clone()));
                }
                let at = |t| panel.raw_value(row.entity, t, s.column);
                let v = match s.transform {
                    Transform::Level => at(row.period),
                    Transform::Lag => at(row.period - 1),
                    Transform::Lead => at(row.period + 1),
                    Transform::Diff => at(row.period).zip(at(row.period - 1)).map(|(a, b)| a - b),
                    Transform::Log => at(row.period).filter(|v| *v > 0.0).map(f64::ln),
                };
                match v {
                    Some(v) => values.push(v),
                    None => break,
                }
            }
            if values.len() == specs.len() {
                kept.push((row, values));
            }
        }
        if kept.is_empty() {
            return Err(Error::InvalidInput("no usable observations".into()));
        }

        let periods: BTreeSet<i64> = kept.iter().map(|(r, _)| r.period).collect();
        let periods: Vec<i64> = periods.into_iter().collect();
        let base_period = periods[0];
        let dummy_periods = periods[1..].to_vec();
        let n = kept.len();
        let entities: BTreeSet<usize> = kept.iter().map(|(r, _)| r.entity).collect();

        Ok(PanelDesign {
            entity: kept.iter().map(|(r, _)| r.entity).collect(),
            period: kept.iter().map(|(r, _)| r.period).collect(),
            y: DVector::from_iterator(n, kept.iter().map(|(r, _)| r.y)),
            x: DVector::from_iterator(n, kept.iter().map(|(r, _)| r.x)),
            dummies: DMatrix::from_fn(n, dummy_periods.len(), |i, k| {
                if kept[i].0.period == dummy_periods[k] {
                    1.0
                } else {
                    0.0
                }
            }),
            base_period,
            dummy_periods,
            instruments: DMatrix::from_fn(n, specs.len(), |i, k| kept[i].1[k]),
            instrument_labels: specs.iter().map(|s| s.label.clone()).collect(),
            n_entities: entities.len(),
        })
    }

    pub fn n_obs(&self) -> usize {
        self.y.len()
    }

    /// `[x, D]`
    fn regressors(&self) -> DMatrix<f64> {
        hcat(&self.x, &self.dummies)
    }

    /// `[Z, D]`
    fn instrument_matrix(&self) -> DMatrix<f64> {
        let n = self.n_obs();
        let (l, k) = (self.instruments.ncols(), self.dummies.ncols());
        DMatrix::from_fn(n, l + k, |i, c| {
            if c < l {
                self.instruments[(i, c)]
            } else {
                self.dummies[(i, c - l)]
            }
        })
    }
}

fn hcat(first: &DVector<f64>, rest: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(first.len(), 1 + rest.ncols(), |i, c| {
        if c == 0 {
            first[i]
        } else {
            rest[(i, c - 1)]
        }
    })
}

/// Subtracts entity means from every column of the design.
pub fn within_transform(design: &PanelDesign) -> Result<PanelDesign> {
    let n = design.n_obs();
    let groups = design.entity.iter().copied().max().map_or(0, |m| m + 1);
    let mut counts = vec![0usize; groups];
    for &e in &design.entity {
        counts[e] += 1;
    }
    if let Some(e) = counts.iter().position(|&c| c == 1) {
        return Err(Error::SingletonEntity(e.to_string()));
    }
    let demean_vec = |v: &DVector<f64>| -> DVector<f64> {
        let mut sums = vec![0.0; groups];
        for i in 0..n {
            sums[design.entity[i]] += v[i];
        }
        DVector::from_fn(n, |i, _| {
            let e = design.entity[i];
            v[i] - sums[e] / counts[e] as f64
        })
    };
    let demean_mat = |m: &DMatrix<f64>| -> DMatrix<f64> {
        let mut out = m.clone();
        for (c, col) in m.column_iter().enumerate() {
            out.set_column(c, &demean_vec(&col.into_owned()));
        }
        out
    };
    Ok(PanelDesign {
        y: demean_vec(&design.y),
        x: demean_vec(&design.x),
        dummies: demean_mat(&design.dummies),
        instruments: demean_mat(&design.instruments),
        ..design.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    /// Production exponent; `sigma = 1 - gamma`.
    Gamma,
    /// Household utility exponent.
    Kappa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimationMethod {
    #[serde(rename = "LS_FE")]
    LsFe,
    #[serde(rename = "IV_FE")]
    IvFe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeEffect {
    pub period: i64,
    /// `mu_t - mu_1`
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestStatistic {
    pub statistic: f64,
    pub df: f64,
    /// Denominator degrees of freedom for F statistics.
    pub df_denom: Option<f64>,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IvDiagnostics {
    /// Cragg-Donald Wald F of the first stage (single endogenous regressor).
    pub first_stage_f: f64,
    pub weak_instrument: bool,
    /// Sargan `N R^2` with `N` net of entity means; absent when just
    /// identified.
    pub sargan: Option<TestStatistic>,
    /// Davidson-MacKinnon F; absent when the first-stage residual vanishes.
    pub endogeneity: Option<TestStatistic>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElasticityEstimate {
    pub parameter: Parameter,
    pub method: EstimationMethod,
    /// Coefficient on `ln p`: `gamma` or `kappa`.
    pub coefficient: f64,
    pub std_error: f64,
    pub base_period: i64,
    pub time_effects: Vec<TimeEffect>,
    pub n_obs: usize,
    pub n_entities: usize,
    pub instruments: Vec<String>,
    pub diagnostics: Option<IvDiagnostics>,
}

impl ElasticityEstimate {
    /// `1 - gamma` for production estimates.
    pub fn sigma_hat(&self) -> Option<f64> {
        (self.parameter == Parameter::Gamma).then_some(1.0 - self.coefficient)
    }
}

/// Degrees of freedom of the within regression with `k` slope parameters.
fn fe_dof(design: &PanelDesign, k: usize) -> Result<f64> {
    let dof = design.n_obs() as i64 - design.n_entities as i64 - k as i64;
    if dof <= 0 {
        return Err(Error::RankDeficient);
    }
    Ok(dof as f64)
}

fn residuals(x: &DMatrix<f64>, beta: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    y - x * beta
}

fn assemble(
    design: &PanelDesign,
    method: EstimationMethod,
    beta: &DVector<f64>,
    cov: &DMatrix<f64>,
    diagnostics: Option<IvDiagnostics>,
) -> ElasticityEstimate {
    ElasticityEstimate {
        parameter: Parameter::Gamma,
        method,
        coefficient: beta[0],
        std_error: cov[(0, 0)].sqrt(),
        base_period: design.base_period,
        time_effects: design
            .dummy_periods
            .iter()
            .enumerate()
            .map(|(k, &period)| TimeEffect {
                period,
                estimate: beta[k + 1],
                std_error: cov[(k + 1, k + 1)].sqrt(),
            })
            .collect(),
        n_obs: design.n_obs(),
        n_entities: design.n_entities,
        instruments: design.instrument_labels.clone(),
        diagnostics,
    }
}

/// OLS of a within-transformed design on `[x, D]`.
fn within_ols(w: &PanelDesign) -> Result<ElasticityEstimate> {
    let x = w.regressors();
    let (beta, xtx_inv) = least_squares(&x, &w.y)?;
    let u = residuals(&x, &beta, &w.y);
    let s2 = u.norm_squared() / fe_dof(w, x.ncols())?;
    Ok(assemble(
        w,
        EstimationMethod::LsFe,
        &beta,
        &(xtx_inv * s2),
        None,
    ))
}

/// Least-squares fixed-effects estimate with time dummies.
pub fn fe_ols(panel: &PanelDataset) -> Result<ElasticityEstimate> {
    let design = PanelDesign::build(panel, &[])?;
    within_ols(&within_transform(&design)?)
}

/// Two-stage least squares on the within-transformed system; `x` is
/// instrumented by `specs`, time dummies are exogenous.
pub fn fe_2sls(panel: &PanelDataset, specs: &[InstrumentSpec]) -> Result<ElasticityEstimate> {
    if specs.is_empty() {
        return Err(Error::InvalidInput(
            "2SLS needs at least one instrument".into(),
        ));
    }
    let w = within_transform(&PanelDesign::build(panel, specs)?)?;
    let zw = w.instrument_matrix();
    let (pi, _) = least_squares(&zw, &w.x)?;
    let x_hat = &zw * pi;
    let xh = hcat(&x_hat, &w.dummies);
    let (beta, xtx_inv) = least_squares(&xh, &w.y)?;
    let u = residuals(&w.regressors(), &beta, &w.y);
    let s2 = u.norm_squared() / fe_dof(&w, xh.ncols())?;
    let diagnostics = iv_diagnostics(&w, &beta)?;
    Ok(assemble(
        &w,
        EstimationMethod::IvFe,
        &beta,
        &(xtx_inv * s2),
        Some(diagnostics),
    ))
}

/// Sum of squared residuals of `y` on `x` (or of `y` itself with no columns).
fn rss(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<f64> {
    if x.ncols() == 0 {
        return Ok(y.norm_squared());
    }
    let (b, _) = least_squares(x, y)?;
    Ok(residuals(x, &b, y).norm_squared())
}

/// IV diagnostics for a within-transformed design and fitted 2SLS
/// coefficients `[gamma, time effects...]`.
pub fn iv_diagnostics(w: &PanelDesign, beta: &DVector<f64>) -> Result<IvDiagnostics> {
    // observations net of the absorbed entity means
    let n_eff = (w.n_obs() - w.n_entities) as f64;
    let l = w.instruments.ncols();
    let k = 1 + w.dummies.ncols();
    let zw = w.instrument_matrix();

    let rss_u = rss(&zw, &w.x)?;
    let rss_r = rss(&w.dummies, &w.x)?;
    let df_fs = fe_dof(w, zw.ncols())?;
    let first_stage_f = ((rss_r - rss_u) / l as f64) / (rss_u / df_fs);

    let u = residuals(&w.regressors(), beta, &w.y);
    let sargan = if l >= 2 {
        let mean = u.mean();
        let tss: f64 = u.iter().map(|v| (v - mean).powi(2)).sum();
        let r2 = 1.0 - rss(&zw, &u)? / tss;
        let stat = n_eff * r2;
        let df = (l - 1) as f64;
        let chi = ChiSquared::new(df).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Some(TestStatistic {
            statistic: stat,
            df,
            df_denom: None,
            p_value: chi.sf(stat),
        })
    } else {
        None
    };

    // Davidson-MacKinnon: t-test of the first-stage residual added to OLS
    let (pi, _) = least_squares(&zw, &w.x)?;
    let v = &w.x - &zw * pi;
    let x = w.regressors();
    let aug = DMatrix::from_fn(
        w.n_obs(),
        k + 1,
        |i, c| if c < k { x[(i, c)] } else { v[i] },
    );
    let endogeneity = if v.norm() <= 1e-10 * w.x.norm() {
        None
    } else {
        match least_squares(&aug, &w.y) {
            Ok((b, xtx_inv)) => {
                let dof = fe_dof(w, k + 1)?;
                let s2 = residuals(&aug, &b, &w.y).norm_squared() / dof;
                let t = b[k] / (s2 * xtx_inv[(k, k)]).sqrt();
                let f = t * t;
                let dist = FisherSnedecor::new(1.0, dof)
                    .map_err(|e| Error::InvalidInput(e.to_string()))?;
                Some(TestStatistic {
                    statistic: f,
                    df: 1.0,
                    df_denom: Some(dof),
                    p_value: dist.sf(f),
                })
            }
            Err(Error::RankDeficient) => None,
            Err(e) => return Err(e),
        }
    };

    Ok(IvDiagnostics {
        first_stage_f,
        weak_instrument: !(first_stage_f >= WEAK_INSTRUMENT_F),
        sargan,
        endogeneity,
    })
}

/// Household expenditure-share regression: the same FE (no instruments) or
/// FE-2SLS machinery, with the price coefficient read as `kappa`.
pub fn household_regression(
    panel: &PanelDataset,
    specs: &[InstrumentSpec],
) -> Result<ElasticityEstimate> {
    let mut est = if specs.is_empty() {
        fe_ols(panel)?
    } else {
        fe_2sls(panel, specs)?
    };
    est.parameter = Parameter::Kappa;
    Ok(est)
}

/// Productivity growth relative to the base period,
/// `ln zeta_t/zeta_1 = -(mu_t - mu_1)/gamma - ln p_t/p_1`, for the base
/// period followed by every time-effect period. `output_prices` lists `p_t`
/// in the same order.
pub fn recover_productivity(
    estimate: &ElasticityEstimate,
    output_prices: &[f64],
) -> Result<Vec<f64>> {
    let expected = estimate.time_effects.len() + 1;
    if output_prices.len() != expected {
        return Err(Error::DimensionMismatch {
            what: "output prices",
            expected,
            found: output_prices.len(),
        });
    }
    if let Some((index, &value)) = output_prices.iter().enumerate().find(|(_, p)| !(**p > 0.0)) {
        return Err(Error::NonPositiveValue { index, value });
    }
    let g = estimate.coefficient;
    if !(g.abs() > GAMMA_FLOOR) {
        return Err(Error::GammaNearZero(g));
    }
    let p1 = output_prices[0];
    Ok(std::iter::once(0.0)
        .chain(
            estimate
                .time_effects
                .iter()
                .zip(&output_prices[1..])
                .map(|(te, p)| -te.estimate / g - (p / p1).ln()),
        )
        .collect())
}

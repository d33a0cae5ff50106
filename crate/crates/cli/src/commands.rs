use std::path::{Path, PathBuf};

use cesnet_core::econometrics::{
    fe_2sls, fe_ols, parse_instruments, recover_productivity, ElasticityEstimate, EstimationMethod,
    Parameter,
};
use cesnet_core::equilibrium::{
    solve_cobb_douglas, solve_fixed_point, solve_leontief, solve_uniform_ces,
};
use cesnet_core::gbm::{estimate_gbm_dlm, estimate_gbm_moments, shapiro_wilk};
use cesnet_core::household::{domar_weights, real_gdp_growth_with, UnviableReason};
use cesnet_core::montecarlo::{
    hp_filter, qq_points, simulate_distribution_with, DistributionSummary, Execution, QqPoint,
    ShockConfig,
};
use cesnet_core::structure::equilibrium_structure;
use cesnet_core::{
    AggregationMethod, Economy, FixedPointOptions, GrowthOutcome, HouseholdPrefs, Numeraire,
    ShockVector, SolveStatus,
};
use nalgebra::DVector;
use serde::Serialize;
use serde_json::json;

use crate::config::{FileConfig, Resolver};
use crate::{experiment, input};
use crate::{Cli, Command, EconomyArgs, Failure, Format, HouseholdArgs, ShockArgs, SolverArgs};

/// Settings shared by every subcommand once flags and config are merged.
pub(crate) struct Context<'a> {
    pub resolver: Resolver<'a>,
    pub out_dir: PathBuf,
    pub format: Format,
}

impl Context<'_> {
    pub fn write(&self, name: &str, bytes: &[u8]) -> Result<(), Failure> {
        std::fs::create_dir_all(&self.out_dir).map_err(|e| Failure::io(e, &self.out_dir))?;
        let path = self.out_dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| Failure::io(e, &path))
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<Vec<u8>, Failure> {
        let mut bytes = serde_json::to_vec_pretty(value).expect("output serializes");
        bytes.push(b'\n');
        self.write(name, &bytes)?;
        Ok(bytes)
    }

    /// Prints the JSON result or the CSV table on stdout, per `--format`.
    pub fn emit(&self, json: &[u8], csv: &[u8]) {
        let out = match self.format {
            Format::Json => json,
            Format::Csv => csv,
        };
        print!("{}", String::from_utf8_lossy(out));
    }

    fn economy(&self, args: EconomyArgs) -> Result<Economy, Failure> {
        let io = self.resolver.required_path(args.economy, "economy")?;
        let el = self
            .resolver
            .required_path(args.elasticities, "elasticities")?;
        input::economy(&io, &el)
    }

    fn options(&self, args: &SolverArgs) -> Result<(FixedPointOptions, Numeraire), Failure> {
        let defaults = FixedPointOptions::default();
        let tol = self.resolver.float(args.tol, "tol", defaults.tol)?;
        let max_iter = self
            .resolver
            .int(args.max_iter, "max_iter", defaults.max_iter as u64)?;
        if !(tol > 0.0) || max_iter == 0 {
            return Err(Failure::Usage("tol and max-iter must be positive".into()));
        }
        let pi0 = Numeraire::new(self.resolver.float(args.numeraire, "numeraire", 1.0)?)?;
        Ok((
            FixedPointOptions {
                tol,
                max_iter: max_iter as usize,
            },
            pi0,
        ))
    }

    fn shocks(&self, path: Option<PathBuf>, economy: &Economy) -> Result<ShockVector, Failure> {
        match self.resolver.path(path, "shocks")? {
            Some(p) => Ok(ShockVector::new(input::aligned(&p, economy.labels())?)?),
            None => Ok(ShockVector::ones(economy.n())),
        }
    }

    pub fn prefs(
        &self,
        args: &HouseholdArgs,
        economy: &Economy,
    ) -> Result<HouseholdPrefs, Failure> {
        let kappa = self.resolver.float(args.kappa, "kappa", 0.0)?;
        match self.resolver.path(args.prefs.clone(), "prefs")? {
            Some(p) => Ok(HouseholdPrefs::new(
                input::aligned(&p, economy.labels())?,
                kappa,
            )?),
            None => Ok(HouseholdPrefs::uniform(economy.n(), kappa)?),
        }
    }

    pub fn shock_config(&self, args: &ShockArgs) -> Result<ShockConfig, Failure> {
        let d = ShockConfig {
            seed: crate::DEFAULT_SEED,
            ..Default::default()
        };
        let count = self.resolver.int(args.count, "count", d.count as u64)?;
        if count == 0 {
            return Err(Failure::Usage("count must be at least 1".into()));
        }
        let sigma = self.resolver.float(args.sigma, "sigma", d.sigma)?;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Failure::Usage("sigma must be positive".into()));
        }
        Ok(ShockConfig {
            count: count as usize,
            sigma,
            seed: self.resolver.int(args.seed, "seed", d.seed)?,
            mean: self.resolver.float(args.mean, "mean", d.mean)?,
        })
    }

    fn method(&self, flag: Option<String>) -> Result<AggregationMethod, Failure> {
        match self.resolver.text(flag, "method")? {
            Some(m) => m
                .parse()
                .map_err(|e: cesnet_core::Error| Failure::Usage(e.to_string())),
            None => Ok(AggregationMethod::GeneralCes),
        }
    }
}

pub(crate) fn execute(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let resolver = Resolver { file: &file };
    let out_dir = resolver
        .path(cli.out_dir, "out_dir")?
        .unwrap_or_else(|| PathBuf::from("."));
    let format = match (cli.format, resolver.text(None, "format")?) {
        (Some(f), _) => f,
        (None, Some(t)) => match t.as_str() {
            "json" => Format::Json,
            "csv" => Format::Csv,
            other => return Err(Failure::Usage(format!("unknown format `{other}`"))),
        },
        (None, None) => Format::Json,
    };
    let threads = resolver.int(cli.threads.map(|t| t as u64), "threads", 0)? as usize;
    let ctx = Context {
        resolver,
        out_dir,
        format,
    };
    with_threads(threads, || dispatch(&ctx, cli.command))
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: usize, f: impl FnOnce() -> T + Send) -> T {
    f()
}

fn dispatch(ctx: &Context, command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            economy,
            shocks,
            method,
            gamma,
            solver,
        } => solve(ctx, economy, shocks, method, gamma, solver),
        Command::Structure {
            economy,
            shocks,
            solver,
        } => structure(ctx, economy, shocks, solver),
        Command::Aggregate {
            economy,
            shocks,
            method,
            household,
            solver,
        } => aggregate(ctx, economy, shocks, method, household, solver),
        Command::Simulate {
            economy,
            method,
            household,
            shock,
            solver,
        } => simulate(ctx, economy, method, household, shock, solver),
        Command::Qq { input, column } => qq(ctx, input, column),
        Command::Hp {
            input,
            column,
            lambda,
        } => hp(ctx, input, column, lambda),
        Command::Gbm { input, alpha } => gbm(ctx, input, alpha),
        Command::Estimate {
            panel,
            iv,
            method,
            role,
            output_prices,
        } => estimate(ctx, panel, iv, method, role, output_prices),
        Command::Experiment {
            economy,
            household,
            shock,
            solver,
        } => {
            let e = ctx.economy(economy)?;
            let prefs = ctx.prefs(&household, &e)?;
            let config = ctx.shock_config(&shock)?;
            let (options, _) = ctx.options(&solver)?;
            experiment::run(ctx, &e, &prefs, &config, &options)
        }
    }
}

pub(crate) fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

fn labelled_vector(
    labels: &[String],
    v: &DVector<f64>,
) -> serde_json::Map<String, serde_json::Value> {
    labels
        .iter()
        .zip(v.iter())
        .map(|(l, x)| (l.clone(), json!(x)))
        .collect()
}

fn solve(
    ctx: &Context,
    economy: EconomyArgs,
    shocks: Option<PathBuf>,
    method: Option<String>,
    gamma: Option<f64>,
    solver: SolverArgs,
) -> Result<(), Failure> {
    let e = ctx.economy(economy)?;
    let z = ctx.shocks(shocks, &e)?;
    let (options, pi0) = ctx.options(&solver)?;
    let method = ctx
        .resolver
        .text(method, "method")?
        .unwrap_or_else(|| "general_ces".into());
    let (pi, meta) = match method.replace('-', "_").as_str() {
        "uniform_ces" => {
            let g = ctx
                .resolver
                .opt_float(gamma, "gamma")?
                .ok_or_else(|| Failure::Usage("uniform_ces needs --gamma".into()))?;
            (
                solve_uniform_ces(&e, &z, g, pi0)?,
                json!({ "method": "uniform_ces", "gamma": g }),
            )
        }
        m => match m
            .parse::<AggregationMethod>()
            .map_err(|e| Failure::Usage(e.to_string()))?
        {
            AggregationMethod::Leontief => (
                solve_leontief(&e, &z, pi0)?,
                json!({ "method": "leontief" }),
            ),
            AggregationMethod::CobbDouglas => (
                solve_cobb_douglas(&e, &z, pi0)?.map(f64::exp),
                json!({ "method": "cobb_douglas" }),
            ),
            AggregationMethod::GeneralCes => {
                let r = solve_fixed_point(&e, &z, pi0, &options)?;
                match r.status {
                    SolveStatus::Converged => {}
                    SolveStatus::Diverged => {
                        return Err(Failure::domain(
                            "Unviable",
                            format!("price recursion diverged after {} iterations", r.iterations),
                        ))
                    }
                    SolveStatus::MaxIterations => {
                        return Err(Failure::domain(
                            "NotConverged",
                            format!(
                                "no convergence within {} iterations (last change {:e})",
                                r.iterations, r.residual
                            ),
                        ))
                    }
                }
                let meta = json!({
                    "method": "general_ces",
                    "iterations": r.iterations,
                    "residual": r.residual,
                    "tol": options.tol,
                });
                (r.pi, meta)
            }
        },
    };
    let csv = csv_bytes(
        &["label", "price"],
        e.labels()
            .iter()
            .zip(pi.iter())
            .map(|(l, p)| vec![l.clone(), p.to_string()]),
    );
    ctx.write("prices.csv", &csv)?;
    let mut doc = meta;
    doc["numeraire"] = json!(pi0.value());
    doc["prices"] = json!(labelled_vector(e.labels(), &pi));
    let json = ctx.write_json("solve.json", &doc)?;
    ctx.emit(&json, &csv);
    Ok(())
}

fn matrix_csv(labels: &[String], first: &DVector<f64>, rest: &nalgebra::DMatrix<f64>) -> Vec<u8> {
    let mut header = vec!["row"];
    header.extend(labels.iter().map(String::as_str));
    let mut rows = vec![
        std::iter::once(cesnet_core::economy::PRIMARY_LABEL.to_string())
            .chain(first.iter().map(f64::to_string))
            .collect::<Vec<_>>(),
    ];
    for (i, l) in labels.iter().enumerate() {
        rows.push(
            std::iter::once(l.clone())
                .chain(rest.row(i).iter().map(f64::to_string))
                .collect(),
        );
    }
    csv_bytes(&header, rows)
}

fn structure(
    ctx: &Context,
    economy: EconomyArgs,
    shocks: Option<PathBuf>,
    solver: SolverArgs,
) -> Result<(), Failure> {
    let e = ctx.economy(economy)?;
    let z = ctx.shocks(shocks, &e)?;
    let (options, pi0) = ctx.options(&solver)?;
    let r = solve_fixed_point(&e, &z, pi0, &options)?;
    if !r.converged() {
        return Err(Failure::domain(
            "Unviable",
            format!(
                "no equilibrium found ({:?} after {} iterations)",
                r.status, r.iterations
            ),
        ));
    }
    let st = equilibrium_structure(&e, &r.pi, pi0, &z)?;
    let b = matrix_csv(e.labels(), &st.b0, &st.b);
    ctx.write("B.csv", &b)?;
    ctx.write("S.csv", &matrix_csv(e.labels(), &st.s0, &st.s))?;
    let json = ctx.write_json(
        "structure.json",
        &json!({
            "viable": st.viable,
            "iterations": r.iterations,
            "prices": labelled_vector(e.labels(), &r.pi),
        }),
    )?;
    ctx.emit(&json, &b);
    Ok(())
}

fn reason_name(reason: UnviableReason) -> &'static str {
    match reason {
        UnviableReason::Diverged => "diverged",
        UnviableReason::NotConverged => "not_converged",
        UnviableReason::NoPositiveSolution => "no_positive_solution",
    }
}

fn aggregate(
    ctx: &Context,
    economy: EconomyArgs,
    shocks: Option<PathBuf>,
    method: Option<String>,
    household: HouseholdArgs,
    solver: SolverArgs,
) -> Result<(), Failure> {
    let e = ctx.economy(economy)?;
    let z = ctx.shocks(shocks, &e)?;
    let method = ctx.method(method)?;
    let prefs = ctx.prefs(&household, &e)?;
    let (options, _) = ctx.options(&solver)?;
    let mut doc = json!({ "method": method, "kappa": prefs.kappa() });
    match real_gdp_growth_with(&e, &prefs, &z, method, &options)? {
        GrowthOutcome::Viable(h) => {
            doc["viable"] = json!(true);
            doc["ln_h"] = json!(h);
        }
        GrowthOutcome::Unviable(u) => {
            doc["viable"] = json!(false);
            doc["reason"] = json!(reason_name(u.reason));
        }
    }
    if method == AggregationMethod::CobbDouglas {
        let w = domar_weights(&e, prefs.mu())?;
        doc["domar_weights"] = json!(labelled_vector(e.labels(), &w));
    }
    let json = ctx.write_json("aggregate.json", &doc)?;
    let csv = csv_bytes(
        &["method", "ln_h"],
        [vec![
            method.name().to_string(),
            doc["ln_h"]
                .as_f64()
                .map(|v| v.to_string())
                .unwrap_or_default(),
        ]],
    );
    ctx.emit(&json, &csv);
    Ok(())
}

pub(crate) fn samples_csv(s: &DistributionSummary) -> Vec<u8> {
    csv_bytes(
        &["index", "ln_h"],
        s.samples
            .iter()
            .map(|v| vec![v.index.to_string(), v.ln_h.to_string()]),
    )
}

pub(crate) fn qq_csv(points: &[QqPoint]) -> Vec<u8> {
    csv_bytes(
        &["theoretical", "sample"],
        points
            .iter()
            .map(|p| vec![p.theoretical.to_string(), p.sample.to_string()]),
    )
}

/// QQ points when the viable sample supports them.
pub(crate) fn summary_qq(s: &DistributionSummary) -> Option<Vec<QqPoint>> {
    qq_points(&s.values()).ok()
}

fn simulate(
    ctx: &Context,
    economy: EconomyArgs,
    method: Option<String>,
    household: HouseholdArgs,
    shock: ShockArgs,
    solver: SolverArgs,
) -> Result<(), Failure> {
    let e = ctx.economy(economy)?;
    let method = ctx.method(method)?;
    let prefs = ctx.prefs(&household, &e)?;
    let config = ctx.shock_config(&shock)?;
    let (options, _) = ctx.options(&solver)?;
    let s = simulate_distribution_with(&e, &prefs, &config, method, &options, Execution::Parallel)?;
    let json = ctx.write_json("summary.json", &s)?;
    let samples = samples_csv(&s);
    ctx.write("samples.csv", &samples)?;
    if let Some(q) = summary_qq(&s) {
        ctx.write("qq.csv", &qq_csv(&q))?;
    }
    ctx.emit(&json, &samples);
    Ok(())
}

fn required_input(ctx: &Context, input: Option<PathBuf>) -> Result<PathBuf, Failure> {
    ctx.resolver.required_path(input, "input")
}

fn qq(ctx: &Context, input: Option<PathBuf>, column: Option<String>) -> Result<(), Failure> {
    let path = required_input(ctx, input)?;
    let column = ctx.resolver.text(column, "column")?;
    let values = input::column(&path, column.as_deref())?;
    let points = qq_points(&values)?;
    let csv = qq_csv(&points);
    ctx.write("qq.csv", &csv)?;
    let json = serde_json::to_vec_pretty(&points).expect("qq serializes");
    ctx.emit(&json, &csv);
    Ok(())
}

fn hp(
    ctx: &Context,
    input: Option<PathBuf>,
    column: Option<String>,
    lambda: Option<f64>,
) -> Result<(), Failure> {
    let path = required_input(ctx, input)?;
    let column = ctx.resolver.text(column, "column")?;
    let lambda = ctx.resolver.float(lambda, "lambda", 1600.0)?;
    let values = input::column(&path, column.as_deref())?;
    let d = hp_filter(&values, lambda)?;
    let csv = csv_bytes(
        &["index", "value", "trend", "cycle"],
        (0..values.len()).map(|i| {
            vec![
                i.to_string(),
                values[i].to_string(),
                d.trend[i].to_string(),
                d.cycle[i].to_string(),
            ]
        }),
    );
    ctx.write("hp.csv", &csv)?;
    let json =
        serde_json::to_vec_pretty(&json!({ "lambda": lambda, "trend": d.trend, "cycle": d.cycle }))
            .expect("hp serializes");
    ctx.emit(&json, &csv);
    Ok(())
}

#[derive(Serialize)]
struct GbmRow {
    series: String,
    n_obs: usize,
    mu_moments: f64,
    sigma_moments: f64,
    mu_dlm: f64,
    sigma_dlm: f64,
    shapiro_w: f64,
    shapiro_p: f64,
    normality: &'static str,
}

fn gbm(ctx: &Context, input: Option<PathBuf>, alpha: Option<f64>) -> Result<(), Failure> {
    let path = required_input(ctx, input)?;
    let alpha = ctx.resolver.float(alpha, "alpha", 0.05)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Failure::Usage("alpha must lie in (0, 1)".into()));
    }
    let mut rows = Vec::new();
    for (name, series) in input::columns(&path)? {
        let wrap = |e: cesnet_core::Error| Failure::domain(e.kind(), format!("series {name}: {e}"));
        let m = estimate_gbm_moments(&series).map_err(wrap)?;
        let d = estimate_gbm_dlm(&series).map_err(wrap)?;
        let growth: Vec<f64> = series.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
        let sw = shapiro_wilk(&growth).map_err(wrap)?;
        rows.push(GbmRow {
            series: name,
            n_obs: series.len(),
            mu_moments: m.mu_hat,
            sigma_moments: m.sigma_hat,
            mu_dlm: d.mu_hat,
            sigma_dlm: d.sigma_hat,
            shapiro_w: sw.w,
            shapiro_p: sw.p_value,
            normality: if sw.rejects_normality(alpha) {
                "rejected"
            } else {
                "not_rejected"
            },
        });
    }
    let csv = csv_bytes(
        &[
            "series",
            "n_obs",
            "mu_moments",
            "sigma_moments",
            "mu_dlm",
            "sigma_dlm",
            "shapiro_w",
            "shapiro_p",
            "normality",
        ],
        rows.iter().map(|r| {
            vec![
                r.series.clone(),
                r.n_obs.to_string(),
                r.mu_moments.to_string(),
                r.sigma_moments.to_string(),
                r.mu_dlm.to_string(),
                r.sigma_dlm.to_string(),
                r.shapiro_w.to_string(),
                r.shapiro_p.to_string(),
                r.normality.to_string(),
            ]
        }),
    );
    ctx.write("gbm.csv", &csv)?;
    let json = serde_json::to_vec_pretty(&rows).expect("gbm serializes");
    ctx.emit(&json, &csv);
    Ok(())
}

/// Flat estimate record: one column per reported statistic.
#[derive(Serialize)]
pub(crate) struct EstimateReport {
    parameter: Parameter,
    method: EstimationMethod,
    estimate: f64,
    std_error: f64,
    sigma_hat: Option<f64>,
    sigma_std_error: Option<f64>,
    first_stage_f: Option<f64>,
    weak_instrument: Option<bool>,
    sargan: Option<f64>,
    sargan_p: Option<f64>,
    endogeneity: Option<f64>,
    endogeneity_p: Option<f64>,
    instruments: String,
    n_obs: usize,
    n_entities: usize,
    base_period: i64,
    time_effects: Vec<cesnet_core::econometrics::TimeEffect>,
    productivity: Option<Vec<serde_json::Value>>,
}

impl EstimateReport {
    pub(crate) fn new(est: &ElasticityEstimate) -> Self {
        let d = est.diagnostics.as_ref();
        EstimateReport {
            parameter: est.parameter,
            method: est.method,
            estimate: est.coefficient,
            std_error: est.std_error,
            sigma_hat: est.sigma_hat(),
            sigma_std_error: est.sigma_hat().map(|_| est.std_error),
            first_stage_f: d.map(|d| d.first_stage_f),
            weak_instrument: d.map(|d| d.weak_instrument),
            sargan: d.and_then(|d| d.sargan).map(|t| t.statistic),
            sargan_p: d.and_then(|d| d.sargan).map(|t| t.p_value),
            endogeneity: d.and_then(|d| d.endogeneity).map(|t| t.statistic),
            endogeneity_p: d.and_then(|d| d.endogeneity).map(|t| t.p_value),
            instruments: est.instruments.join(","),
            n_obs: est.n_obs,
            n_entities: est.n_entities,
            base_period: est.base_period,
            time_effects: est.time_effects.clone(),
            productivity: None,
        }
    }
}

fn estimate(
    ctx: &Context,
    panel: Option<PathBuf>,
    iv: Option<String>,
    method: Option<String>,
    role: Option<String>,
    output_prices: Option<PathBuf>,
) -> Result<(), Failure> {
    let path = ctx.resolver.required_path(panel, "panel")?;
    let iv = ctx.resolver.text(iv, "iv")?;
    let method = ctx.resolver.text(method, "method")?;
    let role = match ctx.resolver.text(role, "role")?.as_deref() {
        None | Some("gamma") => Parameter::Gamma,
        Some("kappa") => Parameter::Kappa,
        Some(other) => return Err(Failure::Usage(format!("unknown role `{other}`"))),
    };
    let use_iv = match (method.as_deref(), &iv) {
        (None, iv) => iv.is_some(),
        (Some("iv"), Some(_)) => true,
        (Some("iv"), None) => return Err(Failure::Usage("method iv needs --iv".into())),
        (Some("ls"), _) => false,
        (Some(other), _) => {
            return Err(Failure::Usage(format!(
                "unknown estimation method `{other}`"
            )))
        }
    };
    let data = input::panel(&path)?;
    let mut est = if use_iv {
        let specs = parse_instruments(iv.as_deref().unwrap_or(""), data.instrument_names())?;
        fe_2sls(&data, &specs)?
    } else {
        fe_ols(&data)?
    };
    est.parameter = role;
    let mut report = EstimateReport::new(&est);
    if let Some(p) = ctx.resolver.path(output_prices, "output_prices")? {
        report.productivity = Some(productivity(&est, &p)?);
    }
    let json = ctx.write_json("estimate.json", &report)?;
    let csv = csv_bytes(
        &[
            "parameter",
            "method",
            "estimate",
            "std_error",
            "first_stage_f",
            "sargan_p",
            "endogeneity_p",
            "instruments",
        ],
        [vec![
            format!("{:?}", report.parameter).to_lowercase(),
            if use_iv { "IV_FE" } else { "LS_FE" }.to_string(),
            report.estimate.to_string(),
            report.std_error.to_string(),
            opt(report.first_stage_f),
            opt(report.sargan_p),
            opt(report.endogeneity_p),
            report.instruments.clone(),
        ]],
    );
    ctx.emit(&json, &csv);
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn productivity(est: &ElasticityEstimate, path: &Path) -> Result<Vec<serde_json::Value>, Failure> {
    let prices = input::period_prices(path)?;
    let periods: Vec<i64> = std::iter::once(est.base_period)
        .chain(est.time_effects.iter().map(|t| t.period))
        .collect();
    let aligned = periods
        .iter()
        .map(|t| {
            prices
                .iter()
                .find(|(p, _)| p == t)
                .map(|(_, v)| *v)
                .ok_or_else(|| {
                    Failure::domain("MalformedTable", format!("no output price for period {t}"))
                })
        })
        .collect::<Result<Vec<f64>, Failure>>()?;
    let growth = recover_productivity(est, &aligned)?;
    Ok(periods
        .iter()
        .zip(growth)
        .map(|(p, g)| json!({ "period": p, "ln_productivity_growth": g }))
        .collect())
}

use cesnet_core::montecarlo::{
    sample_log_shock, simulate_distribution_with, Execution, Quantile, ShockConfig,
};
use cesnet_core::{AggregationMethod, Economy, FixedPointOptions, HouseholdPrefs};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::{csv_bytes, qq_csv, samples_csv, summary_qq, Context};
use crate::Failure;

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum MethodEntry {
    Ok {
        method: AggregationMethod,
        shock_digest: String,
        mean: f64,
        variance: Option<f64>,
        skewness: Option<f64>,
        kurtosis: Option<f64>,
        quantiles: Vec<Quantile>,
        n_viable: usize,
        n_unviable: usize,
        qq_file: Option<String>,
    },
    Failed {
        method: AggregationMethod,
        shock_digest: String,
        error: String,
        message: String,
    },
}

#[derive(Serialize)]
struct Report {
    seed: u64,
    count: usize,
    sigma: f64,
    mean_shock: f64,
    kappa: f64,
    sectors: usize,
    methods: Vec<MethodEntry>,
    paired_shocks: bool,
    /// Methods with a viable sample, by ascending mean growth.
    growth_ordering: Vec<AggregationMethod>,
}

/// SHA-256 over the little-endian bytes of every log shock, sample by
/// sample.
pub fn shock_digest(n: usize, config: &ShockConfig) -> String {
    let mut h = Sha256::new();
    for k in 0..config.count {
        for v in sample_log_shock(n, config, k) {
            h.update(v.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

pub(crate) fn run(
    ctx: &Context,
    economy: &Economy,
    prefs: &HouseholdPrefs,
    config: &ShockConfig,
    options: &FixedPointOptions,
) -> Result<(), Failure> {
    let mut entries = Vec::new();
    let mut means = Vec::new();
    for method in [
        AggregationMethod::CobbDouglas,
        AggregationMethod::Leontief,
        AggregationMethod::GeneralCes,
    ] {
        let shock_digest = shock_digest(economy.n(), config);
        match simulate_distribution_with(
            economy,
            prefs,
            config,
            method,
            options,
            Execution::Parallel,
        ) {
            Ok(s) => {
                let name = method.name();
                ctx.write_json(&format!("summary_{name}.json"), &s)?;
                ctx.write(&format!("samples_{name}.csv"), &samples_csv(&s))?;
                let qq_file = match summary_qq(&s) {
                    Some(q) => {
                        let file = format!("qq_{name}.csv");
                        ctx.write(&file, &qq_csv(&q))?;
                        Some(file)
                    }
                    None => None,
                };
                means.push((method, s.mean));
                entries.push(MethodEntry::Ok {
                    method,
                    shock_digest,
                    mean: s.mean,
                    variance: s.variance,
                    skewness: s.skewness,
                    kurtosis: s.kurtosis,
                    quantiles: s.quantiles.clone(),
                    n_viable: s.n_viable,
                    n_unviable: s.n_unviable,
                    qq_file,
                });
            }
            Err(e) => entries.push(MethodEntry::Failed {
                method,
                shock_digest,
                error: e.kind().to_string(),
                message: e.to_string(),
            }),
        }
    }
    let digests: Vec<&String> = entries
        .iter()
        .map(|e| match e {
            MethodEntry::Ok { shock_digest, .. } | MethodEntry::Failed { shock_digest, .. } => {
                shock_digest
            }
        })
        .collect();
    means.sort_by(|a, b| a.1.total_cmp(&b.1));
    let report = Report {
        seed: config.seed,
        count: config.count,
        sigma: config.sigma,
        mean_shock: config.mean,
        kappa: prefs.kappa(),
        sectors: economy.n(),
        paired_shocks: digests.windows(2).all(|w| w[0] == w[1]),
        methods: entries,
        growth_ordering: means.into_iter().map(|(m, _)| m).collect(),
    };
    let json = ctx.write_json("report.json", &report)?;
    let csv = csv_bytes(
        &["method", "status", "mean", "n_viable", "n_unviable"],
        report.methods.iter().map(|e| match e {
            MethodEntry::Ok {
                method,
                mean,
                n_viable,
                n_unviable,
                ..
            } => vec![
                method.name().to_string(),
                "ok".into(),
                mean.to_string(),
                n_viable.to_string(),
                n_unviable.to_string(),
            ],
            MethodEntry::Failed { method, error, .. } => {
                vec![
                    method.name().to_string(),
                    error.clone(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]
            }
        }),
    );
    ctx.emit(&json, &csv);
    Ok(())
}

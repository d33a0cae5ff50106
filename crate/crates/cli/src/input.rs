use std::fs::File;
use std::path::Path;

use cesnet_core::econometrics::PanelDataset;
use cesnet_core::Economy;

use crate::Failure;

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::io(e, path))
}

fn reader(path: &Path, headers: bool) -> Result<csv::Reader<File>, Failure> {
    Ok(csv::ReaderBuilder::new()
        .has_headers(headers)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(open(path)?))
}

fn malformed(path: &Path, msg: impl std::fmt::Display) -> Failure {
    Failure::domain("MalformedTable", format!("{}: {msg}", path.display()))
}

pub fn economy(io_table: &Path, elasticities: &Path) -> Result<Economy, Failure> {
    Ok(Economy::from_readers(open(io_table)?, open(elasticities)?)?)
}

/// Two-column `label,value` file with an optional header row.
pub fn label_values(path: &Path) -> Result<Vec<(String, f64)>, Failure> {
    let mut out = Vec::new();
    for (k, rec) in reader(path, false)?.records().enumerate() {
        let rec = rec.map_err(|e| malformed(path, e))?;
        if rec.len() != 2 {
            return Err(malformed(
                path,
                format!("expected 2 columns, found {}", rec.len()),
            ));
        }
        match rec[1].parse::<f64>() {
            Ok(v) => out.push((rec[0].to_string(), v)),
            Err(_) if k == 0 => continue,
            Err(_) => return Err(malformed(path, format!("cannot parse `{}`", &rec[1]))),
        }
    }
    Ok(out)
}

/// Values of a `label,value` file in the order of `labels`.
pub fn aligned(path: &Path, labels: &[String]) -> Result<Vec<f64>, Failure> {
    let pairs = label_values(path)?;
    if pairs.len() != labels.len() {
        return Err(Failure::domain(
            "DimensionMismatch",
            format!(
                "{}: expected {} rows, found {}",
                path.display(),
                labels.len(),
                pairs.len()
            ),
        ));
    }
    labels
        .iter()
        .map(|l| {
            pairs
                .iter()
                .find(|(k, _)| k == l)
                .map(|(_, v)| *v)
                .ok_or_else(|| malformed(path, format!("no row for sector `{l}`")))
        })
        .collect()
}

/// Numeric columns of a headed CSV; empty cells are skipped.
pub fn columns(path: &Path) -> Result<Vec<(String, Vec<f64>)>, Failure> {
    let mut rd = reader(path, true)?;
    let names: Vec<String> = rd
        .headers()
        .map_err(|e| malformed(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for rec in rd.records() {
        let rec = rec.map_err(|e| malformed(path, e))?;
        for (c, cell) in rec.iter().enumerate().take(names.len()) {
            if cell.is_empty() {
                continue;
            }
            let v = cell.parse::<f64>().map_err(|_| {
                malformed(
                    path,
                    format!("cannot parse `{cell}` in column {}", names[c]),
                )
            })?;
            cols[c].push(v);
        }
    }
    Ok(names.into_iter().zip(cols).collect())
}

/// One column by name; otherwise `ln_h` when present, else the first.
pub fn column(path: &Path, name: Option<&str>) -> Result<Vec<f64>, Failure> {
    let cols = columns(path)?;
    let pick = match name {
        Some(n) => cols.iter().position(|(c, _)| c == n),
        None => cols
            .iter()
            .position(|(c, _)| c == "ln_h")
            .or(if cols.is_empty() { None } else { Some(0) }),
    };
    match pick {
        Some(i) => Ok(cols[i].1.clone()),
        None => Err(malformed(
            path,
            format!("no column `{}`", name.unwrap_or("")),
        )),
    }
}

pub fn panel(path: &Path) -> Result<PanelDataset, Failure> {
    Ok(PanelDataset::read_csv(open(path)?)?)
}

/// `period,price` rows sorted by period.
pub fn period_prices(path: &Path) -> Result<Vec<(i64, f64)>, Failure> {
    let mut out = Vec::new();
    for (period, price) in label_values(path)? {
        let p = period
            .parse::<i64>()
            .map_err(|_| malformed(path, format!("period `{period}` is not an integer")))?;
        out.push((p, price));
    }
    out.sort_by_key(|(p, _)| *p);
    Ok(out)
}

//! CSV plot data from a report.
//!
//! * `orbit-<k>.csv` for the `k`-th analysis with a classification:
//!   `n, diameter, diameter_decimal, dist_to_limit, dist_to_limit_decimal`.
//! * `checks.csv`: one row per check across all analyses.
//!
//! Decimal columns are display copies of the exact `p/q` columns.

use std::path::{Path, PathBuf};

use hyperdyn_core::rational;

use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::write::atomic_write;

fn decimal(text: &str) -> CliResult<String> {
    Ok(format!("{:.12}", rational::to_f64(&rational::parse(text)?)))
}

fn finish(w: csv::Writer<Vec<u8>>, path: &Path) -> CliResult<()> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::io(path, std::io::Error::other(e.to_string())))?;
    atomic_write(path, &bytes)
}

fn row<I, S>(w: &mut csv::Writer<Vec<u8>>, path: &Path, fields: I) -> CliResult<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    w.write_record(fields)
        .map_err(|e| CliError::io(path, std::io::Error::other(e.to_string())))
}

/// Writes the CSV files into `dir` and returns their paths.
pub fn export_plot_data(report: &Report, dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (k, a) in report.analyses.iter().enumerate() {
        let Some(c) = &a.classification else { continue };
        let path = dir.join(format!("orbit-{k}.csv"));
        let mut w = csv::Writer::from_writer(Vec::new());
        row(
            &mut w,
            &path,
            ["n", "diameter", "diameter_decimal", "dist_to_limit", "dist_to_limit_decimal"],
        )?;
        for r in &c.orbit {
            let (dist, dist_dec) = match &r.dist_to_limit {
                Some(d) => (d.clone(), decimal(d)?),
                None => (String::new(), String::new()),
            };
            row(
                &mut w,
                &path,
                [r.n.to_string(), r.diameter.clone(), decimal(&r.diameter)?, dist, dist_dec],
            )?;
        }
        finish(w, &path)?;
        written.push(path);
    }
    let path = dir.join("checks.csv");
    let mut w = csv::Writer::from_writer(Vec::new());
    row(
        &mut w,
        &path,
        ["analysis", "kind", "theorem", "status", "instances", "seed", "detail"],
    )?;
    for (k, a) in report.analyses.iter().enumerate() {
        for c in &a.checks {
            row(
                &mut w,
                &path,
                [
                    k.to_string(),
                    a.kind.clone(),
                    c.theorem.clone(),
                    c.status.clone(),
                    c.instances.to_string(),
                    c.seed.map(|s| s.to_string()).unwrap_or_default(),
                    c.detail.clone(),
                ],
            )?;
        }
    }
    finish(w, &path)?;
    written.push(path);
    Ok(written)
}

pub fn read_report(path: &Path) -> CliResult<Report> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

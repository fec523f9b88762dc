use std::path::PathBuf;

use clap::Args;
use gramcomp::stats::{forest_data, meta_reml, MetaResult, Study};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::table::Table;
use crate::Settings;

#[derive(Debug, Args)]
pub struct MetaArgs {
    /// Correlation tables written by `correlate`.
    #[arg(long = "correlations", required = true)]
    pub correlations: Vec<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct FeatureMeta {
    pub feature: String,
    #[serde(flatten)]
    pub result: MetaResult<f64>,
}

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub feature: String,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct MetaReport {
    pub features: Vec<FeatureMeta>,
    pub skipped: Vec<Skipped>,
}

/// Groups rows by feature (first-appearance order) and pools each group.
pub fn meta_table(table: &Table) -> Result<MetaReport> {
    let (f, l, r, n) = (
        table.column("feature")?,
        table.column("language")?,
        table.column("rho")?,
        table.column("n")?,
    );
    let mut groups: Vec<(String, Vec<Study<f64>>)> = Vec::new();
    let mut skipped = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let feature = &row[f];
        let pos = match groups.iter().position(|(g, _)| g == feature) {
            Some(p) => p,
            None => {
                groups.push((feature.clone(), Vec::new()));
                groups.len() - 1
            }
        };
        let Some(rho) = table.number(i, r)? else { continue };
        let count = row[n]
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Schema(format!("row {}: `{}` is not a count", i + 2, row[n])))?;
        groups[pos].1.push(Study::new(row[l].clone(), rho, count));
    }
    let mut features = Vec::new();
    for (feature, studies) in groups {
        match meta_reml(&studies) {
            Ok(result) => features.push(FeatureMeta { feature, result }),
            Err(e) => skipped.push(Skipped {
                feature,
                reason: e.to_string(),
            }),
        }
    }
    Ok(MetaReport { features, skipped })
}

fn file_stem(feature: &str) -> String {
    feature
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub fn run(args: &MetaArgs, settings: &Settings) -> Result<()> {
    let table = Table::read_many(&args.correlations)?;
    let report = meta_table(&table)?;
    for s in &report.skipped {
        eprintln!("gramcomp: meta: skipped `{}`: {}", s.feature, s.reason);
    }
    for fm in &report.features {
        let path = settings.out_path(&format!("forest_{}.csv", file_stem(&fm.feature)))?;
        let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::schema(&path, e))?;
        for row in forest_data(&fm.result) {
            w.serialize(row).map_err(|e| CliError::schema(&path, e))?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
    }
    let out = settings.out_path("meta.json")?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(&out, json + "\n").map_err(|e| CliError::io(&out, e))?;
    if report.features.is_empty() {
        return Err(CliError::Empty("meta: no feature had two usable studies".into()));
    }
    Ok(())
}

use std::path::PathBuf;

use clap::Args;
use gramcomp::stats::{friedman_test, siegel_posthoc};
use ndarray::Array2;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::table::Table;
use crate::Settings;

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Metrics tables written by `analyze`.
    #[arg(long = "metrics", required = true)]
    pub metrics: Vec<PathBuf>,
    /// Condition columns to compare.
    #[arg(long, value_delimiter = ',', default_values_t = ["t_freq".to_string(), "t_ctx".into(), "t_ctx_rev".into()])]
    pub columns: Vec<String>,
    /// Output file (default: `<output-dir>/compare.json`).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct PairReport {
    pub a: String,
    pub b: String,
    pub mean_rank_a: f64,
    pub mean_rank_b: f64,
    /// Condition with the larger mean rank, absent on an exact tie.
    pub higher: Option<String>,
    pub z: f64,
    pub p_raw: f64,
    pub p_fdr: f64,
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub conditions: Vec<String>,
    pub n_blocks: usize,
    /// Rows skipped because a condition value was missing.
    pub n_incomplete: usize,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub tie_correction: f64,
    pub mean_ranks: Vec<f64>,
    pub posthoc: Vec<PairReport>,
}

pub fn compare_table(table: &Table, columns: &[String]) -> Result<CompareReport> {
    let idx = columns.iter().map(|c| table.column(c)).collect::<Result<Vec<_>>>()?;
    let mut values = Vec::new();
    let mut incomplete = 0;
    for r in 0..table.rows.len() {
        let row = idx.iter().map(|&c| table.number(r, c)).collect::<Result<Vec<_>>>()?;
        match row.into_iter().collect::<Option<Vec<f64>>>() {
            Some(v) => values.extend(v),
            None => incomplete += 1,
        }
    }
    let n = values.len() / columns.len();
    let blocks = Array2::from_shape_vec((n, columns.len()), values).expect("rectangular");
    let fr = friedman_test(blocks.view()).map_err(|e| CliError::Empty(format!("compare: {e}")))?;
    let post = siegel_posthoc(&fr);
    let posthoc = post
        .pairs
        .iter()
        .map(|p| {
            let (ra, rb) = (fr.mean_ranks[p.i], fr.mean_ranks[p.j]);
            PairReport {
                a: columns[p.i].clone(),
                b: columns[p.j].clone(),
                mean_rank_a: ra,
                mean_rank_b: rb,
                higher: match ra.partial_cmp(&rb) {
                    Some(std::cmp::Ordering::Greater) => Some(columns[p.i].clone()),
                    Some(std::cmp::Ordering::Less) => Some(columns[p.j].clone()),
                    _ => None,
                },
                z: p.z,
                p_raw: p.p_raw,
                p_fdr: p.p_fdr,
            }
        })
        .collect();
    Ok(CompareReport {
        conditions: columns.to_vec(),
        n_blocks: fr.n_blocks,
        n_incomplete: incomplete,
        statistic: fr.statistic,
        df: fr.df,
        p_value: fr.p_value,
        tie_correction: fr.tie_correction,
        mean_ranks: fr.mean_ranks,
        posthoc,
    })
}

pub fn run(args: &CompareArgs, settings: &Settings) -> Result<()> {
    if args.columns.len() < 2 {
        return Err(CliError::Schema("compare: need at least two columns".into()));
    }
    let table = Table::read_many(&args.metrics)?;
    let report = compare_table(&table, &args.columns)?;
    let out = match &args.output {
        Some(p) => p.clone(),
        None => settings.out_path("compare.json")?,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(&out, json + "\n").map_err(|e| CliError::io(&out, e))
}

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gramcomp::stats::{fdr_bh, fdr_two_stage, spearman_with, FisherVariance};

use crate::error::{CliError, Result};
use crate::table::{fmt_opt, write_tsv, Table};
use crate::Settings;

pub const CORRELATION_COLUMNS: [&str; 8] = ["feature", "language", "rho", "n", "p_raw", "p_fdr", "ci_low", "ci_high"];

pub const DEFAULT_FEATURES: [&str; 6] = [
    "mean_mhd",
    "mean_omega",
    "mean_sub_unevenness",
    "mean_b2",
    "gride_token_norm",
    "gride_embed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FdrMethod {
    /// Benjamini-Hochberg.
    Bh,
    /// Benjamini-Krieger-Yekutieli adaptive two-stage.
    TwoStage,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// Metrics tables written by `analyze`.
    #[arg(long = "metrics", required = true)]
    pub metrics: Vec<PathBuf>,
    /// Column correlated against every feature.
    #[arg(long, default_value = "diff_fb")]
    pub x: String,
    /// Feature columns (default: the six tree and dimensionality features).
    #[arg(long = "y", value_delimiter = ',')]
    pub features: Vec<String>,
    #[arg(long, value_enum, default_value_t = FdrMethod::Bh)]
    pub fdr: FdrMethod,
    /// FDR level for the two-stage procedure.
    #[arg(long, default_value_t = 0.05)]
    pub q: f64,
    /// Use the 1.06/(n-3) Fisher-z variance for confidence intervals.
    #[arg(long)]
    pub fieller: bool,
    /// Output file (default: `<output-dir>/correlations.tsv`).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub feature: String,
    pub language: String,
    pub n: usize,
    pub rho: Option<f64>,
    pub p_raw: Option<f64>,
    pub p_fdr: Option<f64>,
    pub ci: Option<(f64, f64)>,
}

pub fn correlate_table(table: &Table, args: &CorrelateArgs) -> Result<Vec<Cell>> {
    let features: Vec<String> = if args.features.is_empty() {
        DEFAULT_FEATURES.iter().map(|s| s.to_string()).collect()
    } else {
        args.features.clone()
    };
    let lang_col = table.column("language")?;
    let x = table.numbers(table.column(&args.x)?)?;
    let mut by_language: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (r, row) in table.rows.iter().enumerate() {
        by_language.entry(row[lang_col].as_str()).or_default().push(r);
    }
    let variance = if args.fieller {
        FisherVariance::Fieller
    } else {
        FisherVariance::Standard
    };
    let mut cells = Vec::new();
    for feature in &features {
        let y = table.numbers(table.column(feature)?)?;
        let mut family: Vec<Cell> = by_language
            .iter()
            .map(|(lang, rows)| {
                let xs: Vec<f64> = rows.iter().map(|&r| x[r].unwrap_or(f64::NAN)).collect();
                let ys: Vec<f64> = rows.iter().map(|&r| y[r].unwrap_or(f64::NAN)).collect();
                let n = xs.iter().zip(&ys).filter(|(a, b)| !a.is_nan() && !b.is_nan()).count();
                let res = spearman_with(&xs, &ys, variance).ok();
                Cell {
                    feature: feature.clone(),
                    language: lang.to_string(),
                    n,
                    rho: res.as_ref().map(|r| r.rho),
                    p_raw: res.as_ref().map(|r| r.p_value),
                    p_fdr: None,
                    ci: res.as_ref().map(|r| (r.ci_low, r.ci_high)),
                }
            })
            .collect();
        let defined: Vec<usize> = (0..family.len()).filter(|&i| family[i].p_raw.is_some()).collect();
        let raw: Vec<f64> = defined.iter().map(|&i| family[i].p_raw.unwrap()).collect();
        let adjusted = match args.fdr {
            FdrMethod::Bh => fdr_bh(&raw),
            FdrMethod::TwoStage => fdr_two_stage(&raw, args.q).map(|r| r.adjusted),
        }
        .map_err(|e| CliError::Schema(format!("correlate: {e}")))?;
        for (&i, a) in defined.iter().zip(adjusted) {
            family[i].p_fdr = Some(a);
        }
        cells.extend(family);
    }
    Ok(cells)
}

pub fn run(args: &CorrelateArgs, settings: &Settings) -> Result<()> {
    let table = Table::read_many(&args.metrics)?;
    let cells = correlate_table(&table, args)?;
    let out = match &args.output {
        Some(p) => p.clone(),
        None => settings.out_path("correlations.tsv")?,
    };
    let any = cells.iter().any(|c| c.rho.is_some());
    write_tsv(
        &out,
        &CORRELATION_COLUMNS,
        cells.into_iter().map(|c| {
            vec![
                c.feature,
                c.language,
                fmt_opt(c.rho),
                c.n.to_string(),
                fmt_opt(c.p_raw),
                fmt_opt(c.p_fdr),
                fmt_opt(c.ci.map(|x| x.0)),
                fmt_opt(c.ci.map(|x| x.1)),
            ]
        }),
    )?;
    if !any {
        return Err(CliError::Empty("correlate: no cell had enough complete pairs".into()));
    }
    Ok(())
}

//! Rank tests, correlations, multiple-comparison control and random-effects
//! pooling of correlation coefficients.

mod correlation;
mod fdr;
mod friedman;
mod meta;

pub use correlation::{spearman, spearman_with, CorrelationResult, FisherVariance};
pub use fdr::{fdr_bh, fdr_two_stage, TwoStageResult};
pub use friedman::{friedman_test, siegel_posthoc, FriedmanResult, PosthocPair, PosthocResult};
pub use meta::{
    forest_data, meta_reml, reml_log_likelihood, ExcludedStudy, ForestRow, MetaResult, Study, StudyWeight,
};

use thiserror::Error;

use crate::Real;

/// Two-sided 95% normal quantile used for every confidence interval.
pub const CI_Z: f64 = 1.96;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {required} {what}, found {found}")]
    TooFew {
        what: &'static str,
        found: usize,
        required: usize,
    },
    #[error("inputs have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("missing value in block {block}, condition {condition}")]
    MissingValue { block: usize, condition: usize },
    #[error("p-value {0} outside [0, 1]")]
    InvalidPValue(f64),
    #[error("correlation undefined: zero variance in {0}")]
    ZeroVariance(&'static str),
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
/// Also returns the size of every tie group.
pub(crate) fn average_ranks<T: Real>(values: &[T]) -> (Vec<T>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut ranks = vec![T::zero(); values.len()];
    let mut groups = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = T::from_count(start + end + 1) / T::lit(2.0);
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        groups.push(end - start);
        start = end;
    }
    (ranks, groups)
}

/// Two-sided standard normal tail probability.
pub(crate) fn normal_two_sided(z: f64) -> f64 {
    statrs::function::erf::erfc(z.abs() / std::f64::consts::SQRT_2)
}

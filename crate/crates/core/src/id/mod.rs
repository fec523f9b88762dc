//! Intrinsic dimensionality of a text's lexical embedding cloud, on the
//! token manifold (tokens as points) and the feature manifold (embedding
//! dimensions as points).

mod embeddings;
mod gride;
mod matrix;
mod mle;
mod neighbors;

pub use embeddings::{load_stopwords, read_stopwords, EmbeddingTable};
pub use gride::{gride_estimate, gride_log_likelihood, gride_scale_sweep, GrideSweep};
pub use matrix::{build_token_matrix, feature_manifold, zscore_columns, TokenMatrix};
pub use mle::{mle_estimate, MleAggregation};
pub use neighbors::{dedup_rows, sorted_neighbor_distances};

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Real;

#[derive(Debug, Error)]
pub enum IdError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("embedding file line {line}: {message}")]
    EmbeddingFormat { line: usize, message: String },
    #[error("{found} points available, at least {required} required")]
    TooFewPoints { found: usize, required: usize },
    #[error("neighbourhood size k = {0} must be at least 1")]
    InvalidScale(usize),
    #[error("no usable neighbourhood ratios (all points degenerate)")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Gride,
    Mle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Token,
    Feature,
}

/// Result of one estimator run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdFit<T> {
    pub dimension: T,
    pub k: usize,
    /// Points contributing to the estimate.
    pub n_used: usize,
    /// Points dropped as duplicates or for degenerate neighbourhoods.
    pub n_dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdEstimate<T> {
    pub estimator: Estimator,
    pub manifold: Manifold,
    pub scale: usize,
    pub value: T,
    /// `value / rows`, token manifold only.
    pub normalized_value: Option<T>,
}

impl<T: Real> IdEstimate<T> {
    /// Wraps a fit, normalizing by the number of matrix rows on the token manifold.
    pub fn new(estimator: Estimator, manifold: Manifold, fit: &IdFit<T>, n_rows: usize) -> Self {
        Self {
            estimator,
            manifold,
            scale: fit.k,
            value: fit.dimension,
            normalized_value: match manifold {
                Manifold::Token => Some(normalize_token_id(fit.dimension, n_rows)),
                Manifold::Feature => None,
            },
        }
    }
}

/// Token-manifold dimension divided by the number of tokens.
pub fn normalize_token_id<T: Real>(value: T, n_rows: usize) -> T {
    assert!(n_rows > 0, "normalization needs at least one row");
    value / T::from_count(n_rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IdParams {
    pub mle_k: usize,
    pub min_points: usize,
    pub mle_aggregation: MleAggregation,
}

impl Default for IdParams {
    fn default() -> Self {
        Self {
            mle_k: 15,
            min_points: 32,
            mle_aggregation: MleAggregation::Mean,
        }
    }
}

/// The four estimates reported per text. An estimate is `None` when its
/// estimator's preconditions are not met on that manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextIdSummary<T> {
    pub n_tokens: usize,
    pub gride_token: Option<IdEstimate<T>>,
    pub gride_feature: Option<IdEstimate<T>>,
    pub mle_token: Option<IdEstimate<T>>,
    pub mle_feature: Option<IdEstimate<T>>,
}

/// Runs GRIDE (scale sweep) and MLE on both manifolds of `matrix`.
pub fn estimate_text_id<T: Real>(matrix: &TokenMatrix<T>, params: &IdParams) -> TextIdSummary<T> {
    let rows = matrix.n_tokens();
    let tokens = matrix.values.view();
    let features = feature_manifold(matrix);
    let run = |points: ArrayView2<T>, manifold| {
        let gride = gride_scale_sweep(points)
            .ok()
            .map(|s| IdEstimate::new(Estimator::Gride, manifold, &s.fit, rows));
        let mle = mle_estimate(points, params.mle_k, params.mle_aggregation)
            .ok()
            .map(|f| IdEstimate::new(Estimator::Mle, manifold, &f, rows));
        (gride, mle)
    };
    let (gride_token, mle_token) = run(tokens, Manifold::Token);
    let (gride_feature, mle_feature) = run(features.view(), Manifold::Feature);
    TextIdSummary {
        n_tokens: rows,
        gride_token,
        gride_feature,
        mle_token,
        mle_feature,
    }
}

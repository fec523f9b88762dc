//! Surprisal, dependency-tree structure and intrinsic-dimensionality
//! measures for parsed text, plus the rank statistics and meta-analysis
//! used to compare them across languages.
//!
//! Numeric code is generic over [`Real`]; the aliases below fix the scalar
//! to `f64` (suffix `F64`) or `f32` (suffix `F32`).

pub mod corpus;
pub mod deptree;
pub mod id;
pub mod providers;
pub mod scalar;
pub mod stats;
pub mod surprisal;

#[cfg(test)]
mod fixtures;

pub use scalar::Real;

pub type SentenceSurprisalF64 = surprisal::SentenceSurprisal<f64>;
pub type SentenceSurprisalF32 = surprisal::SentenceSurprisal<f32>;
pub type TextSurprisalSummaryF64 = surprisal::TextSurprisalSummary<f64>;
pub type TextSurprisalSummaryF32 = surprisal::TextSurprisalSummary<f32>;

pub type TreeMetricsF64 = deptree::TreeMetrics<f64>;
pub type TreeMetricsF32 = deptree::TreeMetrics<f32>;
pub type TextTreeMetricsF64 = deptree::TextTreeMetrics<f64>;
pub type TextTreeMetricsF32 = deptree::TextTreeMetrics<f32>;

pub type EmbeddingTableF64 = id::EmbeddingTable<f64>;
pub type EmbeddingTableF32 = id::EmbeddingTable<f32>;
pub type TokenMatrixF64 = id::TokenMatrix<f64>;
pub type TokenMatrixF32 = id::TokenMatrix<f32>;
pub type IdFitF64 = id::IdFit<f64>;
pub type IdFitF32 = id::IdFit<f32>;
pub type TextIdSummaryF64 = id::TextIdSummary<f64>;
pub type TextIdSummaryF32 = id::TextIdSummary<f32>;

pub type FriedmanResultF64 = stats::FriedmanResult<f64>;
pub type PosthocResultF64 = stats::PosthocResult<f64>;
pub type CorrelationResultF64 = stats::CorrelationResult<f64>;
pub type MetaResultF64 = stats::MetaResult<f64>;
pub type ForestRowF64 = stats::ForestRow<f64>;

use std::collections::HashSet;

use ndarray::{Array2, Axis};

use super::{EmbeddingTable, IdError};
use crate::corpus::Document;
use crate::Real;

/// Z-scored embedding rows of the unique content tokens of one text.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenMatrix<T> {
    /// Row labels, in order of first occurrence.
    pub tokens: Vec<String>,
    /// `tokens.len() × kept_columns.len()`.
    pub values: Array2<T>,
    /// Embedding dimensions that survived z-scoring (non-constant).
    pub kept_columns: Vec<usize>,
}

impl<T> TokenMatrix<T> {
    pub fn n_tokens(&self) -> usize {
        self.tokens.len()
    }
}

/// Collects the unique, lowercased, non-stopword words of `doc` that have a
/// non-zero embedding, stacks their vectors and z-scores every column.
pub fn build_token_matrix<T: Real>(
    doc: &Document,
    embeddings: &EmbeddingTable<T>,
    stopwords: &HashSet<String>,
    min_points: usize,
) -> Result<TokenMatrix<T>, IdError> {
    let mut seen = HashSet::new();
    let mut tokens = Vec::new();
    let mut rows: Vec<&[T]> = Vec::new();
    for word in doc.sentences.iter().flat_map(|s| s.words.iter()) {
        let tok = word.trim().to_lowercase();
        if tok.is_empty() || stopwords.contains(&tok) || !seen.insert(tok.clone()) {
            continue;
        }
        match embeddings.get(&tok) {
            Some(v) if v.iter().any(|x| *x != T::zero()) => {
                tokens.push(tok);
                rows.push(v);
            }
            _ => {}
        }
    }
    if tokens.len() < min_points.max(1) {
        return Err(IdError::TooFewPoints {
            found: tokens.len(),
            required: min_points.max(1),
        });
    }
    let dim = embeddings.dim();
    let raw = Array2::from_shape_fn((rows.len(), dim), |(i, j)| rows[i][j]);
    let (values, kept_columns) = zscore_columns(&raw);
    Ok(TokenMatrix {
        tokens,
        values,
        kept_columns,
    })
}

/// Standardizes each column to mean 0 and unit (population) standard
/// deviation, dropping constant columns. Returns the kept column indices.
pub fn zscore_columns<T: Real>(raw: &Array2<T>) -> (Array2<T>, Vec<usize>) {
    let n = T::from_count(raw.nrows());
    let mut kept = Vec::new();
    let mut cols = Vec::new();
    for (j, col) in raw.axis_iter(Axis(1)).enumerate() {
        let mean = col.iter().copied().sum::<T>() / n;
        let var = col.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / n;
        let sd = var.sqrt();
        let scale = col.iter().fold(T::one(), |m, x| m.max(x.abs()));
        if sd.is_nan() || sd <= T::epsilon() * T::lit(16.0) * scale {
            continue;
        }
        kept.push(j);
        cols.push(col.mapv(|x| (x - mean) / sd));
    }
    let mut out = Array2::zeros((raw.nrows(), kept.len()));
    for (j, c) in cols.into_iter().enumerate() {
        out.column_mut(j).assign(&c);
    }
    (out, kept)
}

/// Embedding dimensions as points: the transpose of the token matrix.
pub fn feature_manifold<T: Real>(matrix: &TokenMatrix<T>) -> Array2<T> {
    matrix.values.t().as_standard_layout().into_owned()
}

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use super::neighbors::{dedup_rows, sorted_neighbor_distances};
use super::{IdError, IdFit};
use crate::Real;

/// How per-point estimates are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MleAggregation {
    /// Arithmetic mean of the per-point estimates.
    #[default]
    Mean,
    /// Inverse of the mean inverse estimate.
    InverseMean,
}

/// Levina-Bickel maximum-likelihood dimension with `k` neighbours.
pub fn mle_estimate<T: Real>(
    points: ArrayView2<T>,
    k: usize,
    aggregation: MleAggregation,
) -> Result<IdFit<T>, IdError> {
    if k < 2 {
        return Err(IdError::InvalidScale(k));
    }
    let (pts, duplicates) = dedup_rows(points);
    if pts.nrows() < k + 1 {
        return Err(IdError::TooFewPoints {
            found: pts.nrows(),
            required: k + 1,
        });
    }
    let nn = sorted_neighbor_distances(pts.view(), k);
    let km1 = T::from_count(k - 1);
    let mut inverses = Vec::with_capacity(nn.len());
    for row in &nn {
        let tk = row[k - 1];
        let s: T = row[..k - 1].iter().map(|&t| (tk / t).ln()).sum();
        if s > T::zero() {
            inverses.push(s / km1);
        }
    }
    if inverses.is_empty() {
        return Err(IdError::Degenerate);
    }
    let m = T::from_count(inverses.len());
    let dimension = match aggregation {
        MleAggregation::Mean => inverses.iter().map(|&v| T::one() / v).sum::<T>() / m,
        MleAggregation::InverseMean => m / inverses.iter().copied().sum::<T>(),
    };
    Ok(IdFit {
        dimension,
        k,
        n_used: inverses.len(),
        n_dropped: duplicates + nn.len() - inverses.len(),
    })
}

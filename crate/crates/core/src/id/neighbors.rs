use std::collections::HashSet;

use ndarray::{Array2, ArrayView2};

use crate::Real;

/// Drops exact duplicate rows, keeping the first occurrence.
/// Returns the deduplicated points and the number of rows removed.
pub fn dedup_rows<T: Real>(points: ArrayView2<T>) -> (Array2<T>, usize) {
    let mut seen = HashSet::new();
    let keep: Vec<usize> = (0..points.nrows())
        .filter(|&i| {
            let key: Vec<u64> = points
                .row(i)
                .iter()
                .map(|x| {
                    // Normalize -0.0 so it collides with 0.0.
                    let v = x.as_f64() + 0.0;
                    v.to_bits()
                })
                .collect();
            seen.insert(key)
        })
        .collect();
    let out = Array2::from_shape_fn((keep.len(), points.ncols()), |(i, j)| points[[keep[i], j]]);
    (out, points.nrows() - keep.len())
}

/// For every point, the Euclidean distances to its `k_max` nearest other
/// points in increasing order (ties broken by point index).
pub fn sorted_neighbor_distances<T: Real>(points: ArrayView2<T>, k_max: usize) -> Vec<Vec<T>> {
    let n = points.nrows();
    let k_max = k_max.min(n.saturating_sub(1));
    let rows: Vec<_> = points.rows().into_iter().collect();
    let mut sq = vec![T::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = rows[i]
                .iter()
                .zip(rows[j].iter())
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<T>();
            sq[i * n + j] = d;
            sq[j * n + i] = d;
        }
    }
    (0..n)
        .map(|i| {
            let mut cand: Vec<(T, usize)> = (0..n).filter(|&j| j != i).map(|j| (sq[i * n + j], j)).collect();
            let by_key = |a: &(T, usize), b: &(T, usize)| {
                a.0.partial_cmp(&b.0)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.1.cmp(&b.1))
            };
            if k_max < cand.len() {
                cand.select_nth_unstable_by(k_max, by_key);
                cand.truncate(k_max);
            }
            cand.sort_by(by_key);
            cand.into_iter().map(|(d, _)| d.sqrt()).collect()
        })
        .collect()
}

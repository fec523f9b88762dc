use ndarray::ArrayView2;

use super::neighbors::{dedup_rows, sorted_neighbor_distances};
use super::{IdError, IdFit};
use crate::Real;

const BISECTION_STEPS: usize = 200;
const SWEEP_MIN_POINTS: usize = 6;

/// Estimates across the doubling scales of a sweep, plus the chosen one.
#[derive(Debug, Clone, PartialEq)]
pub struct GrideSweep<T> {
    pub fit: IdFit<T>,
    /// `(k, dimension)` for every scale evaluated.
    pub scales: Vec<(usize, T)>,
}

/// Log-likelihood of dimension `d` given the ratios `mu = r_2k / r_k`.
pub fn gride_log_likelihood<T: Real>(mu: &[T], k: usize, d: T) -> T {
    let n = T::from_count(mu.len());
    let km1 = T::from_count(k - 1);
    let two_k_m1 = T::from_count(2 * k - 1);
    let sum_log: T = mu.iter().map(|m| m.ln()).sum();
    let sum_pow: T = if k > 1 {
        mu.iter().map(|m| (m.powf(d) - T::one()).ln()).sum()
    } else {
        T::zero()
    };
    n * d.ln() + km1 * sum_pow - (two_k_m1 * d + T::one()) * sum_log
}

fn score<T: Real>(log_mu: &[T], k: usize, d: T) -> T {
    let n = T::from_count(log_mu.len());
    let km1 = T::from_count(k - 1);
    let two_k_m1 = T::from_count(2 * k - 1);
    let mut acc = T::zero();
    let mut sum_log = T::zero();
    for &l in log_mu {
        sum_log = sum_log + l;
        if k > 1 {
            acc = acc + l / (T::one() - (-d * l).exp());
        }
    }
    n / d + km1 * acc - two_k_m1 * sum_log
}

/// Maximizes the likelihood over `(1e-3, upper]`. The score is strictly
/// decreasing in `d`, so bisection on its sign finds the unique maximum.
fn maximize<T: Real>(log_mu: &[T], k: usize, upper: T) -> T {
    let mut lo = T::lit(1e-3);
    let mut hi = upper;
    if score(log_mu, k, hi) >= T::zero() {
        return hi;
    }
    if score(log_mu, k, lo) <= T::zero() {
        return lo;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if score(log_mu, k, mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

fn fit_from_neighbors<T: Real>(
    nn: &[Vec<T>],
    k: usize,
    ambient: usize,
    duplicates: usize,
) -> Result<IdFit<T>, IdError> {
    let mut log_mu = Vec::with_capacity(nn.len());
    let mut dropped = duplicates;
    for row in nn {
        let mu = row[2 * k - 1] / row[k - 1];
        // A unit ratio has zero likelihood for k > 1.
        if k > 1 && mu <= T::one() {
            dropped += 1;
            continue;
        }
        log_mu.push(mu.ln());
    }
    if log_mu.is_empty() || log_mu.iter().all(|l| *l <= T::zero()) {
        return Err(IdError::Degenerate);
    }
    let upper = T::from_count(2 * ambient.max(1));
    Ok(IdFit {
        dimension: maximize(&log_mu, k, upper),
        k,
        n_used: log_mu.len(),
        n_dropped: dropped,
    })
}

fn required_points(k: usize) -> usize {
    2 * k + 2
}

/// GRIDE at a fixed neighbourhood scale `k` (ratio of the `2k`-th to the
/// `k`-th neighbour distance). Exact duplicate rows are removed first.
pub fn gride_estimate<T: Real>(points: ArrayView2<T>, k: usize) -> Result<IdFit<T>, IdError> {
    if k == 0 {
        return Err(IdError::InvalidScale(k));
    }
    let (pts, duplicates) = dedup_rows(points);
    if pts.nrows() < required_points(k) {
        return Err(IdError::TooFewPoints {
            found: pts.nrows(),
            required: required_points(k),
        });
    }
    let nn = sorted_neighbor_distances(pts.view(), 2 * k);
    fit_from_neighbors(&nn, k, pts.ncols(), duplicates)
}

/// Runs GRIDE for `k = 1, 2, 4, ...` up to `N / 4` and picks the scale whose
/// estimate changes least when `k` doubles (smallest `k` on ties).
pub fn gride_scale_sweep<T: Real>(points: ArrayView2<T>) -> Result<GrideSweep<T>, IdError> {
    let (pts, duplicates) = dedup_rows(points);
    let n = pts.nrows();
    if n < SWEEP_MIN_POINTS {
        return Err(IdError::TooFewPoints {
            found: n,
            required: SWEEP_MIN_POINTS,
        });
    }
    let mut ks = vec![1];
    while ks.last().unwrap() * 2 <= n / 4 {
        ks.push(ks.last().unwrap() * 2);
    }
    let nn = sorted_neighbor_distances(pts.view(), 2 * ks.last().unwrap());
    let mut fits = Vec::new();
    for &k in &ks {
        match fit_from_neighbors(&nn, k, pts.ncols(), duplicates) {
            Ok(f) => fits.push(f),
            Err(IdError::Degenerate) if !fits.is_empty() => break,
            Err(e) => return Err(e),
        }
    }
    let mut best = 0;
    let mut best_gap = None;
    for i in 0..fits.len().saturating_sub(1) {
        let gap = (fits[i].dimension - fits[i + 1].dimension).abs();
        if best_gap.is_none_or(|g| gap < g) {
            best = i;
            best_gap = Some(gap);
        }
    }
    let scales = fits.iter().map(|f| (f.k, f.dimension)).collect();
    Ok(GrideSweep {
        fit: fits.swap_remove(best),
        scales,
    })
}

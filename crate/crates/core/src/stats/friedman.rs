use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{average_ranks, fdr_bh, normal_two_sided, StatsError};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult<T> {
    pub n_blocks: usize,
    pub k_conditions: usize,
    pub statistic: T,
    pub df: usize,
    pub p_value: T,
    pub mean_ranks: Vec<T>,
    /// Divisor applied to the statistic for within-block ties.
    pub tie_correction: T,
}

/// Friedman rank test. Rows are blocks, columns are conditions.
pub fn friedman_test<T: Real>(blocks: ArrayView2<T>) -> Result<FriedmanResult<T>, StatsError> {
    let (n, k) = blocks.dim();
    if n < 2 {
        return Err(StatsError::TooFew {
            what: "blocks",
            found: n,
            required: 2,
        });
    }
    if k < 2 {
        return Err(StatsError::TooFew {
            what: "conditions",
            found: k,
            required: 2,
        });
    }
    let mut rank_sums = vec![T::zero(); k];
    let mut tie_sum = 0usize;
    for (b, row) in blocks.rows().into_iter().enumerate() {
        let row: Vec<T> = row.to_vec();
        if let Some(c) = row.iter().position(|x| x.is_nan()) {
            return Err(StatsError::MissingValue { block: b, condition: c });
        }
        let (ranks, groups) = average_ranks(&row);
        for (s, r) in rank_sums.iter_mut().zip(ranks) {
            *s = *s + r;
        }
        tie_sum += groups.iter().map(|&t| t * t * t - t).sum::<usize>();
    }
    let nf = T::from_count(n);
    let kf = T::from_count(k);
    let mean_ranks: Vec<T> = rank_sums.iter().map(|&s| s / nf).collect();
    let centre = (kf + T::one()) / T::lit(2.0);
    let spread: T = mean_ranks.iter().map(|&r| (r - centre) * (r - centre)).sum();
    let raw = T::lit(12.0) * nf / (kf * (kf + T::one())) * spread;
    let correction = T::one() - T::from_count(tie_sum) / (nf * kf * (kf * kf - T::one()));
    let (statistic, p_value) = if correction <= T::zero() {
        (T::zero(), T::one())
    } else {
        let q = raw / correction;
        let chi = ChiSquared::new((k - 1) as f64).expect("df >= 1");
        (q, T::lit(chi.sf(q.as_f64())))
    };
    Ok(FriedmanResult {
        n_blocks: n,
        k_conditions: k,
        statistic,
        df: k - 1,
        p_value,
        mean_ranks,
        tie_correction: correction,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosthocPair<T> {
    pub i: usize,
    pub j: usize,
    pub z: T,
    pub p_raw: T,
    pub p_fdr: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosthocResult<T> {
    /// All `i < j` pairs in lexicographic order.
    pub pairs: Vec<PosthocPair<T>>,
}

impl<T> PosthocResult<T> {
    /// The comparison of `a` and `b`, in either order.
    pub fn pair(&self, a: usize, b: usize) -> Option<&PosthocPair<T>> {
        let (i, j) = (a.min(b), a.max(b));
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }
}

/// Pairwise mean-rank comparisons after a Friedman test, BH-corrected.
pub fn siegel_posthoc<T: Real>(friedman: &FriedmanResult<T>) -> PosthocResult<T> {
    let k = T::from_count(friedman.k_conditions);
    let n = T::from_count(friedman.n_blocks);
    let se = (k * (k + T::one()) / (T::lit(6.0) * n)).sqrt();
    let mut pairs = Vec::new();
    for i in 0..friedman.k_conditions {
        for j in (i + 1)..friedman.k_conditions {
            let z = (friedman.mean_ranks[i] - friedman.mean_ranks[j]).abs() / se;
            pairs.push(PosthocPair {
                i,
                j,
                z,
                p_raw: T::lit(normal_two_sided(z.as_f64())),
                p_fdr: T::zero(),
            });
        }
    }
    let raw: Vec<T> = pairs.iter().map(|p| p.p_raw).collect();
    let adjusted = fdr_bh(&raw).expect("normal tail probabilities lie in [0, 1]");
    for (p, a) in pairs.iter_mut().zip(adjusted) {
        p.p_fdr = a;
    }
    PosthocResult { pairs }
}

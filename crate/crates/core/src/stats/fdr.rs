use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::Real;

fn check<T: Real>(p: &[T]) -> Result<(), StatsError> {
    match p.iter().find(|x| !(**x >= T::zero() && **x <= T::one())) {
        Some(bad) => Err(StatsError::InvalidPValue(bad.as_f64())),
        None => Ok(()),
    }
}

/// Step-up BH adjustment treating the family as having `m` members.
fn step_up<T: Real>(p: &[T], m: T) -> Vec<T> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[a].partial_cmp(&p[b]).unwrap());
    let mut out = vec![T::zero(); p.len()];
    let mut running = T::one();
    for (pos, &i) in order.iter().enumerate().rev() {
        let adj = (p[i] * m / T::from_count(pos + 1)).min(T::one());
        running = running.min(adj);
        out[i] = running;
    }
    out
}

/// Benjamini-Hochberg adjusted p-values, in input order.
pub fn fdr_bh<T: Real>(p: &[T]) -> Result<Vec<T>, StatsError> {
    check(p)?;
    Ok(step_up(p, T::from_count(p.len())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoStageResult<T> {
    pub adjusted: Vec<T>,
    pub rejected: Vec<bool>,
    /// Estimated number of true nulls after the first stage.
    pub m0: usize,
}

/// Benjamini-Krieger-Yekutieli adaptive two-stage procedure at level `q`.
pub fn fdr_two_stage<T: Real>(p: &[T], q: T) -> Result<TwoStageResult<T>, StatsError> {
    check(p)?;
    let m = p.len();
    let mf = T::from_count(m);
    let factor = T::one() + q;
    let q1 = q / factor;
    let bh = step_up(p, mf);
    let r1 = bh.iter().filter(|&&a| a <= q1).count();
    if r1 == 0 || r1 == m {
        return Ok(TwoStageResult {
            adjusted: bh.iter().map(|&a| (a * factor).min(T::one())).collect(),
            rejected: vec![r1 == m; m],
            m0: m - r1,
        });
    }
    let m0 = m - r1;
    let shrink = T::from_count(m0) / mf;
    let q2 = q1 / shrink;
    Ok(TwoStageResult {
        adjusted: bh.iter().map(|&a| (a * shrink * factor).min(T::one())).collect(),
        rejected: bh.iter().map(|&a| a <= q2).collect(),
        m0,
    })
}

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{average_ranks, StatsError, CI_Z};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FisherVariance {
    /// `1 / (n - 3)`
    #[default]
    Standard,
    /// `1.06 / (n - 3)` (Fieller, Hartley and Pearson).
    Fieller,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult<T> {
    pub rho: T,
    /// Complete pairs used.
    pub n: usize,
    pub p_value: T,
    pub ci_low: T,
    pub ci_high: T,
}

/// Spearman rank correlation on the pairs where both values are present
/// (non-NaN).
pub fn spearman<T: Real>(x: &[T], y: &[T]) -> Result<CorrelationResult<T>, StatsError> {
    spearman_with(x, y, FisherVariance::Standard)
}

pub fn spearman_with<T: Real>(x: &[T], y: &[T], variance: FisherVariance) -> Result<CorrelationResult<T>, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let (xs, ys): (Vec<T>, Vec<T>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| !a.is_nan() && !b.is_nan())
        .map(|(a, b)| (*a, *b))
        .unzip();
    let n = xs.len();
    if n < 4 {
        return Err(StatsError::TooFew {
            what: "complete pairs",
            found: n,
            required: 4,
        });
    }
    let (rx, _) = average_ranks(&xs);
    let (ry, _) = average_ranks(&ys);
    let centre = T::from_count(n + 1) / T::lit(2.0);
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (*a - centre, *b - centre);
        sxy = sxy + da * db;
        sxx = sxx + da * da;
        syy = syy + db * db;
    }
    if sxx <= T::zero() {
        return Err(StatsError::ZeroVariance("x"));
    }
    if syy <= T::zero() {
        return Err(StatsError::ZeroVariance("y"));
    }
    let rho = (sxy / (sxx * syy).sqrt()).max(-T::one()).min(T::one());
    let r = rho.as_f64();
    let df = (n - 2) as f64;
    let p_value = if r.abs() >= 1.0 {
        0.0
    } else {
        let t = r * (df / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 2");
        (2.0 * dist.sf(t.abs())).min(1.0)
    };
    let scale = match variance {
        FisherVariance::Standard => 1.0,
        FisherVariance::Fieller => 1.06,
    };
    let half = CI_Z * (scale / (n as f64 - 3.0)).sqrt();
    let z = r.atanh();
    Ok(CorrelationResult {
        rho,
        n,
        p_value: T::lit(p_value),
        ci_low: T::lit((z - half).tanh()),
        ci_high: T::lit((z + half).tanh()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let r: CorrelationResult<f64> = spearman(&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.0, 3.0, 2.0, 5.0, 4.0]).unwrap();
        assert!((r.rho - 0.8).abs() < 1e-15);
        assert_eq!(r.n, 5);
        // t = 0.8·sqrt(3/0.36), two-sided with 3 df.
        assert!((r.p_value - 0.10408803866182788).abs() < 1e-9);
        assert!((r.ci_low - (0.8f64.atanh() - 1.96 / 2f64.sqrt()).tanh()).abs() < 1e-15);
        assert!(r.ci_low <= r.rho && r.rho <= r.ci_high);
    }

    #[test]
    fn perfect_monotone() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let up: Vec<f64> = x.iter().map(|v: &f64| v.exp()).collect();
        let down: Vec<f64> = x.iter().map(|v| -v).collect();
        let r = spearman(&x, &up).unwrap();
        assert_eq!((r.rho, r.p_value, r.ci_low, r.ci_high), (1.0, 0.0, 1.0, 1.0));
        assert_eq!(spearman(&x, &down).unwrap().rho, -1.0);
    }

    #[test]
    fn pairwise_deletion() {
        let x = [1.0, f64::NAN, 3.0, 4.0, 5.0, 6.0];
        let y = [2.0, 1.0, f64::NAN, 3.0, 5.0, 4.0];
        let r = spearman(&x, &y).unwrap();
        assert_eq!(r.n, 4);
        let direct = spearman(&[1.0, 4.0, 5.0, 6.0], &[2.0, 3.0, 5.0, 4.0]).unwrap();
        assert_eq!(r, direct);
    }

    #[test]
    fn errors() {
        assert_eq!(spearman(&[1.0, 2.0], &[1.0]), Err(StatsError::LengthMismatch(2, 1)));
        assert!(matches!(spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), Err(StatsError::TooFew { found: 3, .. })));
        assert_eq!(
            spearman(&[1.0, 1.0, 1.0, 1.0], &[1.0, 2.0, 3.0, 4.0]),
            Err(StatsError::ZeroVariance("x"))
        );
    }

    #[test]
    fn fieller_widens_interval() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let y = [2.0, 1.0, 4.0, 3.0, 7.0, 5.0, 6.0];
        let a = spearman(&x, &y).unwrap();
        let b = spearman_with(&x, &y, FisherVariance::Fieller).unwrap();
        assert_eq!(a.rho, b.rho);
        assert!(b.ci_low < a.ci_low && b.ci_high > a.ci_high);
    }

    proptest! {
        #[test]
        fn rank_invariance(pairs in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 4..30)) {
            let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let fx: Vec<f64> = x.iter().map(|v| v.powi(3) + 2.0 * v).collect();
            let gy: Vec<f64> = y.iter().map(|v| (v / 10.0).exp()).collect();
            match (spearman(&x, &y), spearman(&fx, &gy)) {
                (Ok(a), Ok(b)) => {
                    prop_assert!((a.rho - b.rho).abs() < 1e-12);
                    prop_assert!(a.rho.abs() <= 1.0);
                }
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "{other:?}"),
            }
        }
    }
}

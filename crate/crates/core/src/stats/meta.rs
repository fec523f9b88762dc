use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{StatsError, CI_Z};
use crate::Real;

const GRID_POINTS: usize = 400;
const TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Study<T> {
    pub label: String,
    pub rho: T,
    pub n: usize,
}

impl<T> Study<T> {
    pub fn new(label: impl Into<String>, rho: T, n: usize) -> Self {
        Self {
            label: label.into(),
            rho,
            n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyWeight<T> {
    pub label: String,
    pub rho: T,
    pub n: usize,
    /// Share of the random-effects weight, summing to 1 over studies.
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedStudy {
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaResult<T> {
    pub pooled_rho: T,
    pub pooled_z: T,
    pub se_z: T,
    pub ci_low: T,
    pub ci_high: T,
    pub tau2: T,
    pub q_statistic: T,
    pub q_df: usize,
    pub q_p_value: T,
    pub per_study: Vec<StudyWeight<T>>,
    pub excluded: Vec<ExcludedStudy>,
}

/// Restricted log-likelihood (up to a constant) of `tau2` for effects `y`
/// with within-study variances `v`.
pub fn reml_log_likelihood(y: &[f64], v: &[f64], tau2: f64) -> f64 {
    let w: Vec<f64> = v.iter().map(|vi| 1.0 / (vi + tau2)).collect();
    let sw: f64 = w.iter().sum();
    let mu = w.iter().zip(y).map(|(wi, yi)| wi * yi).sum::<f64>() / sw;
    let log_det: f64 = v.iter().map(|vi| (vi + tau2).ln()).sum();
    let resid: f64 = w.iter().zip(y).map(|(wi, yi)| wi * (yi - mu) * (yi - mu)).sum();
    -0.5 * log_det - 0.5 * sw.ln() - 0.5 * resid
}

/// Golden-section maximization of `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > TOLERANCE {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    (lo + hi) / 2.0
}

fn maximize_reml(y: &[f64], v: &[f64], upper: f64) -> f64 {
    if upper <= 0.0 {
        return 0.0;
    }
    let ll = |t: f64| reml_log_likelihood(y, v, t);
    let step = upper / GRID_POINTS as f64;
    let best = (0..=GRID_POINTS)
        .map(|i| (i, ll(i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc })
        .0;
    let lo = best.saturating_sub(1) as f64 * step;
    let hi = ((best + 1).min(GRID_POINTS)) as f64 * step;
    let t = golden_max(ll, lo, hi);
    // The bracket ends are candidates too (boundary maxima).
    [t, lo, hi]
        .into_iter()
        .fold((t, ll(t)), |acc, c| if ll(c) > acc.1 { (c, ll(c)) } else { acc })
        .0
}

/// Random-effects pooling of correlations on the Fisher-z scale with the
/// between-study variance estimated by REML.
pub fn meta_reml<T: Real>(studies: &[Study<T>]) -> Result<MetaResult<T>, StatsError> {
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    for s in studies {
        let rho = s.rho.as_f64();
        let reason = if s.n <= 3 {
            Some(format!("n = {} too small for a Fisher-z variance", s.n))
        } else if rho.is_nan() || rho.abs() >= 1.0 {
            Some(format!("rho = {rho} has no finite Fisher-z transform"))
        } else {
            None
        };
        match reason {
            Some(reason) => excluded.push(ExcludedStudy {
                label: s.label.clone(),
                reason,
            }),
            None => used.push(s),
        }
    }
    if used.len() < 2 {
        return Err(StatsError::TooFew {
            what: "usable studies",
            found: used.len(),
            required: 2,
        });
    }
    let m = used.len();
    let y: Vec<f64> = used.iter().map(|s| s.rho.as_f64().atanh()).collect();
    let v: Vec<f64> = used.iter().map(|s| 1.0 / (s.n as f64 - 3.0)).collect();

    let mean_y = y.iter().sum::<f64>() / m as f64;
    let var_y = y.iter().map(|yi| (yi - mean_y).powi(2)).sum::<f64>() / (m as f64 - 1.0);
    // Identical effects: no heterogeneity, and no rounding noise in the means.
    let identical = y.iter().all(|&yi| yi == y[0]);
    let tau2 = if identical { 0.0 } else { maximize_reml(&y, &v, 10.0 * var_y) };

    let w: Vec<f64> = v.iter().map(|vi| 1.0 / (vi + tau2)).collect();
    let sw: f64 = w.iter().sum();
    let mu = w.iter().zip(&y).map(|(wi, yi)| wi * yi).sum::<f64>() / sw;
    let se = (1.0 / sw).sqrt();

    let fe_w: Vec<f64> = v.iter().map(|vi| 1.0 / vi).collect();
    let fe_mu = fe_w.iter().zip(&y).map(|(wi, yi)| wi * yi).sum::<f64>() / fe_w.iter().sum::<f64>();
    let (mu, fe_mu) = if identical { (y[0], y[0]) } else { (mu, fe_mu) };
    let q: f64 = fe_w.iter().zip(&y).map(|(wi, yi)| wi * (yi - fe_mu).powi(2)).sum();
    let q_p = if q > 0.0 {
        ChiSquared::new((m - 1) as f64).expect("df >= 1").sf(q)
    } else {
        1.0
    };

    Ok(MetaResult {
        pooled_rho: T::lit(mu.tanh()),
        pooled_z: T::lit(mu),
        se_z: T::lit(se),
        ci_low: T::lit((mu - CI_Z * se).tanh()),
        ci_high: T::lit((mu + CI_Z * se).tanh()),
        tau2: T::lit(tau2),
        q_statistic: T::lit(q),
        q_df: m - 1,
        q_p_value: T::lit(q_p),
        per_study: used
            .iter()
            .zip(&w)
            .map(|(s, wi)| StudyWeight {
                label: s.label.clone(),
                rho: s.rho,
                n: s.n,
                weight: T::lit(wi / sw),
            })
            .collect(),
        excluded,
    })
}

/// One forest-plot row; `marker` is `"study"` or `"pooled"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestRow<T> {
    pub label: String,
    pub rho: T,
    pub ci_low: T,
    pub ci_high: T,
    pub n: Option<usize>,
    pub weight: T,
    pub marker: String,
}

/// Per-study rows with Fisher-z intervals, followed by the pooled row.
pub fn forest_data<T: Real>(meta: &MetaResult<T>) -> Vec<ForestRow<T>> {
    let mut rows: Vec<ForestRow<T>> = meta
        .per_study
        .iter()
        .map(|s| {
            let z = s.rho.as_f64().atanh();
            let half = CI_Z / (s.n as f64 - 3.0).sqrt();
            ForestRow {
                label: s.label.clone(),
                rho: s.rho,
                ci_low: T::lit((z - half).tanh()),
                ci_high: T::lit((z + half).tanh()),
                n: Some(s.n),
                weight: s.weight,
                marker: "study".into(),
            }
        })
        .collect();
    rows.push(ForestRow {
        label: "pooled".into(),
        rho: meta.pooled_rho,
        ci_low: meta.ci_low,
        ci_high: meta.ci_high,
        n: None,
        weight: T::one(),
        marker: "pooled".into(),
    });
    rows
}

//! Asymptotic key rates as functions of the estimated error rates.

use thiserror::Error;

use crate::types::h2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KeyRateError {
    #[error("error rate {0} must lie in [0, 1/2)")]
    Domain(f64),
    #[error("rate has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("need at least 2 steps, got {0}")]
    TooFewSteps(usize),
}

/// Bisection tolerance used by [`find_threshold`].
pub const THRESHOLD_TOLERANCE: f64 = 1e-7;

/// `1 − 2H(p)`.
pub fn rate_this_paper_lump(p: f64) -> f64 {
    1.0 - 2.0 * h2(p)
}

/// `1 − H(p) − H(2p)`.
pub fn rate_mayers(p: f64) -> Result<f64, KeyRateError> {
    if !(0.0..0.5).contains(&p) {
        return Err(KeyRateError::Domain(p));
    }
    Ok(1.0 - h2(p) - h2(2.0 * p))
}

/// `1 − H((p0+p1)/2) − (H(p0)+H(p1))/2`.
pub fn rate_separate(p0: f64, p1: f64) -> f64 {
    1.0 - (h2((p0 + p1) / 2.0) + (h2(p0) + h2(p1)) / 2.0)
}

/// Root of `rate` on `[lo, hi]` by bisection to [`THRESHOLD_TOLERANCE`].
pub fn find_threshold(rate: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64, KeyRateError> {
    find_threshold_tol(rate, lo, hi, THRESHOLD_TOLERANCE)
}

/// Bisection with a caller-chosen bracket width. Requires `rate(lo) > 0 > rate(hi)`.
pub fn find_threshold_tol(
    rate: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, KeyRateError> {
    if !(rate(lo) > 0.0 && rate(hi) < 0.0) {
        return Err(KeyRateError::NoSignChange { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if rate(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// A sampled rate curve with its zero crossing.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub label: String,
    pub samples: Vec<(f64, f64)>,
    pub threshold: Option<f64>,
}

impl RateCurve {
    fn sample(label: &str, p_max: f64, steps: usize, rate: impl Fn(f64) -> f64) -> Self {
        let samples = (0..=steps)
            .map(|i| {
                let p = p_max * i as f64 / steps as f64;
                (p, rate(p))
            })
            .collect();
        Self {
            label: label.to_string(),
            samples,
            threshold: find_threshold(&rate, 0.0, p_max).ok(),
        }
    }
}

/// Samples `1 − 2H(p)` and `1 − H(p) − H(2p)` at `steps + 1` points of `[0, p_max]`.
pub fn emit_curves(p_max: f64, steps: usize) -> Result<(RateCurve, RateCurve), KeyRateError> {
    if steps < 2 {
        return Err(KeyRateError::TooFewSteps(steps));
    }
    if !(p_max > 0.0 && p_max < 0.5) {
        return Err(KeyRateError::Domain(p_max));
    }
    let lump = RateCurve::sample("this_paper", p_max, steps, rate_this_paper_lump);
    let mayers = RateCurve::sample("mayers", p_max, steps, |p| {
        rate_mayers(p).expect("p_max < 1/2")
    });
    Ok((lump, mayers))
}

//! Finite-length bound on Eve's mutual information with the final key.

use thiserror::Error;

use crate::types::h2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("n = {0} must be even and at least 2")]
    BadLength(u64),
    #[error("epsilon = {0} must lie in [0, 1]")]
    Epsilon(f64),
    #[error("delta = {0} must be positive")]
    Delta(f64),
}

/// `δ²n / (4 ln 2) − 2 log₂(n+1) − 2`.
pub fn theta(delta: f64, n: u64) -> f64 {
    let n = n as f64;
    delta * delta * n / (4.0 * std::f64::consts::LN_2) - 2.0 * (n + 1.0).log2() - 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInput {
    n: u64,
    epsilon: f64,
    delta: f64,
}

impl BoundInput {
    pub fn new(n: u64, epsilon: f64, delta: f64) -> Result<Self, BoundError> {
        if n < 2 || n % 2 != 0 {
            return Err(BoundError::BadLength(n));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(BoundError::Epsilon(epsilon));
        }
        if !(delta > 0.0) {
            return Err(BoundError::Delta(delta));
        }
        Ok(Self { n, epsilon, delta })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub theta: f64,
    /// `2(n/2+1)²ε + 2·2^{−Θ}` before clamping.
    pub entropy_argument: f64,
    /// Upper bound on the mutual information, in bits.
    pub bound: f64,
    pub bound_per_bit: f64,
    /// The entropy argument reached 1 or the bound is no better than `n`.
    pub vacuous: bool,
}

/// `H(x) + 4n(n/2+1)²ε + 4n·2^{−Θ}` with `x = min(1, 2(n/2+1)²ε + 2·2^{−Θ})`.
pub fn mutual_info_bound(input: &BoundInput) -> BoundReport {
    let n = input.n as f64;
    let th = theta(input.delta, input.n);
    let tail = (-th).exp2();
    let poly = (n / 2.0 + 1.0).powi(2);
    let x = 2.0 * poly * input.epsilon + 2.0 * tail;
    let bound = h2(x.min(1.0)) + 4.0 * n * poly * input.epsilon + 4.0 * n * tail;
    BoundReport {
        theta: th,
        entropy_argument: x,
        bound,
        bound_per_bit: bound / n,
        vacuous: x >= 1.0 || bound >= n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn theta_values() {
        assert!((theta(0.1, 10_000) - 7.491_66).abs() < 1e-4);
        assert!((theta(0.1, 100) - (-14.955)).abs() < 1e-3);
    }

    #[test]
    fn worked_bound() {
        let r = mutual_info_bound(&BoundInput::new(10_000, 0.0, 0.1).unwrap());
        assert!((r.entropy_argument - 0.011_12).abs() < 1e-4);
        assert!((r.bound - 222.340).abs() < 1e-3);
        assert!(!r.vacuous);
        assert!((r.bound_per_bit - r.bound / 1e4).abs() < 1e-15);
    }

    #[test]
    fn perfect_limit() {
        let r = mutual_info_bound(&BoundInput::new(1_000_000, 0.0, 0.5).unwrap());
        assert!(r.bound < 1e-100);
    }

    #[test]
    fn small_n_is_flagged() {
        let r = mutual_info_bound(&BoundInput::new(100, 0.0, 0.1).unwrap());
        assert!(r.theta < 0.0);
        assert!(r.vacuous);
        assert!(r.entropy_argument > 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(BoundInput::new(7, 0.0, 0.1), Err(BoundError::BadLength(7)));
        assert_eq!(BoundInput::new(8, 1.5, 0.1), Err(BoundError::Epsilon(1.5)));
        assert_eq!(BoundInput::new(8, 0.0, 0.0), Err(BoundError::Delta(0.0)));
    }

    proptest! {
        #[test]
        fn monotone_in_epsilon_and_delta(
            k in 1u64..20_000, e in 0.0..1e-6f64, de in 0.0..1e-6f64,
            d in 0.01..0.5f64, dd in 0.0..0.1f64,
        ) {
            let n = 2 * k;
            let base = mutual_info_bound(&BoundInput::new(n, e, d).unwrap()).bound;
            let more_eps = mutual_info_bound(&BoundInput::new(n, e + de, d).unwrap()).bound;
            let more_delta = mutual_info_bound(&BoundInput::new(n, e, d + dd).unwrap()).bound;
            prop_assert!(more_eps >= base - 1e-12 * base.abs());
            prop_assert!(more_delta <= base + 1e-12 * base.abs());
        }

        #[test]
        fn monotone_in_n_when_epsilon_dominates(k in 500u64..5_000, dk in 1u64..100, e in 1e-6..1e-3f64) {
            let a = mutual_info_bound(&BoundInput::new(2 * k, e, 0.5).unwrap()).bound;
            let b = mutual_info_bound(&BoundInput::new(2 * (k + dk), e, 0.5).unwrap()).bound;
            prop_assert!(b >= a);
        }
    }
}

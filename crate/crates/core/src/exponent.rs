//! The random-coding error exponent `E(R, p0, p1)` of the supercode ensemble
//! over the two-block binary symmetric channel.
//!
//! `E` is the minimum over `(q0, q1) ∈ [0,1]²` of
//! `(D(q0|p0) + D(q1|p1))/2 + |1 − R − (H(q0) + H(q1))/2|⁺`.
//! [`exponent_closed_form`] evaluates the minimum analytically;
//! [`exponent_grid`] minimizes numerically and serves as a cross-check.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::types::{d2, h2, mean_sym};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExponentError {
    #[error("crossover probability {0} must lie in [0, 1/2)")]
    Crossover(f64),
    #[error("rate {0} must lie in [0, 1]")]
    Rate(f64),
    #[error("grid_steps = {0} is below the minimum of {MIN_GRID_STEPS}")]
    GridTooCoarse(usize),
    #[error("tilting parameter search did not converge (residual {0:e})")]
    NoConvergence(f64),
}

/// Smallest grid accepted by [`exponent_grid`].
pub const MIN_GRID_STEPS: usize = 100;

/// Default lower end of the crossover grid in [`worst_case_exponent`].
pub const DEFAULT_P_FLOOR: f64 = 1e-4;

const BETA_TOLERANCE: f64 = 1e-13;
const GOLDEN_TOLERANCE: f64 = 1e-11;

/// Which piece of the closed form produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    LowRate,
    Tilted,
    Zero,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::LowRate => "low_rate",
            Regime::Tilted => "tilted",
            Regime::Zero => "zero",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentResult {
    pub value: f64,
    pub regime: Regime,
    pub minimizer_q0: f64,
    pub minimizer_q1: f64,
    /// Tilting parameter, present in the tilted regime only.
    pub beta: Option<f64>,
}

fn check_inputs(r: f64, p0: f64, p1: f64) -> Result<(), ExponentError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(ExponentError::Rate(r));
    }
    for p in [p0, p1] {
        if !(0.0..0.5).contains(&p) {
            return Err(ExponentError::Crossover(p));
        }
    }
    Ok(())
}

/// `H_c(q0, q1) = (H(q0) + H(q1)) / 2`.
pub fn hc(q0: f64, q1: f64) -> f64 {
    mean_sym(h2(q0), h2(q1))
}

/// The bracketed objective. Infinite when a divergence diverges.
pub fn exponent_objective(q0: f64, q1: f64, r: f64, p0: f64, p1: f64) -> f64 {
    let div = mean_sym(d2(q0, p0), d2(q1, p1));
    div + (1.0 - r - hc(q0, q1)).max(0.0)
}

/// `√p / (√p + √(1−p))`, the unconstrained minimizer in the low-rate piece.
pub fn critical_point(p: f64) -> f64 {
    let a = p.sqrt();
    a / (a + (1.0 - p).sqrt())
}

/// `p^β / (p^β + (1−p)^β)`.
pub fn tilted(p: f64, beta: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    1.0 / (1.0 + ((1.0 - p) / p).powf(beta))
}

fn log_bhattacharyya(p: f64) -> f64 {
    (p.sqrt() + (1.0 - p).sqrt()).log2()
}

/// Closed-form exponent.
pub fn exponent_closed_form(r: f64, p0: f64, p1: f64) -> Result<ExponentResult, ExponentError> {
    check_inputs(r, p0, p1)?;
    let q0s = critical_point(p0);
    let q1s = critical_point(p1);
    if r < 1.0 - hc(q0s, q1s) {
        return Ok(ExponentResult {
            value: 1.0 - r - log_bhattacharyya(p0) - log_bhattacharyya(p1),
            regime: Regime::LowRate,
            minimizer_q0: q0s,
            minimizer_q1: q1s,
            beta: None,
        });
    }
    if r >= 1.0 - hc(p0, p1) {
        return Ok(ExponentResult {
            value: 0.0,
            regime: Regime::Zero,
            minimizer_q0: p0,
            minimizer_q1: p1,
            beta: None,
        });
    }

    // H_c(q̂(β)) decreases from H_c(q*) at β = 1/2 to H_c(p) at β = 1.
    let target = 1.0 - r;
    let at = |beta: f64| hc(tilted(p0, beta), tilted(p1, beta)) - target;
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    while hi - lo > BETA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if at(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let residual = at(beta);
    if !(residual.abs() <= 1e-10) {
        return Err(ExponentError::NoConvergence(residual));
    }
    let q0 = tilted(p0, beta);
    let q1 = tilted(p1, beta);
    Ok(ExponentResult {
        value: mean_sym(d2(q0, p0), d2(q1, p1)),
        regime: Regime::Tilted,
        minimizer_q0: q0,
        minimizer_q1: q1,
        beta: Some(beta),
    })
}

/// Shorthand for the value of [`exponent_closed_form`].
pub fn exponent(r: f64, p0: f64, p1: f64) -> Result<f64, ExponentError> {
    exponent_closed_form(r, p0, p1).map(|e| e.value)
}

fn classify(value: f64, r: f64, p0: f64, p1: f64) -> Regime {
    if value <= 0.0 || r >= 1.0 - hc(p0, p1) {
        Regime::Zero
    } else if r < 1.0 - hc(critical_point(p0), critical_point(p1)) {
        Regime::LowRate
    } else {
        Regime::Tilted
    }
}

fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > GOLDEN_TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mut best = (x1, f1);
    for x in [x2, lo, hi] {
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// Direct numerical minimization: a uniform `(grid_steps+1)²` scan followed by
/// nested golden-section refinement.
///
/// The objective is jointly convex in `(q0, q1)`, so the partial minimum over
/// `q1` is convex in `q0` and both line searches find global minima.
pub fn exponent_grid(
    r: f64,
    p0: f64,
    p1: f64,
    grid_steps: usize,
) -> Result<ExponentResult, ExponentError> {
    check_inputs(r, p0, p1)?;
    if grid_steps < MIN_GRID_STEPS {
        return Err(ExponentError::GridTooCoarse(grid_steps));
    }
    let pitch = 1.0 / grid_steps as f64;
    let (gv, gi, gj) = (0..=grid_steps)
        .into_par_iter()
        .map(|i| {
            let q0 = i as f64 * pitch;
            let mut best = (f64::INFINITY, i, 0);
            for j in 0..=grid_steps {
                let v = exponent_objective(q0, j as f64 * pitch, r, p0, p1);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| if (b.0, b.1, b.2) < (a.0, a.1, a.2) { b } else { a },
        );

    let inner = |q0: f64| golden_min(0.0, 1.0, |q1| exponent_objective(q0, q1, r, p0, p1));
    let (q0, _) = golden_min(0.0, 1.0, |q0| inner(q0).1);
    let (q1, v) = inner(q0);

    let (value, q0, q1) = if v <= gv {
        (v, q0, q1)
    } else {
        (gv, gi as f64 * pitch, gj as f64 * pitch)
    };
    let value = value.max(0.0);
    Ok(ExponentResult {
        value,
        regime: classify(value, r, p0, p1),
        minimizer_q0: q0,
        minimizer_q1: q1,
        beta: None,
    })
}

/// Grid minimum of the exponent over crossover pairs dominated by `(p0, p1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCase {
    pub value: f64,
    pub argmin_p0: f64,
    pub argmin_p1: f64,
    /// `E(R, p0, p1)` itself.
    pub corner: f64,
}

impl WorstCase {
    pub fn at_corner(&self, p0: f64, p1: f64) -> bool {
        self.argmin_p0 == p0 && self.argmin_p1 == p1
    }
}

/// Minimum of [`exponent_closed_form`] over a `grid_steps × grid_steps` grid of
/// `(p0′, p1′) ∈ [p_floor, p0] × [p_floor, p1]`.
///
/// The scan starts at the `(p0, p1)` corner and only moves to a point that is
/// lower by more than `1e-12`, so numerically tied minima report the corner.
pub fn worst_case_exponent(
    r: f64,
    p0: f64,
    p1: f64,
    grid_steps: usize,
    p_floor: f64,
) -> Result<WorstCase, ExponentError> {
    check_inputs(r, p0, p1)?;
    check_inputs(r, p_floor, p_floor)?;
    let steps = grid_steps.max(2) - 1;
    let axis = |p: f64, i: usize| {
        if i == steps {
            p
        } else {
            p_floor + (p - p_floor) * i as f64 / steps as f64
        }
    };
    let corner = exponent(r, p0, p1)?;
    let mut best = (corner, p0, p1);
    for i in (0..=steps).rev() {
        for j in (0..=steps).rev() {
            let (a, b) = (axis(p0, i), axis(p1, j));
            let v = exponent(r, a, b)?;
            if v < best.0 - 1e-12 {
                best = (v, a, b);
            }
        }
    }
    Ok(WorstCase {
        value: best.0,
        argmin_p0: best.1,
        argmin_p1: best.2,
        corner,
    })
}

/// `(n/2+1)⁴ · 2^{−n(E−μ)}`, the error probability bound met by most codes.
pub fn perr_bound(n: usize, e: f64, mu: f64) -> f64 {
    let poly = (n as f64 / 2.0 + 1.0).powi(4);
    poly * (-(n as f64) * (e - mu)).exp2()
}

/// `1 − (n/2+1)² · 2^{−μn}`, a lower bound on the fraction of codes that meet
/// [`perr_bound`]. Non-positive values make the statement vacuous.
pub fn bound_probability(n: usize, mu: f64) -> f64 {
    1.0 - (n as f64 / 2.0 + 1.0).powi(2) * (-mu * n as f64).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn objective_vanishes_at_the_channel_on_the_boundary() {
        let (p0, p1) = (0.07, 0.16);
        let r = 1.0 - hc(p0, p1);
        assert!(exponent_objective(p0, p1, r, p0, p1).abs() < 1e-15);
        let below = exponent_objective(p0, p1, 0.2, p0, p1);
        assert!(close(below, 0.8 - hc(p0, p1), 1e-15));
    }

    #[test]
    fn objective_at_a_pure_corner() {
        let v = exponent_objective(1.0, 0.11, 0.9, 0.11, 0.11);
        assert!(close(v, (1.0f64 / 0.11).log2() / 2.0, 1e-12));
        assert!(close(v, 1.5922, 1e-4));
    }

    #[test]
    fn low_rate_value_at_zero_rate() {
        let e = exponent_closed_form(0.0, 0.11, 0.11).unwrap();
        assert_eq!(e.regime, Regime::LowRate);
        assert!(close(e.value, 0.298_868_4, 1e-7));
        assert!(close(e.minimizer_q0, 0.260_12, 1e-5));
        let g = exponent_grid(0.0, 0.11, 0.11, 200).unwrap();
        assert!(close(g.value, e.value, 1e-9));
    }

    #[test]
    fn tilted_values() {
        let cases = [
            (0.3, 0.05, 0.15, 0.067_950_012_6),
            (0.4, 0.05, 0.05, 0.094_633_000_7),
            (0.2, 0.1, 0.2, 0.051_326_483_7),
        ];
        for (r, p0, p1, want) in cases {
            let e = exponent_closed_form(r, p0, p1).unwrap();
            assert_eq!(e.regime, Regime::Tilted);
            assert!(close(e.value, want, 1e-9), "{r} {p0} {p1}: {}", e.value);
            let beta = e.beta.unwrap();
            assert!((0.5..1.0).contains(&beta));
            let residual = hc(e.minimizer_q0, e.minimizer_q1) - (1.0 - r);
            assert!(residual.abs() <= 1e-10);
        }
        let e = exponent_closed_form(0.3, 0.05, 0.15).unwrap();
        assert!(close(e.beta.unwrap(), 0.619_40, 1e-5));
    }

    #[test]
    fn zero_regime_from_the_capacity_boundary() {
        let (p0, p1) = (0.03, 0.2);
        let e = exponent_closed_form(1.0 - hc(p0, p1), p0, p1).unwrap();
        assert_eq!(e.regime, Regime::Zero);
        assert_eq!(e.value, 0.0);
        assert_eq!((e.minimizer_q0, e.minimizer_q1), (p0, p1));
        assert_eq!(exponent(1.0, p0, p1).unwrap(), 0.0);
    }

    #[test]
    fn continuous_across_both_seams() {
        let (p0, p1) = (0.04, 0.13);
        let seam_low = 1.0 - hc(critical_point(p0), critical_point(p1));
        let seam_zero = 1.0 - hc(p0, p1);
        for seam in [seam_low, seam_zero] {
            let a = exponent(seam - 1e-12, p0, p1).unwrap();
            let b = exponent(seam + 1e-12, p0, p1).unwrap();
            assert!(close(a, b, 1e-9), "{seam}: {a} vs {b}");
        }
        assert!(exponent(seam_zero - 1e-12, p0, p1).unwrap() < 1e-9);
    }

    #[test]
    fn tilted_endpoints() {
        assert!(close(tilted(0.1, 1.0), 0.1, 1e-15));
        assert!(close(tilted(0.1, 0.5), critical_point(0.1), 1e-15));
        assert_eq!(tilted(0.0, 0.7), 0.0);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(exponent(1.2, 0.1, 0.1), Err(ExponentError::Rate(_))));
        assert!(matches!(exponent(0.1, 0.5, 0.1), Err(ExponentError::Crossover(_))));
        assert!(matches!(exponent_grid(0.1, 0.1, 0.1, 10), Err(ExponentError::GridTooCoarse(10))));
    }

    #[test]
    fn small_floor_approaches_one_minus_rate() {
        let e = exponent(0.25, 1e-12, 1e-12).unwrap();
        assert!(close(e, 0.75, 1e-5));
    }

    #[test]
    fn worst_case_sits_at_the_corner() {
        for (r, p0, p1) in [(0.1, 0.1, 0.2), (0.5, 0.05, 0.08), (0.05, 0.2, 0.24)] {
            let w = worst_case_exponent(r, p0, p1, 30, DEFAULT_P_FLOOR).unwrap();
            assert!(w.at_corner(p0, p1), "{w:?}");
            assert!(w.value >= w.corner - 1e-9);
        }
    }

    #[test]
    fn finite_length_bounds() {
        assert!(close(perr_bound(12, 0.5, 0.5), 7f64.powi(4), 1e-9));
        assert!(close(bound_probability(12, 0.0), -48.0, 1e-12));
        assert!(bound_probability(200, 0.1) > 0.99);
    }

    proptest! {
        #[test]
        fn symmetric_in_the_crossovers(r in 0.0..1.0f64, p0 in 0.001..0.49f64, p1 in 0.001..0.49f64) {
            let a = exponent(r, p0, p1).unwrap();
            let b = exponent(r, p1, p0).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn non_increasing_in_rate(r in 0.0..0.99f64, dr in 0.0..0.01f64, p0 in 0.001..0.49f64, p1 in 0.001..0.49f64) {
            let a = exponent(r, p0, p1).unwrap();
            let b = exponent(r + dr, p0, p1).unwrap();
            prop_assert!(b <= a + 1e-12);
        }

        #[test]
        fn positive_below_capacity(p0 in 0.001..0.49f64, p1 in 0.001..0.49f64, frac in 0.0..0.999f64) {
            let r = frac * (1.0 - hc(p0, p1));
            let e = exponent_closed_form(r, p0, p1).unwrap();
            prop_assert!(e.value > 0.0);
            prop_assert!(e.regime != Regime::Zero);
        }

        #[test]
        fn closed_form_is_a_lower_bound_on_the_objective(
            r in 0.0..1.0f64, p0 in 0.01..0.49f64, p1 in 0.01..0.49f64,
            q0 in 0.0..1.0f64, q1 in 0.0..1.0f64,
        ) {
            let e = exponent_closed_form(r, p0, p1).unwrap();
            prop_assert!(e.value <= exponent_objective(q0, q1, r, p0, p1) + 1e-12);
            let at_min = exponent_objective(e.minimizer_q0, e.minimizer_q1, r, p0, p1);
            prop_assert!((at_min - e.value).abs() <= 1e-9);
        }
    }
}

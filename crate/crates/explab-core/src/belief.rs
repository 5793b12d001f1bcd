//! Bayesian belief arithmetic in likelihood-ratio space.
//!
//! A failed experiment multiplies the likelihood ratio p/(1-p) of the good
//! state by (1-lambda); a success reveals the good state outright. Running the
//! update on the ratio rather than the probability keeps n-fold iteration
//! exact up to one multiplication (no loop error accumulation) and makes
//! threshold-crossing counts computable in log space.

use crate::params::ModelParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Probability of the good state, kept alongside its likelihood ratio.
/// The certainty point p = 1 is a distinct symbolic state: it is an absorbing
/// fixed point of the update and has no finite ratio.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum Belief {
    /// Certainty that the state is good (a success was observed or inferred).
    Sure,
    /// Interior belief with probability `p` in [0,1) and ratio `lr` = p/(1-p).
    At { p: f64, lr: f64 },
}

#[derive(Debug, Error, PartialEq)]
#[error("the certainty belief p = 1 has no predecessor under the failure update")]
pub struct SureHasNoPreimage;

impl Belief {
    pub fn from_p(p: f64) -> Self {
        assert!((0.0..=1.0).contains(&p), "belief out of [0,1]: {p}");
        if p >= 1.0 {
            Belief::Sure
        } else {
            Belief::At { p, lr: lr(p) }
        }
    }

    pub fn from_lr(l: f64) -> Self {
        assert!(l >= 0.0, "likelihood ratio must be nonnegative: {l}");
        if l.is_infinite() {
            Belief::Sure
        } else {
            Belief::At { p: p_of_lr(l), lr: l }
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        match *self {
            Belief::Sure => 1.0,
            Belief::At { p, .. } => p,
        }
    }

    #[inline]
    pub fn is_sure(&self) -> bool {
        matches!(self, Belief::Sure)
    }

    /// Posterior after one failed experiment.
    pub fn after_failure(&self, params: &ModelParams) -> Self {
        match *self {
            Belief::Sure => Belief::Sure,
            Belief::At { lr: l, .. } => Belief::from_lr(l * (1.0 - params.lambda)),
        }
    }

    /// Posterior after `n` failed experiments, in one step.
    pub fn after_failures(&self, n: u32, params: &ModelParams) -> Self {
        match *self {
            Belief::Sure => Belief::Sure,
            Belief::At { lr: l, .. } => Belief::from_lr(l * pow1m(params.lambda, n)),
        }
    }

    /// The unique belief whose failure update gives `self`.
    pub fn before_failure(&self, params: &ModelParams) -> Result<Self, SureHasNoPreimage> {
        match *self {
            Belief::Sure => Err(SureHasNoPreimage),
            Belief::At { lr: l, .. } => Ok(Belief::from_lr(l / (1.0 - params.lambda))),
        }
    }
}

// ---------------------------------------------------------------------------
// scalar helpers

/// Likelihood ratio p/(1-p).
#[inline]
pub fn lr(p: f64) -> f64 {
    p / (1.0 - p)
}

/// Probability from a likelihood ratio.
#[inline]
pub fn p_of_lr(l: f64) -> f64 {
    if l.is_infinite() {
        1.0
    } else {
        l / (1.0 + l)
    }
}

/// (1-lambda)^n without drift for large n.
#[inline]
pub fn pow1m(lambda: f64, n: u32) -> f64 {
    (1.0 - lambda).powi(n as i32)
}

/// phi(p): posterior on the good state after one failed experiment.
#[inline]
pub fn phi(p: f64, params: &ModelParams) -> f64 {
    Belief::from_p(p).after_failure(params).value()
}

/// phi^n(p) computed in ratio space in one step.
#[inline]
pub fn phi_iterate(p: f64, n: u32, params: &ModelParams) -> f64 {
    Belief::from_p(p).after_failures(n, params).value()
}

/// phi^{-1}(p); errors on the fixed point p = 1.
#[inline]
pub fn phi_inverse(p: f64, params: &ModelParams) -> Result<f64, SureHasNoPreimage> {
    Belief::from_p(p).before_failure(params).map(|b| b.value())
}

/// phi^{-n}(p).
pub fn phi_inverse_iterate(p: f64, n: u32, params: &ModelParams) -> Result<f64, SureHasNoPreimage> {
    match Belief::from_p(p) {
        Belief::Sure => Err(SureHasNoPreimage),
        Belief::At { lr: l, .. } => Ok(p_of_lr(l / pow1m(params.lambda, n))),
    }
}

/// Smallest n >= 0 with phi^n(p0) < cut, i.e. the number of failures needed
/// to drive the belief strictly below the cutoff. Comparisons run in log
/// space (monotone transform, so exact), with a direct neighbourhood check to
/// absorb the rounding of the closed-form estimate.
pub fn failures_to_cross(p0: f64, cut: f64, params: &ModelParams) -> u32 {
    assert!(cut > 0.0 && cut < 1.0, "cutoff must be interior, got {cut}");
    if p0 < cut {
        return 0;
    }
    let l0 = lr(p0).ln();
    let lc = lr(cut).ln();
    let step = (1.0 - params.lambda).ln(); // < 0
    // want smallest n with l0 + n*step < lc
    let est = ((lc - l0) / step).floor().max(0.0);
    let mut n = est as u32;
    let below = |n: u32| l0 + f64::from(n) * step < lc;
    while n > 0 && below(n - 1) {
        n -= 1;
    }
    while !below(n) {
        n += 1;
    }
    n
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params() -> ModelParams {
        ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap()
    }

    #[test]
    fn failure_update_fixed_points() {
        let pr = params();
        assert_eq!(phi(1.0, &pr), 1.0);
        assert_eq!(phi(0.0, &pr), 0.0);
    }

    #[test]
    fn failure_update_hand_value() {
        // lambda = 0.2: phi(0.5) = 0.4/0.9 by direct rational arithmetic.
        let pr = params();
        assert_abs_diff_eq!(phi(0.5, &pr), 0.4 / 0.9, epsilon = 1e-15);
    }

    #[test]
    fn iterate_matches_ratio_formula() {
        // lambda = 0.2, p = 0.6, n = 7: ratio 1.5 * 0.8^7.
        let pr = params();
        let l = 1.5 * 0.8f64.powi(7);
        assert_abs_diff_eq!(phi_iterate(0.6, 7, &pr), l / (1.0 + l), epsilon = 1e-14);
        assert_abs_diff_eq!(phi_iterate(0.6, 7, &pr), 0.23930, epsilon = 5e-6);
    }

    #[test]
    fn iterate_equals_repeated_application() {
        let pr = params();
        let mut p = 0.6;
        for n in 0..=200u32 {
            assert_abs_diff_eq!(phi_iterate(0.6, n, &pr), p, epsilon = 1e-12);
            p = phi(p, &pr);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let pr = params();
        for i in 1..100 {
            let p = f64::from(i) / 100.0;
            assert_abs_diff_eq!(phi_inverse(phi(p, &pr), &pr).unwrap(), p, epsilon = 1e-12);
        }
        assert_eq!(phi_inverse(0.0, &pr).unwrap(), 0.0);
        assert_abs_diff_eq!(phi_inverse(0.4 / 0.9, &pr).unwrap(), 0.5, epsilon = 1e-14);
        assert!(phi_inverse(1.0, &pr).is_err());
    }

    #[test]
    fn crossing_count_examples() {
        let pr = params();
        // lambda 0.2, p0 0.6: ratio 1.5*0.8^n < 5/14 first at n = 7.
        assert_eq!(failures_to_cross(0.6, 5.0 / 19.0, &pr), 7);
        assert_eq!(failures_to_cross(0.1, 0.2, &pr), 0);
        // boundary: p0 exactly at the cutoff needs one failure
        assert_eq!(failures_to_cross(0.5, 0.5, &pr), 1);
    }

    #[test]
    fn representation_agreement() {
        for i in 1..200 {
            let p = f64::from(i) / 200.0;
            if let Belief::At { p: v, lr: l } = Belief::from_p(p) {
                assert_abs_diff_eq!(l / (1.0 + l), v, epsilon = 1e-12);
            }
        }
    }
}

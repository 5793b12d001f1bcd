//! Model primitives for the two-player experimentation game.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Primitive parameters of the game.
///
/// Per pull of the risky arm the active player pays the opportunity cost `c`
/// and, if the state is good, earns the lump sum `m` with probability
/// `lambda`. `delta` discounts successive moves of the *same* player (two
/// public half-moves apart). `p0` is the common prior on the good state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub lambda: f64,
    pub delta: f64,
    pub c: f64,
    pub m: f64,
    pub p0: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("lambda must lie strictly inside (0,1), got {0}")]
    Lambda(f64),
    #[error("delta must lie strictly inside (0,1), got {0}")]
    Delta(f64),
    #[error("cost c must be positive and finite, got {0}")]
    Cost(f64),
    #[error("lump payoff m must be positive and finite, got {0}")]
    Lump(f64),
    #[error("prior p0 must lie strictly inside (0,1), got {0}")]
    Prior(f64),
    #[error("net gain g = lambda*m - c must be positive, got {0}")]
    Gain(f64),
}

impl ModelParams {
    /// Strict constructor: every field in the open interval demanded by the
    /// model, and the net flow gain g = lambda*m - c strictly positive.
    pub fn new(lambda: f64, delta: f64, c: f64, m: f64, p0: f64) -> Result<Self, ParamError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(ParamError::Lambda(lambda));
        }
        Self::new_relaxed(lambda, delta, c, m, p0)
    }

    /// Like [`ModelParams::new`] but admits the degenerate boundary
    /// `lambda = 1` (an experiment in the good state succeeds surely).
    /// Useful for deterministic simulation checks; everything else is still
    /// validated strictly.
    pub fn new_relaxed(lambda: f64, delta: f64, c: f64, m: f64, p0: f64) -> Result<Self, ParamError> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(ParamError::Lambda(lambda));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(ParamError::Delta(delta));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(ParamError::Cost(c));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(ParamError::Lump(m));
        }
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(ParamError::Prior(p0));
        }
        let p = Self { lambda, delta, c, m, p0 };
        if p.g() <= 0.0 {
            return Err(ParamError::Gain(p.g()));
        }
        Ok(p)
    }

    /// Net expected flow gain of an experiment in the good state.
    #[inline]
    pub fn g(&self) -> f64 {
        self.lambda * self.m - self.c
    }

    /// Same parameters with a different prior.
    pub fn with_prior(&self, p0: f64) -> Result<Self, ParamError> {
        Self::new_relaxed(self.lambda, self.delta, self.c, self.m, p0)
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_interior_points() {
        let p = ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap();
        assert!((p.g() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_boundaries() {
        assert_eq!(ModelParams::new(0.0, 0.9, 1.0, 10.0, 0.5), Err(ParamError::Lambda(0.0)));
        assert_eq!(ModelParams::new(1.0, 0.9, 1.0, 10.0, 0.5), Err(ParamError::Lambda(1.0)));
        assert_eq!(ModelParams::new(0.2, 1.0, 1.0, 10.0, 0.5), Err(ParamError::Delta(1.0)));
        assert_eq!(ModelParams::new(0.2, 0.9, 0.0, 10.0, 0.5), Err(ParamError::Cost(0.0)));
        assert_eq!(ModelParams::new(0.2, 0.9, 1.0, 10.0, 1.0), Err(ParamError::Prior(1.0)));
        // g = 0.2*4 - 1 < 0
        assert!(matches!(ModelParams::new(0.2, 0.9, 1.0, 4.0, 0.5), Err(ParamError::Gain(_))));
    }

    #[test]
    fn relaxed_allows_sure_success() {
        let p = ModelParams::new_relaxed(1.0, 0.9, 1.0, 10.0, 0.5).unwrap();
        assert_eq!(p.lambda, 1.0);
        assert_eq!(ModelParams::new(1.0, 0.9, 1.0, 10.0, 0.5), Err(ParamError::Lambda(1.0)));
    }
}

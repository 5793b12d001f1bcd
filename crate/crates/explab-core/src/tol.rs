//! Central numeric tolerances.
//!
//! Every tolerance in the crate lives here with a one-line justification, so
//! that a reviewer can audit the numerics in one place and tests do not invent
//! ad-hoc epsilons.

/// Agreement between a closed-form payoff expression and the exact tree
/// evaluator. Both sides are short sums/products of f64 terms of magnitude
/// O(m), so ~1e-13 relative error is the realistic worst case; 1e-10 leaves
/// two orders of headroom.
pub const CLOSED_FORM: f64 = 1e-10;

/// Likelihood-ratio vs probability representation agreement, and other pure
/// floating-point identities (round trips, alternative algebraic forms).
pub const REPR: f64 = 1e-12;

/// Residual target when solving an indifference equation for a mixing
/// probability (linear solve or bisection).
pub const INDIFF_SOLVE: f64 = 1e-12;

/// Indifference verification at nodes where a profile randomizes. Looser than
/// pure comparisons because mixing weights themselves come from root finding.
pub const MIXED_INDIFF: f64 = 1e-8;

/// One-step deviation gains below this are treated as ties, not profitable
/// deviations. Payoff values carry evaluator roundoff of order 1e-12..1e-11.
pub const DEVIATION_GAIN: f64 = 1e-9;

/// Half-width of the knife-edge band around a belief cutoff. A ladder belief
/// falling inside the band trips the genericity warning instead of silently
/// picking a side; the model's comparative statements assume the generic case.
pub const GENERICITY_BAND: f64 = 1e-9;

/// Sup-norm convergence target for value iteration.
pub const VALUE_ITER: f64 = 1e-12;

/// Grid step of the value-iteration belief grid used by the one-player oracle.
pub const VI_GRID_STEP: f64 = 1e-5;

/// Monte Carlo vs exact evaluator acceptance width, in standard errors.
pub const MC_SIGMA: f64 = 4.0;

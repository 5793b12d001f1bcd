//! The catalog of named strategy profiles.
//!
//! A profile maps public histories to the probability that the active
//! player chooses R, under the standing convention that this describes the
//! never-successful active player; a successful player always plays R.
//! Belief-dependent profiles carry their own belief engine and interleave
//! profile and belief computation by history length, so there is no
//! circularity.

use crate::belief::{failures_to_cross, phi, phi_inverse, phi_iterate};
use crate::beliefs::{BeliefEngine, BeliefMode, NodeBeliefs, ProbR};
use crate::cutoffs::{cutoff_p_hat, cutoff_p_hat_n, cutoff_p_star, cutoff_p_star_n};
use crate::history::{Action, Player, PublicHistory};
use crate::params::ModelParams;
use crate::tol::GENERICITY_BAND;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("prior {p0} is below the lone-experimenter cutoff {p_star}")]
    PriorTooLow { p0: f64, p_star: f64 },
    #[error("profile hypotheses violated: {0}")]
    HypothesisViolated(String),
    #[error("indifference root not bracketed: {0}")]
    RootNotBracketed(String),
    #[error("unknown profile spec {0:?}")]
    UnknownSpec(String),
    #[error("bad profile argument: {0}")]
    BadArg(String),
    #[error("payoff evaluation failed during construction: {0}")]
    Eval(String),
}

/// Non-fatal construction diagnostics; verification is expected to fail on
/// profiles built outside their validity region, which is useful in itself.
#[derive(Clone, Debug, Serialize)]
pub enum ProfileWarning {
    EmptyRegion { detail: String },
    PriorOutsideRegion { lo: f64, hi: f64, p0: f64 },
    Genericity { detail: String },
    Hypothesis { detail: String },
}

#[derive(Clone, Debug, Serialize)]
pub enum ProfileMeta {
    None,
    SigmaN {
        n: u32,
        total: u32,
    },
    Threshold {
        p_hat: f64,
        n_on_path: u32,
    },
    DoubleProbe {
        lo: f64,
        hi: f64,
    },
    LoneProbe {
        gamma1: f64,
        gamma2: f64,
        role_switch: bool,
        lo: f64,
        hi: f64,
    },
    Mixed {
        alpha: f64,
        beta: f64,
    },
    LeaderFollower {
        r0: u32,
        gamma_r: Vec<f64>,
        gamma1: f64,
        gamma2: f64,
        switch_roles: bool,
    },
    PublicMarkov {
        f: Vec<f64>,
    },
    PublicBudget {
        variant: u8,
        n_star: u32,
    },
}

#[derive(Clone, Debug)]
enum Kernel {
    /// R until 2*total moves have passed on the all-R path, then S; R at
    /// every off-path history.
    SigmaN { total: u32 },
    /// R iff the active player's belief is at least p_hat.
    ThresholdPhat { p_hat: f64 },
    /// R at the root, R when every move but the last was S, R when
    /// convinced; S otherwise.
    DoubleProbe,
    /// One opening experiment; afterwards R only when convinced. The
    /// branch after an initial S depends on which payoff is larger.
    LoneProbe { role_switch: bool },
    /// R on all-S histories; mixing alpha after S^nRS and beta after
    /// S^nRSR; otherwise R iff convinced.
    MixedExample { alpha: f64, beta: f64 },
    /// Player 1 experiments while above p_star; player 2 joins once
    /// delaying stops being profitable, per the gamma_r comparisons.
    LeaderFollower {
        n_star: u32,
        p_star: f64,
        gamma_r: Vec<f64>,
        suffix_max: Vec<f64>,
        switch_roles: bool,
    },
    /// Public-outcome Markov profile: R with probability f[k] after k
    /// public failures.
    PublicMarkov { f: Vec<f64> },
    /// Public-outcome budget profile: R while experiments remain and the
    /// previous move conformed (or the remaining budget is even).
    PublicBudget { variant: u8, n_star: u32 },
}

/// Whether a profile is played in the private-payoff game or in the
/// public-outcome benchmark where successes are commonly observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameKind {
    PrivatePayoffs,
    PublicOutcomes,
}

pub struct Profile {
    pub name: String,
    pub params: ModelParams,
    pub mode: BeliefMode,
    pub warnings: Vec<ProfileWarning>,
    pub meta: ProfileMeta,
    kernel: Kernel,
    engine: BeliefEngine,
}

struct Tie<'a>(&'a Profile);

impl ProbR for Tie<'_> {
    fn prob_r(&self, h: &PublicHistory) -> f64 {
        self.0.prob_r(h)
    }
}

fn strip_front(h: &PublicHistory, k: usize) -> PublicHistory {
    let actions: Vec<Action> = h.iter().skip(k).collect();
    PublicHistory::from_actions(&actions).expect("shorter than source")
}

impl Profile {
    fn new(
        name: String,
        params: ModelParams,
        mode: BeliefMode,
        kernel: Kernel,
        meta: ProfileMeta,
        warnings: Vec<ProfileWarning>,
    ) -> Self {
        Profile {
            name,
            params,
            mode,
            warnings,
            meta,
            kernel,
            engine: BeliefEngine::new(params, mode),
        }
    }

    pub fn game_kind(&self) -> GameKind {
        match self.kernel {
            Kernel::PublicMarkov { .. } | Kernel::PublicBudget { .. } => GameKind::PublicOutcomes,
            _ => GameKind::PrivatePayoffs,
        }
    }

    /// Beliefs of both observers at h under this profile's convention.
    pub fn beliefs(&self, h: &PublicHistory) -> NodeBeliefs {
        self.engine.node(h, &Tie(self))
    }

    /// True when the prescription from h onward is S for the next 16 moves
    /// (or to the length cap), the working definition of settled play.
    pub fn settles_with_s(&self, h: &PublicHistory) -> bool {
        let mut cur = *h;
        for _ in 0..16 {
            if self.prob_r(&cur) != 0.0 {
                return false;
            }
            match cur.extend(Action::S) {
                Ok(next) => cur = next,
                Err(_) => return true,
            }
        }
        true
    }

    /// Probability that the never-successful active player plays R at h.
    pub fn prob_r(&self, h: &PublicHistory) -> f64 {
        match &self.kernel {
            Kernel::SigmaN { total } => {
                let t2 = 2 * *total as usize;
                let on = h
                    .iter()
                    .enumerate()
                    .all(|(i, a)| if i < t2 { a == Action::R } else { a == Action::S });
                if on && h.len() >= t2 {
                    0.0
                } else {
                    1.0
                }
            }
            Kernel::ThresholdPhat { p_hat } => {
                let b = self.beliefs(h);
                let pb = b.of(h.active_player());
                if pb.val.is_one() || pb.p(&self.params) >= *p_hat {
                    1.0
                } else {
                    0.0
                }
            }
            Kernel::DoubleProbe => {
                if h.is_empty() || (0..h.len() - 1).all(|i| h.action_at(i) == Action::S) {
                    return 1.0;
                }
                self.convinced_active(h)
            }
            Kernel::LoneProbe { role_switch } => self.lone_probe(h, *role_switch),
            Kernel::MixedExample { alpha, beta } => {
                let n = h.len();
                if (0..n).all(|i| h.action_at(i) == Action::S) {
                    return 1.0; // includes the empty history
                }
                // S^k R S and S^k R S R, k >= 0
                let all_s_before = |j: usize| (0..j).all(|i| h.action_at(i) == Action::S);
                if n >= 2
                    && h.action_at(n - 1) == Action::S
                    && h.action_at(n - 2) == Action::R
                    && all_s_before(n - 2)
                {
                    return *alpha;
                }
                if n >= 3
                    && h.action_at(n - 1) == Action::R
                    && h.action_at(n - 2) == Action::S
                    && h.action_at(n - 3) == Action::R
                    && all_s_before(n - 3)
                {
                    return *beta;
                }
                self.convinced_active(h)
            }
            Kernel::LeaderFollower { switch_roles, .. } => self.leader_follower(h, *switch_roles),
            Kernel::PublicMarkov { f } => {
                let k = h.n_e() as usize;
                if k < f.len() {
                    f[k]
                } else {
                    0.0
                }
            }
            Kernel::PublicBudget { variant, n_star } => self.budget(h, *variant, *n_star),
        }
    }

    fn convinced_active(&self, h: &PublicHistory) -> f64 {
        let b = self.beliefs(h);
        if b.of(h.active_player()).val.is_one() {
            1.0
        } else {
            0.0
        }
    }

    fn lone_probe(&self, h: &PublicHistory, role_switch: bool) -> f64 {
        if h.is_empty() {
            return 1.0;
        }
        if h.action_at(0) == Action::R {
            return self.convinced_active(h);
        }
        if role_switch {
            // roles switch after the opening S: play as if it never happened
            return self.lone_probe(&strip_front(h, 1), role_switch);
        }
        if h.len() == 1 {
            return 0.0; // answer the opening S with S
        }
        if h.action_at(1) == Action::S {
            return self.lone_probe(&strip_front(h, 2), role_switch);
        }
        // S then R: experiments have happened, so the generic logic applies
        self.convinced_active(h)
    }

    fn leader_follower(&self, h: &PublicHistory, switch_roles: bool) -> f64 {
        if h.is_empty() {
            return 1.0;
        }
        if h.action_at(0) == Action::R {
            return self.leader_follower_r(h);
        }
        if switch_roles {
            return self.leader_follower(&strip_front(h, 1), switch_roles);
        }
        if h.len() == 1 {
            return 0.0;
        }
        if h.action_at(1) == Action::R {
            // SR.h' is played like R.h'
            return self.leader_follower_r(&strip_front(h, 1));
        }
        self.leader_follower(&strip_front(h, 2), switch_roles)
    }

    /// Action rule on histories that start with R.
    fn leader_follower_r(&self, h: &PublicHistory) -> f64 {
        let Kernel::LeaderFollower { n_star, p_star, suffix_max, gamma_r, .. } = &self.kernel
        else {
            unreachable!()
        };
        let b = self.beliefs(h);
        let active = h.active_player();
        let pb = b.of(active);
        match active {
            Player::P1 => {
                if pb.val.is_one() || pb.p(&self.params) >= *p_star {
                    1.0
                } else {
                    0.0
                }
            }
            Player::P2 => {
                if !pb.val.is_one() && pb.p(&self.params) < *p_star {
                    return 0.0;
                }
                // delay clause: at (RS)^r.R it can pay to wait for a later
                // larger gamma
                if let Some(r) = rs_block_r(h) {
                    if (r as usize) < *n_star as usize && gamma_r[r as usize] < suffix_max[r as usize]
                    {
                        return 0.0;
                    }
                }
                1.0
            }
        }
    }

    fn budget(&self, h: &PublicHistory, variant: u8, n_star: u32) -> f64 {
        let k = n_star as i64 - h.n_e() as i64;
        if k <= 0 {
            return 0.0;
        }
        let consistent = match h.parent() {
            // the empty history has no previous move; the two variants
            // resolve the vacuous case in opposite ways, which is exactly
            // what distinguishes the two pure equilibria
            None => variant == 1,
            Some((parent, last)) => {
                let prescribed = if self.prob_r(&parent) >= 0.5 { Action::R } else { Action::S };
                last == prescribed
            }
        };
        if consistent || k % 2 == 0 {
            1.0
        } else {
            0.0
        }
    }
}

/// If h is exactly (RS)^r R, returns r.
fn rs_block_r(h: &PublicHistory) -> Option<u32> {
    if h.len() % 2 != 1 {
        return None;
    }
    let ok = (0..h.len()).all(|i| {
        let want = if i % 2 == 0 { Action::R } else { Action::S };
        h.action_at(i) == want
    });
    if ok {
        Some((h.len() as u32 - 1) / 2)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// constructors

/// Experiment N* + n times on the all-R path, then stop for good; R at all
/// other histories.
pub fn make_sigma_n(params: &ModelParams, n: u32) -> Result<Profile, ProfileError> {
    let p_star = cutoff_p_star(params, params.delta);
    if params.p0 < p_star {
        return Err(ProfileError::PriorTooLow { p0: params.p0, p_star });
    }
    let n_star = failures_to_cross(params.p0, p_star, params);
    let total = n_star + n;
    Ok(Profile::new(
        format!("sigma_n(n={n})"),
        *params,
        BeliefMode::Reasonable,
        Kernel::SigmaN { total },
        ProfileMeta::SigmaN { n, total },
        Vec::new(),
    ))
}

/// R exactly when the active player's belief is at least the encouragement
/// cutoff p_hat (always R when convinced).
pub fn make_threshold_phat(params: &ModelParams) -> Profile {
    let p_hat = cutoff_p_hat(params);
    let n_on_path = failures_to_cross(params.p0, p_hat, params);
    let mut warnings = Vec::new();
    for k in n_on_path.saturating_sub(1)..=n_on_path {
        let v = phi_iterate(params.p0, k, params);
        if (v - p_hat).abs() <= GENERICITY_BAND {
            warnings.push(ProfileWarning::Genericity {
                detail: format!("phi^{k}(p0) = {v} within {GENERICITY_BAND} of p_hat = {p_hat}"),
            });
        }
    }
    Profile::new(
        "threshold_phat".into(),
        *params,
        BeliefMode::Reasonable,
        Kernel::ThresholdPhat { p_hat },
        ProfileMeta::Threshold { p_hat, n_on_path },
        warnings,
    )
}

/// Experiment at the root or right after a fresh first experiment by the
/// opponent; otherwise only when convinced. Valid for priors in
/// [p*_1, phi^{-1}(p_hat)].
pub fn make_double_probe(params: &ModelParams) -> Profile {
    let lo = cutoff_p_star_n(params, 1);
    let hi = phi_inverse(cutoff_p_hat(params), params).expect("cutoff below 1");
    let mut warnings = Vec::new();
    if lo > hi {
        warnings.push(ProfileWarning::EmptyRegion {
            detail: format!("p_star_1 = {lo} exceeds phi^-1(p_hat) = {hi}"),
        });
    } else if params.p0 < lo || params.p0 > hi {
        warnings.push(ProfileWarning::PriorOutsideRegion { lo, hi, p0: params.p0 });
    }
    Profile::new(
        "double_probe".into(),
        *params,
        BeliefMode::Reasonable,
        Kernel::DoubleProbe,
        ProfileMeta::DoubleProbe { lo, hi },
        warnings,
    )
}

/// A single opening experiment; thereafter R only when convinced. Valid
/// for priors in [p*, min(p*_1, phi^{-1}(p_hat))].
pub fn make_lone_probe(params: &ModelParams) -> Profile {
    let p_star = cutoff_p_star(params, params.delta);
    let lo = p_star;
    let hi = cutoff_p_star_n(params, 1).min(phi_inverse(cutoff_p_hat(params), params).unwrap());
    let mut warnings = Vec::new();
    if lo > hi {
        warnings.push(ProfileWarning::EmptyRegion {
            detail: format!("p_star = {lo} exceeds min(p_star_1, phi^-1(p_hat)) = {hi}"),
        });
    } else if params.p0 < lo || params.p0 > hi {
        warnings.push(ProfileWarning::PriorOutsideRegion { lo, hi, p0: params.p0 });
    }
    // on-path payoffs in closed form: player 1 experiments once; player 2
    // free-rides and experiments only on a disclosed success
    let (l, d, p0, g) = (params.lambda, params.delta, params.p0, params.g());
    let gamma1 = (1.0 - d) * (p0 * l * params.m - params.c) + d * l * p0 * g;
    let gamma2 = d * l * p0 * g;
    let role_switch = gamma1 > d * gamma2;
    Profile::new(
        "lone_probe".into(),
        *params,
        BeliefMode::Reasonable,
        Kernel::LoneProbe { role_switch },
        ProfileMeta::LoneProbe { gamma1, gamma2, role_switch, lo, hi },
        warnings,
    )
}

/// Behavioral profile with explicitly supplied mixing weights; exposed for
/// tests and for the indifference solve in `make_mixed_example`.
pub fn mixed_with(params: &ModelParams, alpha: f64, beta: f64) -> Profile {
    Profile::new(
        "mixed_example".into(),
        *params,
        BeliefMode::Reasonable,
        Kernel::MixedExample { alpha, beta },
        ProfileMeta::Mixed { alpha, beta },
        Vec::new(),
    )
}

/// Leader/follower profile with the delay payoffs gamma_r already known;
/// exposed for tests and used by `make_leader_follower`.
pub fn leader_follower_with(
    params: &ModelParams,
    gamma_r: Vec<f64>,
    switch_roles: bool,
    meta: ProfileMeta,
) -> Profile {
    let p_star = cutoff_p_star(params, params.delta);
    let n_star = gamma_r.len() as u32 - 1;
    let mut suffix_max = vec![f64::NEG_INFINITY; gamma_r.len()];
    let mut run = f64::NEG_INFINITY;
    for r in (0..gamma_r.len()).rev() {
        run = run.max(gamma_r[r]);
        suffix_max[r] = run;
    }
    Profile::new(
        "leader_follower".into(),
        *params,
        BeliefMode::Conviction,
        Kernel::LeaderFollower { n_star, p_star, gamma_r, suffix_max, switch_roles },
        meta,
        Vec::new(),
    )
}

/// Public-outcome Markov profile from a solved ladder of mixing
/// probabilities f[k] at k public failures.
pub fn public_markov_with(params: &ModelParams, f: Vec<f64>) -> Profile {
    Profile::new(
        "public_markov".into(),
        *params,
        BeliefMode::Reasonable,
        Kernel::PublicMarkov { f: f.clone() },
        ProfileMeta::PublicMarkov { f },
        Vec::new(),
    )
}

/// Public-outcome budget profile; variant 1 and 2 are the two pure
/// equilibria that differ in who is supposed to open.
pub fn make_public_budget(params: &ModelParams, variant: u8) -> Result<Profile, ProfileError> {
    if variant != 1 && variant != 2 {
        return Err(ProfileError::BadArg(format!("budget variant must be 1 or 2, got {variant}")));
    }
    let p_star = cutoff_p_star(params, params.delta);
    let n_star = failures_to_cross(params.p0, p_star, params);
    let mut warnings = Vec::new();
    let p_myop = params.c / (params.lambda * params.m);
    if params.p0 >= p_myop {
        warnings.push(ProfileWarning::Hypothesis {
            detail: format!("built under p0 < p_myop; got p0 = {} >= {p_myop}", params.p0),
        });
    }
    Ok(Profile::new(
        format!("public_budget(variant={variant})"),
        *params,
        BeliefMode::Reasonable,
        Kernel::PublicBudget { variant, n_star },
        ProfileMeta::PublicBudget { variant, n_star },
        warnings,
    ))
}

/// Checks the hypotheses for the mixed construction and reports the first
/// failure, or returns (p_star_2, bounds) when all hold.
pub fn mixed_hypotheses(params: &ModelParams) -> Result<(), String> {
    let p_star = cutoff_p_star(params, params.delta);
    let p_hat = cutoff_p_hat(params);
    let p_hat_1 = cutoff_p_hat_n(params, 1);
    let p_star_1 = cutoff_p_star_n(params, 1);
    let fp = phi(p_star, params);
    if !(fp > p_hat && fp < p_hat_1) {
        return Err(format!("phi(p_star) = {fp} not inside (p_hat, p_hat_1) = ({p_hat}, {p_hat_1})"));
    }
    let hi = p_star_1.min(phi_inverse(p_hat_1, params).unwrap());
    if !(params.p0 > p_star && params.p0 < hi) {
        return Err(format!(
            "p0 = {} not inside (p_star, min(p_star_1, phi^-1(p_hat_1))) = ({p_star}, {hi})",
            params.p0
        ));
    }
    Ok(())
}

/// The first mixing weight in closed form.
pub fn mixed_alpha(params: &ModelParams) -> f64 {
    let p0 = params.p0;
    let l = params.lambda;
    let p_star_2 = cutoff_p_star_n(params, 2);
    let a = p0 * l * (1.0 - p_star_2);
    a / (a + (p_star_2 - p0))
}

// make_mixed_example and make_leader_follower need the payoff evaluator and
// live in the payoffs module's construction helpers; re-exported from there.

// ---------------------------------------------------------------------------
// spec strings

/// Names accepted by `from_spec`, for CLI help output.
pub const SPEC_NAMES: &[&str] = &[
    "sigma_n:n=<k>",
    "threshold_phat",
    "double_probe",
    "lone_probe",
    "mixed_example",
    "leader_follower",
    "public_markov",
    "public_budget:variant=<1|2>",
];

/// Build a catalog profile from a textual spec such as `sigma_n:n=2` or
/// `public_budget:variant=1`. Arguments follow the name after a colon as
/// comma-separated `key=value` pairs.
pub fn from_spec(spec: &str, params: &ModelParams) -> Result<Profile, ProfileError> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => (spec.trim(), ""),
    };
    let arg = |key: &str| -> Result<&str, ProfileError> {
        rest.split(',')
            .filter_map(|kv| kv.split_once('='))
            .find(|(k, _)| k.trim() == key)
            .map(|(_, v)| v.trim())
            .ok_or_else(|| ProfileError::BadArg(format!("{name} needs {key}=<value>")))
    };
    match name {
        "sigma_n" => {
            let n: u32 = arg("n")?
                .parse()
                .map_err(|e| ProfileError::BadArg(format!("sigma_n n: {e}")))?;
            make_sigma_n(params, n)
        }
        "threshold_phat" => Ok(make_threshold_phat(params)),
        "double_probe" => Ok(make_double_probe(params)),
        "lone_probe" => Ok(make_lone_probe(params)),
        "mixed_example" => crate::payoffs::make_mixed_example(params),
        "leader_follower" => crate::payoffs::make_leader_follower(params),
        "public_markov" => Ok(crate::public::make_public_markov(params).0),
        "public_budget" => {
            let v: u8 = arg("variant")?
                .parse()
                .map_err(|e| ProfileError::BadArg(format!("public_budget variant: {e}")))?;
            make_public_budget(params, v)
        }
        other => Err(ProfileError::UnknownSpec(other.to_string())),
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap()
    }

    fn h(s: &str) -> PublicHistory {
        PublicHistory::parse(s).unwrap()
    }

    #[test]
    fn sigma_n_prescribes_the_overshoot_path() {
        let pr = params(); // N* = 7
        let sn = make_sigma_n(&pr, 2).unwrap();
        assert_eq!(sn.prob_r(&h("")), 1.0);
        assert_eq!(sn.prob_r(&h("R^17")), 1.0); // still inside the R block
        assert_eq!(sn.prob_r(&h("R^18")), 0.0); // block over, stop
        assert_eq!(sn.prob_r(&h("R^18 S^3")), 0.0);
        assert_eq!(sn.prob_r(&h("R^3 S")), 1.0); // off-path: R forever
        assert_eq!(sn.prob_r(&h("S")), 1.0);
    }

    #[test]
    fn sigma_zero_stops_at_n_star() {
        let pr = params();
        let s0 = make_sigma_n(&pr, 0).unwrap();
        assert_eq!(s0.prob_r(&h("R^14")), 0.0);
        assert_eq!(s0.prob_r(&h("R^13")), 1.0);
    }

    #[test]
    fn sigma_n_rejects_low_priors() {
        let pr = params().with_prior(0.2).unwrap(); // below p* = 5/19
        assert!(matches!(make_sigma_n(&pr, 0), Err(ProfileError::PriorTooLow { .. })));
    }

    #[test]
    fn threshold_plays_ladder_then_stops() {
        let pr = params();
        let t = make_threshold_phat(&pr);
        let ProfileMeta::Threshold { n_on_path, .. } = t.meta else { panic!() };
        // on the all-R path the active player experiments until his own
        // count reaches the threshold index
        let mut cur = h("");
        for _ in 0..2 * n_on_path {
            assert_eq!(t.prob_r(&cur), 1.0, "at {cur}");
            cur = cur.extend(Action::R).unwrap();
        }
        assert_eq!(t.prob_r(&cur), 0.0);
        assert_eq!(t.prob_r(&cur.extend(Action::S).unwrap()), 0.0);
    }

    #[test]
    fn double_probe_spec_nodes() {
        // parameters with a nonempty validity region
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap();
        let dp = make_double_probe(&pr);
        assert!(dp.warnings.is_empty(), "{:?}", dp.warnings);
        assert_eq!(dp.prob_r(&h("")), 1.0);
        assert_eq!(dp.prob_r(&h("R")), 1.0); // fresh first experiment
        assert_eq!(dp.prob_r(&h("RR")), 0.0);
        assert_eq!(dp.prob_r(&h("RRR")), 1.0); // deviation convinces player 2
        assert_eq!(dp.prob_r(&h("RS")), 0.0);
        assert_eq!(dp.prob_r(&h("RSSRRR")), 1.0); // player 1 convinced
        assert_eq!(dp.prob_r(&h("S")), 1.0);
        assert_eq!(dp.prob_r(&h("SS")), 1.0);
    }

    #[test]
    fn double_probe_flags_region() {
        // region empty when 1-delta < delta^2 (1-lambda)^2
        let pr = ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap();
        let dp = make_double_probe(&pr);
        assert!(matches!(dp.warnings.as_slice(), [ProfileWarning::EmptyRegion { .. }]));
    }

    #[test]
    fn lone_probe_on_path_is_single_experiment() {
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.40).unwrap();
        let lp = make_lone_probe(&pr);
        assert!(lp.warnings.is_empty(), "{:?}", lp.warnings);
        assert_eq!(lp.prob_r(&h("")), 1.0);
        assert_eq!(lp.prob_r(&h("R")), 0.0);
        assert_eq!(lp.prob_r(&h("RS")), 0.0);
        assert_eq!(lp.prob_r(&h("RSS")), 0.0);
        // player 1's off-path R at RS convinces player 2
        assert_eq!(lp.prob_r(&h("RSR")), 1.0);
    }

    #[test]
    fn lone_probe_opening_s_branch() {
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.40).unwrap();
        let lp = make_lone_probe(&pr);
        let ProfileMeta::LoneProbe { role_switch, .. } = lp.meta else { panic!() };
        if role_switch {
            // play proceeds as if the opening S never happened
            assert_eq!(lp.prob_r(&h("S")), 1.0);
            assert_eq!(lp.prob_r(&h("SR")), 0.0);
        } else {
            assert_eq!(lp.prob_r(&h("S")), 0.0);
            assert_eq!(lp.prob_r(&h("SS")), 1.0); // resume after SS
        }
    }

    #[test]
    fn mixed_form_clauses() {
        let pr = params();
        let mx = mixed_with(&pr, 0.25, 0.75);
        assert_eq!(mx.prob_r(&h("")), 1.0);
        assert_eq!(mx.prob_r(&h("SSS")), 1.0);
        assert_eq!(mx.prob_r(&h("RS")), 0.25);
        assert_eq!(mx.prob_r(&h("SSRS")), 0.25);
        assert_eq!(mx.prob_r(&h("RSR")), 0.75);
        assert_eq!(mx.prob_r(&h("SRSR")), 0.75);
        assert_eq!(mx.prob_r(&h("R")), 0.0); // not a clause form, not convinced
        assert_eq!(mx.prob_r(&h("RSS")), 0.0);
    }

    #[test]
    fn budget_variants_open_differently() {
        // N* = 1 here
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap();
        let b1 = make_public_budget(&pr, 1).unwrap();
        let b2 = make_public_budget(&pr, 2).unwrap();
        assert_eq!(b1.prob_r(&h("")), 1.0);
        assert_eq!(b1.prob_r(&h("R")), 0.0); // budget exhausted
        assert_eq!(b2.prob_r(&h("")), 0.0);
        assert_eq!(b2.prob_r(&h("S")), 1.0); // conforming S, budget 1: R
        assert_eq!(b2.prob_r(&h("SR")), 0.0);
    }

    #[test]
    fn budget_on_path_spends_exactly_n_star() {
        let pr = params(); // N* = 7
        let b1 = make_public_budget(&pr, 1).unwrap();
        let mut cur = h("");
        for _ in 0..7 {
            assert_eq!(b1.prob_r(&cur), 1.0, "at {cur}");
            cur = cur.extend(Action::R).unwrap();
        }
        assert_eq!(b1.prob_r(&cur), 0.0);
    }

    #[test]
    fn spec_strings_reach_every_catalog_entry() {
        let pr = params();
        assert!(from_spec("sigma_n:n=2", &pr).unwrap().name.starts_with("sigma_n"));
        assert_eq!(from_spec("threshold_phat", &pr).unwrap().name, "threshold_phat");
        assert_eq!(from_spec("double_probe", &pr).unwrap().name, "double_probe");
        assert_eq!(from_spec("lone_probe", &pr).unwrap().name, "lone_probe");
        assert_eq!(from_spec("public_markov", &pr).unwrap().name, "public_markov");
        assert!(from_spec("public_budget:variant=2", &pr).unwrap().name.starts_with("public_budget"));
        assert!(matches!(from_spec("sigma_n", &pr), Err(ProfileError::BadArg(_))));
        assert!(matches!(from_spec("nope", &pr), Err(ProfileError::UnknownSpec(_))));
        // the mixed and leader-follower entries need their own parameter regions
        let mx = ModelParams::new(0.15, 0.85, 1.0, 10.0, 0.5218).unwrap();
        assert_eq!(from_spec("mixed_example", &mx).unwrap().name, "mixed_example");
        assert_eq!(from_spec("leader_follower", &pr).unwrap().name, "leader_follower");
    }

    #[test]
    fn rs_block_detector() {
        assert_eq!(rs_block_r(&h("R")), Some(0));
        assert_eq!(rs_block_r(&h("RSR")), Some(1));
        assert_eq!(rs_block_r(&h("RSRSR")), Some(2));
        assert_eq!(rs_block_r(&h("RR")), None);
        assert_eq!(rs_block_r(&h("RSS")), None);
        assert_eq!(rs_block_r(&h("")), None);
    }
}

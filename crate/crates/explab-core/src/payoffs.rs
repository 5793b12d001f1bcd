//! Exact payoff evaluation.
//!
//! Three layers, each checking the next:
//!   - closed forms for the standard continuation values (one-line formulas),
//!   - a scenario evaluator for fixed prescribed action runs,
//!   - a full profile evaluator that walks the game tree with the five
//!     payoff-relevant states (bad arm, good arm with each subset of
//!     players already successful) and both players' values at once.
//!
//! Payoffs use the per-own-move clock: a player's value at a history is
//! (1-delta) * flow + delta * (value at his next own move); the opponent's
//! intervening move carries no extra discount. Normalized this way,
//! experimenting forever on a known good arm is worth exactly g.

use crate::belief::{failures_to_cross, phi_iterate, pow1m};
use crate::history::{Action, Player, PublicHistory};
use crate::params::ModelParams;
use crate::profiles::{
    leader_follower_with, mixed_alpha, mixed_hypotheses, mixed_with, Profile, ProfileError,
    ProfileMeta,
};
use crate::tol;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("continuation at {history} does not settle into constant pure actions by depth {depth}")]
    UnclassifiableTail { history: String, depth: usize },
    #[error("history capacity exceeded while evaluating at {history}")]
    Capacity { history: String },
    #[error("no-success play does not settle by depth {depth} at {history}")]
    Unsettled { history: String, depth: usize },
}

// ---------------------------------------------------------------------------
// closed-form continuation values

/// Stop now and watch one opponent move: the opponent is successful with
/// probability q (given G) and would reveal it by experimenting again.
pub fn stop_and_watch(params: &ModelParams, p: f64, q: f64) -> f64 {
    params.delta * p * params.g() * q
}

/// Keep experimenting k+1 more times while the opponent experiments k more
/// times, then stop and watch; q is the chance (given G) the opponent is
/// already successful.
pub fn persist_both(params: &ModelParams, p: f64, q: f64, k: u32) -> f64 {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let w1 = pow1m(l, k + 1);
    let wk = pow1m(l, k);
    (p * l * m - c) * (1.0 - d.powi(k as i32 + 1))
        + d.powi(k as i32 + 1) * p * g * ((1.0 - w1) + w1 * (q + (1.0 - q) * (1.0 - wk)))
}

/// Experiment omega more times alongside the opponent, stop, and watch the
/// opponent's next move for a disclosed success.
pub fn persist_then_stop(params: &ModelParams, p: f64, q: f64, omega: u32) -> f64 {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let w = pow1m(l, omega);
    (p * l * m - c) * (1.0 - d.powi(omega as i32))
        + d.powi(omega as i32)
            * p
            * g
            * ((1.0 - w) + d * w * (q + (1.0 - q) * (1.0 - w)))
}

/// `persist_then_stop` against a fresh opponent (q = 0).
pub fn persist_fresh(params: &ModelParams, p: f64, k: u32) -> f64 {
    persist_then_stop(params, p, 0.0, k)
}

/// Run of k experiments entered one period late: the whole of
/// `persist_then_stop` shifted by one own-move discount.
pub fn delayed_exchange(params: &ModelParams, p: f64, q: f64, k: u32) -> f64 {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let w = pow1m(l, k);
    d * ((p * l * m - c) * (1.0 - d.powi(k as i32))
        + d.powi(k as i32) * p * g * ((1.0 - w) + w * (1.0 - (1.0 - q) * w)))
}

// ---------------------------------------------------------------------------
// marginal-experiment values (roots are the cutoff ladders)

/// Value of one experiment when a success also buys the opponent's next
/// experiment; zero exactly at p_hat.
pub fn encouragement_value(params: &ModelParams, p: f64) -> f64 {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    (1.0 - d) * (p * l * m - c) + d * p * (l + d * (1.0 - l) * l) * g
}

/// Same thought after n undisclosed opponent experiments; zero at p_hat_n.
pub fn encouragement_value_n(params: &ModelParams, p: f64, n: u32) -> f64 {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let w = 1.0 - l;
    (1.0 - d) * (p * l * m - c)
        + p * g * d * (-(1.0 - d) * w + (1.0 - d * w * w) * pow1m(l, n))
}

/// Value of one experiment whose only continuation benefit is a disclosure
/// after the opponent's n-th further experiment; zero at p_star_n (and at
/// p_star for n = 0).
pub fn probe_value_n(params: &ModelParams, p: f64, n: u32) -> f64 {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    (1.0 - d) * (p * l * m - c) + d * l * pow1m(l, n) * p * g
}

/// Optimal payoff of a player alone with the bandit at belief p: experiment
/// until the belief crosses p_star, then stop. Also the best response
/// against an opponent whose actions carry no information, since payoffs
/// only ever flow from one's own arm.
pub fn solo_plan_value(params: &ModelParams, p: f64) -> f64 {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let cut = crate::cutoffs::cutoff_p_star(params, d);
    let k = crate::belief::failures_to_cross(p, cut, params);
    let dk = d.powi(k as i32);
    (1.0 - dk) * (p * l * m - c) + dk * p * (1.0 - pow1m(l, k)) * g
}

// ---------------------------------------------------------------------------
// exchange comparisons (used when reasoning about who stops first)

/// The three continuation values compared when a player decides whether to
/// keep a k-run going, stretch it, or let the opponent lead.
#[derive(Clone, Copy, Debug)]
pub struct ExchangeValues {
    /// follow the k-run as prescribed, then stop and watch
    pub stay_course: f64,
    /// add one extra own experiment at the end of the run
    pub extend_run: f64,
    /// enter the same k-run one period later
    pub delay: f64,
}

/// u is the number of undisclosed opponent experiments already made, so the
/// opponent is successful with probability 1-(1-lambda)^u given G.
pub fn exchange_values(params: &ModelParams, p: f64, u: u32, k: u32) -> ExchangeValues {
    let q = 1.0 - pow1m(params.lambda, u);
    ExchangeValues {
        stay_course: persist_then_stop(params, p, q, k),
        extend_run: persist_both(params, p, q, k),
        delay: delayed_exchange(params, p, q, k),
    }
}

/// Belief-threshold forms of the three comparisons. The first is only a
/// sufficient condition for `stay_course >= delay`; the other two are exact.
#[derive(Clone, Copy, Debug)]
pub struct ExchangeCriteria {
    pub now_beats_delay: bool,
    pub run_worth_last_step: bool,
    pub extra_round_pays: bool,
}

pub fn exchange_criteria(params: &ModelParams, p: f64, u: u32, k: u32) -> ExchangeCriteria {
    use crate::cutoffs::{cutoff_p_hat_n, cutoff_p_star, cutoff_p_star_n};
    debug_assert!(k >= 1, "exchange criteria compare runs of at least one experiment");
    let pk1 = phi_iterate(p, k.saturating_sub(1), params);
    let pk = phi_iterate(p, k, params);
    ExchangeCriteria {
        now_beats_delay: pk1 >= cutoff_p_star(params, params.delta),
        run_worth_last_step: pk1 >= cutoff_p_hat_n(params, u + k - 1),
        extra_round_pays: pk >= cutoff_p_star_n(params, u + k),
    }
}

// ---------------------------------------------------------------------------
// overshoot-profile conformity values

/// Continuation values under the overshoot profile once both players have
/// made N* failed experiments and n overshoot rounds remain. `mover` is for
/// the player about to move (his disclosure benefit arrives one own period
/// later), `second` for the other player.
#[derive(Clone, Copy, Debug)]
pub struct ConformValues {
    pub mover: f64,
    pub second: f64,
}

pub fn sigma_n_conform(params: &ModelParams, n: u32) -> ConformValues {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let p_star = crate::cutoffs::cutoff_p_star(params, d);
    let n_star = failures_to_cross(params.p0, p_star, params);
    let pb = phi_iterate(params.p0, n_star, params);
    let wn = pow1m(l, n);
    let wtot = pow1m(l, n + n_star);
    let head = (1.0 - d.powi(n as i32)) * (pb * l * m - c);
    let dn = d.powi(n as i32);
    ConformValues {
        mover: head + dn * g * pb * ((1.0 - wn) + wn * (1.0 - wtot) * d),
        second: head + dn * g * pb * ((1.0 - wn) + wn * (1.0 - wtot)),
    }
}

// ---------------------------------------------------------------------------
// scenario evaluator: fixed prescribed runs, trailing S forever

/// A scenario fixes both players' prescribed actions (S after the list runs
/// out). The point-of-view player follows the prescription until either he
/// succeeds or the opponent reveals a success by experimenting at a slot
/// where S was prescribed; then he experiments forever. The opponent
/// follows the prescription until successful, then experiments forever.
#[derive(Clone, Debug)]
pub struct ScenarioSpec {
    pub pov_first: bool,
    pub pov: Vec<Action>,
    pub opp: Vec<Action>,
    /// belief that the arm is good at scenario start
    pub p: f64,
    /// probability (given G) that the opponent is already successful
    pub q: f64,
}

pub fn scenario_value(params: &ModelParams, spec: &ScenarioSpec) -> f64 {
    let ctx = ScenarioCtx {
        params,
        spec,
        pov_parity: if spec.pov_first { 0 } else { 1 },
        last_r_pov: last_r_time(&spec.pov, if spec.pov_first { 0 } else { 1 }),
        last_r_opp: last_r_time(&spec.opp, if spec.pov_first { 1 } else { 0 }),
    };
    spec.p * (spec.q * ctx.vg(0, true) + (1.0 - spec.q) * ctx.vg(0, false))
        + (1.0 - spec.p) * ctx.vb(0)
}

fn last_r_time(list: &[Action], parity: usize) -> i64 {
    list.iter()
        .enumerate()
        .filter(|(_, a)| **a == Action::R)
        .map(|(i, _)| (parity + 2 * i) as i64)
        .max()
        .unwrap_or(-1)
}

struct ScenarioCtx<'a> {
    params: &'a ModelParams,
    spec: &'a ScenarioSpec,
    pov_parity: usize,
    last_r_pov: i64,
    last_r_opp: i64,
}

impl ScenarioCtx<'_> {
    fn prescribed(list: &[Action], t: usize) -> Action {
        list.get(t / 2).copied().unwrap_or(Action::S)
    }

    /// Point-of-view value given theta = G; os flags a hidden opponent success.
    fn vg(&self, t: usize, os: bool) -> f64 {
        let (l, d, c, m, g) =
            (self.params.lambda, self.params.delta, self.params.c, self.params.m, self.params.g());
        if !os && t as i64 > self.last_r_pov && t as i64 > self.last_r_opp {
            return 0.0;
        }
        if t % 2 == self.pov_parity {
            match Self::prescribed(&self.spec.pov, t) {
                Action::R => {
                    (1.0 - d) * (l * m - c) + d * (l * g + (1.0 - l) * self.vg(t + 1, os))
                }
                Action::S => d * self.vg(t + 1, os),
            }
        } else {
            let b = Self::prescribed(&self.spec.opp, t);
            if os {
                // a successful opponent experiments regardless; it shows
                // only where S was prescribed
                match b {
                    Action::S => g,
                    Action::R => self.vg(t + 1, true),
                }
            } else {
                match b {
                    Action::R => l * self.vg(t + 1, true) + (1.0 - l) * self.vg(t + 1, false),
                    Action::S => self.vg(t + 1, false),
                }
            }
        }
    }

    /// Point-of-view value given theta = B: only own experiment costs.
    fn vb(&self, t: usize) -> f64 {
        let (d, c) = (self.params.delta, self.params.c);
        if t as i64 > self.last_r_pov {
            return 0.0;
        }
        if t % 2 == self.pov_parity {
            match Self::prescribed(&self.spec.pov, t) {
                Action::R => (1.0 - d) * (-c) + d * self.vb(t + 1),
                Action::S => d * self.vb(t + 1),
            }
        } else {
            self.vb(t + 1)
        }
    }
}

/// Value of opening with r waiting moves while the opponent runs down his
/// N* experiments, then finishing one's own N* - r; used to locate the
/// follower's best joining time.
pub fn delay_value(params: &ModelParams, n_star: u32, r: u32) -> f64 {
    let mut pov = vec![Action::S; r as usize];
    pov.extend(std::iter::repeat(Action::R).take((n_star - r) as usize));
    let spec = ScenarioSpec {
        pov_first: false,
        pov,
        opp: vec![Action::R; n_star as usize],
        p: params.p0,
        q: 0.0,
    };
    scenario_value(params, &spec)
}

// ---------------------------------------------------------------------------
// profile evaluator

pub const STATE_B: u8 = 0;
pub const STATE_G_NONE: u8 = 1;
pub const STATE_G_P1: u8 = 2;
pub const STATE_G_P2: u8 = 3;
pub const STATE_G_BOTH: u8 = 4;

fn succeeded(s: u8, pl: Player) -> bool {
    match pl {
        Player::P1 => s == STATE_G_P1 || s == STATE_G_BOTH,
        Player::P2 => s == STATE_G_P2 || s == STATE_G_BOTH,
    }
}

fn with_success(s: u8, pl: Player) -> u8 {
    match (s, pl) {
        (STATE_G_NONE, Player::P1) => STATE_G_P1,
        (STATE_G_NONE, Player::P2) => STATE_G_P2,
        (STATE_G_P2, Player::P1) | (STATE_G_P1, Player::P2) => STATE_G_BOTH,
        _ => s,
    }
}

/// Depth at which tails are classified; beyond it the evaluator keeps
/// unrolling until `TAIL_CAP`, then reports the history it cannot classify.
pub const TAIL_CAP: usize = 400;
const PROBE: usize = 16;

pub fn default_horizon(params: &ModelParams) -> usize {
    let counts = crate::cutoffs::experiment_counts(params);
    (2 * (counts.n_tilde + counts.n_star + 4) as usize).min(TAIL_CAP)
}

pub struct Evaluator<'a> {
    profile: &'a Profile,
    relax: bool,
    horizon: usize,
    memo: RefCell<HashMap<(PublicHistory, u8), [f64; 2]>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(profile: &'a Profile, horizon: usize) -> Self {
        Evaluator { profile, relax: false, horizon, memo: RefCell::new(HashMap::new()) }
    }

    /// Successful players follow the profile instead of being forced to R;
    /// lets dominated prescriptions be priced.
    pub fn relaxed(profile: &'a Profile, horizon: usize) -> Self {
        Evaluator { profile, relax: true, horizon, memo: RefCell::new(HashMap::new()) }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Both players' continuation values at h in payoff state s.
    pub fn state_values(&self, h: &PublicHistory, s: u8) -> Result<[f64; 2], EvalError> {
        if let Some(v) = self.memo.borrow().get(&(*h, s)) {
            return Ok(*v);
        }
        let v = self.compute(h, s)?;
        self.memo.borrow_mut().insert((*h, s), v);
        Ok(v)
    }

    fn compute(&self, h: &PublicHistory, s: u8) -> Result<[f64; 2], EvalError> {
        if h.len() >= self.horizon {
            if let Some(v) = self.tail(h, s)? {
                return Ok(v);
            }
            if h.len() >= TAIL_CAP {
                return Err(EvalError::UnclassifiableTail {
                    history: h.render(),
                    depth: h.len(),
                });
            }
        }
        let active = h.active_player();
        let r_eff = if succeeded(s, active) && !self.relax {
            1.0
        } else {
            self.profile.prob_r(h)
        };
        let mut out = [0.0; 2];
        if r_eff > 0.0 {
            let vr = self.r_branch(h, s, active)?;
            out[0] += r_eff * vr[0];
            out[1] += r_eff * vr[1];
        }
        if r_eff < 1.0 {
            let vs = self.s_branch(h, s, active)?;
            out[0] += (1.0 - r_eff) * vs[0];
            out[1] += (1.0 - r_eff) * vs[1];
        }
        Ok(out)
    }

    fn extend(&self, h: &PublicHistory, a: Action) -> Result<PublicHistory, EvalError> {
        h.extend(a).map_err(|_| EvalError::Capacity { history: h.render() })
    }

    fn r_branch(&self, h: &PublicHistory, s: u8, active: Player) -> Result<[f64; 2], EvalError> {
        let (l, d, c, g) = (self.params().lambda, self.params().delta, self.params().c, self.params().g());
        let child = self.extend(h, Action::R)?;
        let ai = active.index();
        let oi = active.other().index();
        let mut out = [0.0; 2];
        if s == STATE_B {
            let cv = self.state_values(&child, s)?;
            out[ai] = (1.0 - d) * (-c) + d * cv[ai];
            out[oi] = cv[oi];
        } else if succeeded(s, active) {
            let cv = self.state_values(&child, s)?;
            out[ai] = (1.0 - d) * g + d * cv[ai];
            out[oi] = cv[oi];
        } else {
            let up = with_success(s, active);
            let cs = self.state_values(&child, up)?;
            let cf = self.state_values(&child, s)?;
            out[ai] = (1.0 - d) * g + d * (l * cs[ai] + (1.0 - l) * cf[ai]);
            out[oi] = l * cs[oi] + (1.0 - l) * cf[oi];
        }
        Ok(out)
    }

    fn s_branch(&self, h: &PublicHistory, s: u8, active: Player) -> Result<[f64; 2], EvalError> {
        let d = self.params().delta;
        let child = self.extend(h, Action::S)?;
        let cv = self.state_values(&child, s)?;
        let ai = active.index();
        let oi = active.other().index();
        let mut out = [0.0; 2];
        out[ai] = d * cv[ai];
        out[oi] = cv[oi];
        Ok(out)
    }

    /// Constant-action tail: if both players' prescriptions are pure and
    /// constant over the next PROBE moves, value the infinite repetition.
    fn tail(&self, h: &PublicHistory, s: u8) -> Result<Option<[f64; 2]>, EvalError> {
        let (c, g) = (self.params().c, self.params().g());
        let mut cur = *h;
        let mut acts: [Option<Action>; 2] = [None; 2];
        for _ in 0..PROBE {
            let ap = cur.active_player();
            let a = if succeeded(s, ap) && !self.relax {
                Action::R
            } else {
                let r = self.profile.prob_r(&cur);
                if r == 1.0 {
                    Action::R
                } else if r == 0.0 {
                    Action::S
                } else {
                    return Ok(None);
                }
            };
            match acts[ap.index()] {
                None => acts[ap.index()] = Some(a),
                Some(prev) if prev != a => return Ok(None),
                _ => {}
            }
            cur = self.extend(&cur, a)?;
        }
        let mut v = [0.0; 2];
        for (x, slot) in acts.iter().enumerate() {
            v[x] = match slot.expect("both players move within the probe") {
                Action::S => 0.0,
                Action::R => {
                    if s == STATE_B {
                        -c
                    } else {
                        g
                    }
                }
            };
        }
        Ok(Some(v))
    }

    fn params(&self) -> &ModelParams {
        &self.profile.params
    }

    /// Expected continuation value to `player` at h, mixing the payoff
    /// states with that player's own beliefs, conditional on that player
    /// never having succeeded.
    pub fn subjective_value_for(&self, h: &PublicHistory, player: Player) -> Result<f64, EvalError> {
        let nb = self.profile.beliefs(h);
        let pb = nb.of(player);
        let p = pb.p(self.params());
        let kappa = pb.kappa;
        let opp_state = match player {
            Player::P1 => STATE_G_P2,
            Player::P2 => STATE_G_P1,
        };
        let i = player.index();
        let mut v = 0.0;
        if 1.0 - p != 0.0 {
            v += (1.0 - p) * self.state_values(h, STATE_B)?[i];
        }
        if p * (1.0 - kappa) != 0.0 {
            v += p * (1.0 - kappa) * self.state_values(h, STATE_G_NONE)?[i];
        }
        if p * kappa != 0.0 {
            v += p * kappa * self.state_values(h, opp_state)?[i];
        }
        Ok(v)
    }

    /// Subjective continuation value of the active player.
    pub fn subjective_value(&self, h: &PublicHistory) -> Result<f64, EvalError> {
        self.subjective_value_for(h, h.active_player())
    }

    /// Value to the (never-successful) active player of playing `a` now and
    /// following the profile afterwards.
    pub fn forced_action_value(&self, h: &PublicHistory, a: Action) -> Result<f64, EvalError> {
        let active = h.active_player();
        let nb = self.profile.beliefs(h);
        let pb = nb.of(active);
        let p = pb.p(self.params());
        let kappa = pb.kappa;
        let opp_state = match active {
            Player::P1 => STATE_G_P2,
            Player::P2 => STATE_G_P1,
        };
        let i = active.index();
        let branch = |s: u8| -> Result<f64, EvalError> {
            Ok(match a {
                Action::R => self.r_branch(h, s, active)?[i],
                Action::S => self.s_branch(h, s, active)?[i],
            })
        };
        let mut v = 0.0;
        if 1.0 - p != 0.0 {
            v += (1.0 - p) * branch(STATE_B)?;
        }
        if p * (1.0 - kappa) != 0.0 {
            v += p * (1.0 - kappa) * branch(STATE_G_NONE)?;
        }
        if p * kappa != 0.0 {
            v += p * kappa * branch(opp_state)?;
        }
        Ok(v)
    }

    /// Ex-ante equilibrium payoff of `player` (empty history, prior belief).
    pub fn root_value(&self, player: Player) -> Result<f64, EvalError> {
        self.subjective_value_for(&PublicHistory::empty(), player)
    }
}

// ---------------------------------------------------------------------------
// experiment-count distribution on the no-success tree

/// Distribution of the total number of experiments when the arm is bad (so
/// no success ever interferes), as (count, probability) pairs.
pub fn ne_distribution_given_b(
    profile: &Profile,
    max_depth: usize,
) -> Result<Vec<(u32, f64)>, EvalError> {
    let mut acc: BTreeMap<u32, f64> = BTreeMap::new();
    walk_b(profile, &PublicHistory::empty(), 1.0, max_depth, &mut acc)?;
    Ok(acc.into_iter().collect())
}

fn walk_b(
    profile: &Profile,
    h: &PublicHistory,
    pr: f64,
    max_depth: usize,
    acc: &mut BTreeMap<u32, f64>,
) -> Result<(), EvalError> {
    if pr < 1e-15 {
        return Ok(());
    }
    if settled_all_s(profile, h)? {
        *acc.entry(h.n_e()).or_insert(0.0) += pr;
        return Ok(());
    }
    if h.len() >= max_depth {
        return Err(EvalError::Unsettled { history: h.render(), depth: h.len() });
    }
    let r = profile.prob_r(h);
    if r > 0.0 {
        let child = h.extend(Action::R).map_err(|_| EvalError::Capacity { history: h.render() })?;
        walk_b(profile, &child, pr * r, max_depth, acc)?;
    }
    if r < 1.0 {
        let child = h.extend(Action::S).map_err(|_| EvalError::Capacity { history: h.render() })?;
        walk_b(profile, &child, pr * (1.0 - r), max_depth, acc)?;
    }
    Ok(())
}

fn settled_all_s(profile: &Profile, h: &PublicHistory) -> Result<bool, EvalError> {
    let mut cur = *h;
    for _ in 0..PROBE {
        if profile.prob_r(&cur) != 0.0 {
            return Ok(false);
        }
        cur = cur.extend(Action::S).map_err(|_| EvalError::Capacity { history: cur.render() })?;
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// one-player value iteration oracle

/// Numerical one-player solution on a belief grid; `p_switch` brackets the
/// optimal switching belief to one grid cell.
pub struct OnePlayerSolution {
    pub effective_delta: f64,
    pub grid_step: f64,
    pub values: Vec<f64>,
    pub iterations: u32,
    /// last grid index with value zero
    pub last_zero: usize,
    /// first grid index with positive value
    pub first_positive: usize,
}

impl OnePlayerSolution {
    pub fn p_switch(&self) -> f64 {
        self.first_positive as f64 * self.grid_step
    }
}

/// Value-iterates V(p) = max(0, (1-d')(p lm - c) + d'(p l g + (1-p l) V(phi(p))))
/// to sup-norm `tol::VALUE_ITER`, with linear interpolation of phi(p) on the
/// grid. `effective_delta` is delta for the single player and sqrt(delta)
/// for the planner's half-period clock.
pub fn solve_one_player(params: &ModelParams, effective_delta: f64) -> OnePlayerSolution {
    let (l, c, m, g) = (params.lambda, params.c, params.m, params.g());
    let d = effective_delta;
    let step = tol::VI_GRID_STEP;
    let p_myop = c / (l * m);
    let hi = (p_myop + 0.05).min(1.0 - step);
    let n = (hi / step).ceil() as usize + 1;
    // phi(p) interpolation tables
    let mut idx = vec![0usize; n];
    let mut frac = vec![0f64; n];
    for i in 0..n {
        let p = i as f64 * step;
        let fp = crate::belief::phi(p, params);
        let j = ((fp / step).floor() as usize).min(n - 2);
        idx[i] = j;
        frac[i] = (fp - j as f64 * step) / step;
    }
    let mut v = vec![0f64; n];
    let mut nv = vec![0f64; n];
    let scale = c + g.abs() + m;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut diff = 0f64;
        for i in 0..n {
            let p = i as f64 * step;
            let cont = v[idx[i]] * (1.0 - frac[i]) + v[idx[i] + 1] * frac[i];
            let r = (1.0 - d) * (p * l * m - c) + d * (p * l * g + (1.0 - p * l) * cont);
            nv[i] = r.max(0.0);
            diff = diff.max((nv[i] - v[i]).abs());
        }
        std::mem::swap(&mut v, &mut nv);
        if diff < tol::VALUE_ITER * scale || iterations > 10_000 {
            break;
        }
    }
    let mut first_positive = n - 1;
    let mut last_zero = 0;
    let thresh = 1e-13 * scale;
    for i in 0..n {
        if v[i] > thresh {
            first_positive = i;
            break;
        }
        last_zero = i;
    }
    OnePlayerSolution {
        effective_delta: d,
        grid_step: step,
        values: v,
        iterations,
        last_zero,
        first_positive,
    }
}

// ---------------------------------------------------------------------------
// payoff-dependent profile constructors

/// Builds the mixed behavioral profile: alpha from its closed form, beta by
/// bisecting the opening player's indifference at the history RS.
pub fn make_mixed_example(params: &ModelParams) -> Result<Profile, ProfileError> {
    mixed_hypotheses(params).map_err(ProfileError::HypothesisViolated)?;
    let alpha = mixed_alpha(params);
    let rs = PublicHistory::parse("RS").expect("static");
    let residual = |beta: f64| -> Result<f64, ProfileError> {
        let prof = mixed_with(params, alpha, beta);
        let ev = Evaluator::new(&prof, 40);
        ev.forced_action_value(&rs, Action::R).map_err(|e| ProfileError::Eval(e.to_string()))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let f_lo = residual(lo)?;
    let f_hi = residual(hi)?;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(ProfileError::RootNotBracketed(format!(
            "indifference residual at beta=0 is {f_lo:.3e}, at beta=1 is {f_hi:.3e}"
        )));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if residual(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let beta = 0.5 * (lo + hi);
    Ok(mixed_with(params, alpha, beta))
}

/// Builds the leader/follower profile: the follower's joining time r0
/// maximizes the delay values; the opening-deviation case is decided by the
/// two equilibrium payoffs.
pub fn make_leader_follower(params: &ModelParams) -> Result<Profile, ProfileError> {
    let p_star = crate::cutoffs::cutoff_p_star(params, params.delta);
    if params.p0 < p_star {
        return Err(ProfileError::PriorTooLow { p0: params.p0, p_star });
    }
    let n_star = failures_to_cross(params.p0, p_star, params);
    let gamma_r: Vec<f64> = (0..=n_star).map(|r| delay_value(params, n_star, r)).collect();
    let mut r0 = 0u32;
    for (r, v) in gamma_r.iter().enumerate() {
        if *v > gamma_r[r0 as usize] {
            r0 = r as u32;
        }
    }
    let probe = leader_follower_with(params, gamma_r.clone(), false, ProfileMeta::None);
    let horizon = (2 * n_star as usize + 12).min(TAIL_CAP);
    let ev = Evaluator::new(&probe, horizon);
    let g1 = ev.root_value(Player::P1).map_err(|e| ProfileError::Eval(e.to_string()))?;
    let g2 = ev.root_value(Player::P2).map_err(|e| ProfileError::Eval(e.to_string()))?;
    let switch_roles = g1 >= params.delta * g2;
    let meta = ProfileMeta::LeaderFollower { r0, gamma_r: gamma_r.clone(), gamma1: g1, gamma2: g2, switch_roles };
    Ok(leader_follower_with(params, gamma_r, switch_roles, meta))
}

// ---------------------------------------------------------------------------

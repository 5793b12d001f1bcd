//! The public-outcomes benchmark game.
//!
//! Here successes are commonly observed, so beliefs are a function of the
//! public failure count alone and a success turns the continuation into
//! mutual experimentation worth g to each player. The symmetric Markov
//! equilibrium mixes on the belief ladder above p_star; it is pinned down
//! by the mover's indifference between stopping (one period of delay) and
//! experimenting.

use crate::belief::{failures_to_cross, phi_iterate};
use crate::cutoffs::cutoff_p_star;
use crate::history::{Action, Player, PublicHistory};
use crate::params::ModelParams;
use crate::payoffs::EvalError;
use crate::profiles::{public_markov_with, Profile};
use std::cell::RefCell;
use std::collections::HashMap;

/// Mover (`gamma1`) and waiting-player (`gamma2`) values on the belief
/// ladder p_k = phi^k(p0), together with the mixing probabilities f.
#[derive(Clone, Debug)]
pub struct PublicSolution {
    pub n_star: u32,
    /// p_k for k = 0..=n_star
    pub ladder: Vec<f64>,
    /// mixing probability at rung k, for k = 0..n_star; zero from n_star on
    pub f: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub gamma2: Vec<f64>,
    /// rungs where the interior indifference solution exceeded 1 and the
    /// equilibrium is pure experimentation
    pub capped: Vec<bool>,
    /// worst |gamma1 - delta gamma2| over uncapped rungs above p_star
    pub max_residual: f64,
}

/// Backward induction on the ladder. At each rung above p_star the mover's
/// value comes from experimenting; the waiting player's mixing probability
/// is the unique root of the mover's indifference, in closed form since the
/// equations are linear in f. Rungs where the interior solution leaves
/// [0,1] get f = 1, and the indifference becomes the strict preference for
/// R that sustains pure experimentation.
pub fn solve_public(params: &ModelParams) -> PublicSolution {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let p_star = cutoff_p_star(params, d);
    let n_star = failures_to_cross(params.p0, p_star, params);
    let n = n_star as usize;
    let ladder: Vec<f64> = (0..=n as u32).map(|k| phi_iterate(params.p0, k, params)).collect();
    let mut f = vec![0.0; n];
    let mut gamma1 = vec![0.0; n + 1];
    let mut gamma2 = vec![0.0; n + 1];
    let mut capped = vec![false; n];
    let mut max_residual = 0.0f64;
    for k in (0..n).rev() {
        let p = ladder[k];
        let g1 = (1.0 - d) * (p * l * m - c) + d * (p * l * g + (1.0 - p * l) * gamma2[k + 1]);
        // value to the waiting player if the mover experiments for sure
        let x = p * l * g + (1.0 - p * l) * gamma1[k + 1];
        if g1 >= d * x {
            capped[k] = true;
            f[k] = 1.0;
            gamma2[k] = x;
        } else {
            f[k] = (1.0 - d) * g1 / (d * (x - g1));
            gamma2[k] = g1 / d;
            let check = f[k] * x + (1.0 - f[k]) * g1;
            max_residual = max_residual.max((g1 - d * check).abs());
        }
        gamma1[k] = g1;
    }
    PublicSolution { n_star, ladder, f, gamma1, gamma2, capped, max_residual }
}

/// The symmetric Markov profile of the public game as a catalog profile:
/// experiment with probability f[k] after k public failures.
pub fn make_public_markov(params: &ModelParams) -> (Profile, PublicSolution) {
    let sol = solve_public(params);
    (public_markov_with(params, sol.f.clone()), sol)
}

// ---------------------------------------------------------------------------
// exact evaluation of pure public profiles

const PUB_B: u8 = 0;
/// good arm, no public success yet
const PUB_G: u8 = 1;

const PROBE: usize = 16;
const TAIL_CAP: usize = 400;

/// Game-tree evaluator for the public game. A success is public: from then
/// on both players experiment forever and each continuation is worth g, so
/// only the no-success tree is walked. Intended for pure or nearly pure
/// profiles; the mixing Markov profile has its values on the ladder already.
pub struct PublicEvaluator<'a> {
    profile: &'a Profile,
    horizon: usize,
    memo: RefCell<HashMap<(PublicHistory, u8), [f64; 2]>>,
}

impl<'a> PublicEvaluator<'a> {
    pub fn new(profile: &'a Profile, horizon: usize) -> Self {
        PublicEvaluator { profile, horizon, memo: RefCell::new(HashMap::new()) }
    }

    fn params(&self) -> &ModelParams {
        &self.profile.params
    }

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
                return Err(EvalError::UnclassifiableTail { history: h.render(), depth: h.len() });
            }
        }
        let active = h.active_player();
        let r_eff = self.profile.prob_r(h);
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
        let cv = self.state_values(&child, s)?;
        if s == PUB_B {
            out[ai] = (1.0 - d) * (-c) + d * cv[ai];
            out[oi] = cv[oi];
        } else {
            // a success is seen by everyone and both experiment thereafter
            out[ai] = (1.0 - d) * g + d * (l * g + (1.0 - l) * cv[ai]);
            out[oi] = l * g + (1.0 - l) * cv[oi];
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

    fn tail(&self, h: &PublicHistory, s: u8) -> Result<Option<[f64; 2]>, EvalError> {
        let (l, d, c, g) = (self.params().lambda, self.params().delta, self.params().c, self.params().g());
        let mut cur = *h;
        let mut acts: [Option<Action>; 2] = [None; 2];
        for _ in 0..PROBE {
            let ap = cur.active_player();
            let r = self.profile.prob_r(&cur);
            let a = if r == 1.0 {
                Action::R
            } else if r == 0.0 {
                Action::S
            } else {
                return Ok(None);
            };
            match acts[ap.index()] {
                None => acts[ap.index()] = Some(a),
                Some(prev) if prev != a => return Ok(None),
                _ => {}
            }
            cur = self.extend(&cur, a)?;
        }
        let a1 = acts[0].expect("both players move within the probe");
        let a2 = acts[1].expect("both players move within the probe");
        let one = |own: Action, opp: Action| -> f64 {
            match (s, own, opp) {
                (PUB_B, Action::R, _) => -c,
                (PUB_B, Action::S, _) => 0.0,
                (_, Action::R, _) => g,
                // free-riding on the opponent's eventual public success
                (_, Action::S, Action::R) => d * l * g / (1.0 - d * (1.0 - l)),
                (_, Action::S, Action::S) => 0.0,
            }
        };
        Ok(Some([one(a1, a2), one(a2, a1)]))
    }

    /// Common-belief expected continuation value for `player`.
    pub fn subjective_value_for(&self, h: &PublicHistory, player: Player) -> Result<f64, EvalError> {
        let p = phi_iterate(self.params().p0, h.n_e(), self.params());
        let i = player.index();
        Ok((1.0 - p) * self.state_values(h, PUB_B)?[i] + p * self.state_values(h, PUB_G)?[i])
    }

    pub fn subjective_value(&self, h: &PublicHistory) -> Result<f64, EvalError> {
        self.subjective_value_for(h, h.active_player())
    }

    /// Value to the active player of playing `a` now, then conforming.
    pub fn forced_action_value(&self, h: &PublicHistory, a: Action) -> Result<f64, EvalError> {
        let p = phi_iterate(self.params().p0, h.n_e(), self.params());
        let active = h.active_player();
        let i = active.index();
        let one = |s: u8| -> Result<f64, EvalError> {
            Ok(match a {
                Action::R => self.r_branch(h, s, active)?[i],
                Action::S => self.s_branch(h, s, active)?[i],
            })
        };
        Ok((1.0 - p) * one(PUB_B)? + p * one(PUB_G)?)
    }

    pub fn root_value(&self, player: Player) -> Result<f64, EvalError> {
        self.subjective_value_for(&PublicHistory::empty(), player)
    }
}

// ---------------------------------------------------------------------------

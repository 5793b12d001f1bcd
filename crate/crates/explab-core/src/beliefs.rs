//! Belief systems over public histories.
//!
//! Tracks, for each history and each observer, the observer's probability
//! that the state is good (assuming the observer himself was never
//! successful) together with `kappa`, the probability conditional on the
//! good state that the opponent has already been successful. Two update
//! conventions are supported:
//!
//! - `Reasonable`: Bayes wherever the observed action has positive
//!   probability, plus the two off-path rules that make the system unique:
//!   an opponent's S always resets the belief to the ladder point
//!   phi^{n_e(h)}(p0), and an impossible R either convinces the observer
//!   (kappa > 0) or is charged to a vanishing tremble of the
//!   never-successful opponent (kappa = 0), leaving the belief unchanged.
//! - `Conviction`: the blunter four-case system used by the
//!   leader/follower construction, where any off-profile action by a player
//!   with at least one past experiment is attributed to success.
//!
//! Beliefs are stored symbolically: `One` (certainty) and ladder indices
//! stay exact; a floating likelihood ratio appears only under behavioral
//! profiles with interior mixing.

use crate::belief::{lr, p_of_lr, phi_iterate, pow1m};
use crate::history::{Action, Player, PublicHistory};
use crate::params::ModelParams;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::RwLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BeliefMode {
    Reasonable,
    Conviction,
}

/// Symbolic belief value of a (never-successful) observer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BVal {
    /// Probability one: convinced the state is good.
    One,
    /// Exactly phi^n(p0).
    Ladder(u32),
    /// Arbitrary likelihood ratio; only reachable under interior mixing.
    Lr(f64),
}

impl BVal {
    pub fn value(&self, params: &ModelParams) -> f64 {
        match *self {
            BVal::One => 1.0,
            BVal::Ladder(n) => phi_iterate(params.p0, n, params),
            BVal::Lr(f) => {
                if f.is_finite() {
                    p_of_lr(f)
                } else {
                    1.0
                }
            }
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, BVal::One)
    }

    fn ratio(&self, params: &ModelParams) -> f64 {
        match *self {
            BVal::One => f64::INFINITY,
            BVal::Ladder(n) => lr(params.p0) * pow1m(params.lambda, n),
            BVal::Lr(f) => f,
        }
    }

    /// Update after one failed experiment of the observer's own.
    fn own_failure(&self, params: &ModelParams) -> BVal {
        match *self {
            BVal::One => BVal::One,
            BVal::Ladder(n) => BVal::Ladder(n + 1),
            BVal::Lr(f) => BVal::Lr(f * (1.0 - params.lambda)),
        }
    }

    /// Multiplies the likelihood ratio; factor 1 preserves the symbolic
    /// representation bit for bit, which keeps pure profiles on the ladder.
    fn scaled(&self, factor: f64, params: &ModelParams) -> BVal {
        if factor == 1.0 || self.is_one() {
            *self
        } else {
            BVal::Lr(self.ratio(params) * factor)
        }
    }
}

/// One observer's state at one history.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlayerBelief {
    pub val: BVal,
    /// P(opponent already successful | good state, observer's information).
    pub kappa: f64,
}

impl PlayerBelief {
    pub fn p(&self, params: &ModelParams) -> f64 {
        self.val.value(params)
    }
}

/// How an entry was produced, for dump output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Observed action had positive probability; plain Bayes.
    BayesOnPath,
    /// An off-path convention was applied (ladder reset or tremble).
    ReasonableRule,
    /// A zero-probability action was attributed to opponent success.
    SuccessConviction,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::BayesOnPath => "bayes-on-path",
            Provenance::ReasonableRule => "reasonable-rule",
            Provenance::SuccessConviction => "success-conviction",
        }
    }
}

/// Joint belief state: both observers at one history.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeBeliefs {
    pub obs: [PlayerBelief; 2],
    pub prov: [Provenance; 2],
}

impl NodeBeliefs {
    pub fn of(&self, pl: Player) -> &PlayerBelief {
        &self.obs[pl.index()]
    }

    pub fn p(&self, pl: Player, params: &ModelParams) -> f64 {
        self.obs[pl.index()].p(params)
    }

    pub fn q(&self, pl: Player) -> f64 {
        self.obs[pl.index()].kappa
    }

    fn root() -> NodeBeliefs {
        let pb = PlayerBelief { val: BVal::Ladder(0), kappa: 0.0 };
        NodeBeliefs { obs: [pb; 2], prov: [Provenance::BayesOnPath; 2] }
    }
}

/// Probability that the never-successful active player chooses R at h.
/// Implemented by strategy profiles; closures work for ad-hoc profiles.
pub trait ProbR {
    fn prob_r(&self, h: &PublicHistory) -> f64;
}

impl<F: Fn(&PublicHistory) -> f64> ProbR for F {
    fn prob_r(&self, h: &PublicHistory) -> f64 {
        self(h)
    }
}

/// Memoized belief computation for a single profile. The cache is keyed by
/// history only, so an engine must never be shared between different
/// profiles. Interior locking keeps `&self` usable from worker threads.
#[derive(Debug)]
pub struct BeliefEngine {
    params: ModelParams,
    mode: BeliefMode,
    memo: RwLock<HashMap<PublicHistory, NodeBeliefs>>,
}

impl BeliefEngine {
    pub fn new(params: ModelParams, mode: BeliefMode) -> Self {
        BeliefEngine { params, mode, memo: RwLock::new(HashMap::new()) }
    }

    pub fn mode(&self) -> BeliefMode {
        self.mode
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn clear(&self) {
        self.memo.write().unwrap().clear();
    }

    /// Beliefs of both observers at h under the profile `sigma`.
    /// Recursion only ever consults `sigma` at strictly shorter histories,
    /// so profiles whose action rule reads these beliefs stay well-founded.
    pub fn node(&self, h: &PublicHistory, sigma: &dyn ProbR) -> NodeBeliefs {
        if let Some(v) = self.memo.read().unwrap().get(h) {
            return *v;
        }
        let nb = match h.parent() {
            None => NodeBeliefs::root(),
            Some((parent, a)) => {
                let pn = self.node(&parent, sigma);
                let sigma_r = sigma.prob_r(&parent);
                debug_assert!((0.0..=1.0).contains(&sigma_r), "prob_r out of range: {sigma_r}");
                self.step(&parent, &pn, a, sigma_r)
            }
        };
        self.memo.write().unwrap().insert(*h, nb);
        nb
    }

    /// One-step update of both observers given the mover's action.
    fn step(&self, parent: &PublicHistory, pn: &NodeBeliefs, a: Action, sigma_r: f64) -> NodeBeliefs {
        let mover = parent.active_player();
        let watcher = mover.other();
        let mut out = *pn;

        // mover's own update: R is one more failed experiment, S is nothing
        let me = &mut out.obs[mover.index()];
        if a == Action::R {
            me.val = me.val.own_failure(&self.params);
        }

        // watcher's update about the mover
        let (pb, prov) = match self.mode {
            BeliefMode::Reasonable => {
                self.reasonable(pn.of(watcher), a, sigma_r, parent.n_e())
            }
            BeliefMode::Conviction => self.conviction(
                pn.of(watcher),
                pn.of(mover),
                a,
                sigma_r,
                parent.n_e_i(mover),
            ),
        };
        out.obs[watcher.index()] = pb;
        out.prov[watcher.index()] = prov;
        out
    }

    fn reasonable(
        &self,
        w: &PlayerBelief,
        a: Action,
        sigma_r: f64,
        n_e_parent: u32,
    ) -> (PlayerBelief, Provenance) {
        let l = self.params.lambda;
        match a {
            Action::S => {
                // S reveals a never-successful opponent; the belief drops to
                // the ladder point counting every experiment so far. This is
                // plain Bayes whenever S had positive probability and the
                // defining off-path rule otherwise.
                let prov = if sigma_r < 1.0 {
                    Provenance::BayesOnPath
                } else {
                    Provenance::ReasonableRule
                };
                (PlayerBelief { val: BVal::Ladder(n_e_parent), kappa: 0.0 }, prov)
            }
            Action::R if sigma_r > 0.0 => {
                // R pools the successful opponent with a never-successful one
                // experimenting with probability sigma_r
                let k = w.kappa;
                let pool = k + (1.0 - k) * sigma_r;
                let val = w.val.scaled(pool / sigma_r, &self.params);
                let kappa = (k + l * (1.0 - k) * sigma_r) / pool;
                (PlayerBelief { val, kappa }, Provenance::BayesOnPath)
            }
            Action::R => {
                if w.kappa > 0.0 {
                    // only a successful opponent can play this R
                    (PlayerBelief { val: BVal::One, kappa: 1.0 }, Provenance::SuccessConviction)
                } else {
                    // observer is certain the opponent never succeeded, so the
                    // R is charged to a tremble of the never-successful type:
                    // uninformative about the state, but it is an experiment
                    (PlayerBelief { val: w.val, kappa: l }, Provenance::ReasonableRule)
                }
            }
        }
    }

    fn conviction(
        &self,
        w: &PlayerBelief,
        mover_state: &PlayerBelief,
        a: Action,
        sigma_r: f64,
        n_e_mover: u32,
    ) -> (PlayerBelief, Provenance) {
        let l = self.params.lambda;
        let mech_kappa = |k: f64| match a {
            Action::R => k + l * (1.0 - k),
            Action::S => 0.0,
        };
        // Case 1: a convinced observer never retracts
        if w.val.is_one() {
            let kappa = mech_kappa(w.kappa);
            return (PlayerBelief { val: BVal::One, kappa }, Provenance::BayesOnPath);
        }
        // Case 2: a convinced mover's choice carries no news about the state
        if mover_state.val.is_one() {
            let kappa = match a {
                Action::R => w.kappa + l * (1.0 - w.kappa),
                Action::S => w.kappa,
            };
            return (PlayerBelief { val: w.val, kappa }, Provenance::BayesOnPath);
        }
        let in_support = match a {
            Action::R => sigma_r > 0.0,
            Action::S => sigma_r < 1.0,
        };
        if in_support {
            // Case 3: Bayes, identical to the reasonable on-path update but
            // without any ladder reset: S keeps the ratio scaled by 1-kappa
            let k = w.kappa;
            match a {
                Action::S => (
                    PlayerBelief { val: w.val.scaled(1.0 - k, &self.params), kappa: 0.0 },
                    Provenance::BayesOnPath,
                ),
                Action::R => {
                    let pool = k + (1.0 - k) * sigma_r;
                    (
                        PlayerBelief {
                            val: w.val.scaled(pool / sigma_r, &self.params),
                            kappa: (k + l * (1.0 - k) * sigma_r) / pool,
                        },
                        Provenance::BayesOnPath,
                    )
                }
            }
        } else if n_e_mover >= 1 {
            // Case 4a: any deviation by a player with past experiments is
            // read as proof of success
            (PlayerBelief { val: BVal::One, kappa: 1.0 }, Provenance::SuccessConviction)
        } else {
            // Case 4b: a deviator who never experimented reveals nothing
            (PlayerBelief { val: w.val, kappa: mech_kappa(w.kappa) }, Provenance::ReasonableRule)
        }
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::Action::{R, S};
    use approx::assert_abs_diff_eq;

    fn params() -> ModelParams {
        ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap()
    }

    /// Double-probe profile expressed directly against the engine: R at the
    /// root, R whenever all moves but the last were S, R when convinced.
    struct DoubleProbe<'a> {
        eng: &'a BeliefEngine,
    }

    impl ProbR for DoubleProbe<'_> {
        fn prob_r(&self, h: &PublicHistory) -> f64 {
            if h.is_empty() {
                return 1.0;
            }
            if (0..h.len() - 1).all(|i| h.action_at(i) == S) {
                return 1.0;
            }
            let nb = self.eng.node(h, self);
            if nb.of(h.active_player()).val.is_one() {
                1.0
            } else {
                0.0
            }
        }
    }

    fn ladder(n: u32) -> BVal {
        BVal::Ladder(n)
    }

    #[test]
    fn double_probe_node_annotations() {
        let pr = params();
        let eng = BeliefEngine::new(pr, BeliefMode::Reasonable);
        let dp = DoubleProbe { eng: &eng };
        // active player's belief at each node, as annotated on the profile's
        // game tree
        let expect: &[(&str, BVal)] = &[
            ("RRS", ladder(2)),
            ("RRR", BVal::One),
            ("RRSR", BVal::One),
            ("RRSRR", ladder(3)),
            ("RRSRRS", ladder(4)),
            ("RRSRRR", BVal::One),
            ("RRSSR", ladder(2)),
            ("RRSSRS", ladder(3)),
            ("RRSSRR", ladder(3)),
        ];
        for (text, want) in expect {
            let h = PublicHistory::parse(text).unwrap();
            let nb = eng.node(&h, &dp);
            assert_eq!(nb.of(h.active_player()).val, *want, "at {text}");
        }
        // deviation nodes flagged as conviction
        let h = PublicHistory::parse("RRR").unwrap();
        assert_eq!(eng.node(&h, &dp).prov[1], Provenance::SuccessConviction);
    }

    #[test]
    fn off_path_s_prefix_convinces_after_experiments() {
        // RS·SR·RR: player 1 ends convinced, player 2 at phi^3
        let pr = params();
        let eng = BeliefEngine::new(pr, BeliefMode::Reasonable);
        let dp = DoubleProbe { eng: &eng };
        let h = PublicHistory::parse("RSSRRR").unwrap();
        let nb = eng.node(&h, &dp);
        assert_eq!(nb.of(Player::P1).val, BVal::One);
        assert_eq!(nb.of(Player::P2).val, ladder(3));
    }

    #[test]
    fn on_path_beliefs_follow_own_experiments_only() {
        // all-R profile: opponent R's are uninformative, each player's belief
        // is the ladder at his own experiment count
        let pr = params();
        let eng = BeliefEngine::new(pr, BeliefMode::Reasonable);
        let all_r = |_h: &PublicHistory| 1.0;
        let mut h = PublicHistory::empty();
        for step in 0..10 {
            h = h.extend(R).unwrap();
            let nb = eng.node(&h, &all_r);
            assert_eq!(nb.of(Player::P1).val, ladder(h.n_e_i(Player::P1)));
            assert_eq!(nb.of(Player::P2).val, ladder(h.n_e_i(Player::P2)));
            let _ = step;
        }
    }

    #[test]
    fn kappa_accumulates_over_undisclosed_experiments() {
        let pr = params();
        let eng = BeliefEngine::new(pr, BeliefMode::Reasonable);
        let all_r = |_h: &PublicHistory| 1.0;
        // after the opponent's k uninformative R's, kappa = 1-(1-lambda)^k
        let mut h = PublicHistory::empty();
        for _ in 0..6 {
            h = h.extend(R).unwrap();
        }
        let nb = eng.node(&h, &all_r);
        // player 1 has watched 3 opponent experiments
        assert_abs_diff_eq!(nb.q(Player::P1), 1.0 - 0.8f64.powi(3), epsilon = 1e-15);
        assert_abs_diff_eq!(nb.q(Player::P2), 1.0 - 0.8f64.powi(3), epsilon = 1e-15);
    }

    #[test]
    fn opponent_s_resets_to_total_experiment_ladder() {
        let pr = params();
        let eng = BeliefEngine::new(pr, BeliefMode::Reasonable);
        let all_r = |_h: &PublicHistory| 1.0;
        // RRRS: player 2's S (position 3) resets player 1 to the full count
        let h = PublicHistory::parse("RRRS").unwrap();
        let nb = eng.node(&h, &all_r);
        assert_eq!(nb.of(Player::P1).val, ladder(3));
        assert_eq!(nb.q(Player::P1), 0.0);
    }

    #[test]
    fn conviction_mode_four_cases() {
        let pr = params();
        let eng = BeliefEngine::new(pr, BeliefMode::Conviction);
        // profile: R at the root, S everywhere else
        let probe = |h: &PublicHistory| if h.is_empty() { 1.0 } else { 0.0 };

        // case 4a: player 1 deviates to R after one past experiment
        let h = PublicHistory::parse("RSR").unwrap();
        let nb = eng.node(&h, &probe);
        assert_eq!(nb.of(Player::P2).val, BVal::One);
        assert_eq!(nb.q(Player::P2), 1.0);
        assert_eq!(nb.prov[1], Provenance::SuccessConviction);

        // case 1: conviction is absorbing
        let h2 = PublicHistory::parse("RSRS").unwrap();
        assert_eq!(eng.node(&h2, &probe).of(Player::P2).val, BVal::One);

        // case 4b: a deviation by a player with no experiments is ignored
        let eng2 = BeliefEngine::new(pr, BeliefMode::Conviction);
        let all_s = |_: &PublicHistory| 0.0;
        let h3 = PublicHistory::parse("R").unwrap();
        let nb3 = eng2.node(&h3, &all_s);
        assert_eq!(nb3.of(Player::P2).val, ladder(0));
        assert_abs_diff_eq!(nb3.q(Player::P2), pr.lambda, epsilon = 1e-15);
    }

    #[test]
    fn mixing_seen_through_bayes() {
        // opponent plays R with probability 1/2 at the root; observing R is
        // good news exactly when kappa > 0, here kappa = 0 so it is neutral
        let pr = params();
        let eng = BeliefEngine::new(pr, BeliefMode::Reasonable);
        let half = |h: &PublicHistory| if h.is_empty() { 0.5 } else { 1.0 };
        let h = PublicHistory::parse("R").unwrap();
        let nb = eng.node(&h, &half);
        // kappa = 0 at the root, so the pool factor is 1 and the ladder survives
        assert_eq!(nb.of(Player::P2).val, ladder(0));
        assert_abs_diff_eq!(nb.q(Player::P2), pr.lambda, epsilon = 1e-15);
    }
}

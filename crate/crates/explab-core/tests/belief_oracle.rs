//! Exact-rational cross-check of the belief engine.
//!
//! Independent oracle: enumerate, in exact rational arithmetic, every
//! (arm quality, opponent success time) scenario consistent with a public
//! history, and read the posterior and the opponent-success weight straight
//! off the definition of conditional probability. Wherever a player assigns
//! the observed history positive probability the engine must agree with the
//! oracle to float precision; at zero-probability histories the engine's
//! defining rules take over and the oracle is silent. The same masses give
//! an exact martingale identity at every opponent move, which doubles as a
//! self-check of the oracle.

use explab_core::history::{Action, Player, PublicHistory};
use explab_core::params::ModelParams;
use explab_core::payoffs::make_leader_follower;
use explab_core::profiles::{
    make_double_probe, make_lone_probe, make_sigma_n, make_threshold_phat, Profile,
};
use num::{BigInt, BigRational, One, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_f64(x: &BigRational) -> f64 {
    let n = x.numer().to_string().parse::<f64>().unwrap();
    let d = x.denom().to_string().parse::<f64>().unwrap();
    n / d
}

/// Scenario weights for one observer at one history, conditioned on the
/// observer never having succeeded: bad arm, good arm with the opponent
/// still unsuccessful, good arm with the opponent already successful.
#[derive(Clone)]
struct Masses {
    b: BigRational,
    g_ns: BigRational,
    g_s: BigRational,
}

impl Masses {
    fn total(&self) -> BigRational {
        self.b.clone() + self.g_ns.clone() + self.g_s.clone()
    }

    fn p(&self) -> BigRational {
        (self.g_ns.clone() + self.g_s.clone()) / self.total()
    }

    fn kappa(&self) -> BigRational {
        let g = self.g_ns.clone() + self.g_s.clone();
        if g.is_zero() {
            BigRational::zero()
        } else {
            self.g_s.clone() / g
        }
    }
}

struct Oracle {
    lambda: BigRational,
    p0: BigRational,
}

impl Oracle {
    /// Walk the history once. The opponent's hidden success status carries
    /// two weights (never successful so far / successful), updated by action
    /// consistency with the profile prescription and by pull outcomes; the
    /// observer's own pulls contribute a failure factor each under the good
    /// arm. A never-successful mover must play the prescribed action, a
    /// successful mover is forced to R.
    fn masses(&self, profile: &Profile, h: &PublicHistory, obs: Player) -> Masses {
        let lam = self.lambda.clone();
        let q = BigRational::one() - lam.clone();
        let mut b_ok = true;
        let mut ns = BigRational::one();
        let mut s = BigRational::zero();
        let mut own_pulls = 0u32;
        let mut prefix = PublicHistory::empty();
        for a in h.iter() {
            let mover = prefix.active_player();
            let sig = profile.prob_r(&prefix);
            assert!(sig == 0.0 || sig == 1.0, "oracle needs a pure profile");
            let pres = if sig == 1.0 { Action::R } else { Action::S };
            if mover == obs {
                if a == Action::R {
                    own_pulls += 1;
                }
            } else {
                match a {
                    Action::R => {
                        if pres != Action::R {
                            // only a successful opponent plays R here
                            b_ok = false;
                            ns = BigRational::zero();
                        } else {
                            let promote = ns.clone() * lam.clone();
                            ns *= q.clone();
                            s += promote;
                        }
                    }
                    Action::S => {
                        // success forces R forever, so S reveals no success
                        s = BigRational::zero();
                        if pres != Action::S {
                            b_ok = false;
                            ns = BigRational::zero();
                        }
                    }
                }
            }
            prefix = prefix.extend(a).unwrap();
        }
        let mut own_fail = BigRational::one();
        for _ in 0..own_pulls {
            own_fail *= q.clone();
        }
        let p0 = self.p0.clone();
        Masses {
            b: if b_ok { BigRational::one() - p0.clone() } else { BigRational::zero() },
            g_ns: p0.clone() * own_fail.clone() * ns,
            g_s: p0 * own_fail * s,
        }
    }
}

fn all_histories(depth: usize) -> Vec<PublicHistory> {
    let mut out = vec![PublicHistory::empty()];
    let mut level = vec![PublicHistory::empty()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for h in &level {
            for a in [Action::R, Action::S] {
                next.push(h.extend(a).unwrap());
            }
        }
        out.extend(next.iter().copied());
        level = next;
    }
    out
}

fn check_profile(profile: &Profile, oracle: &Oracle, depth: usize) -> (usize, usize) {
    let params = &profile.params;
    let mut compared = 0usize;
    let mut convinced = 0usize;
    for h in all_histories(depth) {
        let nb = profile.beliefs(&h);
        for pl in [Player::P1, Player::P2] {
            let m = oracle.masses(profile, &h, pl);
            if m.total().is_zero() {
                continue;
            }
            compared += 1;
            if m.b.is_zero() && m.g_ns.is_zero() {
                // only the opponent-succeeded scenario survives
                convinced += 1;
            }
            let want_p = to_f64(&m.p());
            let want_k = to_f64(&m.kappa());
            let got = nb.of(pl);
            let got_p = got.p(params);
            assert!(
                (got_p - want_p).abs() < 1e-12,
                "{} obs {pl}: engine p {got_p} vs oracle {want_p}",
                h.render()
            );
            assert!(
                (got.kappa - want_k).abs() < 1e-12,
                "{} obs {pl}: engine kappa {} vs oracle {want_k}",
                h.render(),
                got.kappa
            );
        }
    }
    (compared, convinced)
}

/// E[p' | opponent's move] = p, exactly, at every history the observer
/// assigns positive probability and where the next mover is the opponent.
fn check_martingale(profile: &Profile, oracle: &Oracle, depth: usize) {
    for h in all_histories(depth) {
        let mover = h.active_player();
        let obs = mover.other();
        let m = oracle.masses(profile, &h, obs);
        if m.total().is_zero() {
            continue;
        }
        let sig = profile.prob_r(&h);
        let sig_r = if sig == 1.0 { BigRational::one() } else { BigRational::zero() };
        // predictive probability of seeing R: never-successful states follow
        // the prescription, a successful opponent plays R outright
        let pr_r = ((m.b.clone() + m.g_ns.clone()) * sig_r + m.g_s.clone()) / m.total();
        let hr = h.extend(Action::R).unwrap();
        let hs = h.extend(Action::S).unwrap();
        let mr = oracle.masses(profile, &hr, obs);
        let ms = oracle.masses(profile, &hs, obs);
        let mut expect = BigRational::zero();
        if !pr_r.is_zero() {
            assert!(!mr.total().is_zero(), "positive-probability branch must have mass");
            expect += pr_r.clone() * mr.p();
        }
        let pr_s = BigRational::one() - pr_r;
        if !pr_s.is_zero() {
            assert!(!ms.total().is_zero(), "positive-probability branch must have mass");
            expect += pr_s * ms.p();
        }
        assert_eq!(expect, m.p(), "martingale breaks at {} for {obs}", h.render());
    }
}

// ---------------------------------------------------------------------------

#[test]
fn engine_matches_the_rational_oracle_on_the_overshoot_profile() {
    let pr = ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap();
    let oracle = Oracle { lambda: rat(1, 5), p0: rat(3, 5) };
    let prof = make_sigma_n(&pr, 0).unwrap();
    let (compared, _) = check_profile(&prof, &oracle, 8);
    // every opponent S inside the experimentation budget is a zero-probability
    // event under this profile, so the live tree is thin
    assert!(compared > 100, "only {compared} comparisons");
}

#[test]
fn engine_matches_the_rational_oracle_on_the_threshold_profile() {
    let pr = ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap();
    let oracle = Oracle { lambda: rat(1, 5), p0: rat(3, 5) };
    let prof = make_threshold_phat(&pr);
    let (compared, _) = check_profile(&prof, &oracle, 8);
    assert!(compared > 100, "only {compared} comparisons");
}

#[test]
fn engine_matches_the_rational_oracle_on_both_probe_profiles() {
    let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap();
    let oracle = Oracle { lambda: rat(1, 2), p0: rat(9, 20) };
    let dp = make_double_probe(&pr);
    let (c1, conv1) = check_profile(&dp, &oracle, 8);
    let lp_params = pr.with_prior(0.40).unwrap();
    let lp_oracle = Oracle { lambda: rat(1, 2), p0: rat(2, 5) };
    let lp = make_lone_probe(&lp_params);
    let (c2, conv2) = check_profile(&lp, &lp_oracle, 8);
    assert!(c1 > 150 && c2 > 120, "comparisons {c1} {c2}");
    // an R where the profile says S, after an earlier opponent R, can only
    // come from a success: the oracle must flag such nodes and the engine
    // must pin the posterior at one there
    assert!(conv1 > 0 && conv2 > 0, "convictions {conv1} {conv2}");
}

#[test]
fn engine_matches_the_rational_oracle_when_one_player_waits() {
    // the waiting player's R at a prescribed-S node reads as a success;
    // on its support that rule is plain Bayes, which is all the oracle sees
    let pr = ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap();
    let oracle = Oracle { lambda: rat(1, 5), p0: rat(3, 5) };
    let prof = make_leader_follower(&pr).unwrap();
    let (compared, _) = check_profile(&prof, &oracle, 8);
    assert!(compared > 100, "only {compared} comparisons");
}

#[test]
fn beliefs_are_an_exact_martingale_at_opponent_moves() {
    let pr = ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap();
    let oracle = Oracle { lambda: rat(1, 5), p0: rat(3, 5) };
    for prof in [make_sigma_n(&pr, 0).unwrap(), make_threshold_phat(&pr)] {
        check_martingale(&prof, &oracle, 7);
    }
    let pr2 = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap();
    let oracle2 = Oracle { lambda: rat(1, 2), p0: rat(9, 20) };
    check_martingale(&make_double_probe(&pr2), &oracle2, 7);
}

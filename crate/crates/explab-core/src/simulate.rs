//! Monte Carlo play-out of catalog profiles.
//!
//! Each run draws the arm quality, then walks the public history sampling
//! actions from the profile and experiment outcomes from the arm. Payoffs
//! accrue on each player's own-move clock. A player's own success is settled
//! in closed form the moment it happens (the continuation is worth exactly g),
//! which removes that tail's sampling variance without bias; everything else
//! is sampled. Runs are keyed by (seed, run index), so results are
//! bit-for-bit reproducible at any thread count.

use crate::history::{Action, PublicHistory, MAX_LEN};
use crate::params::ModelParams;
use crate::profiles::{GameKind, Profile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub runs: usize,
    pub seed: u64,
    /// half-moves before the run is cut off; own-move discounting makes the
    /// truncated tail worth less than delta^(horizon/2) per player
    pub horizon: usize,
}

impl SimConfig {
    pub fn new(runs: usize, seed: u64) -> Self {
        SimConfig { runs, seed, horizon: 400 }
    }
}

/// How a run ended.
const END_SETTLED_S: u8 = 0;
const END_REVEALED_R: u8 = 1;
const END_TRUNCATED: u8 = 2;

#[derive(Clone, Debug, serde::Serialize)]
pub struct SimSummary {
    pub runs: usize,
    /// sample means of the two players' normalized payoffs
    pub mean: [f64; 2],
    pub stderr: [f64; 2],
    /// experiment-count distribution among bad-arm runs, as fractions
    pub ne_given_b: Vec<(u32, f64)>,
    pub bad_runs: usize,
    /// fraction of runs settling into S forever
    pub settled_s: f64,
    /// fraction of runs ending in perpetual experimentation after a success
    pub settled_r: f64,
    pub truncated: f64,
}

struct RunOut {
    pay: [f64; 2],
    good: bool,
    n_e: u32,
    end: u8,
}

fn run_rng(seed: u64, idx: usize) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(idx as u64).to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

pub fn run_sim(profile: &Profile, cfg: &SimConfig) -> SimSummary {
    let horizon = cfg.horizon.min(MAX_LEN);
    let outs = crate::par::par_map_indexed(cfg.runs, |i| one_run(profile, horizon, cfg.seed, i));
    summarize(&outs, cfg.runs)
}

fn one_run(profile: &Profile, horizon: usize, seed: u64, idx: usize) -> RunOut {
    let mut rng = run_rng(seed, idx);
    let params: &ModelParams = &profile.params;
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let public = matches!(profile.game_kind(), GameKind::PublicOutcomes);
    let good = rng.gen::<f64>() < params.p0;
    let mut h = PublicHistory::empty();
    let mut pay = [0.0f64; 2];
    let mut disc = [1.0f64; 2];
    let mut succeeded = [false; 2];
    let mut n_e = 0u32;
    let mut end = END_TRUNCATED;
    while h.len() < horizon {
        if !succeeded[0] && !succeeded[1] && profile.settles_with_s(&h) {
            end = END_SETTLED_S;
            break;
        }
        let who = h.active_player();
        let i = who.index();
        let act = if succeeded[i] {
            Action::R
        } else {
            let r = profile.prob_r(&h);
            if r >= 1.0 || (r > 0.0 && rng.gen::<f64>() < r) {
                Action::R
            } else {
                Action::S
            }
        };
        if act == Action::R {
            n_e += 1;
            if succeeded[i] {
                // payoff already settled in closed form at the success
            } else if good && rng.gen::<f64>() < l {
                succeeded[i] = true;
                pay[i] += disc[i] * ((1.0 - d) * (m - c) + d * g);
                if public {
                    // the success is commonly observed: the opponent holds R
                    // from their next move on, worth exactly g
                    let j = who.other().index();
                    pay[j] += disc[j] * g;
                    end = END_REVEALED_R;
                    break;
                }
            } else {
                pay[i] += disc[i] * (1.0 - d) * (-c);
            }
        }
        disc[i] *= d;
        match h.extend(act) {
            Ok(next) => h = next,
            Err(_) => break,
        }
    }
    if end == END_TRUNCATED && (succeeded[0] || succeeded[1]) {
        end = END_REVEALED_R;
    }
    RunOut { pay, good, n_e, end }
}

fn summarize(outs: &[RunOut], runs: usize) -> SimSummary {
    let mut mean = [0.0f64; 2];
    for o in outs {
        mean[0] += o.pay[0];
        mean[1] += o.pay[1];
    }
    mean[0] /= runs as f64;
    mean[1] /= runs as f64;
    let mut var = [0.0f64; 2];
    for o in outs {
        var[0] += (o.pay[0] - mean[0]).powi(2);
        var[1] += (o.pay[1] - mean[1]).powi(2);
    }
    let denom = (runs.max(2) - 1) as f64 * runs as f64;
    let stderr = [(var[0] / denom).sqrt(), (var[1] / denom).sqrt()];
    let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
    let mut bad_runs = 0usize;
    let mut ends = [0usize; 3];
    for o in outs {
        if !o.good {
            bad_runs += 1;
            *hist.entry(o.n_e).or_insert(0) += 1;
        }
        ends[o.end as usize] += 1;
    }
    let ne_given_b = hist
        .into_iter()
        .map(|(k, v)| (k, v as f64 / bad_runs.max(1) as f64))
        .collect();
    SimSummary {
        runs,
        mean,
        stderr,
        ne_given_b,
        bad_runs,
        settled_s: ends[0] as f64 / runs as f64,
        settled_r: ends[1] as f64 / runs as f64,
        truncated: ends[2] as f64 / runs as f64,
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::Player;
    use crate::payoffs::Evaluator;
    use crate::profiles::{make_public_budget, make_sigma_n};
    use crate::public::PublicEvaluator;

    fn params() -> ModelParams {
        ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap()
    }

    #[test]
    fn identical_seeds_reproduce_bit_for_bit() {
        let pr = params();
        let prof = make_sigma_n(&pr, 0).unwrap();
        let a = run_sim(&prof, &SimConfig::new(400, 7));
        let b = run_sim(&prof, &SimConfig::new(400, 7));
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.ne_given_b, b.ne_given_b);
        let c = run_sim(&prof, &SimConfig::new(400, 8));
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn bad_arm_runs_of_the_overshoot_profile_spend_the_full_budget() {
        let pr = params();
        let prof = make_sigma_n(&pr, 0).unwrap();
        let s = run_sim(&prof, &SimConfig::new(2000, 11));
        assert_eq!(s.ne_given_b, vec![(14, 1.0)]);
        // every run ends settled one way or the other at this horizon
        assert_eq!(s.truncated, 0.0);
        assert!(s.settled_s > 0.3 && s.settled_r > 0.3);
    }

    #[test]
    fn monte_carlo_brackets_the_exact_private_values() {
        let pr = params();
        let prof = make_sigma_n(&pr, 0).unwrap();
        let ev = Evaluator::new(&prof, crate::payoffs::default_horizon(&pr));
        let s = run_sim(&prof, &SimConfig::new(30_000, 5));
        for pl in [Player::P1, Player::P2] {
            let exact = ev.root_value(pl).unwrap();
            let i = pl.index();
            assert!(
                (s.mean[i] - exact).abs() <= 4.0 * s.stderr[i],
                "player {pl}: mc {} +- {} vs exact {exact}",
                s.mean[i],
                s.stderr[i]
            );
        }
    }

    #[test]
    fn monte_carlo_brackets_the_exact_public_values() {
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap();
        let prof = make_public_budget(&pr, 1).unwrap();
        let ev = PublicEvaluator::new(&prof, 40);
        let s = run_sim(&prof, &SimConfig::new(30_000, 5));
        for pl in [Player::P1, Player::P2] {
            let exact = ev.root_value(pl).unwrap();
            let i = pl.index();
            assert!(
                (s.mean[i] - exact).abs() <= 4.0 * s.stderr[i],
                "player {pl}: mc {} +- {} vs exact {exact}",
                s.mean[i],
                s.stderr[i]
            );
        }
    }

    #[test]
    fn mixed_profile_experiment_counts_stay_in_the_proved_support() {
        let pr = ModelParams::new(0.15, 0.85, 1.0, 10.0, 0.5218).unwrap();
        let prof = crate::payoffs::make_mixed_example(&pr).unwrap();
        let s = run_sim(&prof, &SimConfig::new(4000, 13));
        let support: Vec<u32> = s.ne_given_b.iter().map(|(k, _)| *k).collect();
        assert_eq!(support, vec![1, 2, 3], "histogram {:?}", s.ne_given_b);
    }

    #[test]
    fn near_certain_success_reveals_immediately_in_the_public_game() {
        let pr = ModelParams::new(0.995, 0.6, 1.0, 4.0, 0.7).unwrap();
        let prof = make_public_budget(&pr, 1).unwrap();
        let s = run_sim(&prof, &SimConfig::new(4000, 3));
        // good-arm runs almost always succeed on the very first pull
        assert!((s.settled_r - 0.7 * 0.995).abs() < 0.05, "settled_r {}", s.settled_r);
        assert!(s.truncated == 0.0);
    }
}

//! Equilibrium verification.
//!
//! The workhorse is the one-shot deviation check: at every public history up
//! to a depth, compare the active player's prescribed-action value with the
//! value of the other action followed by a return to the profile. Discounting
//! makes this sufficient for sequential rationality. On top of it sit the
//! named certificate checks: the Nash test for the overshoot profiles, the
//! frontier-stopping property, the experiment-count bounds, and the
//! no-pure-equilibrium certificate.

use crate::belief::{phi, phi_inverse, phi_iterate, pow1m};
use crate::cutoffs::{cutoff_p_hat, cutoff_p_star, cutoff_p_star_n, experiment_counts};
use crate::history::{Action, Player, PublicHistory};
use crate::params::ModelParams;
use crate::payoffs::{
    encouragement_value, persist_then_stop, sigma_n_conform, solo_plan_value, EvalError, Evaluator,
    ne_distribution_given_b,
};
use crate::profiles::{GameKind, Profile, ProfileError, ProfileMeta};
use crate::public::{solve_public, PublicEvaluator};
use crate::tol;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("not an equilibrium: worst one-shot gain {gain:.3e} at {history}")]
    NotAnEquilibrium { history: String, gain: f64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

// ---------------------------------------------------------------------------
// one-shot deviation checking

/// One checked node. For pure nodes `dev_value` is the value of the action
/// the profile does not prescribe; for mixing nodes there is one row per
/// support action and the gain must vanish (indifference).
#[derive(Clone, Debug, serde::Serialize)]
pub struct DeviationRow {
    pub history: String,
    pub player: Player,
    pub eq_value: f64,
    pub dev_value: f64,
    pub gain: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct DeviationReport {
    pub rows: Vec<DeviationRow>,
    pub nodes: usize,
    pub worst_gain: f64,
    pub worst_history: String,
    pub pass: bool,
}

impl DeviationReport {
    fn from_rows(rows: Vec<DeviationRow>, nodes: usize) -> Self {
        let mut worst_gain = f64::NEG_INFINITY;
        let mut worst_history = String::new();
        let mut pass = true;
        for r in &rows {
            if r.gain > worst_gain {
                worst_gain = r.gain;
                worst_history = r.history.clone();
            }
            pass &= r.pass;
        }
        DeviationReport { rows, nodes, worst_gain, worst_history, pass }
    }

    /// Rows that flag a profitable deviation or a broken indifference.
    pub fn failures(&self) -> impl Iterator<Item = &DeviationRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("history,player,eq_value,dev_value,gain,verdict\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.12e},{:.12e},{:.12e},{}\n",
                if r.history.is_empty() { "-" } else { &r.history },
                r.player,
                r.eq_value,
                r.dev_value,
                r.gain,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

/// All public histories of length <= depth, in breadth-first order.
fn enumerate_histories(depth: usize) -> Vec<PublicHistory> {
    let mut out = vec![PublicHistory::empty()];
    let mut level = vec![PublicHistory::empty()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for h in &level {
            for a in [Action::R, Action::S] {
                if let Ok(child) = h.extend(a) {
                    next.push(child);
                }
            }
        }
        out.extend(next.iter().copied());
        level = next;
    }
    out
}

fn check_rows_at<F>(h: &PublicHistory, prob_r: f64, subjective: f64, forced: F) -> Vec<DeviationRow>
where
    F: Fn(Action) -> Result<f64, EvalError>,
{
    let active = h.active_player();
    let mut rows = Vec::with_capacity(2);
    let mut push = |a: Action, tol_gain: f64, indifference: bool| -> Result<(), EvalError> {
        let dev = forced(a)?;
        let gain = dev - subjective;
        let pass = if indifference { gain.abs() <= tol_gain } else { gain <= tol_gain };
        rows.push(DeviationRow {
            history: h.render(),
            player: active,
            eq_value: subjective,
            dev_value: dev,
            gain,
            pass,
        });
        Ok(())
    };
    let result = if prob_r == 1.0 {
        push(Action::S, tol::DEVIATION_GAIN, false)
    } else if prob_r == 0.0 {
        push(Action::R, tol::DEVIATION_GAIN, false)
    } else {
        push(Action::R, tol::MIXED_INDIFF, true)
            .and_then(|_| push(Action::S, tol::MIXED_INDIFF, true))
    };
    if let Err(e) = result {
        // surface evaluation failures as failing rows rather than aborting
        rows.push(DeviationRow {
            history: h.render(),
            player: active,
            eq_value: subjective,
            dev_value: f64::NAN,
            gain: f64::INFINITY,
            pass: false,
        });
        let _ = e;
    }
    rows
}

/// Check every history up to `depth` for a profitable one-step deviation by
/// the active player, under the player's own (never-successful) beliefs.
/// Mixing nodes are checked for indifference across the support instead.
pub fn one_shot_deviation_check(
    profile: &Profile,
    depth: usize,
) -> Result<DeviationReport, VerifyError> {
    if let ProfileMeta::PublicMarkov { .. } = &profile.meta {
        return Ok(public_markov_ladder_check(&profile.params));
    }
    let histories = enumerate_histories(depth);
    let nodes = histories.len();
    let chunk = 4096usize;
    let n_chunks = nodes.div_ceil(chunk);
    let public = matches!(profile.game_kind(), GameKind::PublicOutcomes);
    let horizon = private_check_horizon(profile, depth);
    let per_chunk: Vec<Result<Vec<DeviationRow>, VerifyError>> =
        crate::par::par_map_indexed(n_chunks, |ci| {
            let lo = ci * chunk;
            let hi = (lo + chunk).min(nodes);
            let mut rows = Vec::with_capacity((hi - lo) * 2);
            if public {
                let ev = PublicEvaluator::new(profile, horizon);
                for h in &histories[lo..hi] {
                    let subj = ev.subjective_value(h)?;
                    rows.extend(check_rows_at(h, profile.prob_r(h), subj, |a| {
                        ev.forced_action_value(h, a)
                    }));
                }
            } else {
                let ev = Evaluator::new(profile, horizon);
                for h in &histories[lo..hi] {
                    let subj = ev.subjective_value(h)?;
                    rows.extend(check_rows_at(h, profile.prob_r(h), subj, |a| {
                        ev.forced_action_value(h, a)
                    }));
                }
            }
            Ok(rows)
        });
    let mut rows = Vec::with_capacity(nodes * 2);
    for r in per_chunk {
        rows.extend(r?);
    }
    Ok(DeviationReport::from_rows(rows, nodes))
}

fn private_check_horizon(profile: &Profile, depth: usize) -> usize {
    (depth + crate::payoffs::default_horizon(&profile.params)).min(crate::payoffs::TAIL_CAP)
}

/// The Markov profile of the public game mixes at every rung, so its
/// one-shot check is arithmetic on the value ladder rather than a tree walk:
/// at rung k the mover compares experimenting now against one period of
/// delay. Rungs are labelled by the representative history R^k.
fn public_markov_ladder_check(params: &ModelParams) -> DeviationReport {
    let sol = solve_public(params);
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let n = sol.n_star as usize;
    let mut rows = Vec::new();
    let label = |k: usize| -> String {
        if k == 0 {
            "-".into()
        } else {
            format!("R^{k}")
        }
    };
    let player_at = |k: usize| if k % 2 == 0 { Player::P1 } else { Player::P2 };
    for k in 0..n {
        let r_val = sol.gamma1[k];
        let s_val = d * sol.gamma2[k];
        if sol.capped[k] {
            // pure experimentation: stopping must not pay
            let gain = s_val - r_val;
            rows.push(DeviationRow {
                history: label(k),
                player: player_at(k),
                eq_value: r_val,
                dev_value: s_val,
                gain,
                pass: gain <= tol::DEVIATION_GAIN,
            });
        } else {
            for (dev, eq) in [(r_val, s_val), (s_val, r_val)] {
                let gain = dev - eq;
                rows.push(DeviationRow {
                    history: label(k),
                    player: player_at(k),
                    eq_value: eq,
                    dev_value: dev,
                    gain,
                    pass: gain.abs() <= tol::MIXED_INDIFF,
                });
            }
        }
    }
    // a few rungs past the cutoff: experimenting must not pay once f = 0
    for k in n..n + 3 {
        let p = phi_iterate(params.p0, k as u32, params);
        let r_val = (1.0 - d) * (p * l * m - c) + d * p * l * g;
        rows.push(DeviationRow {
            history: label(k),
            player: player_at(k),
            eq_value: 0.0,
            dev_value: r_val,
            gain: r_val,
            pass: r_val <= tol::DEVIATION_GAIN,
        });
    }
    let nodes = rows.len();
    DeviationReport::from_rows(rows, nodes)
}

// ---------------------------------------------------------------------------
// Nash check for the overshoot profiles

/// Closed-form and brute-force verdicts on whether the overshoot profile
/// sigma_n is a Nash equilibrium, plus the numbers behind them.
#[derive(Clone, Copy, Debug)]
pub struct NashReport {
    pub closed_form: bool,
    pub brute_force: bool,
    /// continuation value of the next mover once beliefs reach phi^{N*}(p0)
    pub cp1: f64,
    /// root conform value of the first mover
    pub conform: f64,
    /// best deviation value: conform for t-1 own periods, then switch to S
    /// and best-respond alone
    pub best_deviation: f64,
    pub best_t: u32,
}

/// Any deviation from sigma_n makes both prescriptions R forever, so the
/// opponent's play becomes uninformative and worthless to the deviator; the
/// post-deviation best response is the solo plan. The binding comparison is
/// the first mover's, whose disclosure of the opponent's late success
/// arrives one own-period later than the second mover's.
pub fn nash_check_sigma_n(params: &ModelParams, n: u32) -> Result<NashReport, ProfileError> {
    let (l, d, c, m, g) = (params.lambda, params.delta, params.c, params.m, params.g());
    let p0 = params.p0;
    let p_star = cutoff_p_star(params, d);
    if p0 < p_star {
        return Err(ProfileError::PriorTooLow { p0, p_star });
    }
    let counts = experiment_counts(params);
    let ell = counts.n_star + n;
    let cp1 = sigma_n_conform(params, n).mover;
    let conform = persist_then_stop(params, p0, 0.0, ell);
    let mut best_deviation = f64::NEG_INFINITY;
    let mut best_t = 1;
    for t in 1..=ell {
        let k = t - 1;
        let dk = d.powi(k as i32);
        let wk = pow1m(l, k);
        let tail = solo_plan_value(params, phi_iterate(p0, k, params));
        let dev = (1.0 - dk) * (p0 * l * m - c)
            + dk * (p0 * (1.0 - wk) * g + (1.0 - p0 + p0 * wk) * d * tail);
        if dev > best_deviation {
            best_deviation = dev;
            best_t = t;
        }
    }
    let wl = pow1m(l, ell);
    let dl = d.powi(ell as i32);
    // the second mover's conform value: same flows, undiscounted disclosure
    let conform_second =
        (1.0 - dl) * (p0 * l * m - c) + dl * p0 * g * ((1.0 - wl) + wl * (1.0 - wl));
    let brute = conform >= best_deviation - tol::DEVIATION_GAIN
        && conform_second >= best_deviation - tol::DEVIATION_GAIN;
    Ok(NashReport {
        closed_form: cp1 >= 0.0,
        brute_force: brute,
        cp1,
        conform,
        best_deviation,
        best_t,
    })
}

// ---------------------------------------------------------------------------
// frontier stopping

#[derive(Clone, Debug)]
pub struct FrontierReport {
    /// a settled node in the unsuccessful state whose beliefs sit below
    /// p_hat, with its reach probability and the larger of the two beliefs
    pub witness: Option<(String, f64, f64)>,
    /// nodes checked for "belief below p_hat implies stop"
    pub checked: usize,
    pub stop_violations: Vec<String>,
    pub pass: bool,
}

/// Two assertions about a verified equilibrium: play in the unsuccessful
/// state settles at beliefs strictly below p_hat with positive probability,
/// and nobody experiments while unconvinced with a belief below p_hat.
pub fn check_frontier_stopping(
    profile: &Profile,
    depth: usize,
) -> Result<FrontierReport, VerifyError> {
    let pre = one_shot_deviation_check(profile, depth)?;
    if !pre.pass {
        return Err(VerifyError::NotAnEquilibrium {
            history: pre.worst_history,
            gain: pre.worst_gain,
        });
    }
    let p_hat = cutoff_p_hat(&profile.params);
    let terminals = b_terminals(profile, crate::payoffs::TAIL_CAP)?;
    let mut witness = None;
    for (h, prob) in &terminals {
        let nb = profile.beliefs(h);
        let b1 = nb.of(Player::P1);
        let b2 = nb.of(Player::P2);
        if b1.val.is_one() || b2.val.is_one() {
            continue;
        }
        let worst = b1.p(&profile.params).max(b2.p(&profile.params));
        if worst < p_hat {
            witness = Some((h.render(), *prob, worst));
            break;
        }
    }
    let mut stop_violations = Vec::new();
    let mut checked = 0usize;
    for h in enumerate_histories(depth) {
        let nb = profile.beliefs(&h);
        let active = nb.of(h.active_player());
        if active.val.is_one() {
            continue;
        }
        checked += 1;
        if active.p(&profile.params) < p_hat - tol::GENERICITY_BAND && profile.prob_r(&h) > 0.0 {
            stop_violations.push(h.render());
        }
    }
    let pass = witness.is_some() && stop_violations.is_empty();
    Ok(FrontierReport { witness, checked, stop_violations, pass })
}

/// Settled endpoints of play when the risky arm is bad: follow the profile's
/// branching, treating every experiment as a failure, until the prescription
/// is S forever. Returns (settlement node, probability) pairs.
fn b_terminals(profile: &Profile, max_depth: usize) -> Result<Vec<(PublicHistory, f64)>, EvalError> {
    let mut out = Vec::new();
    let mut stack = vec![(PublicHistory::empty(), 1.0f64)];
    while let Some((h, prob)) = stack.pop() {
        if prob < 1e-15 {
            continue;
        }
        if h.len() >= max_depth {
            return Err(EvalError::Unsettled { history: h.render(), depth: h.len() });
        }
        if profile.settles_with_s(&h) {
            out.push((h, prob));
            continue;
        }
        let r = profile.prob_r(&h);
        if r > 0.0 {
            stack.push((h.extend(Action::R).map_err(|_| EvalError::Capacity {
                history: h.render(),
            })?, prob * r));
        }
        if r < 1.0 {
            stack.push((h.extend(Action::S).map_err(|_| EvalError::Capacity {
                history: h.render(),
            })?, prob * (1.0 - r)));
        }
    }
    // deterministic order for reports
    out.sort_by(|a, b| a.0.render().cmp(&b.0.render()));
    Ok(out)
}

// ---------------------------------------------------------------------------
// experiment-count bounds

#[derive(Clone, Debug)]
pub struct CountReport {
    pub support: Vec<(u32, f64)>,
    pub lo: u32,
    pub hi: u32,
    pub pass: bool,
}

/// For a verified pure equilibrium: the number of experiments performed in
/// the unsuccessful state lies between N** - 2 and 2 N**.
pub fn check_count_bounds(profile: &Profile, depth: usize) -> Result<CountReport, VerifyError> {
    let pre = one_shot_deviation_check(profile, depth)?;
    if !pre.pass {
        return Err(VerifyError::NotAnEquilibrium {
            history: pre.worst_history,
            gain: pre.worst_gain,
        });
    }
    let counts = experiment_counts(&profile.params);
    count_bounds_raw(profile, counts.n_star_social)
}

/// The bounds check alone, without re-verifying the equilibrium.
pub fn count_bounds_raw(profile: &Profile, n_ss: u32) -> Result<CountReport, VerifyError> {
    let support = ne_distribution_given_b(profile, crate::payoffs::TAIL_CAP)?;
    let lo = n_ss.saturating_sub(2);
    let hi = 2 * n_ss;
    let pass = support.iter().all(|(k, _)| *k >= lo && *k <= hi);
    Ok(CountReport { support, lo, hi, pass })
}

// ---------------------------------------------------------------------------
// the no-pure-equilibrium certificate

#[derive(Clone, Copy, Debug)]
pub struct CertificateReport {
    /// the open prior interval on which no pure equilibrium exists
    pub lo: f64,
    pub hi: f64,
    /// payoff of the extra experiment at the node the proof pins down
    pub gain: f64,
    pub pass: bool,
}

/// When phi^{-1}(p_hat) < p* and the prior sits in (phi^{-1}(p_hat), p*_1),
/// every candidate pure profile is forced into continuations in which one
/// player stops for good at a belief above p_hat; an extra experiment there
/// is worth the encouragement value at phi(p0), which is strictly positive.
/// The certificate reports that gain.
pub fn no_pure_certificate(params: &ModelParams) -> Result<CertificateReport, VerifyError> {
    let p_hat = cutoff_p_hat(params);
    let lo = phi_inverse(p_hat, params).expect("p_hat < 1 always has a preimage");
    let hi = cutoff_p_star_n(params, 1);
    let p_star = cutoff_p_star(params, params.delta);
    if lo >= p_star {
        return Err(VerifyError::Hypothesis(format!(
            "needs phi^-1(p_hat) < p*: {lo:.6} >= {p_star:.6}"
        )));
    }
    if lo >= hi {
        return Err(VerifyError::Hypothesis(format!(
            "empty prior region: phi^-1(p_hat) {lo:.6} >= p*_1 {hi:.6}"
        )));
    }
    if params.p0 <= lo || params.p0 >= hi {
        return Err(VerifyError::Hypothesis(format!(
            "prior {:.6} outside ({lo:.6}, {hi:.6})",
            params.p0
        )));
    }
    let gain = encouragement_value(params, phi(params.p0, params));
    Ok(CertificateReport { lo, hi, gain, pass: gain > 0.0 })
}

// ---------------------------------------------------------------------------
// structural coverage of the double-probe argument

/// Classify a history into the six structural cases of the double-probe
/// optimality argument: 1 all-S, 2 S^k R, 3 ends SS, 4 ends RS, 5 ends RR,
/// 6 ends SSR after an experiment. Nodes ending (R)SR fall outside: their
/// active player is convinced, and conviction settles the comparison.
pub fn double_probe_case(h: &PublicHistory) -> Option<u8> {
    let acts: Vec<Action> = h.iter().collect();
    if acts.iter().all(|a| *a == Action::S) {
        return Some(1);
    }
    let n = acts.len();
    match acts[n - 1] {
        Action::R => {
            if acts[..n - 1].iter().all(|a| *a == Action::S) {
                Some(2)
            } else if n >= 3 && acts[n - 2] == Action::S && acts[n - 3] == Action::S && h.n_e() >= 2
            {
                Some(6)
            } else if acts[n - 2] == Action::R {
                Some(5)
            } else {
                None
            }
        }
        Action::S => {
            if n >= 2 && acts[n - 2] == Action::S {
                Some(3)
            } else {
                Some(4)
            }
        }
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{
        make_double_probe, make_lone_probe, make_public_budget, make_sigma_n, make_threshold_phat,
    };

    fn params() -> ModelParams {
        ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap()
    }

    #[test]
    fn sigma_n_nash_closed_and_brute_agree_and_bind_at_cp1() {
        let pr = params();
        for n in 0..10 {
            let rep = nash_check_sigma_n(&pr, n).unwrap();
            assert_eq!(rep.closed_form, rep.brute_force, "n = {n}: {rep:?}");
            // the binding deviation stops after N* own experiments
            if n >= 1 {
                assert_eq!(rep.best_t, 8, "n = {n}");
            }
        }
        // identity: conform minus the best deviation is the discounted,
        // no-success-weighted continuation value cp1
        let pr2 = pr;
        for n in [1u32, 3, 6] {
            let rep = nash_check_sigma_n(&pr2, n).unwrap();
            let counts = experiment_counts(&pr2);
            let dk = pr2.delta.powi(counts.n_star as i32);
            let wk = pow1m(pr2.lambda, counts.n_star);
            let mass = 1.0 - pr2.p0 + pr2.p0 * wk;
            let lhs = rep.conform - rep.best_deviation;
            assert!((lhs - dk * mass * rep.cp1).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn sigma_zero_is_always_nash_above_the_cutoff() {
        for (l, d, m, p0) in [(0.2, 0.9, 10.0, 0.6), (0.4, 0.5, 10.0, 0.5), (0.1, 0.95, 14.0, 0.9)]
        {
            let pr = ModelParams::new(l, d, 1.0, m, p0).unwrap();
            let rep = nash_check_sigma_n(&pr, 0).unwrap();
            assert!(rep.closed_form && rep.brute_force, "{l} {d} {p0}: {rep:?}");
        }
    }

    #[test]
    fn double_probe_passes_one_shot_in_its_region() {
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap();
        let prof = make_double_probe(&pr);
        assert!(prof.warnings.is_empty());
        let rep = one_shot_deviation_check(&prof, 10).unwrap();
        assert!(rep.pass, "worst {} at {}", rep.worst_gain, rep.worst_history);
        // every structural case of the argument shows up among checked nodes
        let mut seen = [false; 7];
        for h in enumerate_histories(10) {
            if let Some(c) = double_probe_case(&h) {
                seen[c as usize] = true;
            }
        }
        assert!(seen[1..].iter().all(|s| *s), "cases covered: {seen:?}");
    }

    #[test]
    fn lone_probe_passes_one_shot_in_its_region() {
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.40).unwrap();
        let prof = make_lone_probe(&pr);
        assert!(prof.warnings.is_empty());
        let rep = one_shot_deviation_check(&prof, 10).unwrap();
        assert!(rep.pass, "worst {} at {}", rep.worst_gain, rep.worst_history);
    }

    /// Parameters where the threshold condition phi^{N_hat-1}(p0) >= p*_{N_hat}
    /// holds (N_hat = 1 and p0 above p*_1).
    fn threshold_ok_params() -> ModelParams {
        ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap()
    }

    #[test]
    fn threshold_profile_fails_exactly_at_the_named_node_when_pushed_outside() {
        let pr = threshold_ok_params();
        let prof = make_threshold_phat(&pr);
        let rep = one_shot_deviation_check(&prof, 10).unwrap();
        assert!(rep.pass, "worst {} at {}", rep.worst_gain, rep.worst_history);

        // canonical lambda, delta with a prior in (p_hat, p*_1): N_hat = 1
        // and the condition fails, so the first experiment must show up as
        // the deviation node
        let bad = ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.22).unwrap();
        let p_hat = cutoff_p_hat(&bad);
        let p1 = cutoff_p_star_n(&bad, 1);
        assert!(bad.p0 >= p_hat && bad.p0 < p1, "p_hat {p_hat} p*1 {p1}");
        assert!(phi(bad.p0, &bad) < p_hat, "N_hat must be 1");
        let bprof = make_threshold_phat(&bad);
        let brep = one_shot_deviation_check(&bprof, 6).unwrap();
        assert!(!brep.pass);
        let failing: Vec<&DeviationRow> = brep.failures().collect();
        assert!(failing.iter().any(|r| r.history == "R"), "failing rows: {failing:?}");
    }

    #[test]
    fn frontier_stopping_holds_for_the_threshold_profile() {
        let pr = threshold_ok_params();
        let prof = make_threshold_phat(&pr);
        let rep = check_frontier_stopping(&prof, 10).unwrap();
        assert!(rep.pass, "{rep:?}");
        let (h, prob, belief) = rep.witness.clone().unwrap();
        assert!(prob > 0.0 && belief < cutoff_p_hat(&pr), "{h} {prob} {belief}");
        assert!(rep.stop_violations.is_empty());
    }

    #[test]
    fn count_bounds_hold_for_threshold_and_double_probe() {
        let pr = threshold_ok_params();
        let prof = make_threshold_phat(&pr);
        let rep = check_count_bounds(&prof, 10).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.support, vec![(2, 1.0)]);

        let prof2 = make_double_probe(&pr);
        let rep2 = check_count_bounds(&prof2, 10).unwrap();
        assert!(rep2.pass, "{rep2:?}");
        assert_eq!(rep2.support, vec![(2, 1.0)]);
    }

    #[test]
    fn certificate_region_and_gain() {
        let base = params();
        let lo = phi_inverse(cutoff_p_hat(&base), &base).unwrap();
        let hi = cutoff_p_star_n(&base, 1);
        assert!(lo < hi, "region must be nonempty at the canonical point");
        let pr = base.with_prior(0.5 * (lo + hi)).unwrap();
        let rep = no_pure_certificate(&pr).unwrap();
        assert!(rep.pass && rep.gain > 0.0, "{rep:?}");
        // gain vanishes continuously at the left endpoint
        let edge = base.with_prior(lo + 1e-9).unwrap();
        let edge_rep = no_pure_certificate(&edge).unwrap();
        assert!(edge_rep.gain.abs() < 1e-6);
        // outside the interval the hypotheses fail
        assert!(no_pure_certificate(&base.with_prior(0.9).unwrap()).is_err());
    }

    #[test]
    fn budget_profiles_pass_one_shot_in_the_public_game() {
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap();
        for v in [1, 2] {
            let prof = make_public_budget(&pr, v).unwrap();
            let rep = one_shot_deviation_check(&prof, 8).unwrap();
            assert!(rep.pass, "variant {v}: worst {} at {}", rep.worst_gain, rep.worst_history);
        }
    }

    #[test]
    fn public_markov_ladder_check_passes() {
        let pr = params();
        let (prof, sol) = crate::public::make_public_markov(&pr);
        let rep = one_shot_deviation_check(&prof, 8).unwrap();
        assert!(rep.pass, "worst {} at {}", rep.worst_gain, rep.worst_history);
        assert_eq!(rep.rows.len(), 2 * sol.f.iter().filter(|f| **f < 1.0).count()
            + sol.capped.iter().filter(|c| **c).count() + 3);
    }

    #[test]
    fn sigma_n_profile_is_not_sequentially_rational_off_path() {
        // grim R forever at vanishing beliefs cannot survive a one-shot check
        let pr = params();
        let prof = make_sigma_n(&pr, 0).unwrap();
        let rep = one_shot_deviation_check(&prof, 8).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn deviation_report_serializes_rows() {
        let pr = ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap();
        let prof = make_double_probe(&pr);
        let rep = one_shot_deviation_check(&prof, 3).unwrap();
        let csv = rep.to_csv();
        assert!(csv.starts_with("history,player,eq_value,dev_value,gain,verdict\n"));
        assert_eq!(csv.lines().count(), rep.rows.len() + 1);
        assert!(csv.contains("PASS"));
    }
}

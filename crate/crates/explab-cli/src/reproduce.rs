//! Named desk-result targets: each rebuilds one quantitative claim from
//! scratch, writes a diffable CSV, and returns a one-line summary with an
//! overall verdict. The heavy lifting stays in the core crate; this module
//! arranges parameter paths and grids.

use explab_core::belief::{
    failures_to_cross, lr, p_of_lr, phi, phi_inverse_iterate, phi_iterate, pow1m,
};
use explab_core::cutoffs::{
    cutoff_p_hat, cutoff_p_star, cutoff_p_star_n, cutoff_p_star_social, experiment_counts,
    ordering_violations,
};
use explab_core::history::{Action, Player, PublicHistory};
use explab_core::params::ModelParams;
use explab_core::payoffs::{make_leader_follower, make_mixed_example, ne_distribution_given_b, Evaluator};
use explab_core::profiles::{
    make_double_probe, make_lone_probe, make_sigma_n, make_threshold_phat, Profile, ProfileMeta,
};
use explab_core::public::solve_public;
use explab_core::simulate::{run_sim, SimConfig};
use explab_core::verify::{nash_check_sigma_n, no_pure_certificate, one_shot_deviation_check};
use thiserror::Error;

use crate::{beliefs_csv, CSV_HEADER};

pub const TARGETS: &[&str] = &[
    "cutoff-sandwich",
    "overshoot-ratio",
    "final-belief-ratio",
    "frontier-reduction",
    "ladder-crossover",
    "threshold-iff",
    "count-bounds",
    "mixed-example",
    "public-markov",
    "no-pure-certificate",
    "double-probe-beliefs",
    "mixed-beliefs",
];

#[derive(Debug, Error)]
pub enum ReproduceError {
    #[error("unknown target `{0}`")]
    UnknownTarget(String),
    #[error("{0}")]
    Internal(String),
}

fn internal<E: std::fmt::Display>(e: E) -> ReproduceError {
    ReproduceError::Internal(e.to_string())
}

pub struct Artifact {
    pub name: String,
    pub csv: String,
    pub summary: String,
    pub ok: bool,
}

pub fn run_target(name: &str) -> Result<Artifact, ReproduceError> {
    let art = match name {
        "cutoff-sandwich" => cutoff_sandwich(),
        "overshoot-ratio" => overshoot_ratio(),
        "final-belief-ratio" => final_belief_ratio(),
        "frontier-reduction" => frontier_reduction(),
        "ladder-crossover" => ladder_crossover(),
        "threshold-iff" => threshold_iff(),
        "count-bounds" => count_bounds()?,
        "mixed-example" => mixed_example()?,
        "public-markov" => public_markov()?,
        "no-pure-certificate" => certificate_sweep(),
        "double-probe-beliefs" => double_probe_beliefs(),
        "mixed-beliefs" => mixed_beliefs()?,
        other => return Err(ReproduceError::UnknownTarget(other.to_string())),
    };
    Ok(art)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn canonical() -> ModelParams {
    ModelParams::new(0.2, 0.9, 1.0, 10.0, 0.6).unwrap()
}

pub fn mixed_point() -> ModelParams {
    ModelParams::new(0.15, 0.85, 1.0, 10.0, 0.5218).unwrap()
}

pub fn probe_point() -> ModelParams {
    ModelParams::new(0.5, 0.6, 1.0, 4.0, 0.45).unwrap()
}

// ---------------------------------------------------------------------------
// asymptotic constants

/// Positive root of x + e^(-2x) = 1, bisected to full double precision.
pub fn x0_root() -> f64 {
    let f = |x: f64| x + (-2.0 * x).exp() - 1.0;
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// cutoff-sandwich: ordering relations on a dense deterministic grid

fn cutoff_sandwich() -> Artifact {
    let ls = linspace(0.05, 0.9, 10);
    let ds = linspace(0.05, 0.95, 10);
    let ps = linspace(0.05, 0.95, 10);
    let mults = linspace(1.1, 15.0, 10);
    let total = 10_000usize;
    let rows = explab_core::par::par_map_indexed(total, |i| {
        let l = ls[i / 1000];
        let d = ds[(i / 100) % 10];
        let p0 = ps[(i / 10) % 10];
        let mult = mults[i % 10];
        let params = ModelParams::new(l, d, 1.0, mult / l, p0).unwrap();
        let v = ordering_violations(&params).len();
        (format!("{l},{d},{p0},{mult},{v}\n"), v)
    });
    let bad: usize = rows.iter().map(|r| r.1).sum();
    let mut csv = format!("{CSV_HEADER}\nlambda,delta,p0,payoff_mult,violations\n");
    for (line, _) in &rows {
        csv.push_str(line);
    }
    Artifact {
        name: "cutoff-sandwich".into(),
        csv,
        summary: format!("cutoff orderings: {bad} violations across {total} grid points"),
        ok: bad == 0,
    }
}

// ---------------------------------------------------------------------------
// overshoot-ratio: N_e / N** along the small-lambda path with p0 = p*

pub struct OvershootRow {
    pub k: u32,
    pub lambda: f64,
    pub delta: f64,
    pub n: u32,
    pub ne: u32,
    pub n_double_star: u32,
    pub ratio: f64,
    pub nash: bool,
}

/// At p0 = p* the ladder crossing takes a single failure, so total
/// experiments under the n-overshoot profile are 2(1+n). The asymptotic
/// admissibility condition (n+1)lambda + (1-lambda)^(2n+2) < 1 pins n up to
/// a finite-discount correction of a few units, so the candidate is walked
/// down until the profile actually verifies as Nash. The planner count N**
/// then mediates the 2*x0/ln2 limit.
pub fn overshoot_rows(ks: &[u32]) -> Vec<OvershootRow> {
    ks.iter()
        .map(|&k| {
            let l = 1.0 / k as f64;
            let d = 1.0 - l * l;
            let pre = ModelParams::new(l, d, 1.0, 2.0 / l, 0.5).unwrap();
            let p_star = cutoff_p_star(&pre, d);
            let params = pre.with_prior(p_star).unwrap();
            let mut n = 0u32;
            while ((n + 2) as f64) * l + pow1m(l, 2 * n + 4) < 1.0 {
                n += 1;
            }
            let mut nash = false;
            while n > 0 {
                if let Ok(r) = nash_check_sigma_n(&params, n) {
                    if r.closed_form && r.brute_force {
                        nash = true;
                        break;
                    }
                }
                n -= 1;
            }
            let counts = experiment_counts(&params);
            let ne = 2 * (counts.n_star + n);
            let nss = counts.n_star_social;
            OvershootRow {
                k,
                lambda: l,
                delta: d,
                n,
                ne,
                n_double_star: nss,
                ratio: ne as f64 / nss as f64,
                nash,
            }
        })
        .collect()
}

fn overshoot_ratio() -> Artifact {
    let x0 = x0_root();
    let limit = 2.0 * x0 / std::f64::consts::LN_2;
    let rows = overshoot_rows(&[50, 100, 200, 400, 800, 1600, 3200]);
    let mut csv = format!("{CSV_HEADER}\nk,lambda,delta,n,ne,n_double_star,ratio,nash\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{}\n",
            r.k, r.lambda, r.delta, r.n, r.ne, r.n_double_star, r.ratio, r.nash as u8
        ));
    }
    let last = rows.last().unwrap();
    let all_nash = rows.iter().all(|r| r.nash);
    let ok = all_nash && (last.ratio - limit).abs() < 0.05;
    Artifact {
        name: "overshoot-ratio".into(),
        csv,
        summary: format!(
            "x0 = {:.10}; N_e/N** at k={}: {:.4} (limit 2*x0/ln2 = {:.4}); all points Nash: {}",
            x0, last.k, last.ratio, limit, all_nash
        ),
        ok,
    }
}

// ---------------------------------------------------------------------------
// final-belief-ratio: p_f / p* along the deep-ladder path

pub struct FinalBeliefRow {
    pub k: u32,
    pub lambda: f64,
    pub delta: f64,
    pub n: u32,
    pub ladder: u32,
    pub p0: f64,
    pub p_star: f64,
    pub p_f: f64,
    pub ratio: f64,
    pub nash: bool,
}

/// lambda = 1/k, delta = 1 - 1/k^2, overshoot n = k - 2. The prior is set
/// so the ladder crossing lands just under p* after about k(ln k - 2)
/// failures, which keeps the n-overshoot profile a Nash equilibrium while
/// the belief before the last experiment sinks to p* / e.
pub fn final_belief_rows(ks: &[u32]) -> Vec<FinalBeliefRow> {
    ks.iter()
        .map(|&k| {
            let kf = k as f64;
            let l = 1.0 / kf;
            let d = 1.0 - 1.0 / (kf * kf);
            let pre = ModelParams::new(l, d, 1.0, 2.0 * kf, 0.5).unwrap();
            let p_star = cutoff_p_star(&pre, d);
            let n = k - 2;
            let depth = (kf * (kf.ln() - 2.0)).ceil().max(4.0) as u32;
            let land = p_of_lr(lr(p_star) * (1.0 - 0.25 / kf));
            let p0 = phi_inverse_iterate(land, depth, &pre).unwrap();
            let params = pre.with_prior(p0).unwrap();
            let ladder = failures_to_cross(p0, p_star, &params);
            let p_bar = phi_iterate(p0, ladder, &params);
            let p_f = phi_iterate(p_bar, n - 1, &params);
            let nash = nash_check_sigma_n(&params, n).map(|r| r.cp1 >= 0.0).unwrap_or(false);
            FinalBeliefRow {
                k,
                lambda: l,
                delta: d,
                n,
                ladder,
                p0,
                p_star,
                p_f,
                ratio: p_f / p_star,
                nash,
            }
        })
        .collect()
}

fn final_belief_ratio() -> Artifact {
    let inv_e = (-1.0f64).exp();
    let rows = final_belief_rows(&[10, 20, 50, 100, 200]);
    let mut csv =
        format!("{CSV_HEADER}\nk,lambda,delta,n,ladder,p0,p_star,p_f,ratio,nash\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{:.8},{:.8},{:.10},{:.6},{}\n",
            r.k, r.lambda, r.delta, r.n, r.ladder, r.p0, r.p_star, r.p_f, r.ratio, r.nash as u8
        ));
    }
    let last = rows.last().unwrap();
    let all_nash = rows.iter().all(|r| r.nash);
    let ok = all_nash && (last.ratio - inv_e).abs() < 0.02;
    Artifact {
        name: "final-belief-ratio".into(),
        csv,
        summary: format!(
            "p_f/p* at k={}: {:.4} (limit 1/e = {:.6}); all points Nash: {}",
            last.k, last.ratio, inv_e, all_nash
        ),
        ok,
    }
}

// ---------------------------------------------------------------------------
// frontier-reduction: the half-discount ladder inequality and what it proves

fn frontier_reduction() -> Artifact {
    let mut csv = format!(
        "{CSV_HEADER}\nn,lambda,lhs,rhs,inequality_holds,phi_p_star_n,p_hat,conclusion_holds\n"
    );
    let mut first_fail = None;
    let mut agree = true;
    for n in 1u32..=200 {
        let l = 1.0 / n as f64;
        let lhs = 1.0 - 4.0 * l + l * l;
        let rhs = 2.0 * pow1m(l, n);
        let ineq = lhs < rhs;
        if !ineq && first_fail.is_none() {
            first_fail = Some(n);
        }
        if n >= 2 {
            // the inequality is an exact algebraic reduction of
            // phi(p*_n) < p_hat at delta = 1/2; verify the equivalence
            let params = ModelParams::new(l, 0.5, 1.0, 2.0 * n as f64, 0.5).unwrap();
            let fr = phi(cutoff_p_star_n(&params, n), &params);
            let ph = cutoff_p_hat(&params);
            let concl = fr < ph;
            if concl != ineq {
                agree = false;
            }
            csv.push_str(&format!(
                "{n},{l},{lhs:.10},{rhs:.10},{},{fr:.10},{ph:.10},{}\n",
                ineq as u8, concl as u8
            ));
        } else {
            csv.push_str(&format!("{n},{l},{lhs:.10},{rhs:.10},{},,,\n", ineq as u8));
        }
    }
    let fail_at = first_fail.map(|n| n.to_string()).unwrap_or_else(|| "never".into());
    Artifact {
        name: "frontier-reduction".into(),
        csv,
        summary: format!(
            "reduction exact on 2..=200: {}; inequality (stated for all n >= 1) first fails at n = {fail_at}",
            if agree { "yes" } else { "NO" }
        ),
        ok: agree,
    }
}

// ---------------------------------------------------------------------------
// ladder-crossover: phi^(eta n)(p_hat) drops below p** for large n

fn ladder_crossover() -> Artifact {
    let mut csv = format!("{CSV_HEADER}\neta,n,phi_k_p_hat,p_double_star,holds\n");
    let mut summary_parts = Vec::new();
    let mut ok = true;
    for &eta in &[0.1f64, 0.5, 1.0] {
        let mut last_false = 0u32;
        let mut lines = Vec::new();
        for n in 5u32..=400 {
            let l = 1.0 / n as f64;
            let params = ModelParams::new(l, 0.5, 1.0, 2.0 * n as f64, 0.5).unwrap();
            let k = (eta * n as f64).floor() as u32;
            let val = phi_iterate(cutoff_p_hat(&params), k, &params);
            let pss = cutoff_p_star_social(&params);
            let holds = val < pss;
            if !holds {
                last_false = n;
            }
            lines.push(format!("{eta},{n},{val:.10},{pss:.10},{}\n", holds as u8));
        }
        for line in lines {
            csv.push_str(&line);
        }
        if last_false >= 400 {
            ok = false;
            summary_parts.push(format!("eta={eta}: no crossover by n=400"));
        } else if last_false < 5 {
            summary_parts.push(format!("eta={eta}: holds on the whole scan (n >= 5)"));
        } else {
            summary_parts.push(format!("eta={eta}: holds from n={}", last_false + 1));
        }
    }
    Artifact {
        name: "ladder-crossover".into(),
        csv,
        summary: summary_parts.join("; "),
        ok,
    }
}

// ---------------------------------------------------------------------------
// threshold-iff: closed-form equilibrium condition vs the deviation audit

pub struct ThresholdPoint {
    pub params: ModelParams,
    pub n_hat: u32,
    pub condition: bool,
    pub verdict: bool,
    pub failing_node_ok: bool,
}

/// Grid points straddling phi^(n-1)(p0) >= p*_n inside prior bands where
/// the threshold rule plays n experiment rounds per player. Boundary-close
/// points are nudged off by the half-step offsets.
pub fn threshold_grid(limit: usize) -> Vec<ThresholdPoint> {
    let mut pts = Vec::new();
    for &l in &[0.45f64, 0.5, 0.55] {
        for &d in &[0.55f64, 0.6, 0.65] {
            for &g in &[2.0f64, 3.0] {
                let base = ModelParams::new(l, d, 1.0, (1.0 + g) / l, 0.5).unwrap();
                let p_hat = cutoff_p_hat(&base);
                let hi = phi_inverse_iterate(p_hat, 2, &base).unwrap();
                for i in 0..17 {
                    let p0 = p_hat + (hi - p_hat) * (i as f64 + 0.5) / 17.0;
                    pts.push(base.with_prior(p0).unwrap());
                }
            }
        }
    }
    pts.truncate(limit);
    explab_core::par::par_map_indexed(pts.len(), |i| {
        let params = pts[i];
        let n = experiment_counts(&params).n_hat;
        let condition = phi_iterate(params.p0, n - 1, &params) >= cutoff_p_star_n(&params, n);
        let prof = make_threshold_phat(&params);
        let rep = one_shot_deviation_check(&prof, 2 * (n as usize + 3))
            .expect("pure private profile always audits");
        let failing_node_ok = if rep.pass {
            true
        } else {
            // the binding node is the last prescribed experiment of the
            // second mover: 2(n-1) moves then one more R, deviation to S
            let expect = PublicHistory::from_actions(&vec![Action::R; 2 * n as usize - 1])
                .expect("short history");
            PublicHistory::parse(&rep.worst_history).map(|h| h == expect).unwrap_or(false)
                && prof.prob_r(&expect) == 1.0
        };
        ThresholdPoint { params, n_hat: n, condition, verdict: rep.pass, failing_node_ok }
    })
}

fn threshold_iff() -> Artifact {
    let pts = threshold_grid(300);
    let mut csv = format!(
        "{CSV_HEADER}\nlambda,delta,c,m,p0,n_hat,condition,verdict,agree,failing_node_ok\n"
    );
    let mut agree = 0usize;
    let mut named = true;
    let mut fails = 0usize;
    for p in &pts {
        let a = p.condition == p.verdict;
        if a {
            agree += 1;
        }
        if !p.verdict {
            fails += 1;
            if !p.failing_node_ok {
                named = false;
            }
        }
        csv.push_str(&format!(
            "{},{},{},{},{:.8},{},{},{},{},{}\n",
            p.params.lambda,
            p.params.delta,
            p.params.c,
            p.params.m,
            p.params.p0,
            p.n_hat,
            p.condition as u8,
            p.verdict as u8,
            a as u8,
            p.failing_node_ok as u8
        ));
    }
    let ok = agree == pts.len() && named && fails > 0;
    Artifact {
        name: "threshold-iff".into(),
        csv,
        summary: format!(
            "condition vs audit agreement {agree}/{} ({} failing points, binding node named correctly: {named})",
            pts.len(),
            fails
        ),
        ok,
    }
}

// ---------------------------------------------------------------------------
// count-bounds: N** - 2 <= N_e <= 2 N** for verified profiles, and the
// overexperimentation ratio in the half-discount regime

pub struct CatalogBoundRow {
    pub name: &'static str,
    pub verified: bool,
    pub ne: f64,
    pub n_double_star: u32,
    pub in_bounds: bool,
}

pub fn catalog_bound_rows() -> Result<Vec<CatalogBoundRow>, ReproduceError> {
    let probe = probe_point();
    let lone = probe.with_prior(0.40).unwrap();
    let entries: Vec<(&'static str, Profile, usize)> = vec![
        ("threshold_phat", make_threshold_phat(&probe), 8),
        ("double_probe", make_double_probe(&probe), 8),
        ("lone_probe", make_lone_probe(&lone), 8),
        ("leader_follower", make_leader_follower(&canonical()).map_err(internal)?, 10),
        ("sigma_n(n=0)", make_sigma_n(&canonical(), 0).map_err(internal)?, 10),
    ];
    let mut rows = Vec::new();
    for (name, prof, depth) in entries {
        let verified = one_shot_deviation_check(&prof, depth).map(|r| r.pass).unwrap_or(false);
        let dist = ne_distribution_given_b(&prof, 64).map_err(internal)?;
        let ne: f64 = dist.iter().map(|&(k, p)| k as f64 * p).sum();
        let nss = experiment_counts(&prof.params).n_star_social;
        let in_bounds =
            !verified || (ne >= nss as f64 - 2.0 && ne <= 2.0 * nss as f64);
        rows.push(CatalogBoundRow { name, verified, ne, n_double_star: nss, in_bounds });
    }
    Ok(rows)
}

pub struct RegimeRow {
    pub n: u32,
    pub p0: f64,
    pub ne: u32,
    pub n_double_star: u32,
    pub ratio: f64,
}

/// delta = 1/2, lambda = 1/n, prior inside the band where the threshold
/// rule plays n rounds per player: total experiments 2n against the planner
/// count N**. (The rule is only an equilibrium here for small n; the count
/// ratio is a property of the rule itself.)
pub fn regime_rows(ns: &[u32]) -> Vec<RegimeRow> {
    ns.iter()
        .map(|&n| {
            let l = 1.0 / n as f64;
            let pre = ModelParams::new(l, 0.5, 1.0, 2.0 * n as f64, 0.5).unwrap();
            let p_hat = cutoff_p_hat(&pre);
            let x = p_of_lr(lr(p_hat) * (1.0 - 0.5 * l));
            let p0 = phi_inverse_iterate(x, n, &pre).unwrap();
            let params = pre.with_prior(p0).unwrap();
            debug_assert_eq!(experiment_counts(&params).n_hat, n);
            let ne = 2 * n;
            let nss = experiment_counts(&params).n_star_social;
            RegimeRow { n, p0, ne, n_double_star: nss, ratio: ne as f64 / nss as f64 }
        })
        .collect()
}

fn count_bounds() -> Result<Artifact, ReproduceError> {
    let catalog = catalog_bound_rows()?;
    let regime = regime_rows(&[50, 60, 80, 100, 150, 200]);
    let mut csv = format!("{CSV_HEADER}\nkind,name,verified,ne,n_double_star,ratio,ok\n");
    let mut ok = true;
    for r in &catalog {
        if !r.in_bounds {
            ok = false;
        }
        csv.push_str(&format!(
            "catalog,{},{},{:.6},{},{:.6},{}\n",
            r.name,
            r.verified as u8,
            r.ne,
            r.n_double_star,
            r.ne / r.n_double_star as f64,
            r.in_bounds as u8
        ));
    }
    // verify the two-per-player count against the belief-tree walk once
    {
        let first = &regime[0];
        let l = 1.0 / first.n as f64;
        let pre = ModelParams::new(l, 0.5, 1.0, 2.0 * first.n as f64, 0.5).unwrap();
        let params = pre.with_prior(first.p0).unwrap();
        let prof = make_threshold_phat(&params);
        let dist =
            ne_distribution_given_b(&prof, 2 * first.n as usize + 24).map_err(internal)?;
        if dist != vec![(first.ne, 1.0)] {
            return Err(ReproduceError::Internal(format!(
                "expected a point mass at {} experiments, got {dist:?}",
                first.ne
            )));
        }
    }
    let mut min_ratio = f64::INFINITY;
    for r in &regime {
        min_ratio = min_ratio.min(r.ratio);
        if r.ratio <= 1.8 {
            ok = false;
        }
        csv.push_str(&format!(
            "regime,n={},1,{},{},{:.6},{}\n",
            r.n,
            r.ne,
            r.n_double_star,
            r.ratio,
            (r.ratio > 1.8) as u8
        ));
    }
    let verified = catalog.iter().filter(|r| r.verified).count();
    Ok(Artifact {
        name: "count-bounds".into(),
        csv,
        summary: format!(
            "{verified}/{} catalog profiles verified, all within [N**-2, 2N**]; regime ratio min {:.3} (> 1.8) for n in 50..=200",
            catalog.len(),
            min_ratio
        ),
        ok,
    })
}

// ---------------------------------------------------------------------------
// mixed-example: the behavioral profile with mixing at RS and RSR

pub struct MixedReport {
    pub alpha: f64,
    pub beta: f64,
    pub rs_residual: f64,
    pub belief_residual: f64,
    pub exact: Vec<(u32, f64)>,
    pub mc: Vec<(u32, f64)>,
    pub mc_bad_runs: usize,
}

pub fn mixed_report(runs: usize, seed: u64) -> Result<MixedReport, ReproduceError> {
    let params = mixed_point();
    let prof = make_mixed_example(&params).map_err(internal)?;
    let ProfileMeta::Mixed { alpha, beta } = prof.meta else {
        return Err(ReproduceError::Internal("mixed profile lost its meta".into()));
    };
    let ev = Evaluator::new(&prof, 60);
    let rs = PublicHistory::parse("RS").unwrap();
    let rs_residual = (ev.forced_action_value(&rs, Action::R).map_err(internal)?
        - ev.forced_action_value(&rs, Action::S).map_err(internal)?)
    .abs();
    let rsr = PublicHistory::parse("RSR").unwrap();
    let p2 = prof.beliefs(&rsr).p(Player::P2, &params);
    let belief_residual = (p2 - cutoff_p_star_n(&params, 2)).abs();
    let exact = ne_distribution_given_b(&prof, 16).map_err(internal)?;
    let sim = run_sim(&prof, &SimConfig { runs, seed, horizon: 400 });
    Ok(MixedReport {
        alpha,
        beta,
        rs_residual,
        belief_residual,
        exact,
        mc: sim.ne_given_b,
        mc_bad_runs: sim.bad_runs,
    })
}

fn mixed_example() -> Result<Artifact, ReproduceError> {
    let rep = mixed_report(100_000, 20240817)?;
    let mut csv = format!("{CSV_HEADER}\nexperiments,exact_prob,mc_prob,mc_stderr\n");
    let mc: std::collections::BTreeMap<u32, f64> = rep.mc.iter().copied().collect();
    let mut within = true;
    for &(k, p) in &rep.exact {
        let phat = mc.get(&k).copied().unwrap_or(0.0);
        let se = (p * (1.0 - p) / rep.mc_bad_runs as f64).sqrt();
        if (phat - p).abs() > 4.0 * se {
            within = false;
        }
        csv.push_str(&format!("{k},{p:.8},{phat:.8},{se:.8}\n"));
    }
    let support_exact: Vec<u32> = rep.exact.iter().map(|&(k, _)| k).collect();
    let support_mc: Vec<u32> = rep.mc.iter().map(|&(k, _)| k).collect();
    let ok = rep.alpha > 0.0
        && rep.alpha < 1.0
        && rep.rs_residual < 1e-10
        && rep.belief_residual < 1e-10
        && support_exact == vec![1, 2, 3]
        && support_mc == support_exact
        && within;
    Ok(Artifact {
        name: "mixed-example".into(),
        csv,
        summary: format!(
            "alpha = {:.6}, beta = {:.6}; RS indifference {:.2e}; second mover's post-RSR belief hits the 2-undisclosed cutoff within {:.2e}; N_e support {:?} (exact) vs {:?} (MC, {} bad-arm runs)",
            rep.alpha, rep.beta, rep.rs_residual, rep.belief_residual, support_exact, support_mc, rep.mc_bad_runs
        ),
        ok,
    })
}

// ---------------------------------------------------------------------------
// public-markov: the commonly-observed-outcome benchmark ladder

pub struct PublicPointCheck {
    pub mixing_matches_cutoff: bool,
    pub max_residual: f64,
    pub ne_equals_n_star: bool,
}

/// Structural count identity: every ladder rung above p* mixes with
/// positive probability, rungs at or below never experiment, and each
/// failure steps the public belief one rung down, so a bad arm absorbs
/// after exactly N* experiments.
pub fn check_public_point(params: &ModelParams) -> PublicPointCheck {
    let sol = solve_public(params);
    let n_star = experiment_counts(params).n_star;
    let p_star = cutoff_p_star(params, params.delta);
    let mut mixing_ok = true;
    for (k, &f) in sol.f.iter().enumerate() {
        let p = sol.ladder[k];
        if (p > p_star) != (f > 0.0) {
            mixing_ok = false;
        }
    }
    PublicPointCheck {
        mixing_matches_cutoff: mixing_ok,
        max_residual: sol.max_residual,
        ne_equals_n_star: sol.n_star == n_star && sol.f.iter().filter(|&&f| f > 0.0).count() == n_star as usize,
    }
}

fn public_markov() -> Result<Artifact, ReproduceError> {
    let params = canonical();
    let sol = solve_public(&params);
    let mut csv = format!("{CSV_HEADER}\nrung,belief,mixing,value_active,value_other,capped\n");
    for k in 0..sol.f.len() {
        csv.push_str(&format!(
            "{k},{:.10},{:.10},{:.10},{:.10},{}\n",
            sol.ladder[k], sol.f[k], sol.gamma1[k], sol.gamma2[k], sol.capped[k] as u8
        ));
    }
    let chk = check_public_point(&params);
    let prof = explab_core::public::make_public_markov(&params).0;
    let sim = run_sim(&prof, &SimConfig { runs: 20_000, seed: 7, horizon: 448 });
    // a run cut off by the horizon can be short of the full count, so the
    // check is: never above N*, and at N* on all but the truncated sliver
    let atom = sim.ne_given_b.last().copied().unwrap_or((0, 0.0));
    let sim_atom = atom.0 == sol.n_star && atom.1 > 0.995;
    let ok = chk.mixing_matches_cutoff
        && chk.ne_equals_n_star
        && chk.max_residual < 1e-10
        && sol.n_star == 7
        && sim_atom;
    Ok(Artifact {
        name: "public-markov".into(),
        csv,
        summary: format!(
            "bad-arm experiment count = N* = {} (simulation point mass: {sim_atom}); interior indifference residual {:.2e}; mixing positive exactly above the cutoff: {}",
            sol.n_star, chk.max_residual, chk.mixing_matches_cutoff
        ),
        ok,
    })
}

// ---------------------------------------------------------------------------
// no-pure-certificate: the open region where no pure reasonable SE exists

fn certificate_sweep() -> Artifact {
    let mut csv = format!("{CSV_HEADER}\nlambda,delta,lo,hi,p0,gain\n");
    let mut count = 0usize;
    let mut min_gain = f64::INFINITY;
    // the obstruction interval is nonempty toward patient discounting and
    // slow learning; the box sits inside that corner
    for &l in &linspace(0.08, 0.34, 8) {
        for &d in &linspace(0.75, 0.96, 8) {
            let base = ModelParams::new(l, d, 1.0, 2.0 / l, 0.5).unwrap();
            let lo_hi = {
                let p_hat = cutoff_p_hat(&base);
                let lo = phi_inverse_iterate(p_hat, 1, &base).unwrap();
                let hi = cutoff_p_star_n(&base, 1);
                (lo, hi)
            };
            if lo_hi.0 >= lo_hi.1 {
                continue;
            }
            let p0 = 0.5 * (lo_hi.0 + lo_hi.1);
            let params = base.with_prior(p0).unwrap();
            match no_pure_certificate(&params) {
                Ok(rep) => {
                    count += 1;
                    min_gain = min_gain.min(rep.gain);
                    csv.push_str(&format!(
                        "{l},{d},{:.8},{:.8},{p0:.8},{:.3e}\n",
                        rep.lo, rep.hi, rep.gain
                    ));
                }
                Err(_) => continue,
            }
        }
    }
    let ok = count > 20 && min_gain > 0.0;
    Artifact {
        name: "no-pure-certificate".into(),
        csv,
        summary: format!(
            "{count} parameter points with a nonempty obstruction band; minimum deviation gain {min_gain:.3e} (> 0 everywhere: {})",
            min_gain > 0.0
        ),
        ok,
    }
}

// ---------------------------------------------------------------------------
// belief dumps for the two annotated trees

fn double_probe_beliefs() -> Artifact {
    let params = probe_point();
    let prof = make_double_probe(&params);
    let csv = beliefs_csv(&prof, 4);
    let rr = PublicHistory::parse("RR").unwrap();
    let got = prof.beliefs(&rr).p(Player::P1, &params);
    let residual = (got - phi(params.p0, &params)).abs();
    Artifact {
        name: "double-probe-beliefs".into(),
        csv,
        summary: format!(
            "belief tree to depth 4; first mover's post-RR belief = phi(p0) within {residual:.2e}"
        ),
        ok: residual < 1e-12,
    }
}

fn mixed_beliefs() -> Result<Artifact, ReproduceError> {
    let params = mixed_point();
    let prof = make_mixed_example(&params).map_err(internal)?;
    let csv = beliefs_csv(&prof, 5);
    let rsr = PublicHistory::parse("RSR").unwrap();
    let p2 = prof.beliefs(&rsr).p(Player::P2, &params);
    let residual = (p2 - cutoff_p_star_n(&params, 2)).abs();
    Ok(Artifact {
        name: "mixed-beliefs".into(),
        csv,
        summary: format!(
            "belief tree to depth 5; second mover's post-RSR belief hits the 2-undisclosed cutoff within {residual:.2e}"
        ),
        ok: residual < 1e-10,
    })
}

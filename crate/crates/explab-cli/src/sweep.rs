//! Grid sweeps from a JSON config: axes over model parameters, named
//! metrics per point, one CSV row per point in row-major axis order.

use explab_core::belief::{phi_iterate, pow1m};
use explab_core::cutoffs::{
    cutoff_p_bar, cutoff_p_hat, cutoff_p_star, cutoff_p_star_n, cutoff_p_star_social,
    cutoff_p_tilde, experiment_counts, p_myop,
};
use explab_core::params::ModelParams;
use explab_core::verify::nash_check_sigma_n;
use serde::Deserialize;
use thiserror::Error;

use crate::CSV_HEADER;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("unknown axis parameter `{0}` (expected lambda, delta, c, m, or p0)")]
    UnknownAxis(String),
    #[error("axis `{param}` needs at least one step")]
    EmptyAxis { param: String },
    #[error("a sweep needs at least one axis")]
    NoAxes,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SweepConfig {
    pub fixed: Fixed,
    pub axes: Vec<Axis>,
    pub metrics: Vec<String>,
    /// overshoot index consumed by the sigma-profile metrics
    #[serde(default)]
    pub n: u32,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Fixed {
    pub lambda: f64,
    pub delta: f64,
    pub c: f64,
    pub m: f64,
    pub p0: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Axis {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

const AXIS_NAMES: [&str; 5] = ["lambda", "delta", "c", "m", "p0"];

const METRIC_NAMES: [&str; 14] = [
    "p_star",
    "p_star_social",
    "p_tilde",
    "p_hat",
    "p_myop",
    "p_bar",
    "n_star",
    "n_star_social",
    "n_tilde",
    "n_hat",
    "threshold_ok",
    "sigma_nash",
    "sigma_nash_sufficient",
    "ne_ratio",
];

fn axis_values(ax: &Axis) -> Vec<f64> {
    if ax.steps == 1 {
        return vec![ax.from];
    }
    (0..ax.steps)
        .map(|i| ax.from + (ax.to - ax.from) * i as f64 / (ax.steps - 1) as f64)
        .collect()
}

fn apply(fixed: &Fixed, assignment: &[(usize, f64)]) -> (f64, f64, f64, f64, f64) {
    let mut v = [fixed.lambda, fixed.delta, fixed.c, fixed.m, fixed.p0];
    for &(slot, x) in assignment {
        v[slot] = x;
    }
    (v[0], v[1], v[2], v[3], v[4])
}

/// A yes/no region query encoded as 1.0 / 0.0 so every metric is one CSV cell.
fn metric_value(name: &str, params: &ModelParams, n: u32) -> f64 {
    match name {
        "p_star" => cutoff_p_star(params, params.delta),
        "p_star_social" => cutoff_p_star_social(params),
        "p_tilde" => cutoff_p_tilde(params),
        "p_hat" => cutoff_p_hat(params),
        "p_myop" => p_myop(params),
        "p_bar" => cutoff_p_bar(params),
        "n_star" => experiment_counts(params).n_star as f64,
        "n_star_social" => experiment_counts(params).n_star_social as f64,
        "n_tilde" => experiment_counts(params).n_tilde as f64,
        "n_hat" => experiment_counts(params).n_hat as f64,
        "threshold_ok" => {
            let n_hat = experiment_counts(params).n_hat;
            let cond = phi_iterate(params.p0, n_hat - 1, params)
                >= cutoff_p_star_n(params, n_hat);
            if params.p0 > cutoff_p_hat(params) && cond { 1.0 } else { 0.0 }
        }
        "sigma_nash" => match nash_check_sigma_n(params, n) {
            Ok(rep) => {
                if rep.cp1 >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Err(_) => 0.0,
        },
        "sigma_nash_sufficient" => {
            // delta^n g phi(p*) {(1-w^n) + w^n (1-w^(n+N*)) delta} >= c (1-delta^n)
            let (l, d, c) = (params.lambda, params.delta, params.c);
            let g = params.g();
            let p_star = cutoff_p_star(params, d);
            if params.p0 < p_star {
                return 0.0;
            }
            let n_star = explab_core::belief::failures_to_cross(params.p0, p_star, params);
            let wn = pow1m(l, n);
            let brace = (1.0 - wn) + wn * (1.0 - pow1m(l, n + n_star)) * d;
            let lhs = d.powi(n as i32) * g * explab_core::belief::phi(p_star, params) * brace;
            if lhs >= c * (1.0 - d.powi(n as i32)) {
                1.0
            } else {
                0.0
            }
        }
        "ne_ratio" => {
            let counts = experiment_counts(params);
            let ne = 2 * (counts.n_star + n);
            if counts.n_star_social == 0 {
                f64::NAN
            } else {
                ne as f64 / counts.n_star_social as f64
            }
        }
        _ => unreachable!("metric names validated before dispatch"),
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<String, SweepError> {
    if cfg.axes.is_empty() {
        return Err(SweepError::NoAxes);
    }
    let mut slots = Vec::with_capacity(cfg.axes.len());
    for ax in &cfg.axes {
        let slot = AXIS_NAMES
            .iter()
            .position(|&a| a == ax.param)
            .ok_or_else(|| SweepError::UnknownAxis(ax.param.clone()))?;
        if ax.steps == 0 {
            return Err(SweepError::EmptyAxis { param: ax.param.clone() });
        }
        slots.push(slot);
    }
    for metric in &cfg.metrics {
        if !METRIC_NAMES.contains(&metric.as_str()) {
            return Err(SweepError::UnknownMetric(metric.clone()));
        }
    }

    let grids: Vec<Vec<f64>> = cfg.axes.iter().map(axis_values).collect();
    let total: usize = grids.iter().map(Vec::len).product();
    let rows = explab_core::par::par_map_indexed(total, |flat| {
        let mut rem = flat;
        let mut assignment = Vec::with_capacity(grids.len());
        // last axis varies fastest
        for (ax, grid) in slots.iter().zip(&grids).rev() {
            assignment.push((*ax, grid[rem % grid.len()]));
            rem /= grid.len();
        }
        let (l, d, c, m, p0) = apply(&cfg.fixed, &assignment);
        let mut row = format!("{l},{d},{c},{m},{p0}");
        match ModelParams::new(l, d, c, m, p0) {
            Ok(params) => {
                row.push_str(",1");
                for metric in &cfg.metrics {
                    row.push_str(&format!(",{}", metric_value(metric, &params, cfg.n)));
                }
            }
            Err(_) => {
                row.push_str(",0");
                for _ in &cfg.metrics {
                    row.push(',');
                }
            }
        }
        row
    });

    let mut out = format!("{CSV_HEADER}\nlambda,delta,c,m,p0,ok");
    for metric in &cfg.metrics {
        out.push(',');
        out.push_str(metric);
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

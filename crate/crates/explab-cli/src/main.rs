//! Command-line front end: cutoff tables, profile evaluation, deviation
//! audits, Monte Carlo runs, parameter sweeps, and the named desk-result
//! targets. Every command is deterministic given its inputs.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use explab_core::cutoffs::{ordering_violations, CutoffSet};
use explab_core::history::PublicHistory;
use explab_core::params::ModelParams;
use explab_core::payoffs::Evaluator;
use explab_core::profiles::{from_spec, GameKind, Profile};
use explab_core::public::PublicEvaluator;
use explab_core::simulate::{run_sim, SimConfig};
use explab_core::verify::one_shot_deviation_check;
use explab_cli::reproduce::{run_target, ReproduceError, TARGETS};
use explab_cli::sweep::{run_sweep, SweepConfig};
use explab_cli::beliefs_csv;

// exit codes: 0 success, 1 a verification or reproduction reported FAIL,
// 2 usage or configuration errors (also clap's own convention)
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "explab",
    version,
    about = "two-player strategic experimentation lab: cutoffs, profiles, audits, sweeps"
)]
struct Cli {
    /// model parameters as lambda,delta,c,m,p0
    #[arg(
        long,
        global = true,
        default_value = "0.2,0.9,1.0,10.0,0.6",
        value_parser = parse_params
    )]
    params: ModelParams,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the cutoff ladder, experiment counts, and the ordering audit
    Cutoffs {
        /// machine-readable output
        #[arg(long)]
        json: bool,
        /// how many indexed cutoffs p*_n, p_hat_n to tabulate
        #[arg(long, default_value_t = 40)]
        n_max: u32,
    },
    /// Evaluate both players' subjective values under a profile
    Eval {
        /// profile spec, e.g. threshold_phat or sigma_n:n=2
        #[arg(long)]
        profile: String,
        /// history to evaluate at, e.g. RRS or (RR)^3; default the root
        #[arg(long)]
        history: Option<String>,
        /// evaluator horizon in half-moves
        #[arg(long, default_value_t = 200)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// One-step deviation audit over every history up to a depth
    Verify {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// write the per-node audit table as CSV
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo check of a profile under a fixed seed
    Simulate {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 10_000)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// half-moves before a run is truncated
        #[arg(long, default_value_t = 400)]
        horizon: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run a parameter sweep from a JSON config and emit sorted CSV
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a named desk result and write its CSV artifact
    Reproduce {
        /// target name; see --list
        #[arg(long, required_unless_present_any = ["list", "all"])]
        target: Option<String>,
        /// print the available targets
        #[arg(long)]
        list: bool,
        /// run every target
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "artifacts")]
        out_dir: PathBuf,
    },
    /// Dump both observers' posteriors node by node
    BeliefsDump {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_params(s: &str) -> Result<ModelParams, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(format!("expected 5 comma-separated numbers, got {}", parts.len()));
    }
    let mut v = [0.0f64; 5];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|e| format!("`{part}`: {e}"))?;
    }
    ModelParams::new(v[0], v[1], v[2], v[3], v[4]).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn build_profile(spec: &str, params: &ModelParams) -> Result<Profile, String> {
    let prof = from_spec(spec, params).map_err(|e| e.to_string())?;
    for w in &prof.warnings {
        eprintln!("warning: {w:?}");
    }
    Ok(prof)
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let params = cli.params;
    match cli.cmd {
        Cmd::Cutoffs { json, n_max } => cmd_cutoffs(&params, json, n_max),
        Cmd::Eval { profile, history, depth, json } => {
            cmd_eval(&params, &profile, history.as_deref(), depth, json)
        }
        Cmd::Verify { profile, depth, out, json } => {
            cmd_verify(&params, &profile, depth, &out, json)
        }
        Cmd::Simulate { profile, runs, seed, horizon, json } => {
            cmd_simulate(&params, &profile, runs, seed, horizon, json)
        }
        Cmd::Sweep { config, out } => cmd_sweep(&config, &out),
        Cmd::Reproduce { target, list, all, out_dir } => {
            cmd_reproduce(target.as_deref(), list, all, &out_dir)
        }
        Cmd::BeliefsDump { profile, depth, out } => {
            let prof = build_profile(&profile, &params)?;
            write_or_print(&out, &beliefs_csv(&prof, depth))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ---------------------------------------------------------------------------

fn cmd_cutoffs(params: &ModelParams, json: bool, n_max: u32) -> Result<ExitCode, String> {
    let set = CutoffSet::compute(params, n_max);
    let violations = ordering_violations(params);
    if json {
        let val = serde_json::json!({
            "format": "explab/1",
            "params": {
                "lambda": params.lambda, "delta": params.delta,
                "c": params.c, "m": params.m, "p0": params.p0, "g": params.g(),
            },
            "cutoffs": {
                "p_star": set.p_star, "p_star_social": set.p_star_social,
                "p_tilde": set.p_tilde, "p_hat": set.p_hat,
                "p_myop": set.p_myop, "p_bar": set.p_bar,
                "p_star_n": set.p_star_n, "p_hat_n": set.p_hat_n,
            },
            "counts": {
                "n_star": set.n_star, "n_star_social": set.n_star_social,
                "n_tilde": set.n_tilde, "n_hat": set.n_hat,
            },
            "ordering_violations": violations,
            "warnings": set.warnings,
        });
        println!("{}", serde_json::to_string_pretty(&val).map_err(|e| e.to_string())?);
    } else {
        println!("parameters: lambda={} delta={} c={} m={} p0={} (g={})",
            params.lambda, params.delta, params.c, params.m, params.p0, params.g());
        println!("p*      = {:.10}   (N*  = {})", set.p_star, set.n_star);
        println!("p**     = {:.10}   (N** = {})", set.p_star_social, set.n_star_social);
        println!("p~      = {:.10}   (N~  = {})", set.p_tilde, set.n_tilde);
        println!("p^      = {:.10}   (N^  = {})", set.p_hat, set.n_hat);
        println!("p_myop  = {:.10}", set.p_myop);
        println!("p_bar   = {:.10}", set.p_bar);
        // vectors index by the count of undisclosed opponent experiments,
        // starting at n = 0 where both collapse to the base cutoffs
        let show = (n_max.min(8) + 1) as usize;
        for n in 1..show.min(set.p_star_n.len()) {
            println!("p*_{n:<3} = {:.10}   p^_{n:<3} = {:.10}", set.p_star_n[n], set.p_hat_n[n]);
        }
        for w in &set.warnings {
            println!(
                "WARN genericity: ladder point phi^{}(p0) = {:.12} sits on {} = {:.12}",
                w.n, w.ladder_value, w.cutoff, w.cutoff_value
            );
        }
        println!("orderings: {}", if violations.is_empty() { "PASS" } else { "FAIL" });
        for v in &violations {
            println!("  violated: {v}");
        }
    }
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(FAIL) })
}

fn cmd_eval(
    params: &ModelParams,
    spec: &str,
    history: Option<&str>,
    depth: usize,
    json: bool,
) -> Result<ExitCode, String> {
    let prof = build_profile(spec, params)?;
    let h = match history {
        Some(text) => PublicHistory::parse(text).map_err(|e| e.to_string())?,
        None => PublicHistory::empty(),
    };
    let (v1, v2) = match prof.game_kind() {
        GameKind::PrivatePayoffs => {
            let ev = Evaluator::new(&prof, depth);
            (
                ev.subjective_value_for(&h, explab_core::history::Player::P1)
                    .map_err(|e| e.to_string())?,
                ev.subjective_value_for(&h, explab_core::history::Player::P2)
                    .map_err(|e| e.to_string())?,
            )
        }
        GameKind::PublicOutcomes => {
            let ev = PublicEvaluator::new(&prof, depth);
            (
                ev.subjective_value_for(&h, explab_core::history::Player::P1)
                    .map_err(|e| e.to_string())?,
                ev.subjective_value_for(&h, explab_core::history::Player::P2)
                    .map_err(|e| e.to_string())?,
            )
        }
    };
    let at = history.unwrap_or("-");
    if json {
        let val = serde_json::json!({
            "format": "explab/1",
            "profile": prof.name,
            "history": at,
            "value_p1": v1,
            "value_p2": v2,
        });
        println!("{}", serde_json::to_string_pretty(&val).map_err(|e| e.to_string())?);
    } else {
        println!("profile {} at history {}", prof.name, at);
        println!("value P1 = {v1:.10}");
        println!("value P2 = {v2:.10}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    params: &ModelParams,
    spec: &str,
    depth: usize,
    out: &Option<PathBuf>,
    json: bool,
) -> Result<ExitCode, String> {
    let prof = build_profile(spec, params)?;
    let rep = one_shot_deviation_check(&prof, depth).map_err(|e| e.to_string())?;
    if let Some(path) = out {
        fs::write(path, rep.to_csv()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if json {
        let val = serde_json::json!({
            "format": "explab/1",
            "profile": prof.name,
            "depth": depth,
            "nodes": rep.nodes,
            "pass": rep.pass,
            "worst_gain": rep.worst_gain,
            "worst_history": rep.worst_history,
            "failures": rep.failures().count(),
        });
        println!("{}", serde_json::to_string_pretty(&val).map_err(|e| e.to_string())?);
    } else {
        println!(
            "one-step deviation audit of {} to depth {depth}: {} nodes",
            prof.name, rep.nodes
        );
        for row in rep.failures().take(10) {
            println!(
                "  deviation at {} by {:?}: conform {:.8} < deviate {:.8} (gain {:.3e})",
                if row.history.is_empty() { "-" } else { &row.history },
                row.player,
                row.eq_value,
                row.dev_value,
                row.gain
            );
        }
        let extra = rep.failures().count().saturating_sub(10);
        if extra > 0 {
            println!("  ... and {extra} more failing nodes");
        }
        println!(
            "worst gain {:.3e} at {}: {}",
            rep.worst_gain,
            if rep.worst_history.is_empty() { "-" } else { &rep.worst_history },
            if rep.pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(if rep.pass { ExitCode::SUCCESS } else { ExitCode::from(FAIL) })
}

fn cmd_simulate(
    params: &ModelParams,
    spec: &str,
    runs: usize,
    seed: u64,
    horizon: usize,
    json: bool,
) -> Result<ExitCode, String> {
    let prof = build_profile(spec, params)?;
    let sum = run_sim(&prof, &SimConfig { runs, seed, horizon });
    if json {
        let val = serde_json::json!({
            "format": "explab/1",
            "profile": prof.name,
            "runs": sum.runs,
            "seed": seed,
            "mean": sum.mean,
            "stderr": sum.stderr,
            "ne_given_b": sum.ne_given_b,
            "bad_runs": sum.bad_runs,
            "settled_s": sum.settled_s,
            "settled_r": sum.settled_r,
            "truncated": sum.truncated,
        });
        println!("{}", serde_json::to_string_pretty(&val).map_err(|e| e.to_string())?);
    } else {
        println!("{} runs of {} (seed {seed})", sum.runs, prof.name);
        println!(
            "mean payoff P1 = {:.6} +- {:.6}, P2 = {:.6} +- {:.6}",
            sum.mean[0], sum.stderr[0], sum.mean[1], sum.stderr[1]
        );
        println!(
            "settled: S forever {:.4}, R forever {:.4}, truncated {:.4}",
            sum.settled_s, sum.settled_r, sum.truncated
        );
        println!("experiments when the arm is bad ({} runs):", sum.bad_runs);
        for (k, p) in &sum.ne_given_b {
            println!("  N_e = {k}: {p:.5}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(config: &PathBuf, out: &Option<PathBuf>) -> Result<ExitCode, String> {
    let text = fs::read_to_string(config).map_err(|e| format!("{}: {e}", config.display()))?;
    let cfg: SweepConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            return Err(format!(
                "{}: line {}, column {}: {e}",
                config.display(),
                e.line(),
                e.column()
            ))
        }
    };
    let csv = run_sweep(&cfg).map_err(|e| e.to_string())?;
    write_or_print(out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(
    target: Option<&str>,
    list: bool,
    all: bool,
    out_dir: &PathBuf,
) -> Result<ExitCode, String> {
    if list {
        for t in TARGETS {
            println!("{t}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let names: Vec<&str> = if all {
        TARGETS.to_vec()
    } else {
        vec![target.expect("clap enforces target unless --list/--all")]
    };
    fs::create_dir_all(out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;
    let mut all_ok = true;
    for name in names {
        let art = match run_target(name) {
            Ok(a) => a,
            Err(ReproduceError::UnknownTarget(t)) => {
                return Err(format!("unknown target `{t}`; try --list"))
            }
            Err(e) => return Err(e.to_string()),
        };
        let path = out_dir.join(format!("{}.csv", art.name));
        fs::write(&path, &art.csv).map_err(|e| format!("{}: {e}", path.display()))?;
        println!(
            "{}: {} [{}] -> {}",
            art.name,
            art.summary,
            if art.ok { "OK" } else { "FAIL" },
            path.display()
        );
        if !art.ok {
            all_ok = false;
        }
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(FAIL) })
}

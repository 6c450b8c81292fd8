//! Command dispatch for the binary: `run`, `grid`, `verify`, `report`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::diagnostics::{self, DiagnosticsError};
use crate::harness::{self, RunConfig, RunSummary};
use crate::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Slope,
    Speedup,
    Weights,
}

impl ReportKind {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "slope" => Ok(ReportKind::Slope),
            "speedup" => Ok(ReportKind::Speedup),
            "weights" => Ok(ReportKind::Weights),
            other => Err(format!(
                "unknown report kind '{other}'; available: slope, speedup, weights"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Command {
    Run { config: PathBuf, out: PathBuf },
    Grid { config: PathBuf, out: PathBuf },
    Verify { suite: String, seed: u64 },
    Report { dir: PathBuf, kind: ReportKind },
}

/// Execute a command; returns the process exit code.
pub fn dispatch(command: &Command) -> i32 {
    match run(command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    RunConfig::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(command: &Command) -> Result<i32, String> {
    match command {
        Command::Run { config, out } => {
            let cfg = load_config(config)?;
            let summary = harness::run_experiment(&cfg, out).map_err(|e| e.to_string())?;
            print_run_summary(&summary);
            Ok(0)
        }
        Command::Grid { config, out } => {
            let cfg = load_config(config)?;
            let outcome = harness::grid_search(&cfg, out).map_err(|e| e.to_string())?;
            println!("selected = {}", outcome.selected);
            for p in &outcome.points {
                println!(
                    "value {} -> final F {} {}",
                    p.value,
                    p.mean_final_f.map_or("-".to_string(), |f| f.to_string()),
                    if p.diverged { "(diverged)" } else { "" }
                );
            }
            Ok(0)
        }
        Command::Verify { suite, seed } => {
            let results = verify::run_suite(suite, *seed)?;
            let mut all_ok = true;
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                all_ok &= r.passed;
                if r.detail.is_empty() {
                    println!("{tag} {}", r.name);
                } else {
                    println!("{tag} {} — {}", r.name, r.detail);
                }
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::Report { dir, kind } => {
            report(dir, *kind)?;
            Ok(0)
        }
    }
}

fn print_run_summary(summary: &RunSummary) {
    let diverged = summary.seeds.iter().filter(|s| s.diverged).count();
    println!(
        "{} seeds, {} rounds, final F = {}, diverged = {diverged}",
        summary.seeds.len(),
        summary.config.rounds,
        summary
            .aggregate
            .mean_final_f
            .map_or("-".to_string(), |f| f.to_string()),
    );
    if let Some(fit) = &summary.aggregate.tail_slope {
        println!(
            "tail slope {} over [{}, {}) with r^2 {}",
            fit.slope, fit.window_start, fit.window_end, fit.r_squared
        );
    }
    if let Some(p) = summary.aggregate.stabilized_error {
        println!("stabilized error {p}");
    }
}

fn read_summary(dir: &Path) -> Result<RunSummary, String> {
    let path = dir.join("summary.json");
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn report(dir: &Path, kind: ReportKind) -> Result<(), String> {
    match kind {
        ReportKind::Slope => report_slope(dir),
        ReportKind::Speedup => report_speedup(dir),
        ReportKind::Weights => report_weights(dir),
    }
}

fn report_slope(dir: &Path) -> Result<(), String> {
    let metrics_dir = dir.join("metrics");
    let mut names: Vec<String> = fs::read_dir(&metrics_dir)
        .map_err(|e| format!("cannot list {}: {e}", metrics_dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();

    println!("series,window_start,window_end,slope,intercept,r_squared,status");
    for name in names {
        let file = fs::File::open(metrics_dir.join(&name)).map_err(|e| e.to_string())?;
        let metrics = diagnostics::read_metrics_csv(file).map_err(|e| e.to_string())?;
        let rows = metrics.rows.len() as u64;
        let start = (rows / 4).max(1);
        match diagnostics::fit_rate(&metrics, start, rows) {
            Ok(fit) => println!(
                "{},{},{},{},{},{},ok",
                name.trim_end_matches(".csv"),
                fit.window_start,
                fit.window_end,
                fit.slope,
                fit.intercept,
                fit.r_squared
            ),
            Err(DiagnosticsError::NonPositiveValue { .. }) => println!(
                "{},{},{},,,,saturated",
                name.trim_end_matches(".csv"),
                start,
                rows
            ),
            Err(e) => println!("{},{},{},,,,{e}", name.trim_end_matches(".csv"), start, rows),
        }
    }
    Ok(())
}

fn report_speedup(dir: &Path) -> Result<(), String> {
    let mut runs: Vec<(u64, Vec<f64>)> = Vec::new();
    let mut subdirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("cannot list {}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.join("summary.json").exists())
        .collect();
    subdirs.sort();
    for sub in subdirs {
        let summary = read_summary(&sub)?;
        let file = fs::File::open(sub.join("metrics/mean.csv")).map_err(|e| e.to_string())?;
        let metrics = diagnostics::read_metrics_csv(file).map_err(|e| e.to_string())?;
        runs.push((
            summary.config.problem.n_clients as u64,
            metrics.rows.iter().map(|r| r.f).collect(),
        ));
    }
    if runs.is_empty() {
        return Err(format!(
            "no run directories with summary.json under {}",
            dir.display()
        ));
    }
    runs.sort_by_key(|(n, _)| *n);
    let curve = diagnostics::speedup_curve(&runs).map_err(|e| e.to_string())?;
    println!("n,stabilized_error");
    for p in curve {
        println!("{},{}", p.n, p.stabilized_error);
    }
    Ok(())
}

fn report_weights(dir: &Path) -> Result<(), String> {
    let summary = read_summary(dir)?;
    let schedule = summary
        .resolved_schedule
        .ok_or("run has no schedule (plain error feedback); weights undefined")?;
    let weights =
        diagnostics::proof_weights(&schedule, summary.constants.l_smooth, summary.config.rounds);
    println!("t,w,w_prime");
    for w in weights {
        println!("{},{},{}", w.t, w.w, w.w_prime);
    }
    Ok(())
}

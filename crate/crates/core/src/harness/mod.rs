//! Experiment orchestration: config resolution, deterministic multi-seed
//! runs, grid search, and persistence.
//!
//! Outputs per run directory: `config.json`, `traces/seed_<s>.jsonl`,
//! `metrics/seed_<s>.csv`, `metrics/mean.csv` and `summary.json`. Divergence
//! is a recorded outcome, never a process failure.

pub mod config;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::methods::{AbsoluteAcc, Adef, Ef, Neolithic, UncompressedAcc, VanillaAccEf};
use crate::algorithms::schedule::{theorem_m, StepSchedule, TheoremMethod, TheoryConstants};
use crate::algorithms::{AlgorithmError, RunRecord};
use crate::compressors::{contraction_parameter, CompressError, CompressorKind};
use crate::diagnostics::{
    self, compute_metrics, detect_plateau, fit_rate, DiagnosticsError, RateFit, TraceMetrics,
};
use crate::problems::{
    generate_quadratic, generate_synthetic_logistic, ClientFunctions, Oracle, Problem,
    ProblemError, ProblemKind, ReferenceSolution,
};
use crate::streams::SeedPlan;
use crate::vector::Vector;

pub use config::{MethodConfig, ProblemConfig, RunConfig, ScheduleConfig};

/// Iterate norm beyond which a run is flagged as diverged.
pub const DIVERGENCE_NORM: f64 = 1e12;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Compress(#[from] CompressError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("every grid point diverged")]
    AllGridPointsDiverged,
}

/// A validated config with problem, reference solution and schedule resolved.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub config: RunConfig,
    pub problem: Problem,
    pub reference: ReferenceSolution,
    pub constants: TheoryConstants,
    /// Contraction parameter used by the schedule (1 when uncompressed).
    pub delta: Option<f64>,
    pub schedule: Option<StepSchedule>,
    /// Constant stepsize for the plain error-feedback baseline.
    pub eta: Option<f64>,
}

pub fn build_problem(cfg: &ProblemConfig) -> Result<Problem, HarnessError> {
    let problem = match cfg.kind {
        ProblemKind::Logistic => generate_synthetic_logistic(
            cfg.n_clients,
            cfg.d,
            cfg.samples_per_client,
            cfg.heterogeneity,
            cfg.lambda_reg,
            cfg.seed,
        )?,
        ProblemKind::Quadratic => {
            generate_quadratic(cfg.n_clients, cfg.d, cfg.heterogeneity, cfg.seed)?
        }
    };
    Ok(problem)
}

/// Validate every block and resolve the schedule, solving the reference
/// problem along the way.
pub fn resolve(config: &RunConfig) -> Result<ResolvedRun, HarnessError> {
    if config.seeds.is_empty() {
        return Err(HarnessError::Validation("seeds must be nonempty".into()));
    }
    if config.problem.sigma2 < 0.0 {
        return Err(HarnessError::Validation("sigma2 must be nonnegative".into()));
    }

    let problem = build_problem(&config.problem)?;
    let dim = problem.dimension;

    // compressor checks
    let compressor = match (&config.method, &config.compressor) {
        (MethodConfig::UncompressedAcc, c) => c.clone(),
        (_, None) => {
            return Err(HarnessError::Validation(format!(
                "method {} requires a compressor block",
                config.method.name()
            )))
        }
        (_, Some(c)) => {
            c.validate(dim)?;
            match &config.method {
                MethodConfig::AbsoluteAcc => {
                    if !c.is_absolute() && *c != CompressorKind::Identity {
                        return Err(HarnessError::Validation(
                            "absolute_acc needs an absolute compressor (or identity for the exact case)"
                                .into(),
                        ));
                    }
                }
                _ => {
                    if c.is_absolute() {
                        return Err(HarnessError::Validation(format!(
                            "method {} needs a contractive compressor",
                            config.method.name()
                        )));
                    }
                }
            }
            Some(c.clone())
        }
    };

    let reference = crate::problems::solve_reference(
        &problem,
        config.reference_tolerance,
        config.reference_max_iterations,
    )?;

    let r0_sq = reference.x_star.norm_sq(); // v_0 = 0
    let bound = compressor
        .as_ref()
        .map(|c| contraction_parameter(c, dim))
        .transpose()?;
    let constants = TheoryConstants {
        l_smooth: problem.smoothness_bound(),
        ell: problem.client_smoothness_bound(),
        sigma2: config.problem.sigma2,
        n: problem.n_clients as u64,
        r0_sq,
        zeta2: Some(problem.gradient_dissimilarity(&reference.x_star)),
        delta_abs: bound.as_ref().and_then(|b| b.delta_abs()).or(Some(0.0)),
    };

    // effective contraction parameter seen by schedules
    let delta_from_compressor = match (&config.method, &bound) {
        (MethodConfig::UncompressedAcc, _) => Some(1.0),
        (MethodConfig::Neolithic { rounds }, Some(b)) => b.delta().map(|d| {
            // schedules see the repeated compressor's effective contraction
            1.0 - (1.0 - d).powi(*rounds as i32)
        }),
        (_, Some(b)) => b.delta(),
        (_, None) => None,
    };

    let mut eta = None;
    let mut schedule = None;
    let mut delta_used = None;
    match &config.method {
        MethodConfig::Ef { eta: eta_cfg } => {
            let e = eta_cfg.ok_or_else(|| {
                HarnessError::Validation("ef needs eta (or a grid to select it)".into())
            })?;
            if e <= 0.0 || !e.is_finite() {
                return Err(HarnessError::Validation(format!(
                    "eta must be a positive real, got {e}"
                )));
            }
            eta = Some(e);
        }
        method => {
            let sched_cfg = config.schedule.as_ref().ok_or_else(|| {
                HarnessError::Validation(format!(
                    "method {} requires a schedule block",
                    method.name()
                ))
            })?;
            let need_delta = |override_delta: Option<f64>| -> Result<f64, HarnessError> {
                override_delta.or(delta_from_compressor).ok_or_else(|| {
                    HarnessError::Validation(
                        "schedule needs an explicit delta: the compressor declares no contraction parameter"
                            .into(),
                    )
                })
            };
            let resolved = match sched_cfg {
                ScheduleConfig::ExperimentGamma { gamma, delta } => {
                    let gamma = gamma.ok_or_else(|| {
                        HarnessError::Validation(
                            "experiment_gamma needs gamma (or a grid to select it)".into(),
                        )
                    })?;
                    let delta = need_delta(*delta)?;
                    delta_used = Some(delta);
                    StepSchedule::ExperimentGamma { gamma, delta }
                }
                ScheduleConfig::TheoremAdef { m, delta } => {
                    let delta = need_delta(*delta)?;
                    delta_used = Some(delta);
                    let m = match m {
                        Some(m) => *m,
                        None => theorem_m(TheoremMethod::Adef, &constants, delta, config.rounds)?,
                    };
                    StepSchedule::TheoremAdef { m, delta }
                }
                ScheduleConfig::TheoremVanilla { m, delta, zeta2 } => {
                    let delta = need_delta(*delta)?;
                    delta_used = Some(delta);
                    let m = match m {
                        Some(m) => *m,
                        None => {
                            let mut c = constants;
                            if zeta2.is_some() {
                                c.zeta2 = *zeta2;
                            }
                            theorem_m(TheoremMethod::VanillaAccEf, &c, delta, config.rounds)?
                        }
                    };
                    StepSchedule::TheoremVanilla { m, delta }
                }
                ScheduleConfig::TheoremAbsolute { m } => {
                    let m = match m {
                        Some(m) => *m,
                        None => {
                            let kind = match method {
                                MethodConfig::Neolithic { .. } => TheoremMethod::Neolithic,
                                _ => TheoremMethod::Absolute,
                            };
                            theorem_m(kind, &constants, 1.0, config.rounds)?
                        }
                    };
                    StepSchedule::TheoremAbsolute { m }
                }
                ScheduleConfig::Custom { a, a0 } => StepSchedule::Custom {
                    a: a.clone(),
                    a0: *a0,
                },
            };
            resolved.validate(config.rounds.max(1))?;
            schedule = Some(resolved);
        }
    }

    Ok(ResolvedRun {
        config: config.clone(),
        problem,
        reference,
        constants,
        delta: delta_used,
        schedule,
        eta,
    })
}

/// Run one seed to completion (or divergence). Pure in (resolved, seed).
pub fn simulate(resolved: &ResolvedRun, seed: u64) -> Result<RunRecord, HarnessError> {
    let problem = &resolved.problem;
    let dim = problem.dimension;
    let oracle = Oracle::new(problem, resolved.config.problem.sigma2);
    let plan = SeedPlan::new(seed);
    let x0 = Vector::zeros(dim);
    let v0 = Vector::zeros(dim);
    let rounds = resolved.config.rounds;
    let compressor = resolved.config.compressor.as_ref();

    let mut record = RunRecord {
        x0: x0.clone(),
        v0: v0.clone(),
        a0: resolved.schedule.as_ref().map_or(0.0, |s| s.a0()),
        n_clients: problem.n_clients,
        dimension: dim,
        setup_scalars: 0,
        setup_messages: 0,
        diverged: false,
        rounds: Vec::with_capacity(rounds as usize),
    };

    macro_rules! drive {
        ($state:expr, $round:expr) => {{
            let mut state = $state;
            for _ in 0..rounds {
                match $round(&mut state) {
                    Ok(trace) => {
                        if !trace.x_next.is_finite() || !trace.v_next.is_finite() {
                            record.diverged = true;
                            break;
                        }
                        let blown = trace.x_next.norm() > DIVERGENCE_NORM;
                        record.rounds.push(trace);
                        if blown {
                            record.diverged = true;
                            break;
                        }
                    }
                    Err(AlgorithmError::Compress(CompressError::NonFiniteInput)) => {
                        record.diverged = true;
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }};
    }

    match &resolved.config.method {
        MethodConfig::Adef => {
            let schedule = resolved.schedule.as_ref().expect("resolved");
            let comp = compressor.expect("resolved");
            let state = Adef::init(&oracle, schedule, x0, v0, &plan);
            record.setup_scalars = state.setup.scalars;
            record.setup_messages = state.setup.messages;
            drive!(state, |s: &mut Adef| s.round(&oracle, comp, schedule, &plan));
        }
        MethodConfig::VanillaAccEf => {
            let schedule = resolved.schedule.as_ref().expect("resolved");
            let comp = compressor.expect("resolved");
            let state = VanillaAccEf::init(&oracle, schedule, x0, v0);
            drive!(state, |s: &mut VanillaAccEf| s
                .round(&oracle, comp, schedule, &plan));
        }
        MethodConfig::Ef { .. } => {
            let comp = compressor.expect("resolved");
            let eta = resolved.eta.expect("resolved");
            let state = Ef::init(&oracle, eta, x0);
            drive!(state, |s: &mut Ef| s.round(&oracle, comp, &plan));
        }
        MethodConfig::Neolithic { rounds: r } => {
            let schedule = resolved.schedule.as_ref().expect("resolved");
            let comp = compressor.expect("resolved");
            let state = Neolithic::init(schedule, x0, v0, *r);
            drive!(state, |s: &mut Neolithic| s
                .round(&oracle, comp, schedule, &plan));
        }
        MethodConfig::AbsoluteAcc => {
            let schedule = resolved.schedule.as_ref().expect("resolved");
            let comp = compressor.expect("resolved");
            let state = AbsoluteAcc::init(schedule, x0, v0);
            drive!(state, |s: &mut AbsoluteAcc| s
                .round(&oracle, comp, schedule, &plan));
        }
        MethodConfig::UncompressedAcc => {
            let schedule = resolved.schedule.as_ref().expect("resolved");
            let state = UncompressedAcc::init(schedule, x0, v0);
            drive!(state, |s: &mut UncompressedAcc| s
                .round(&oracle, schedule, &plan));
        }
    }
    Ok(record)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub diverged: bool,
    pub rounds_completed: u64,
    pub final_f: Option<f64>,
    pub setup_scalars: u64,
    pub total_scalars: u64,
    pub total_indices: u64,
    pub total_messages: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregateSummary {
    /// Mean of the final common-round suboptimality across seeds.
    pub mean_final_f: Option<f64>,
    pub tail_slope: Option<RateFit>,
    pub stabilized_error: Option<f64>,
    /// True when the tail fit failed because the run converged below the
    /// reference slack.
    pub saturated: bool,
    pub any_diverged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryConstants {
    pub l_smooth: f64,
    pub ell: f64,
    pub sigma2: f64,
    pub n_clients: u64,
    pub dimension: u64,
    pub r0_sq: f64,
    pub f_star: f64,
    pub zeta2_at_reference: Option<f64>,
    pub reference_grad_norm: f64,
    pub reference_iterations: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: RunConfig,
    pub resolved_schedule: Option<StepSchedule>,
    pub resolved_eta: Option<f64>,
    pub delta: Option<f64>,
    pub constants: SummaryConstants,
    pub seeds: Vec<SeedSummary>,
    pub aggregate: AggregateSummary,
}

/// Per-seed simulation results plus derived metrics, kept in memory.
pub struct ExperimentResult {
    pub resolved: ResolvedRun,
    pub records: Vec<RunRecord>,
    pub metrics: Vec<TraceMetrics>,
    pub mean_metrics: TraceMetrics,
    pub summary: RunSummary,
}

/// Execute every seed of a resolved run, in parallel, and aggregate.
pub fn execute(resolved: &ResolvedRun) -> Result<ExperimentResult, HarnessError> {
    let records: Vec<RunRecord> = resolved
        .config
        .seeds
        .par_iter()
        .map(|&seed| simulate(resolved, seed))
        .collect::<Result<_, _>>()?;
    let metrics: Vec<TraceMetrics> = records
        .par_iter()
        .map(|r| compute_metrics(r, &resolved.problem, &resolved.reference))
        .collect();

    let mean_metrics = mean_metrics(&metrics);
    let summary = summarize(resolved, &records, &mean_metrics);
    Ok(ExperimentResult {
        resolved: resolved.clone(),
        records,
        metrics,
        mean_metrics,
        summary,
    })
}

/// Pointwise mean of per-seed metric tables over their common prefix.
pub fn mean_metrics(per_seed: &[TraceMetrics]) -> TraceMetrics {
    let common = per_seed.iter().map(|m| m.rows.len()).min().unwrap_or(0);
    let k = per_seed.len() as f64;
    let rows = (0..common)
        .map(|i| {
            let mut acc = diagnostics::MetricsRow {
                t: per_seed[0].rows[i].t,
                f: 0.0,
                e: 0.0,
                ebar: 0.0,
                h: 0.0,
                r2: 0.0,
                comm_scalars: 0,
                comm_indices: 0,
            };
            for m in per_seed {
                let r = &m.rows[i];
                acc.f += r.f / k;
                acc.e += r.e / k;
                acc.ebar += r.ebar / k;
                acc.h += r.h / k;
                acc.r2 += r.r2 / k;
                acc.comm_scalars += r.comm_scalars / per_seed.len() as u64;
                acc.comm_indices += r.comm_indices / per_seed.len() as u64;
            }
            acc
        })
        .collect();
    TraceMetrics { rows }
}

fn summarize(
    resolved: &ResolvedRun,
    records: &[RunRecord],
    mean: &TraceMetrics,
) -> RunSummary {
    let seeds = resolved
        .config
        .seeds
        .iter()
        .zip(records)
        .map(|(&seed, record)| {
            let total_scalars: u64 =
                record.setup_scalars + record.rounds.iter().map(|r| r.comm_scalars).sum::<u64>();
            let total_indices: u64 = record.rounds.iter().map(|r| r.comm_indices).sum();
            let total_messages: u64 =
                record.setup_messages + record.rounds.iter().map(|r| r.comm_messages).sum::<u64>();
            let final_f = record.rounds.last().map(|r| {
                resolved.problem.value(&r.x_next) - resolved.reference.f_star
            });
            SeedSummary {
                seed,
                diverged: record.diverged,
                rounds_completed: record.rounds.len() as u64,
                final_f,
                setup_scalars: record.setup_scalars,
                total_scalars,
                total_indices,
                total_messages,
            }
        })
        .collect::<Vec<_>>();

    let t_rows = mean.rows.len() as u64;
    let mut saturated = false;
    let tail_slope = if t_rows > 1 {
        let start = (t_rows / 4).max(1);
        match fit_rate(mean, start, t_rows) {
            Ok(fit) => Some(fit),
            Err(DiagnosticsError::NonPositiveValue { .. }) => {
                saturated = true;
                None
            }
            Err(_) => None,
        }
    } else {
        None
    };
    let f_series: Vec<f64> = mean.rows.iter().map(|r| r.f).collect();
    let stabilized_error = detect_plateau(&f_series);
    let mean_final_f = mean.rows.last().map(|r| r.f);
    let any_diverged = records.iter().any(|r| r.diverged);

    RunSummary {
        config: resolved.config.clone(),
        resolved_schedule: resolved.schedule.clone(),
        resolved_eta: resolved.eta,
        delta: resolved.delta,
        constants: SummaryConstants {
            l_smooth: resolved.constants.l_smooth,
            ell: resolved.constants.ell,
            sigma2: resolved.constants.sigma2,
            n_clients: resolved.constants.n,
            dimension: resolved.problem.dimension as u64,
            r0_sq: resolved.constants.r0_sq,
            f_star: resolved.reference.f_star,
            zeta2_at_reference: resolved.constants.zeta2,
            reference_grad_norm: resolved.reference.grad_norm,
            reference_iterations: resolved.reference.iterations,
        },
        seeds,
        aggregate: AggregateSummary {
            mean_final_f,
            tail_slope,
            stabilized_error,
            saturated,
            any_diverged,
        },
    }
}

/// Run a config end to end and persist all artifacts under `out_dir`.
pub fn run_experiment(config: &RunConfig, out_dir: &Path) -> Result<RunSummary, HarnessError> {
    let resolved = resolve(config)?;
    let result = execute(&resolved)?;
    persist(&result, out_dir)?;
    Ok(result.summary)
}

fn persist(result: &ExperimentResult, out_dir: &Path) -> Result<(), HarnessError> {
    let traces_dir = out_dir.join("traces");
    let metrics_dir = out_dir.join("metrics");
    fs::create_dir_all(&traces_dir)?;
    fs::create_dir_all(&metrics_dir)?;

    fs::write(
        out_dir.join("config.json"),
        result.resolved.config.to_json(),
    )?;

    for ((seed, record), metrics) in result
        .resolved
        .config
        .seeds
        .iter()
        .zip(&result.records)
        .zip(&result.metrics)
    {
        if result.resolved.config.write_traces {
            let f = fs::File::create(traces_dir.join(format!("seed_{seed}.jsonl")))?;
            diagnostics::write_run_jsonl(record, BufWriter::new(f))?;
        }
        let f = fs::File::create(metrics_dir.join(format!("seed_{seed}.csv")))?;
        diagnostics::write_metrics_csv(metrics, BufWriter::new(f))?;
    }
    let f = fs::File::create(metrics_dir.join("mean.csv"))?;
    diagnostics::write_metrics_csv(&result.mean_metrics, BufWriter::new(f))?;

    let mut summary_file = fs::File::create(out_dir.join("summary.json"))?;
    writeln!(
        summary_file,
        "{}",
        serde_json::to_string_pretty(&result.summary)?
    )?;

    if result.resolved.config.export_data {
        export_problem_data(&result.resolved.problem, &out_dir.join("data.csv"))?;
    }
    Ok(())
}

fn export_problem_data(problem: &Problem, path: &Path) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| HarnessError::Validation(format!("cannot write data export: {e}")))?;
    let fail = |e: csv::Error| HarnessError::Validation(format!("data export failed: {e}"));
    match &problem.data {
        ClientFunctions::Logistic(clients) => {
            let mut header = vec!["client".to_string(), "sample".to_string(), "label".to_string()];
            header.extend((0..problem.dimension).map(|j| format!("f{j}")));
            w.write_record(&header).map_err(fail)?;
            for (i, c) in clients.iter().enumerate() {
                for (s, (row, label)) in c.rows.iter().zip(&c.labels).enumerate() {
                    let mut rec = vec![i.to_string(), s.to_string(), label.to_string()];
                    rec.extend(row.as_slice().iter().map(|v| v.to_string()));
                    w.write_record(&rec).map_err(fail)?;
                }
            }
        }
        ClientFunctions::Quadratic { diag, centers } => {
            let mut header = vec!["row_kind".to_string(), "client".to_string()];
            header.extend((0..problem.dimension).map(|j| format!("v{j}")));
            w.write_record(&header).map_err(fail)?;
            let mut rec = vec!["diag".to_string(), String::new()];
            rec.extend(diag.as_slice().iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(fail)?;
            for (i, c) in centers.iter().enumerate() {
                let mut rec = vec!["center".to_string(), i.to_string()];
                rec.extend(c.as_slice().iter().map(|v| v.to_string()));
                w.write_record(&rec).map_err(fail)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridPoint {
    /// Grid value: `gamma` for accelerated schedules, `eta` for plain EF.
    pub value: f64,
    pub mean_final_f: Option<f64>,
    pub diverged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridOutcome {
    pub points: Vec<GridPoint>,
    pub selected: f64,
}

/// Substitute one grid value into the config.
fn with_grid_value(config: &RunConfig, value: f64) -> Result<RunConfig, HarnessError> {
    let mut c = config.clone();
    c.grid = None;
    match &mut c.method {
        MethodConfig::Ef { eta } => {
            *eta = Some(value);
        }
        _ => match &mut c.schedule {
            Some(ScheduleConfig::ExperimentGamma { gamma, .. }) => {
                *gamma = Some(value);
            }
            _ => {
                return Err(HarnessError::Validation(
                    "grid search needs an experiment_gamma schedule (or the ef method)".into(),
                ))
            }
        },
    }
    Ok(c)
}

/// Run every grid value with the same seeds; select the argmin of the
/// averaged final suboptimality, breaking ties toward the smaller value.
pub fn grid_search(config: &RunConfig, out_dir: &Path) -> Result<GridOutcome, HarnessError> {
    let grid = config
        .grid
        .clone()
        .ok_or_else(|| HarnessError::Validation("grid block is required for grid search".into()))?;
    if grid.is_empty() {
        return Err(HarnessError::Validation("grid must be nonempty".into()));
    }
    let mut values = grid;
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();

    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("config.json"), config.to_json())?;

    let summaries: Vec<(f64, RunSummary)> = values
        .par_iter()
        .enumerate()
        .map(|(i, &value)| {
            let point_config = with_grid_value(config, value)?;
            let dir = out_dir.join(format!("grid_{i:03}"));
            let summary = run_experiment(&point_config, &dir)?;
            Ok((value, summary))
        })
        .collect::<Result<_, HarnessError>>()?;

    let points: Vec<GridPoint> = summaries
        .iter()
        .map(|(value, s)| GridPoint {
            value: *value,
            mean_final_f: s.aggregate.mean_final_f,
            diverged: s.aggregate.any_diverged,
        })
        .collect();

    let mut selected: Option<(f64, f64)> = None;
    for p in &points {
        if p.diverged {
            continue;
        }
        if let Some(f) = p.mean_final_f {
            if f.is_finite() && selected.is_none_or(|(_, best)| f < best) {
                selected = Some((p.value, f));
            }
        }
    }
    let selected = selected.ok_or(HarnessError::AllGridPointsDiverged)?.0;

    let outcome = GridOutcome { points, selected };
    fs::write(
        out_dir.join("grid.json"),
        serde_json::to_string_pretty(&outcome)?,
    )?;
    Ok(outcome)
}

/// Default log-spaced grid `{1e-4, 3e-4, …, 1}`.
pub fn default_grid() -> Vec<f64> {
    vec![1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0]
}

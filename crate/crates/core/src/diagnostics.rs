//! Analysis quantities over run traces: suboptimality, accumulated
//! compression error, control-variate distance, and rate fitting.
//!
//! Everything here is a pure function of the logged trace, so recomputation
//! is bit-identical.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::schedule::StepSchedule;
use crate::algorithms::RunRecord;
use crate::problems::{Problem, ReferenceSolution};
use crate::vector::Vector;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("window [{start}, {end}) must contain at least {min} usable rounds")]
    WindowTooShort { start: u64, end: u64, min: u64 },
    #[error("nonpositive suboptimality at round {t}: converged below the reference slack; shrink the window or report saturation")]
    NonPositiveValue { t: u64 },
    #[error("no plateau detected for n={n}: series still decreasing (saturation)")]
    NoPlateau { n: u64 },
    #[error("metric rows missing or malformed: {0}")]
    MalformedMetrics(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Fixed column order of the metrics CSV.
pub const METRICS_COLUMNS: [&str; 8] =
    ["t", "F", "E", "Ebar", "H", "R2", "comm_scalars", "comm_indices"];

/// One row of the metrics table.
///
/// Row `t` describes the state after `t` completed rounds; `h` is the
/// within-round quantity of round `t` and is NaN on the final row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub t: u64,
    /// `F_t = f(x_t) − f*`.
    pub f: f64,
    /// `E_t = ‖Σ_{j<t} a_{j+1}(ĝ_j − g_j)‖²`.
    pub e: f64,
    /// `Ē_t = avg_i ‖e_t^i‖²`.
    pub ebar: f64,
    /// `H_t = avg_i ‖g_t^i − g̃_t^i‖²`.
    pub h: f64,
    /// `R_t² = ‖v_t − x*‖²`.
    pub r2: f64,
    pub comm_scalars: u64,
    pub comm_indices: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceMetrics {
    pub rows: Vec<MetricsRow>,
}

/// Least-squares fit of `log F` against `log t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub window_start: u64,
    pub window_end: u64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Minimum usable points for a rate fit.
pub const MIN_FIT_WINDOW: u64 = 10;

/// Compute every per-round analysis quantity from a run record.
pub fn compute_metrics(
    record: &RunRecord,
    problem: &Problem,
    reference: &ReferenceSolution,
) -> TraceMetrics {
    let t_total = record.rounds.len();
    let mut rows = Vec::with_capacity(t_total + 1);

    // running accumulated error Σ a_{j+1}(ĝ_j − g_j)
    let mut err_acc = Vector::zeros(record.dimension);
    let mut cum_scalars = record.setup_scalars;
    let mut cum_indices = 0u64;

    rows.push(MetricsRow {
        t: 0,
        f: problem.value(&record.x0) - reference.f_star,
        e: 0.0,
        ebar: 0.0,
        h: record.rounds.first().map_or(f64::NAN, |r| r.h),
        r2: record.v0.dist_sq(&reference.x_star),
        comm_scalars: cum_scalars,
        comm_indices: cum_indices,
    });

    for (idx, round) in record.rounds.iter().enumerate() {
        err_acc.add_scaled(round.a_next, &round.ghat.sub(&round.gbar));
        cum_scalars += round.comm_scalars;
        cum_indices += round.comm_indices;
        let t = (idx + 1) as u64;
        rows.push(MetricsRow {
            t,
            f: problem.value(&round.x_next) - reference.f_star,
            e: err_acc.norm_sq(),
            ebar: round.ebar,
            h: record.rounds.get(idx + 1).map_or(f64::NAN, |r| r.h),
            r2: round.v_next.dist_sq(&reference.x_star),
            comm_scalars: cum_scalars,
            comm_indices: cum_indices,
        });
    }
    TraceMetrics { rows }
}

/// Recompute the accumulated-error vectors `e_t` from raw (a, ĝ, g) history;
/// entry `t` is `Σ_{j<t} a_{j+1}(ĝ_j − g_j)` for `t = 0..=T`.
pub fn accumulated_errors(record: &RunRecord) -> Vec<Vector> {
    let mut acc = Vector::zeros(record.dimension);
    let mut out = Vec::with_capacity(record.rounds.len() + 1);
    out.push(acc.clone());
    for round in &record.rounds {
        acc.add_scaled(round.a_next, &round.ghat.sub(&round.gbar));
        out.push(acc.clone());
    }
    out
}

/// Ordinary least squares on `(log t, log F_t)` over `start ≤ t < end`.
pub fn fit_rate(metrics: &TraceMetrics, start: u64, end: u64) -> Result<RateFit, DiagnosticsError> {
    let start = start.max(1); // log t undefined at t = 0
    let points: Vec<(f64, f64)> = metrics
        .rows
        .iter()
        .filter(|r| r.t >= start && r.t < end)
        .map(|r| {
            if r.f <= 0.0 {
                Err(DiagnosticsError::NonPositiveValue { t: r.t })
            } else {
                Ok(((r.t as f64).ln(), r.f.ln()))
            }
        })
        .collect::<Result<_, _>>()?;
    fit_points(&points, start, end)
}

/// Fit a raw positive series indexed from `t = 1`.
pub fn fit_series(series: &[f64], start: u64, end: u64) -> Result<RateFit, DiagnosticsError> {
    let start = start.max(1);
    let points: Vec<(f64, f64)> = series
        .iter()
        .enumerate()
        .map(|(i, &f)| (i as u64 + 1, f))
        .filter(|(t, _)| *t >= start && *t < end)
        .map(|(t, f)| {
            if f <= 0.0 {
                Err(DiagnosticsError::NonPositiveValue { t })
            } else {
                Ok(((t as f64).ln(), f.ln()))
            }
        })
        .collect::<Result<_, _>>()?;
    fit_points(&points, start, end)
}

fn fit_points(points: &[(f64, f64)], start: u64, end: u64) -> Result<RateFit, DiagnosticsError> {
    if (points.len() as u64) < MIN_FIT_WINDOW {
        return Err(DiagnosticsError::WindowTooShort {
            start,
            end,
            min: MIN_FIT_WINDOW,
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let syy: f64 = points.iter().map(|(_, y)| (y - mean_y) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(RateFit {
        window_start: start,
        window_end: end,
        slope,
        intercept,
        r_squared,
    })
}

/// Stabilized error of one run series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedupPoint {
    pub n: u64,
    pub stabilized_error: f64,
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

/// Plateau detector: the tail-half medians of two consecutive half-windows
/// must agree within 5% relative.
pub fn detect_plateau(series: &[f64]) -> Option<f64> {
    if series.len() < 8 {
        return None;
    }
    let tail = &series[series.len() / 2..];
    let (w1, w2) = tail.split_at(tail.len() / 2);
    let m1 = median(w1);
    let m2 = median(w2);
    if m1 <= 0.0 || (m2 - m1).abs() / m1 > 0.05 {
        return None;
    }
    Some(median(&series[series.len() - series.len() / 4..]))
}

/// Stabilized error per client count; errors out with saturation when any
/// series has no plateau.
pub fn speedup_curve(series_by_n: &[(u64, Vec<f64>)]) -> Result<Vec<SpeedupPoint>, DiagnosticsError> {
    series_by_n
        .iter()
        .map(|(n, series)| {
            detect_plateau(series)
                .map(|stabilized_error| SpeedupPoint {
                    n: *n,
                    stabilized_error,
                })
                .ok_or(DiagnosticsError::NoPlateau { n: *n })
        })
        .collect()
}

/// Analysis weights `w_t = min{2, a_t L} + 4L a_t²/A_t + 4L a_{t+1}²/A_{t+1}`
/// and `w_t' = w_t a_t²`, exposed for inspection only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProofWeights {
    pub t: u64,
    pub w: f64,
    pub w_prime: f64,
}

/// Write the metrics table in the fixed column order.
pub fn write_metrics_csv<W: std::io::Write>(
    metrics: &TraceMetrics,
    writer: W,
) -> Result<(), DiagnosticsError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(METRICS_COLUMNS).map_err(io_of_csv)?;
    for r in &metrics.rows {
        w.write_record([
            r.t.to_string(),
            r.f.to_string(),
            r.e.to_string(),
            r.ebar.to_string(),
            r.h.to_string(),
            r.r2.to_string(),
            r.comm_scalars.to_string(),
            r.comm_indices.to_string(),
        ])
        .map_err(io_of_csv)?;
    }
    w.flush()?;
    Ok(())
}

fn io_of_csv(e: csv::Error) -> DiagnosticsError {
    DiagnosticsError::MalformedMetrics(e.to_string())
}

/// Read a metrics table written by [`write_metrics_csv`].
pub fn read_metrics_csv<R: std::io::Read>(reader: R) -> Result<TraceMetrics, DiagnosticsError> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(io_of_csv)?.clone();
    if header.iter().ne(METRICS_COLUMNS) {
        return Err(DiagnosticsError::MalformedMetrics(format!(
            "unexpected header {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(io_of_csv)?;
        let field = |i: usize| -> Result<f64, DiagnosticsError> {
            record
                .get(i)
                .ok_or_else(|| DiagnosticsError::MalformedMetrics("missing field".into()))?
                .parse::<f64>()
                .map_err(|e| DiagnosticsError::MalformedMetrics(e.to_string()))
        };
        rows.push(MetricsRow {
            t: field(0)? as u64,
            f: field(1)?,
            e: field(2)?,
            ebar: field(3)?,
            h: field(4)?,
            r2: field(5)?,
            comm_scalars: field(6)? as u64,
            comm_indices: field(7)? as u64,
        });
    }
    Ok(TraceMetrics { rows })
}

/// Dump a run as JSON lines: one header object, then one line per round.
pub fn write_run_jsonl<W: std::io::Write>(
    record: &RunRecord,
    mut writer: W,
) -> Result<(), DiagnosticsError> {
    let header = serde_json::json!({
        "x0": record.x0,
        "v0": record.v0,
        "a0": record.a0,
        "n_clients": record.n_clients,
        "dimension": record.dimension,
        "setup_scalars": record.setup_scalars,
        "setup_messages": record.setup_messages,
        "diverged": record.diverged,
    });
    writeln!(writer, "{header}")?;
    for round in &record.rounds {
        writeln!(
            writer,
            "{}",
            serde_json::to_string(round).expect("trace serializes")
        )?;
    }
    Ok(())
}

/// Read a run written by [`write_run_jsonl`].
pub fn read_run_jsonl<R: std::io::BufRead>(reader: R) -> Result<RunRecord, DiagnosticsError> {
    let mut lines = reader.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| DiagnosticsError::MalformedMetrics("empty trace file".into()))??;
    let header: serde_json::Value = serde_json::from_str(&header_line)
        .map_err(|e| DiagnosticsError::MalformedMetrics(e.to_string()))?;
    let take = |k: &str| -> Result<serde_json::Value, DiagnosticsError> {
        header
            .get(k)
            .cloned()
            .ok_or_else(|| DiagnosticsError::MalformedMetrics(format!("header missing {k}")))
    };
    let mut record = RunRecord {
        x0: serde_json::from_value(take("x0")?)
            .map_err(|e| DiagnosticsError::MalformedMetrics(e.to_string()))?,
        v0: serde_json::from_value(take("v0")?)
            .map_err(|e| DiagnosticsError::MalformedMetrics(e.to_string()))?,
        a0: take("a0")?.as_f64().unwrap_or(0.0),
        n_clients: take("n_clients")?.as_u64().unwrap_or(0) as usize,
        dimension: take("dimension")?.as_u64().unwrap_or(0) as usize,
        setup_scalars: take("setup_scalars")?.as_u64().unwrap_or(0),
        setup_messages: take("setup_messages")?.as_u64().unwrap_or(0),
        diverged: take("diverged")?.as_bool().unwrap_or(false),
        rounds: Vec::new(),
    };
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        record.rounds.push(
            serde_json::from_str(&line)
                .map_err(|e| DiagnosticsError::MalformedMetrics(e.to_string()))?,
        );
    }
    Ok(record)
}

pub fn proof_weights(schedule: &StepSchedule, l_smooth: f64, t_max: u64) -> Vec<ProofWeights> {
    let mut a_big: Vec<f64> = Vec::with_capacity(t_max as usize + 2);
    a_big.push(schedule.a0());
    for t in 1..=(t_max + 1) {
        a_big.push(a_big[(t - 1) as usize] + schedule.a(t));
    }
    (1..=t_max)
        .map(|t| {
            let a_t = schedule.a(t);
            let a_next = schedule.a(t + 1);
            let w = (2f64).min(a_t * l_smooth)
                + 4.0 * l_smooth * a_t * a_t / a_big[t as usize]
                + 4.0 * l_smooth * a_next * a_next / a_big[(t + 1) as usize];
            ProofWeights {
                t,
                w,
                w_prime: w * a_t * a_t,
            }
        })
        .collect()
}

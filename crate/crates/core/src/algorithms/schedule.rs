//! Stepsize schedules `(a_t)_{t≥1}` with initial weight `A_0`.
//!
//! Theory-mode schedules evaluate the closed-form `M` picked by the
//! corresponding convergence analysis; experiment-mode uses the
//! `a_t = γ(t + 1/δ)` family with `A_0 = 1/δ²` tuned by grid search.

use serde::{Deserialize, Serialize};

use crate::algorithms::AlgorithmError;
use crate::compressors::MIN_STEP;

/// Stepsize schedule kinds. `a(t)` is defined for `t ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StepSchedule {
    /// `a_t = (t + 32/δ)/M`, `A_0 = 32²/(2δ²M)`.
    #[serde(rename = "theorem_adef")]
    TheoremAdef { m: f64, delta: f64 },
    /// `a_t = (t + 4/δ)/M`, `A_0 = 8/(δ²M)`.
    #[serde(rename = "theorem_vanilla")]
    TheoremVanilla { m: f64, delta: f64 },
    /// `a_t = t/M`, `A_0 = 0`.
    #[serde(rename = "theorem_absolute")]
    TheoremAbsolute { m: f64 },
    /// `a_t = γ(t + 1/δ)`, `A_0 = 1/δ²`.
    #[serde(rename = "experiment_gamma")]
    ExperimentGamma { gamma: f64, delta: f64 },
    /// Explicit list; `a[t-1]` is `a_t`.
    #[serde(rename = "custom")]
    Custom { a: Vec<f64>, a0: f64 },
}

impl StepSchedule {
    /// `a_t` for `t ≥ 1`.
    pub fn a(&self, t: u64) -> f64 {
        debug_assert!(t >= 1, "a_t defined for t >= 1");
        let t = t as f64;
        match self {
            StepSchedule::TheoremAdef { m, delta } => (t + 32.0 / delta) / m,
            StepSchedule::TheoremVanilla { m, delta } => (t + 4.0 / delta) / m,
            StepSchedule::TheoremAbsolute { m } => t / m,
            StepSchedule::ExperimentGamma { gamma, delta } => gamma * (t + 1.0 / delta),
            StepSchedule::Custom { a, .. } => a[(t as usize) - 1],
        }
    }

    pub fn a0(&self) -> f64 {
        match self {
            StepSchedule::TheoremAdef { m, delta } => 32.0 * 32.0 / (2.0 * delta * delta * m),
            StepSchedule::TheoremVanilla { m, delta } => 8.0 / (delta * delta * m),
            StepSchedule::TheoremAbsolute { .. } => 0.0,
            StepSchedule::ExperimentGamma { delta, .. } => 1.0 / (delta * delta),
            StepSchedule::Custom { a0, .. } => *a0,
        }
    }

    /// Reject schedules whose steps over the horizon are nonpositive or so
    /// small that dividing the error memory by `a_{t+1}` is unsafe.
    pub fn validate(&self, horizon: u64) -> Result<(), AlgorithmError> {
        let check_params = |m: f64, delta: f64| -> Result<(), AlgorithmError> {
            if m <= 0.0 || !m.is_finite() {
                return Err(AlgorithmError::InvalidSchedule(format!(
                    "M must be a positive real, got {m}"
                )));
            }
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(AlgorithmError::InvalidSchedule(format!(
                    "delta must lie in (0, 1], got {delta}"
                )));
            }
            Ok(())
        };
        match self {
            StepSchedule::TheoremAdef { m, delta }
            | StepSchedule::TheoremVanilla { m, delta } => check_params(*m, *delta)?,
            StepSchedule::TheoremAbsolute { m } => check_params(*m, 1.0)?,
            StepSchedule::ExperimentGamma { gamma, delta } => {
                if *gamma <= 0.0 || !gamma.is_finite() {
                    return Err(AlgorithmError::InvalidSchedule(format!(
                        "gamma must be a positive real, got {gamma}"
                    )));
                }
                check_params(1.0, *delta)?;
            }
            StepSchedule::Custom { a, .. } => {
                if (a.len() as u64) < horizon {
                    return Err(AlgorithmError::InvalidSchedule(format!(
                        "custom schedule has {} steps, run needs {horizon}",
                        a.len()
                    )));
                }
            }
        }
        if self.a0() < 0.0 || !self.a0().is_finite() {
            return Err(AlgorithmError::InvalidSchedule(format!(
                "A_0 must be a nonnegative real, got {}",
                self.a0()
            )));
        }
        for t in 1..=horizon.max(1) {
            let a = self.a(t);
            if a <= MIN_STEP || !a.is_finite() {
                return Err(AlgorithmError::InvalidSchedule(format!(
                    "a_{t} = {a} must exceed {MIN_STEP}"
                )));
            }
        }
        Ok(())
    }
}

/// Problem constants consumed by the closed-form `M` expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants {
    /// Smoothness constant of `f`.
    pub l_smooth: f64,
    /// Per-client smoothness constant.
    pub ell: f64,
    /// Oracle variance `σ²`.
    pub sigma2: f64,
    /// Number of clients.
    pub n: u64,
    /// `R_0² = ‖v_0 − x*‖²`.
    pub r0_sq: f64,
    /// Gradient dissimilarity bound `ζ²` (vanilla schedule only).
    pub zeta2: Option<f64>,
    /// Absolute compressor bound `Δ` (absolute schedule only).
    pub delta_abs: Option<f64>,
}

/// Method selector for [`theorem_m`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremMethod {
    Adef,
    VanillaAccEf,
    Absolute,
    Neolithic,
}

/// Evaluate the closed-form `M` for a theory-mode run over `t_rounds` rounds.
pub fn theorem_m(
    method: TheoremMethod,
    constants: &TheoryConstants,
    delta: f64,
    t_rounds: u64,
) -> Result<f64, AlgorithmError> {
    if t_rounds == 0 {
        return Err(AlgorithmError::InvalidSchedule(
            "theorem M undefined for T = 0".into(),
        ));
    }
    let t = t_rounds as f64;
    let n = constants.n as f64;
    let l = constants.l_smooth;
    let ell = constants.ell;
    let s2 = constants.sigma2;
    let r0_sq = constants.r0_sq;
    let m = match method {
        TheoremMethod::Adef => {
            let b1 = 2f64.powi(13) * ell / delta.powi(4);
            let b2 = (4.0 * t * (t + 32.0 / delta).powi(2) * s2 / (r0_sq * n)).sqrt();
            let b3 = 8.0 * (l * t * (t + 32.0 / delta).powi(3) * s2 / (delta.powi(4) * r0_sq)).cbrt();
            b1.max(b2).max(b3)
        }
        TheoremMethod::VanillaAccEf => {
            let zeta2 = constants.zeta2.ok_or_else(|| {
                AlgorithmError::InvalidSchedule("vanilla theorem M needs zeta2".into())
            })?;
            let b1 = 40.0 * l * (t + 4.0 / delta) / delta;
            let b2 = (4.0 * t * (t + 4.0 / delta).powi(2) * s2 / (r0_sq * n)).sqrt();
            let b3 = (544.0 * l * (4.0 * zeta2 + delta * s2) * t * (t + 4.0 / delta).powi(3)
                / (delta * delta * r0_sq))
                .cbrt();
            b1.max(b2).max(b3)
        }
        TheoremMethod::Absolute => {
            let da = constants.delta_abs.ok_or_else(|| {
                AlgorithmError::InvalidSchedule("absolute theorem M needs delta_abs".into())
            })?;
            let b1 = 24.0 * l;
            let b2 = (4.0 * t.powi(3) * s2 / (n * r0_sq)).sqrt();
            let b3 = (2.0 * l * da * da * (t + 16.0) * t.powi(5) / r0_sq).cbrt();
            b1.max(b2).max(b3)
        }
        TheoremMethod::Neolithic => {
            let b1 = 24.0 * l;
            let b2 = (12.0 * t.powi(3) * s2 / (n * r0_sq)).sqrt();
            b1.max(b2)
        }
    };
    Ok(m)
}

//! Round-based client/server methods: the accelerated skeleton with inexact
//! gradients, the error-feedback family, repeated-compression and absolute
//! baselines.
//!
//! A round is a pure function of the states and the seed-derived streams;
//! client messages are reduced in ascending client index so runs are
//! bit-reproducible.

pub mod methods;
pub mod schedule;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compressors::CompressError;
use crate::vector::Vector;
use schedule::StepSchedule;

#[derive(Debug, Error)]
pub enum AlgorithmError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error(transparent)]
    Compress(#[from] CompressError),
}

/// Server iterates of the accelerated method.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ServerState {
    pub x: Vector,
    pub v: Vector,
    /// Extrapolation point served to clients this round; set by
    /// [`ServerState::begin_round`].
    pub y: Vector,
    /// Running weight `A_t`.
    pub a_big: f64,
    /// Round counter.
    pub t: u64,
}

impl ServerState {
    pub fn new(x0: Vector, v0: Vector, a0: f64) -> Self {
        let y = x0.clone();
        ServerState {
            x: x0,
            v: v0,
            y,
            a_big: a0,
            t: 0,
        }
    }

    /// Compute and store `y_t = (A_t/A_{t+1}) x_t + (a_{t+1}/A_{t+1}) v_t`;
    /// returns `a_{t+1}`.
    pub fn begin_round(&mut self, schedule: &StepSchedule) -> f64 {
        let a_next = schedule.a(self.t + 1);
        let a_new = self.a_big + a_next;
        self.y = Vector::lincomb(self.a_big / a_new, &self.x, a_next / a_new, &self.v);
        a_next
    }

    /// Nesterov update with the inexact gradient `ĝ_t`:
    /// `A_{t+1} = A_t + a_{t+1}`, `v_{t+1} = v_t − a_{t+1} ĝ_t`,
    /// `x_{t+1} = (A_t/A_{t+1}) x_t + (a_{t+1}/A_{t+1}) v_{t+1}`.
    pub fn acc_step(&mut self, schedule: &StepSchedule, ghat: &Vector) {
        let a_next = schedule.a(self.t + 1);
        let a_new = self.a_big + a_next;
        self.v.add_scaled(-a_next, ghat);
        self.x = Vector::lincomb(self.a_big / a_new, &self.x, a_next / a_new, &self.v);
        self.a_big = a_new;
        self.t += 1;
    }
}

/// Per-client memory: error feedback `e_t^i` and, for methods that use
/// gradient difference compression, the control variate `g̃_t^i`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClientState {
    pub e: Vector,
    pub g_tilde: Option<Vector>,
}

impl ClientState {
    pub fn new(dim: usize) -> Self {
        ClientState {
            e: Vector::zeros(dim),
            g_tilde: None,
        }
    }
}

/// Everything one round emits, enough to recompute every analysis quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    /// Round index `t` (0-based, state entering the round).
    pub t: u64,
    /// `a_{t+1}` used by this round (the stepsize `η` for plain EF).
    pub a_next: f64,
    /// Extrapolation point `y_t` served to clients.
    pub y: Vector,
    /// Applied gradient `ĝ_t`.
    pub ghat: Vector,
    /// Exact average of the drawn stochastic gradients `g_t`.
    pub gbar: Vector,
    pub x_next: Vector,
    pub v_next: Vector,
    /// `avg_i e_{t+1}^i`.
    pub e_mean: Vector,
    /// `avg_i ‖e_{t+1}^i‖²`.
    pub ebar: f64,
    /// `avg_i ‖g_t^i − g̃_t^i‖²` (control variate taken as 0 when absent).
    pub h: f64,
    pub comm_scalars: u64,
    pub comm_indices: u64,
    pub comm_messages: u64,
}

/// One full run: initial state, one-time setup cost, and the round traces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub x0: Vector,
    pub v0: Vector,
    pub a0: f64,
    pub n_clients: usize,
    pub dimension: usize,
    /// Scalars transmitted before round 0 (uncompressed control-variate
    /// initialization), zero for methods without setup traffic.
    pub setup_scalars: u64,
    pub setup_messages: u64,
    pub diverged: bool,
    pub rounds: Vec<RoundTrace>,
}

pub use methods::{
    absolute_acc_round, adef_round, ef_round, neolithic_round, uncompressed_round,
    vanilla_acc_ef_round, AbsoluteAcc, Adef, Ef, Neolithic, SetupCost, UncompressedAcc,
    VanillaAccEf,
};
pub use schedule::{theorem_m, StepSchedule as Schedule, TheoremMethod, TheoryConstants};

//! Concrete round implementations for every method in the study.

use crate::compressors::{compress, CompressorKind};
use crate::problems::Oracle;
use crate::streams::{Channel, SeedPlan};
use crate::vector::Vector;

use super::schedule::StepSchedule;
use super::{AlgorithmError, ClientState, RoundTrace, ServerState};

/// One-time transmission charged before round 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SetupCost {
    pub scalars: u64,
    pub messages: u64,
}

fn draw_gradients(
    oracle: &Oracle,
    at: &Vector,
    n: usize,
    round: u64,
    plan: &SeedPlan,
) -> Vec<Vector> {
    (0..n)
        .map(|i| {
            let mut rng = plan.rng(i as u64, round, Channel::Oracle);
            oracle.stochastic_gradient(i, at, &mut rng)
        })
        .collect()
}

/// Accelerated distributed error feedback with gradient difference
/// compression: clients keep a control variate `g̃^i` synchronized with the
/// server through one compressed channel and run error feedback on the
/// residual through a second, so each round transmits two compressed
/// messages per client.
#[derive(Debug, Clone)]
pub struct Adef {
    pub server: ServerState,
    pub clients: Vec<ClientState>,
    /// Server copy of the averaged control variate.
    pub g_tilde: Vector,
    pub setup: SetupCost,
}

impl Adef {
    /// Initialize client and server control variates with one uncompressed
    /// stochastic gradient at `y_0`, drawn from the setup channel.
    pub fn init(
        oracle: &Oracle,
        schedule: &StepSchedule,
        x0: Vector,
        v0: Vector,
        plan: &SeedPlan,
    ) -> Self {
        let n = oracle.problem.n_clients;
        let dim = oracle.problem.dimension;
        let a0 = schedule.a0();
        let a1 = schedule.a(1);
        let y0 = Vector::lincomb(a0 / (a0 + a1), &x0, a1 / (a0 + a1), &v0);

        let mut clients = Vec::with_capacity(n);
        let mut g_tilde = Vector::zeros(dim);
        for i in 0..n {
            let mut rng = plan.rng(i as u64, 0, Channel::Setup);
            let g = oracle.stochastic_gradient(i, &y0, &mut rng);
            g_tilde.add_scaled(1.0, &g);
            clients.push(ClientState {
                e: Vector::zeros(dim),
                g_tilde: Some(g),
            });
        }
        g_tilde = g_tilde.scaled(1.0 / n as f64);

        Adef {
            server: ServerState::new(x0, v0, a0),
            clients,
            g_tilde,
            setup: SetupCost {
                scalars: (n * dim) as u64,
                messages: n as u64,
            },
        }
    }

    pub fn round(
        &mut self,
        oracle: &Oracle,
        compressor: &CompressorKind,
        schedule: &StepSchedule,
        plan: &SeedPlan,
    ) -> Result<RoundTrace, AlgorithmError> {
        let n = self.clients.len();
        let dim = oracle.problem.dimension;
        let t = self.server.t;
        let a_next = self.server.begin_round(schedule);
        let y = self.server.y.clone();

        let mut sum_cv = Vector::zeros(dim);
        let mut sum_ef = Vector::zeros(dim);
        let mut gbar = Vector::zeros(dim);
        let mut h_acc = 0.0;
        let mut scalars = 0;
        let mut indices = 0;
        let mut messages = 0;
        for (i, client) in self.clients.iter_mut().enumerate() {
            let mut oracle_rng = plan.rng(i as u64, t, Channel::Oracle);
            let g = oracle.stochastic_gradient(i, &y, &mut oracle_rng);
            gbar.add_scaled(1.0, &g);

            let g_tilde = client.g_tilde.as_mut().expect("adef clients carry control variates");
            let cv_residual = g.sub(g_tilde);
            let mut cv_rng = plan.rng(i as u64, t, Channel::ControlVariate);
            let cv = compress(compressor, &cv_residual, &mut cv_rng)?;
            g_tilde.add_scaled(1.0, &cv.output);
            sum_cv.add_scaled(1.0, &cv.output);
            h_acc += g.dist_sq(g_tilde);

            let mut ef_target = g.sub(g_tilde);
            ef_target.add_scaled(-1.0 / a_next, &client.e);
            let mut ef_rng = plan.rng(i as u64, t, Channel::Compressor);
            let ef = compress(compressor, &ef_target, &mut ef_rng)?;
            client.e = ef.output.sub(&ef_target).scaled(a_next);
            sum_ef.add_scaled(1.0, &ef.output);

            scalars += cv.transmitted_scalars + ef.transmitted_scalars;
            indices += cv.transmitted_indices + ef.transmitted_indices;
            messages += cv.transmitted_messages + ef.transmitted_messages;
        }
        gbar = gbar.scaled(1.0 / n as f64);
        self.g_tilde.add_scaled(1.0 / n as f64, &sum_cv);
        let mut ghat = self.g_tilde.clone();
        ghat.add_scaled(1.0 / n as f64, &sum_ef);

        self.server.acc_step(schedule, &ghat);

        let e_mean = crate::vector::mean(&self.clients.iter().map(|c| c.e.clone()).collect::<Vec<_>>());
        let ebar = self.clients.iter().map(|c| c.e.norm_sq()).sum::<f64>() / n as f64;
        Ok(RoundTrace {
            t,
            a_next,
            y,
            ghat,
            gbar,
            x_next: self.server.x.clone(),
            v_next: self.server.v.clone(),
            e_mean,
            ebar,
            h: h_acc / n as f64,
            comm_scalars: scalars,
            comm_indices: indices,
            comm_messages: messages,
        })
    }
}

/// Accelerated method with plain error feedback: one compressed message per
/// client per round, no control variates.
#[derive(Debug, Clone)]
pub struct VanillaAccEf {
    pub server: ServerState,
    pub clients: Vec<ClientState>,
}

impl VanillaAccEf {
    pub fn init(oracle: &Oracle, schedule: &StepSchedule, x0: Vector, v0: Vector) -> Self {
        let n = oracle.problem.n_clients;
        let dim = oracle.problem.dimension;
        VanillaAccEf {
            server: ServerState::new(x0, v0, schedule.a0()),
            clients: (0..n).map(|_| ClientState::new(dim)).collect(),
        }
    }

    pub fn round(
        &mut self,
        oracle: &Oracle,
        compressor: &CompressorKind,
        schedule: &StepSchedule,
        plan: &SeedPlan,
    ) -> Result<RoundTrace, AlgorithmError> {
        let n = self.clients.len();
        let dim = oracle.problem.dimension;
        let t = self.server.t;
        let a_next = self.server.begin_round(schedule);
        let y = self.server.y.clone();

        let mut sum_ghat = Vector::zeros(dim);
        let mut gbar = Vector::zeros(dim);
        let mut h_acc = 0.0;
        let mut scalars = 0;
        let mut indices = 0;
        let mut messages = 0;
        for (i, client) in self.clients.iter_mut().enumerate() {
            let mut oracle_rng = plan.rng(i as u64, t, Channel::Oracle);
            let g = oracle.stochastic_gradient(i, &y, &mut oracle_rng);
            gbar.add_scaled(1.0, &g);
            h_acc += g.norm_sq();

            // error-feedback channel with zero control variate; the error
            // memory carries the sign that makes avg_i e^i track
            // Σ a_{j+1}(ĝ_j − g_j)
            let mut target = g.clone();
            target.add_scaled(-1.0 / a_next, &client.e);
            let mut ef_rng = plan.rng(i as u64, t, Channel::Compressor);
            let res = compress(compressor, &target, &mut ef_rng)?;
            client.e = res.output.sub(&target).scaled(a_next);
            sum_ghat.add_scaled(1.0, &res.output);

            scalars += res.transmitted_scalars;
            indices += res.transmitted_indices;
            messages += res.transmitted_messages;
        }
        gbar = gbar.scaled(1.0 / n as f64);
        let ghat = sum_ghat.scaled(1.0 / n as f64);

        self.server.acc_step(schedule, &ghat);

        let e_mean = crate::vector::mean(&self.clients.iter().map(|c| c.e.clone()).collect::<Vec<_>>());
        let ebar = self.clients.iter().map(|c| c.e.norm_sq()).sum::<f64>() / n as f64;
        Ok(RoundTrace {
            t,
            a_next,
            y,
            ghat,
            gbar,
            x_next: self.server.x.clone(),
            v_next: self.server.v.clone(),
            e_mean,
            ebar,
            h: h_acc / n as f64,
            comm_scalars: scalars,
            comm_indices: indices,
            comm_messages: messages,
        })
    }
}

/// Classic unaccelerated error feedback with a constant stepsize.
#[derive(Debug, Clone)]
pub struct Ef {
    pub x: Vector,
    pub clients: Vec<ClientState>,
    pub eta: f64,
    pub t: u64,
}

impl Ef {
    pub fn init(oracle: &Oracle, eta: f64, x0: Vector) -> Self {
        let n = oracle.problem.n_clients;
        let dim = oracle.problem.dimension;
        Ef {
            x: x0,
            clients: (0..n).map(|_| ClientState::new(dim)).collect(),
            eta,
            t: 0,
        }
    }

    pub fn round(
        &mut self,
        oracle: &Oracle,
        compressor: &CompressorKind,
        plan: &SeedPlan,
    ) -> Result<RoundTrace, AlgorithmError> {
        let n = self.clients.len();
        let dim = oracle.problem.dimension;
        let t = self.t;
        let y = self.x.clone();

        let mut sum_p = Vector::zeros(dim);
        let mut gbar = Vector::zeros(dim);
        let mut h_acc = 0.0;
        let mut scalars = 0;
        let mut indices = 0;
        let mut messages = 0;
        for (i, client) in self.clients.iter_mut().enumerate() {
            let mut oracle_rng = plan.rng(i as u64, t, Channel::Oracle);
            let g = oracle.stochastic_gradient(i, &y, &mut oracle_rng);
            gbar.add_scaled(1.0, &g);
            h_acc += g.norm_sq();

            let mut target = client.e.clone();
            target.add_scaled(self.eta, &g);
            let mut ef_rng = plan.rng(i as u64, t, Channel::Compressor);
            let res = compress(compressor, &target, &mut ef_rng)?;
            client.e = target.sub(&res.output);
            sum_p.add_scaled(1.0, &res.output);

            scalars += res.transmitted_scalars;
            indices += res.transmitted_indices;
            messages += res.transmitted_messages;
        }
        gbar = gbar.scaled(1.0 / n as f64);
        let p_mean = sum_p.scaled(1.0 / n as f64);
        self.x.add_scaled(-1.0, &p_mean);
        self.t += 1;

        let e_mean = crate::vector::mean(&self.clients.iter().map(|c| c.e.clone()).collect::<Vec<_>>());
        let ebar = self.clients.iter().map(|c| c.e.norm_sq()).sum::<f64>() / n as f64;
        Ok(RoundTrace {
            t,
            a_next: self.eta,
            y,
            ghat: p_mean.scaled(1.0 / self.eta),
            gbar,
            x_next: self.x.clone(),
            v_next: self.x.clone(),
            e_mean,
            ebar,
            h: h_acc / n as f64,
            comm_scalars: scalars,
            comm_indices: indices,
            comm_messages: messages,
        })
    }
}

/// Naively compressed accelerated method whose compressor is the repeated
/// operator: `rounds` messages per client per round, no error feedback.
#[derive(Debug, Clone)]
pub struct Neolithic {
    pub server: ServerState,
    pub rounds: u32,
}

impl Neolithic {
    pub fn init(schedule: &StepSchedule, x0: Vector, v0: Vector, rounds: u32) -> Self {
        Neolithic {
            server: ServerState::new(x0, v0, schedule.a0()),
            rounds,
        }
    }

    pub fn round(
        &mut self,
        oracle: &Oracle,
        base_compressor: &CompressorKind,
        schedule: &StepSchedule,
        plan: &SeedPlan,
    ) -> Result<RoundTrace, AlgorithmError> {
        let n = oracle.problem.n_clients;
        let dim = oracle.problem.dimension;
        let t = self.server.t;
        let a_next = self.server.begin_round(schedule);
        let y = self.server.y.clone();
        let effective = CompressorKind::Repeated {
            base: Box::new(base_compressor.clone()),
            rounds: self.rounds,
        };

        let mut sum = Vector::zeros(dim);
        let mut gbar = Vector::zeros(dim);
        let mut h_acc = 0.0;
        let mut scalars = 0;
        let mut indices = 0;
        let mut messages = 0;
        for i in 0..n {
            let mut oracle_rng = plan.rng(i as u64, t, Channel::Oracle);
            let g = oracle.stochastic_gradient(i, &y, &mut oracle_rng);
            gbar.add_scaled(1.0, &g);
            h_acc += g.norm_sq();

            let mut rng = plan.rng(i as u64, t, Channel::Compressor);
            let res = compress(&effective, &g, &mut rng)?;
            sum.add_scaled(1.0, &res.output);
            scalars += res.transmitted_scalars;
            indices += res.transmitted_indices;
            messages += res.transmitted_messages;
        }
        gbar = gbar.scaled(1.0 / n as f64);
        let ghat = sum.scaled(1.0 / n as f64);
        self.server.acc_step(schedule, &ghat);

        Ok(RoundTrace {
            t,
            a_next,
            y,
            ghat,
            gbar,
            x_next: self.server.x.clone(),
            v_next: self.server.v.clone(),
            e_mean: Vector::zeros(dim),
            ebar: 0.0,
            h: h_acc / n as f64,
            comm_scalars: scalars,
            comm_indices: indices,
            comm_messages: messages,
        })
    }
}

/// Accelerated method under an absolute compressor: clients send
/// `C_Δ(g_t^i)` directly, no error feedback.
#[derive(Debug, Clone)]
pub struct AbsoluteAcc {
    pub server: ServerState,
}

impl AbsoluteAcc {
    pub fn init(schedule: &StepSchedule, x0: Vector, v0: Vector) -> Self {
        AbsoluteAcc {
            server: ServerState::new(x0, v0, schedule.a0()),
        }
    }

    pub fn round(
        &mut self,
        oracle: &Oracle,
        compressor: &CompressorKind,
        schedule: &StepSchedule,
        plan: &SeedPlan,
    ) -> Result<RoundTrace, AlgorithmError> {
        let n = oracle.problem.n_clients;
        let dim = oracle.problem.dimension;
        let t = self.server.t;
        let a_next = self.server.begin_round(schedule);
        let y = self.server.y.clone();

        let mut sum = Vector::zeros(dim);
        let mut gbar = Vector::zeros(dim);
        let mut h_acc = 0.0;
        let mut scalars = 0;
        let mut indices = 0;
        let mut messages = 0;
        for i in 0..n {
            let mut oracle_rng = plan.rng(i as u64, t, Channel::Oracle);
            let g = oracle.stochastic_gradient(i, &y, &mut oracle_rng);
            gbar.add_scaled(1.0, &g);
            h_acc += g.norm_sq();

            let mut rng = plan.rng(i as u64, t, Channel::Compressor);
            let res = compress(compressor, &g, &mut rng)?;
            sum.add_scaled(1.0, &res.output);
            scalars += res.transmitted_scalars;
            indices += res.transmitted_indices;
            messages += res.transmitted_messages;
        }
        gbar = gbar.scaled(1.0 / n as f64);
        let ghat = sum.scaled(1.0 / n as f64);
        self.server.acc_step(schedule, &ghat);

        Ok(RoundTrace {
            t,
            a_next,
            y,
            ghat,
            gbar,
            x_next: self.server.x.clone(),
            v_next: self.server.v.clone(),
            e_mean: Vector::zeros(dim),
            ebar: 0.0,
            h: h_acc / n as f64,
            comm_scalars: scalars,
            comm_indices: indices,
            comm_messages: messages,
        })
    }
}

/// Accelerated stochastic gradient baseline without compression.
#[derive(Debug, Clone)]
pub struct UncompressedAcc {
    pub server: ServerState,
}

impl UncompressedAcc {
    pub fn init(schedule: &StepSchedule, x0: Vector, v0: Vector) -> Self {
        UncompressedAcc {
            server: ServerState::new(x0, v0, schedule.a0()),
        }
    }

    pub fn round(
        &mut self,
        oracle: &Oracle,
        schedule: &StepSchedule,
        plan: &SeedPlan,
    ) -> Result<RoundTrace, AlgorithmError> {
        let n = oracle.problem.n_clients;
        let dim = oracle.problem.dimension;
        let t = self.server.t;
        let a_next = self.server.begin_round(schedule);
        let y = self.server.y.clone();

        let draws = draw_gradients(oracle, &y, n, t, plan);
        let gbar = crate::vector::mean(&draws);
        let h = draws.iter().map(|g| g.norm_sq()).sum::<f64>() / n as f64;
        self.server.acc_step(schedule, &gbar);

        Ok(RoundTrace {
            t,
            a_next,
            y,
            ghat: gbar.clone(),
            gbar,
            x_next: self.server.x.clone(),
            v_next: self.server.v.clone(),
            e_mean: Vector::zeros(dim),
            ebar: 0.0,
            h,
            comm_scalars: (n * dim) as u64,
            comm_indices: 0,
            comm_messages: n as u64,
        })
    }
}

pub fn adef_round(
    state: &mut Adef,
    oracle: &Oracle,
    compressor: &CompressorKind,
    schedule: &StepSchedule,
    plan: &SeedPlan,
) -> Result<RoundTrace, AlgorithmError> {
    state.round(oracle, compressor, schedule, plan)
}

pub fn vanilla_acc_ef_round(
    state: &mut VanillaAccEf,
    oracle: &Oracle,
    compressor: &CompressorKind,
    schedule: &StepSchedule,
    plan: &SeedPlan,
) -> Result<RoundTrace, AlgorithmError> {
    state.round(oracle, compressor, schedule, plan)
}

pub fn ef_round(
    state: &mut Ef,
    oracle: &Oracle,
    compressor: &CompressorKind,
    plan: &SeedPlan,
) -> Result<RoundTrace, AlgorithmError> {
    state.round(oracle, compressor, plan)
}

pub fn neolithic_round(
    state: &mut Neolithic,
    oracle: &Oracle,
    base_compressor: &CompressorKind,
    schedule: &StepSchedule,
    plan: &SeedPlan,
) -> Result<RoundTrace, AlgorithmError> {
    state.round(oracle, base_compressor, schedule, plan)
}

pub fn absolute_acc_round(
    state: &mut AbsoluteAcc,
    oracle: &Oracle,
    compressor: &CompressorKind,
    schedule: &StepSchedule,
    plan: &SeedPlan,
) -> Result<RoundTrace, AlgorithmError> {
    state.round(oracle, compressor, schedule, plan)
}

pub fn uncompressed_round(
    state: &mut UncompressedAcc,
    oracle: &Oracle,
    schedule: &StepSchedule,
    plan: &SeedPlan,
) -> Result<RoundTrace, AlgorithmError> {
    state.round(oracle, schedule, plan)
}

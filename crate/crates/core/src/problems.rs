//! Distributed objectives: synthetic data, gradients, noise oracles and a
//! reference-optimum solver.
//!
//! The objective is `f(x) = (1/n) Σ_i f_i(x)` where client `i` owns `f_i`.
//! Two convex instances are provided: regularized logistic regression on
//! synthetic two-class data, and diagonal quadratics with per-client centers.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vector::Vector;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("invalid problem configuration: {0}")]
    InvalidConfig(String),
    #[error("reference solver hit the iteration cap ({iterations}) at gradient norm {grad_norm:.3e} > {tolerance:.3e}")]
    SolverDidNotConverge {
        iterations: u64,
        grad_norm: f64,
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Logistic,
    Quadratic,
}

/// One client's share of a logistic dataset.
#[derive(Debug, Clone)]
pub struct LogisticClient {
    pub rows: Vec<Vector>,
    pub labels: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum ClientFunctions {
    Logistic(Vec<LogisticClient>),
    /// All clients share the diagonal; each has its own center.
    Quadratic { diag: Vector, centers: Vec<Vector> },
}

/// Immutable problem instance; everything is reproducible from the
/// generating config and seed.
#[derive(Debug, Clone)]
pub struct Problem {
    pub n_clients: usize,
    pub dimension: usize,
    pub lambda_reg: f64,
    pub data: ClientFunctions,
}

/// Stochastic gradient oracle wrapping a problem.
///
/// Noise is zero-mean Gaussian with per-coordinate variance `σ²/d`, so the
/// total injected variance `E‖ζ‖²` equals `σ²` exactly.
#[derive(Debug, Clone, Copy)]
pub struct Oracle<'a> {
    pub problem: &'a Problem,
    pub sigma2: f64,
    pub noise: NoiseKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    GaussianAdditive,
}

/// Solved optimum used to evaluate suboptimality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceSolution {
    pub x_star: Vector,
    pub f_star: f64,
    pub solve_tolerance: f64,
    pub grad_norm: f64,
    pub iterations: u64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(z))` without overflow.
fn log1p_exp(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Per-sample logistic loss `−b·aᵀx + log(1 + exp(aᵀx))`.
pub fn logistic_loss(row: &Vector, label: f64, x: &Vector) -> f64 {
    let z = row.dot(x);
    -label * z + log1p_exp(z)
}

impl Problem {
    pub fn client_value(&self, client: usize, x: &Vector) -> f64 {
        match &self.data {
            ClientFunctions::Logistic(clients) => {
                let c = &clients[client];
                let m = c.rows.len() as f64;
                let loss: f64 = c
                    .rows
                    .iter()
                    .zip(&c.labels)
                    .map(|(a, &b)| logistic_loss(a, b, x))
                    .sum();
                loss / m + 0.5 * self.lambda_reg * x.norm_sq()
            }
            ClientFunctions::Quadratic { diag, centers } => {
                let c = &centers[client];
                x.as_slice()
                    .iter()
                    .zip(c.as_slice())
                    .zip(diag.as_slice())
                    .map(|((&xi, &ci), &qi)| 0.5 * qi * (xi - ci) * (xi - ci))
                    .sum()
            }
        }
    }

    /// `f(x) = avg_i f_i(x)`, reduced in ascending client order.
    pub fn value(&self, x: &Vector) -> f64 {
        (0..self.n_clients).map(|i| self.client_value(i, x)).sum::<f64>() / self.n_clients as f64
    }

    /// Exact `∇f_i(x)`.
    pub fn client_gradient(&self, client: usize, x: &Vector) -> Vector {
        match &self.data {
            ClientFunctions::Logistic(clients) => {
                let c = &clients[client];
                let m = c.rows.len() as f64;
                let mut g = Vector::zeros(self.dimension);
                for (a, &b) in c.rows.iter().zip(&c.labels) {
                    let coef = sigmoid(a.dot(x)) - b;
                    g.add_scaled(coef / m, a);
                }
                g.add_scaled(self.lambda_reg, x);
                g
            }
            ClientFunctions::Quadratic { diag, centers } => {
                let c = &centers[client];
                Vector(
                    x.as_slice()
                        .iter()
                        .zip(c.as_slice())
                        .zip(diag.as_slice())
                        .map(|((&xi, &ci), &qi)| qi * (xi - ci))
                        .collect(),
                )
            }
        }
    }

    /// Exact `∇f(x) = avg_i ∇f_i(x)`, reduced in ascending client order.
    pub fn gradient(&self, x: &Vector) -> Vector {
        let mut g = Vector::zeros(self.dimension);
        for i in 0..self.n_clients {
            g.add_scaled(1.0, &self.client_gradient(i, x));
        }
        g.scaled(1.0 / self.n_clients as f64)
    }

    /// Upper bound on the smoothness constant `L` of `f`.
    ///
    /// Logistic: `(1/4)·λ_max` of the pooled second-moment matrix plus the
    /// regularizer; quadratic: the largest diagonal entry.
    pub fn smoothness_bound(&self) -> f64 {
        match &self.data {
            ClientFunctions::Logistic(clients) => {
                let total: usize = clients.iter().map(|c| c.rows.len()).sum();
                let scale = 0.25 / total as f64;
                let rows: Vec<&Vector> = clients.iter().flat_map(|c| c.rows.iter()).collect();
                scale * gram_lambda_max(&rows, self.dimension) + self.lambda_reg
            }
            ClientFunctions::Quadratic { diag, .. } => diag.max_abs(),
        }
    }

    /// Upper bound on the per-client smoothness constant `ℓ`
    /// (max over clients of the individual bound).
    pub fn client_smoothness_bound(&self) -> f64 {
        match &self.data {
            ClientFunctions::Logistic(clients) => clients
                .iter()
                .map(|c| {
                    let rows: Vec<&Vector> = c.rows.iter().collect();
                    0.25 / c.rows.len() as f64 * gram_lambda_max(&rows, self.dimension)
                        + self.lambda_reg
                })
                .fold(0.0, f64::max),
            ClientFunctions::Quadratic { diag, .. } => diag.max_abs(),
        }
    }

    /// Gradient dissimilarity `avg_i ‖∇f_i(x) − ∇f(x)‖²` at a point.
    pub fn gradient_dissimilarity(&self, x: &Vector) -> f64 {
        let g = self.gradient(x);
        (0..self.n_clients)
            .map(|i| self.client_gradient(i, x).dist_sq(&g))
            .sum::<f64>()
            / self.n_clients as f64
    }
}

/// Largest eigenvalue of `ΣᵀΣ`-style Gram matrices via power iteration on the
/// implicit operator `v ↦ Σ_j a_j (a_jᵀ v)`.
fn gram_lambda_max(rows: &[&Vector], dim: usize) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let mut v = Vector::from_vec(vec![1.0 / (dim as f64).sqrt(); dim]);
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let mut w = Vector::zeros(dim);
        for a in rows {
            w.add_scaled(a.dot(&v), a);
        }
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = Vector::from_vec(w.as_slice().iter().map(|x| x / norm).collect());
        let new_lambda = {
            let mut w2 = Vector::zeros(dim);
            for a in rows {
                w2.add_scaled(a.dot(&next), a);
            }
            next.dot(&w2)
        };
        if (new_lambda - lambda).abs() <= 1e-13 * new_lambda.abs() {
            return new_lambda * (1.0 + 1e-9);
        }
        lambda = new_lambda;
        v = next;
    }
    lambda * (1.0 + 1e-6)
}

impl<'a> Oracle<'a> {
    pub fn new(problem: &'a Problem, sigma2: f64) -> Self {
        Oracle {
            problem,
            sigma2,
            noise: NoiseKind::GaussianAdditive,
        }
    }

    /// `∇f_i(x) + ζ` with `ζ ~ N(0, (σ²/d)·I)`; `σ² = 0` returns the exact
    /// gradient without consuming randomness.
    pub fn stochastic_gradient<R: Rng>(&self, client: usize, x: &Vector, rng: &mut R) -> Vector {
        let mut g = self.problem.client_gradient(client, x);
        if self.sigma2 > 0.0 {
            let sd = (self.sigma2 / self.problem.dimension as f64).sqrt();
            match self.noise {
                NoiseKind::GaussianAdditive => {
                    for gi in g.0.iter_mut() {
                        let z: f64 = StandardNormal.sample(rng);
                        *gi += sd * z;
                    }
                }
            }
        }
        g
    }
}

/// Bregman divergence `β_f(x, y) = f(y) − f(x) − ⟨∇f(x), y − x⟩`.
pub fn bregman(problem: &Problem, x: &Vector, y: &Vector) -> f64 {
    problem.value(y) - problem.value(x) - problem.gradient(x).dot(&y.sub(x))
}

/// Synthetic two-class logistic instance.
///
/// Samples are Gaussian blobs around `±u` for a random unit direction `u`,
/// overlapping enough to be non-separable. `heterogeneity = 0` shuffles the
/// pooled data uniformly across clients; `heterogeneity = 1` splits it
/// label-sorted, giving clients maximally dissimilar local objectives.
pub fn generate_synthetic_logistic(
    n_clients: usize,
    dimension: usize,
    samples_per_client: usize,
    heterogeneity: f64,
    lambda_reg: f64,
    seed: u64,
) -> Result<Problem, ProblemError> {
    if n_clients == 0 || dimension == 0 || samples_per_client == 0 {
        return Err(ProblemError::InvalidConfig(
            "n_clients, d and samples_per_client must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&heterogeneity) {
        return Err(ProblemError::InvalidConfig(
            "heterogeneity must lie in [0, 1]".into(),
        ));
    }
    if lambda_reg < 0.0 {
        return Err(ProblemError::InvalidConfig(
            "lambda_reg must be nonnegative".into(),
        ));
    }
    use rand::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let total = n_clients * samples_per_client;
    let mut direction = Vector::zeros(dimension);
    for e in direction.0.iter_mut() {
        *e = StandardNormal.sample(&mut rng);
    }
    let direction = direction.scaled(1.0 / direction.norm().max(1e-12));

    // label-sorted to start with: first half 0s, second half 1s
    let mut samples: Vec<(Vector, f64)> = (0..total)
        .map(|j| {
            let label = if j < total / 2 { 0.0 } else { 1.0 };
            let sign = 2.0 * label - 1.0;
            let mut row = direction.scaled(sign);
            for e in row.0.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *e += z;
            }
            (row, label)
        })
        .collect();

    // shuffle a (1 − heterogeneity) fraction of the positions in place
    let n_shuffle = ((1.0 - heterogeneity) * total as f64).round() as usize;
    if n_shuffle > 1 {
        let positions = rand::seq::index::sample(&mut rng, total, n_shuffle).into_vec();
        let mut perm = positions.clone();
        for i in (1..perm.len()).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let extracted: Vec<(Vector, f64)> =
            positions.iter().map(|&p| samples[p].clone()).collect();
        for (target, value) in perm.into_iter().zip(extracted) {
            samples[target] = value;
        }
    }

    let clients = samples
        .chunks(samples_per_client)
        .map(|chunk| LogisticClient {
            rows: chunk.iter().map(|(a, _)| a.clone()).collect(),
            labels: chunk.iter().map(|(_, b)| *b).collect(),
        })
        .collect();

    Ok(Problem {
        n_clients,
        dimension,
        lambda_reg,
        data: ClientFunctions::Logistic(clients),
    })
}

/// Diagonal quadratic instance `f_i(x) = ½ (x−c_i)ᵀ diag(q) (x−c_i)`.
///
/// The diagonal is geometric between 1 and 10, so the conditioning is fixed;
/// `heterogeneity` scales per-client offsets of the centers.
pub fn generate_quadratic(
    n_clients: usize,
    dimension: usize,
    heterogeneity: f64,
    seed: u64,
) -> Result<Problem, ProblemError> {
    if n_clients == 0 || dimension == 0 {
        return Err(ProblemError::InvalidConfig(
            "n_clients and d must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&heterogeneity) {
        return Err(ProblemError::InvalidConfig(
            "heterogeneity must lie in [0, 1]".into(),
        ));
    }
    use rand::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let denom = (dimension - 1).max(1) as f64;
    let diag = Vector::from_vec(
        (0..dimension)
            .map(|j| 10f64.powf(j as f64 / denom))
            .collect(),
    );
    let mut shared = Vector::zeros(dimension);
    for e in shared.0.iter_mut() {
        *e = StandardNormal.sample(&mut rng);
    }
    let centers = (0..n_clients)
        .map(|_| {
            let mut c = shared.clone();
            for e in c.0.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *e += heterogeneity * z;
            }
            c
        })
        .collect();

    Ok(Problem {
        n_clients,
        dimension,
        lambda_reg: 0.0,
        data: ClientFunctions::Quadratic { diag, centers },
    })
}

/// Solve for the reference optimum with deterministic accelerated gradient
/// descent (gradient restart) until `‖∇f(x)‖ ≤ tolerance`.
pub fn solve_reference(
    problem: &Problem,
    tolerance: f64,
    max_iterations: u64,
) -> Result<ReferenceSolution, ProblemError> {
    let l = problem.smoothness_bound();
    let step = 1.0 / l;
    let mut x = Vector::zeros(problem.dimension);
    let mut x_prev = x.clone();
    let mut k: u64 = 0;
    let mut grad_norm = problem.gradient(&x).norm();
    let mut iterations = 0;
    while grad_norm > tolerance {
        if iterations >= max_iterations {
            return Err(ProblemError::SolverDidNotConverge {
                iterations,
                grad_norm,
                tolerance,
            });
        }
        let beta = k as f64 / (k as f64 + 3.0);
        let y = Vector::lincomb(1.0 + beta, &x, -beta, &x_prev);
        let g_y = problem.gradient(&y);
        let mut x_next = y.clone();
        x_next.add_scaled(-step, &g_y);
        // gradient restart: momentum reset when progress reverses
        if g_y.dot(&x_next.sub(&x)) > 0.0 {
            k = 0;
        } else {
            k += 1;
        }
        x_prev = x;
        x = x_next;
        grad_norm = problem.gradient(&x).norm();
        iterations += 1;
    }
    let f_star = problem.value(&x);
    Ok(ReferenceSolution {
        x_star: x,
        f_star,
        solve_tolerance: tolerance,
        grad_norm,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn random_point(dim: usize, scale: f64, rng: &mut ChaCha12Rng) -> Vector {
        Vector::from_vec(
            (0..dim)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(rng);
                    scale * z
                })
                .collect(),
        )
    }

    #[test]
    fn logistic_loss_at_origin_is_log_two() {
        let a = Vector::from_vec(vec![1.0, -2.0, 0.5]);
        let x = Vector::zeros(3);
        assert!((logistic_loss(&a, 0.0, &x) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn quadratic_gradient_closed_form() {
        // f(x) = ½‖x‖² comes from diag = 1, center = 0
        let problem = Problem {
            n_clients: 1,
            dimension: 2,
            lambda_reg: 0.0,
            data: ClientFunctions::Quadratic {
                diag: Vector::from_vec(vec![1.0, 1.0]),
                centers: vec![Vector::zeros(2)],
            },
        };
        let g = problem.gradient(&Vector::from_vec(vec![1.0, 2.0]));
        assert_eq!(g.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let problem =
            generate_synthetic_logistic(3, 6, 8, 0.3, 1e-6, 7).unwrap();
        let mut r = rng(11);
        for _ in 0..20 {
            let x = random_point(6, 2.0, &mut r);
            let g = problem.gradient(&x);
            let h = 1e-6;
            for j in 0..6 {
                let mut xp = x.clone();
                xp[j] += h;
                let mut xm = x.clone();
                xm[j] -= h;
                let fd = (problem.value(&xp) - problem.value(&xm)) / (2.0 * h);
                let tol = 1e-5 * (1.0 + g[j].abs().max(fd.abs()));
                assert!((g[j] - fd).abs() <= tol, "coord {j}: {} vs {}", g[j], fd);
            }
        }
    }

    #[test]
    fn client_decomposition_matches_pooled() {
        let problem = generate_synthetic_logistic(4, 5, 10, 0.0, 1e-6, 3).unwrap();
        // pooled oracle: flatten all client data and evaluate directly
        let (all_rows, all_labels): (Vec<Vector>, Vec<f64>) = match &problem.data {
            ClientFunctions::Logistic(clients) => (
                clients.iter().flat_map(|c| c.rows.iter().cloned()).collect(),
                clients.iter().flat_map(|c| c.labels.iter().copied()).collect(),
            ),
            _ => unreachable!(),
        };
        let mut r = rng(5);
        for _ in 0..20 {
            let x = random_point(5, 1.5, &mut r);
            let pooled_value = all_rows
                .iter()
                .zip(&all_labels)
                .map(|(a, &b)| logistic_loss(a, b, &x))
                .sum::<f64>()
                / all_rows.len() as f64
                + 0.5 * problem.lambda_reg * x.norm_sq();
            let avg_value = problem.value(&x);
            assert!(
                (pooled_value - avg_value).abs() <= 1e-12 * (1.0 + pooled_value.abs()),
                "{pooled_value} vs {avg_value}"
            );

            let mut pooled_grad = Vector::zeros(5);
            for (a, &b) in all_rows.iter().zip(&all_labels) {
                let coef = sigmoid(a.dot(&x)) - b;
                pooled_grad.add_scaled(coef / all_rows.len() as f64, a);
            }
            pooled_grad.add_scaled(problem.lambda_reg, &x);
            let avg_grad = problem.gradient(&x);
            for j in 0..5 {
                assert!((pooled_grad[j] - avg_grad[j]).abs() <= 1e-12 * (1.0 + pooled_grad[j].abs()));
            }
        }
    }

    #[test]
    fn stochastic_gradient_zero_noise_is_exact() {
        let problem = generate_synthetic_logistic(2, 4, 6, 0.0, 1e-6, 1).unwrap();
        let oracle = Oracle::new(&problem, 0.0);
        let x = Vector::from_vec(vec![0.5, -0.5, 1.0, 0.0]);
        let g = oracle.stochastic_gradient(0, &x, &mut rng(0));
        assert_eq!(g, problem.client_gradient(0, &x));
    }

    #[test]
    fn stochastic_gradient_unbiased_and_variance_matches() {
        let problem = generate_synthetic_logistic(2, 4, 6, 0.0, 1e-6, 2).unwrap();
        let sigma2 = 25.0;
        let oracle = Oracle::new(&problem, sigma2);
        let x = Vector::from_vec(vec![0.2, -1.0, 0.4, 0.9]);
        let exact = problem.client_gradient(1, &x);
        let n = 10_000;
        let mut r = rng(42);
        let mut mean = Vector::zeros(4);
        let mut sq = 0.0;
        for _ in 0..n {
            let g = oracle.stochastic_gradient(1, &x, &mut r);
            let noise = g.sub(&exact);
            sq += noise.norm_sq();
            mean.add_scaled(1.0 / n as f64, &g);
        }
        // per-coordinate SE of the mean is sqrt(σ²/d / n)
        let se = (sigma2 / 4.0 / n as f64).sqrt();
        for j in 0..4 {
            assert!(
                (mean[j] - exact[j]).abs() <= 4.0 * se,
                "coord {j} off by {}",
                (mean[j] - exact[j]).abs()
            );
        }
        let var = sq / n as f64;
        assert!((var - sigma2).abs() <= 0.05 * sigma2, "variance {var}");
    }

    #[test]
    fn bregman_identities() {
        let quad = Problem {
            n_clients: 1,
            dimension: 3,
            lambda_reg: 0.0,
            data: ClientFunctions::Quadratic {
                diag: Vector::from_vec(vec![1.0; 3]),
                centers: vec![Vector::zeros(3)],
            },
        };
        let x = Vector::from_vec(vec![1.0, 0.0, -2.0]);
        let y = Vector::from_vec(vec![0.0, 3.0, 1.0]);
        let b = bregman(&quad, &x, &y);
        assert!((b - 0.5 * y.dist_sq(&x)).abs() < 1e-12);
        assert!(bregman(&quad, &x, &x).abs() < 1e-15);

        let logi = generate_synthetic_logistic(3, 5, 8, 0.5, 1e-6, 9).unwrap();
        let l = logi.smoothness_bound();
        let mut r = rng(3);
        for _ in 0..20 {
            let x = random_point(5, 1.0, &mut r);
            let y = random_point(5, 1.0, &mut r);
            let b = bregman(&logi, &x, &y);
            assert!(b >= -1e-12);
            assert!(b <= 0.5 * l * y.dist_sq(&x) + 1e-12);
        }
    }

    #[test]
    fn convexity_probe() {
        let problem = generate_synthetic_logistic(2, 4, 10, 0.2, 1e-6, 17).unwrap();
        let mut r = rng(23);
        for _ in 0..20 {
            let x = random_point(4, 2.0, &mut r);
            let y = random_point(4, 2.0, &mut r);
            let t: f64 = r.random_range(0.01..0.99);
            let mid = Vector::lincomb(t, &x, 1.0 - t, &y);
            assert!(
                problem.value(&mid) <= t * problem.value(&x) + (1.0 - t) * problem.value(&y) + 1e-12
            );
        }
    }

    #[test]
    fn reference_solver_quadratic_center() {
        let problem = Problem {
            n_clients: 1,
            dimension: 3,
            lambda_reg: 0.0,
            data: ClientFunctions::Quadratic {
                diag: Vector::from_vec(vec![1.0, 2.0, 5.0]),
                centers: vec![Vector::from_vec(vec![1.0, -2.0, 0.5])],
            },
        };
        let sol = solve_reference(&problem, 1e-12, 1_000_000).unwrap();
        for (a, b) in sol.x_star.as_slice().iter().zip([1.0, -2.0, 0.5]) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(sol.f_star.abs() < 1e-18);
    }

    #[test]
    fn reference_solver_logistic_hits_tolerance() {
        let problem = generate_synthetic_logistic(4, 6, 10, 0.7, 1e-6, 5).unwrap();
        let sol = solve_reference(&problem, 1e-10, 5_000_000).unwrap();
        assert!(problem.gradient(&sol.x_star).norm() <= 1e-10);
    }

    #[test]
    fn heterogeneity_one_sorts_labels() {
        let problem = generate_synthetic_logistic(2, 3, 6, 1.0, 1e-6, 8).unwrap();
        match &problem.data {
            ClientFunctions::Logistic(clients) => {
                assert!(clients[0].labels.iter().all(|&b| b == 0.0));
                assert!(clients[1].labels.iter().all(|&b| b == 1.0));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn degenerate_sizes_rejected() {
        assert!(generate_synthetic_logistic(0, 3, 5, 0.0, 0.0, 1).is_err());
        assert!(generate_synthetic_logistic(2, 0, 5, 0.0, 0.0, 1).is_err());
        assert!(generate_synthetic_logistic(2, 3, 5, 1.5, 0.0, 1).is_err());
        assert!(generate_quadratic(0, 3, 0.0, 1).is_err());
    }
}

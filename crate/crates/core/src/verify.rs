//! Named invariant suites behind the `verify` subcommand.
//!
//! Each suite is deterministic given a seed and prints one pass/fail line
//! per property.

use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::compressors::{compress, contraction_parameter, estimate_contraction, CompressorKind};
use crate::diagnostics::{self, accumulated_errors};
use crate::harness::{self, MethodConfig, ProblemConfig, RunConfig, ScheduleConfig};
use crate::problems::ProblemKind;
use crate::vector::Vector;

#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn property(name: &str, passed: bool, detail: String) -> PropertyResult {
    PropertyResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

pub const SUITES: [&str; 4] = [
    "contractivity",
    "error-identity",
    "lossless-reduction",
    "rate-fit-synthetic",
];

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<PropertyResult>, String> {
    match name {
        "contractivity" => Ok(contractivity(seed)),
        "error-identity" => error_identity(seed),
        "lossless-reduction" => lossless_reduction(seed),
        "rate-fit-synthetic" => Ok(rate_fit_synthetic()),
        other => Err(format!(
            "unknown suite '{other}'; available: {}",
            SUITES.join(", ")
        )),
    }
}

fn gaussian_vector(dim: usize, rng: &mut ChaCha12Rng) -> Vector {
    Vector::from_vec((0..dim).map(|_| StandardNormal.sample(rng)).collect())
}

fn contractivity(seed: u64) -> Vec<PropertyResult> {
    use rand::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    let d = 50;

    // TopK: deterministic, so the bound holds per call with zero tolerance
    let mut worst_margin = f64::NEG_INFINITY;
    let mut ok = true;
    for k in [1usize, 5, 25] {
        for _ in 0..100 {
            let x = gaussian_vector(d, &mut rng);
            let res = compress(&CompressorKind::TopK { k }, &x, &mut rng).unwrap();
            let bound = (1.0 - k as f64 / d as f64) * x.norm_sq();
            let err = res.output.dist_sq(&x);
            worst_margin = worst_margin.max(err - bound);
            ok &= err <= bound;
        }
    }
    results.push(property(
        "topk-per-call-contractive",
        ok,
        format!("worst err − bound = {worst_margin:.3e}"),
    ));

    // RandK: unbiased estimate of the per-coordinate survival probability
    let mut ok = true;
    let mut detail = String::new();
    for k in [1usize, 5, 25] {
        let x = gaussian_vector(d, &mut rng);
        let samples = 2000;
        let ratios: Vec<f64> = (0..samples)
            .map(|_| {
                compress(&CompressorKind::RandK { k }, &x, &mut rng)
                    .unwrap()
                    .output
                    .dist_sq(&x)
                    / x.norm_sq()
            })
            .collect();
        let mean = ratios.iter().sum::<f64>() / samples as f64;
        let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / samples as f64;
        let se = (var / samples as f64).sqrt();
        let bound = 1.0 - k as f64 / d as f64;
        ok &= mean <= bound + 3.0 * se;
        detail = format!("k={k}: mean {mean:.4} vs bound {bound:.4} + 3·{se:.1e}");
    }
    results.push(property("randk-contractive-in-expectation", ok, detail));

    // repeated compressor with full coverage reconstructs exactly
    let x = gaussian_vector(d, &mut rng);
    let kind = CompressorKind::Repeated {
        base: Box::new(CompressorKind::TopK { k: 7 }),
        rounds: d.div_ceil(7) as u32,
    };
    let res = compress(&kind, &x, &mut rng).unwrap();
    results.push(property(
        "repeated-full-cover-reconstructs",
        res.output == x,
        format!("residual {:.3e}", res.output.dist_sq(&x)),
    ));
    results.push(property(
        "repeated-cost-scales",
        res.transmitted_scalars == (d.div_ceil(7) as u64) * 7
            && res.transmitted_messages == d.div_ceil(7) as u64,
        format!(
            "scalars {} messages {}",
            res.transmitted_scalars, res.transmitted_messages
        ),
    ));

    // TopK idempotence
    let x = gaussian_vector(d, &mut rng);
    let once = compress(&CompressorKind::TopK { k: 9 }, &x, &mut rng).unwrap().output;
    let twice = compress(&CompressorKind::TopK { k: 9 }, &once, &mut rng)
        .unwrap()
        .output;
    results.push(property(
        "topk-idempotent",
        once == twice,
        String::new(),
    ));

    // absolute kinds respect their declared bound on every call
    let mut ok = true;
    for _ in 0..100 {
        let x = gaussian_vector(d, &mut rng);
        for kind in [
            CompressorKind::AbsoluteRound { step: 0.3 },
            CompressorKind::AbsoluteThreshold { threshold: 0.2 },
        ] {
            let bound = contraction_parameter(&kind, d).unwrap().delta_abs().unwrap();
            let res = compress(&kind, &x, &mut rng).unwrap();
            ok &= res.output.dist_sq(&x) <= bound * bound;
        }
    }
    results.push(property("absolute-bound-per-call", ok, String::new()));

    // empirical contraction estimates stay below the declared parameter
    let trials: Vec<Vector> = (0..5).map(|_| gaussian_vector(d, &mut rng)).collect();
    let mut ok = true;
    let mut detail = String::new();
    for (kind, samples) in [
        (CompressorKind::TopK { k: 5 }, 1),
        (CompressorKind::RandK { k: 5 }, 1000),
        (
            CompressorKind::Repeated {
                base: Box::new(CompressorKind::TopK { k: 5 }),
                rounds: 3,
            },
            1,
        ),
    ] {
        let delta = contraction_parameter(&kind, d).unwrap().delta().unwrap();
        let est = estimate_contraction(&kind, &trials, samples, &mut rng).unwrap();
        // statistical tolerance only matters for the sampled kinds
        let tol = if samples > 1 { 0.05 } else { 0.0 };
        ok &= est <= (1.0 - delta) + tol;
        detail = format!("last: estimate {est:.4} vs 1−δ = {:.4}", 1.0 - delta);
    }
    results.push(property("estimate-below-declared", ok, detail));

    results
}

fn error_identity_config(sigma2: f64, seed: u64, method: MethodConfig) -> RunConfig {
    RunConfig {
        problem: ProblemConfig {
            kind: ProblemKind::Logistic,
            n_clients: 4,
            d: 10,
            samples_per_client: 20,
            heterogeneity: 0.5,
            sigma2,
            lambda_reg: 1e-6,
            seed,
        },
        method,
        compressor: Some(CompressorKind::TopK { k: 1 }),
        schedule: Some(ScheduleConfig::ExperimentGamma {
            gamma: Some(0.01),
            delta: None,
        }),
        rounds: 200,
        seeds: vec![seed],
        grid: None,
        write_traces: false,
        export_data: false,
        reference_tolerance: 1e-10,
        reference_max_iterations: 5_000_000,
    }
}

/// `‖avg_i e_t^i − Σ_{j<t} a_{j+1}(ĝ_j − g_j)‖ ≤ 1e-9·(1 + ‖Σ‖)` per round.
pub fn check_error_identity(record: &crate::algorithms::RunRecord) -> (bool, f64) {
    let sums = accumulated_errors(record);
    let mut worst = 0.0f64;
    let mut ok = true;
    for (idx, round) in record.rounds.iter().enumerate() {
        let expected = &sums[idx + 1]; // e_{t+1}
        let gap = round.e_mean.sub(expected).norm();
        let tol = 1e-9 * (1.0 + expected.norm());
        worst = worst.max(gap / (1.0 + expected.norm()));
        ok &= gap <= tol;
    }
    (ok, worst)
}

fn error_identity(seed: u64) -> Result<Vec<PropertyResult>, String> {
    let mut results = Vec::new();
    for (label, method) in [
        ("adef", MethodConfig::Adef),
        ("vanilla-acc-ef", MethodConfig::VanillaAccEf),
    ] {
        for sigma2 in [0.0, 1.0] {
            let config = error_identity_config(sigma2, seed, method.clone());
            let resolved = harness::resolve(&config).map_err(|e| e.to_string())?;
            let record = harness::simulate(&resolved, seed).map_err(|e| e.to_string())?;
            let (ok, worst) = check_error_identity(&record);
            results.push(property(
                &format!("error-identity-{label}-sigma2-{sigma2}"),
                ok,
                format!("worst relative gap {worst:.3e}"),
            ));
        }
    }
    Ok(results)
}

fn lossless_reduction(seed: u64) -> Result<Vec<PropertyResult>, String> {
    let rounds = 300;
    let base = |method: MethodConfig| RunConfig {
        problem: ProblemConfig {
            kind: ProblemKind::Logistic,
            n_clients: 3,
            d: 8,
            samples_per_client: 15,
            heterogeneity: 0.4,
            sigma2: 1.0,
            lambda_reg: 1e-6,
            seed: 21,
        },
        method,
        compressor: Some(CompressorKind::Identity),
        schedule: Some(ScheduleConfig::ExperimentGamma {
            gamma: Some(1e-3),
            delta: Some(1.0),
        }),
        rounds,
        seeds: vec![seed],
        grid: None,
        write_traces: false,
        export_data: false,
        reference_tolerance: 1e-10,
        reference_max_iterations: 5_000_000,
    };

    let reference = harness::simulate(
        &harness::resolve(&base(MethodConfig::UncompressedAcc)).map_err(|e| e.to_string())?,
        seed,
    )
    .map_err(|e| e.to_string())?;

    let mut results = Vec::new();
    for (label, method) in [
        ("adef", MethodConfig::Adef),
        ("vanilla-acc-ef", MethodConfig::VanillaAccEf),
        ("neolithic-r3", MethodConfig::Neolithic { rounds: 3 }),
    ] {
        let record = harness::simulate(
            &harness::resolve(&base(method)).map_err(|e| e.to_string())?,
            seed,
        )
        .map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for (a, b) in record.rounds.iter().zip(&reference.rounds) {
            for (xa, xb) in a.x_next.as_slice().iter().zip(b.x_next.as_slice()) {
                worst = worst.max((xa - xb).abs());
            }
        }
        results.push(property(
            &format!("lossless-{label}-matches-uncompressed"),
            record.rounds.len() == reference.rounds.len() && worst <= 1e-12,
            format!("max coordinate gap {worst:.3e} over {rounds} rounds"),
        ));
    }
    Ok(results)
}

fn rate_fit_synthetic() -> Vec<PropertyResult> {
    let mut results = Vec::new();
    for (label, power) in [("1-over-t", -1.0), ("1-over-t2", -2.0)] {
        let series: Vec<f64> = (1..=500).map(|t| 2.3 * (t as f64).powf(power)).collect();
        let fit = diagnostics::fit_series(&series, 1, 501).unwrap();
        let err = (fit.slope - power).abs();
        results.push(property(
            &format!("rate-fit-{label}"),
            err < 1e-6,
            format!("slope {} (error {err:.2e})", fit.slope),
        ));
    }
    results
}

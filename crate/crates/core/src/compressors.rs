//! Compression operators applied to client→server messages.
//!
//! Two families are supported. Contractive compressors satisfy
//! `E‖C(x)−x‖² ≤ (1−δ)‖x‖²` for a declared `δ ∈ (0,1]`; absolute compressors
//! satisfy `E‖C(x)−x‖² ≤ Δ²` uniformly in `x`. Every call reports how many
//! scalars and integer indices the message would cost on the wire, so runs
//! can account communication exactly.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vector::Vector;

/// Smallest admissible `a_t`; schedules below this are rejected because the
/// error-feedback update divides by `a_{t+1}`.
pub const MIN_STEP: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum CompressError {
    #[error("dimension mismatch: compressor built for d={expected}, input has d={got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite input vector")]
    NonFiniteInput,
    #[error("invalid compressor: {0}")]
    InvalidKind(String),
    #[error("trial vector must be nonzero")]
    ZeroTrialVector,
}

/// A compression operator together with its parameters.
///
/// `Repeated` wraps a contractive base and re-compresses the residual for a
/// fixed number of rounds, transmitting one message per round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CompressorKind {
    /// Keep the `k` largest-magnitude entries, zero the rest. Ties keep the
    /// lower index so traces are reproducible.
    #[serde(rename = "topk")]
    TopK { k: usize },
    /// Keep `k` uniformly chosen coordinates, unscaled (biased, contractive).
    #[serde(rename = "randk")]
    RandK { k: usize },
    /// Lossless passthrough, `δ = 1`; costs a dense message.
    #[serde(rename = "identity")]
    Identity,
    /// Apply `base` to the running residual for `rounds` rounds and sum the
    /// increments.
    #[serde(rename = "repeated")]
    Repeated {
        base: Box<CompressorKind>,
        rounds: u32,
    },
    /// Round every coordinate to the nearest multiple of `step`.
    #[serde(rename = "absolute_round")]
    AbsoluteRound { step: f64 },
    /// Zero every coordinate with magnitude at most `threshold`.
    #[serde(rename = "absolute_threshold")]
    AbsoluteThreshold { threshold: f64 },
}

/// Declared error bound of a compressor: either the contraction factor `δ`
/// or the absolute bound `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CompressionBound {
    Contractive { delta: f64 },
    Absolute { delta_abs: f64 },
}

impl CompressionBound {
    pub fn delta(&self) -> Option<f64> {
        match self {
            CompressionBound::Contractive { delta } => Some(*delta),
            CompressionBound::Absolute { .. } => None,
        }
    }

    pub fn delta_abs(&self) -> Option<f64> {
        match self {
            CompressionBound::Contractive { .. } => None,
            CompressionBound::Absolute { delta_abs } => Some(*delta_abs),
        }
    }
}

/// Output of one compression call plus its exact transmission cost.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionResult {
    pub output: Vector,
    /// Real values sent client→server.
    pub transmitted_scalars: u64,
    /// Integer coordinate indices sent client→server.
    pub transmitted_indices: u64,
    /// Messages sent (1 for plain kinds, `rounds` per level for `Repeated`).
    pub transmitted_messages: u64,
}

impl CompressorKind {
    pub fn is_absolute(&self) -> bool {
        matches!(
            self,
            CompressorKind::AbsoluteRound { .. } | CompressorKind::AbsoluteThreshold { .. }
        )
    }

    /// Validate the parameters against the run dimension `d`.
    pub fn validate(&self, dim: usize) -> Result<(), CompressError> {
        if dim == 0 {
            return Err(CompressError::InvalidKind("dimension must be positive".into()));
        }
        match self {
            CompressorKind::TopK { k } | CompressorKind::RandK { k } => {
                if *k == 0 || *k > dim {
                    return Err(CompressError::InvalidKind(format!(
                        "k must satisfy 1 <= k <= d, got k={k}, d={dim}"
                    )));
                }
            }
            CompressorKind::Identity => {}
            CompressorKind::Repeated { base, rounds } => {
                if *rounds == 0 {
                    return Err(CompressError::InvalidKind("rounds must be >= 1".into()));
                }
                if base.is_absolute() {
                    return Err(CompressError::InvalidKind(
                        "repeated base must be contractive, not absolute".into(),
                    ));
                }
                base.validate(dim)?;
            }
            CompressorKind::AbsoluteRound { step } => {
                if *step <= 0.0 || !step.is_finite() {
                    return Err(CompressError::InvalidKind(
                        "absolute_round step must be a positive real".into(),
                    ));
                }
            }
            CompressorKind::AbsoluteThreshold { threshold } => {
                if *threshold < 0.0 || !threshold.is_finite() {
                    return Err(CompressError::InvalidKind(
                        "absolute_threshold must be a nonnegative real".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Apply `kind` to `x`, drawing any randomness from `rng`.
pub fn compress<R: Rng>(
    kind: &CompressorKind,
    x: &Vector,
    rng: &mut R,
) -> Result<CompressionResult, CompressError> {
    kind.validate(x.len())?;
    if !x.is_finite() {
        return Err(CompressError::NonFiniteInput);
    }
    Ok(compress_unchecked(kind, x, rng))
}

fn compress_unchecked<R: Rng>(kind: &CompressorKind, x: &Vector, rng: &mut R) -> CompressionResult {
    let d = x.len();
    match kind {
        CompressorKind::TopK { k } => {
            let mut order: Vec<usize> = (0..d).collect();
            // largest magnitude first, ties keep the lower index
            order.sort_by(|&i, &j| {
                x[j].abs()
                    .partial_cmp(&x[i].abs())
                    .unwrap()
                    .then(i.cmp(&j))
            });
            let mut out = Vector::zeros(d);
            for &i in order.iter().take(*k) {
                out[i] = x[i];
            }
            CompressionResult {
                output: out,
                transmitted_scalars: *k as u64,
                transmitted_indices: *k as u64,
                transmitted_messages: 1,
            }
        }
        CompressorKind::RandK { k } => {
            let chosen = rand::seq::index::sample(rng, d, *k);
            let mut out = Vector::zeros(d);
            for i in chosen {
                out[i] = x[i];
            }
            CompressionResult {
                output: out,
                transmitted_scalars: *k as u64,
                transmitted_indices: *k as u64,
                transmitted_messages: 1,
            }
        }
        CompressorKind::Identity => CompressionResult {
            output: x.clone(),
            transmitted_scalars: d as u64,
            transmitted_indices: 0,
            transmitted_messages: 1,
        },
        CompressorKind::Repeated { base, rounds } => {
            let mut acc = Vector::zeros(d);
            let mut scalars = 0;
            let mut indices = 0;
            let mut messages = 0;
            for _ in 0..*rounds {
                let residual = x.sub(&acc);
                let inc = compress_unchecked(base, &residual, rng);
                acc.add_scaled(1.0, &inc.output);
                scalars += inc.transmitted_scalars;
                indices += inc.transmitted_indices;
                messages += inc.transmitted_messages;
            }
            CompressionResult {
                output: acc,
                transmitted_scalars: scalars,
                transmitted_indices: indices,
                transmitted_messages: messages,
            }
        }
        CompressorKind::AbsoluteRound { step } => {
            let out = x
                .as_slice()
                .iter()
                .map(|&v| {
                    let r = (v / step).round() * step;
                    if r == 0.0 {
                        0.0
                    } else {
                        r
                    }
                })
                .collect();
            CompressionResult {
                output: Vector::from_vec(out),
                transmitted_scalars: d as u64,
                transmitted_indices: 0,
                transmitted_messages: 1,
            }
        }
        CompressorKind::AbsoluteThreshold { threshold } => {
            let out = x
                .as_slice()
                .iter()
                .map(|&v| if v.abs() > *threshold { v } else { 0.0 })
                .collect();
            CompressionResult {
                output: Vector::from_vec(out),
                transmitted_scalars: d as u64,
                transmitted_indices: 0,
                transmitted_messages: 1,
            }
        }
    }
}

/// Declared bound used by stepsize schedules: `δ` for contractive kinds,
/// `Δ` for absolute ones.
///
/// `δ(TopK) = δ(RandK) = k/d`, `δ(Identity) = 1` and
/// `δ(Repeated(base, R)) = 1 − (1−δ(base))^R`. Absolute kinds declare the
/// worst-case dense bound: `Δ² = d·step²/4` for rounding and `Δ² = d·τ²`
/// for thresholding.
pub fn contraction_parameter(
    kind: &CompressorKind,
    dim: usize,
) -> Result<CompressionBound, CompressError> {
    kind.validate(dim)?;
    Ok(match kind {
        CompressorKind::TopK { k } | CompressorKind::RandK { k } => CompressionBound::Contractive {
            delta: *k as f64 / dim as f64,
        },
        CompressorKind::Identity => CompressionBound::Contractive { delta: 1.0 },
        CompressorKind::Repeated { base, rounds } => {
            let base_delta = contraction_parameter(base, dim)?
                .delta()
                .expect("validated: repeated base is contractive");
            CompressionBound::Contractive {
                delta: 1.0 - (1.0 - base_delta).powi(*rounds as i32),
            }
        }
        CompressorKind::AbsoluteRound { step } => CompressionBound::Absolute {
            delta_abs: (dim as f64).sqrt() * step / 2.0,
        },
        CompressorKind::AbsoluteThreshold { threshold } => CompressionBound::Absolute {
            delta_abs: (dim as f64).sqrt() * threshold,
        },
    })
}

/// Empirical worst-case relative error `max_x mean_s ‖C(x)−x‖² / ‖x‖²`.
///
/// For a valid contractive compressor the result must not exceed
/// `1 − δ` beyond statistical tolerance.
pub fn estimate_contraction<R: Rng>(
    kind: &CompressorKind,
    trial_vectors: &[Vector],
    samples_per_vector: u32,
    rng: &mut R,
) -> Result<f64, CompressError> {
    assert!(samples_per_vector >= 1);
    let mut worst: f64 = 0.0;
    for x in trial_vectors {
        let norm_sq = x.norm_sq();
        if norm_sq == 0.0 {
            return Err(CompressError::ZeroTrialVector);
        }
        let mut acc = 0.0;
        for _ in 0..samples_per_vector {
            let res = compress(kind, x, rng)?;
            acc += res.output.dist_sq(x);
        }
        worst = worst.max(acc / samples_per_vector as f64 / norm_sq);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn v(entries: &[f64]) -> Vector {
        Vector::from_vec(entries.to_vec())
    }

    #[test]
    fn topk_keeps_largest_magnitudes() {
        let res = compress(&CompressorKind::TopK { k: 2 }, &v(&[3.0, -1.0, 2.0]), &mut rng(0)).unwrap();
        assert_eq!(res.output.as_slice(), &[3.0, 0.0, 2.0]);
        assert_eq!(res.transmitted_scalars, 2);
        assert_eq!(res.transmitted_indices, 2);
        assert_eq!(res.transmitted_messages, 1);
    }

    #[test]
    fn topk_ties_keep_lower_index() {
        let res = compress(&CompressorKind::TopK { k: 2 }, &v(&[1.0, -1.0, 1.0]), &mut rng(0)).unwrap();
        assert_eq!(res.output.as_slice(), &[1.0, -1.0, 0.0]);
    }

    #[test]
    fn identity_is_lossless_with_dense_cost() {
        let x = v(&[0.5, -2.0, 7.0]);
        let res = compress(&CompressorKind::Identity, &x, &mut rng(0)).unwrap();
        assert_eq!(res.output, x);
        assert_eq!(res.transmitted_scalars, 3);
        assert_eq!(res.transmitted_indices, 0);
        let bound = contraction_parameter(&CompressorKind::Identity, 3).unwrap();
        assert_eq!(bound.delta(), Some(1.0));
    }

    #[test]
    fn repeated_topk_full_cover_reconstructs_exactly() {
        // R = ceil(d/k) rounds of TopK cover every coordinate
        let kind = CompressorKind::Repeated {
            base: Box::new(CompressorKind::TopK { k: 1 }),
            rounds: 3,
        };
        let x = v(&[0.3, -5.0, 1.5]);
        let res = compress(&kind, &x, &mut rng(0)).unwrap();
        assert_eq!(res.output, x);
        assert_eq!(res.transmitted_scalars, 3);
        assert_eq!(res.transmitted_indices, 3);
        assert_eq!(res.transmitted_messages, 3);
    }

    #[test]
    fn absolute_round_enumerated_example() {
        let res = compress(
            &CompressorKind::AbsoluteRound { step: 0.5 },
            &v(&[0.6, -0.1]),
            &mut rng(0),
        )
        .unwrap();
        assert_eq!(res.output.as_slice(), &[0.5, 0.0]);
        for (a, b) in res.output.as_slice().iter().zip([0.6, -0.1]) {
            assert!((a - b).abs() <= 0.25);
        }
        assert_eq!(res.transmitted_scalars, 2);
    }

    #[test]
    fn declared_parameters() {
        assert_eq!(
            contraction_parameter(&CompressorKind::TopK { k: 1 }, 10)
                .unwrap()
                .delta(),
            Some(0.1)
        );
        let rep = CompressorKind::Repeated {
            base: Box::new(CompressorKind::TopK { k: 1 }),
            rounds: 2,
        };
        let delta = contraction_parameter(&rep, 10).unwrap().delta().unwrap();
        assert!((delta - 0.19).abs() < 1e-15);
        let ar = contraction_parameter(&CompressorKind::AbsoluteRound { step: 0.5 }, 4).unwrap();
        assert_eq!(ar.delta_abs(), Some(0.5)); // sqrt(4)*0.5/2
    }

    #[test]
    fn estimate_contraction_tight_cases() {
        // lossless
        let e = estimate_contraction(
            &CompressorKind::TopK { k: 2 },
            &[v(&[1.0, -3.0])],
            1,
            &mut rng(1),
        )
        .unwrap();
        assert_eq!(e, 0.0);
        // tight worst case for TopK(1) in d=2
        let e = estimate_contraction(
            &CompressorKind::TopK { k: 1 },
            &[v(&[1.0, 1.0])],
            1,
            &mut rng(1),
        )
        .unwrap();
        assert!((e - 0.5).abs() < 1e-15);
        // RandK(1), d=2, x=(1,0): two equiprobable outcomes with errors 0 and 1
        let e = estimate_contraction(
            &CompressorKind::RandK { k: 1 },
            &[v(&[1.0, 0.0])],
            20_000,
            &mut rng(2),
        )
        .unwrap();
        assert!((e - 0.5).abs() < 0.02, "estimate {e}");
    }

    #[test]
    fn estimate_rejects_zero_vector() {
        let err = estimate_contraction(
            &CompressorKind::TopK { k: 1 },
            &[v(&[0.0, 0.0])],
            1,
            &mut rng(0),
        )
        .unwrap_err();
        assert_eq!(err, CompressError::ZeroTrialVector);
    }

    #[test]
    fn invalid_kinds_rejected() {
        assert!(CompressorKind::TopK { k: 0 }.validate(5).is_err());
        assert!(CompressorKind::TopK { k: 6 }.validate(5).is_err());
        assert!(CompressorKind::Repeated {
            base: Box::new(CompressorKind::AbsoluteRound { step: 0.1 }),
            rounds: 2
        }
        .validate(5)
        .is_err());
        assert!(CompressorKind::Repeated {
            base: Box::new(CompressorKind::TopK { k: 1 }),
            rounds: 0
        }
        .validate(5)
        .is_err());
        assert!(CompressorKind::AbsoluteRound { step: 0.0 }.validate(5).is_err());
    }

    #[test]
    fn non_finite_input_rejected() {
        let err = compress(&CompressorKind::Identity, &v(&[f64::NAN]), &mut rng(0)).unwrap_err();
        assert_eq!(err, CompressError::NonFiniteInput);
    }

    #[test]
    fn config_json_round_trip() {
        let kind: CompressorKind =
            serde_json::from_str(r#"{"kind":"repeated","base":{"kind":"topk","k":10},"rounds":5}"#)
                .unwrap();
        assert_eq!(
            kind,
            CompressorKind::Repeated {
                base: Box::new(CompressorKind::TopK { k: 10 }),
                rounds: 5
            }
        );
        let back = serde_json::to_string(&kind).unwrap();
        assert_eq!(serde_json::from_str::<CompressorKind>(&back).unwrap(), kind);
    }

    #[test]
    fn same_seed_same_output() {
        let kind = CompressorKind::RandK { k: 3 };
        let x = v(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        let a = compress(&kind, &x, &mut rng(99)).unwrap();
        let b = compress(&kind, &x, &mut rng(99)).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn topk_contractive_per_call(
            entries in proptest::collection::vec(-100.0f64..100.0, 1..40),
            k_frac in 0.0f64..1.0,
        ) {
            let d = entries.len();
            let k = ((k_frac * d as f64) as usize).clamp(1, d);
            let x = Vector::from_vec(entries);
            let res = compress(&CompressorKind::TopK { k }, &x, &mut rng(0)).unwrap();
            let delta = k as f64 / d as f64;
            prop_assert!(res.output.dist_sq(&x) <= (1.0 - delta) * x.norm_sq() + 1e-12);
        }

        #[test]
        fn topk_idempotent(entries in proptest::collection::vec(-100.0f64..100.0, 1..40)) {
            let d = entries.len();
            let k = (d / 2).max(1);
            let x = Vector::from_vec(entries);
            let once = compress(&CompressorKind::TopK { k }, &x, &mut rng(0)).unwrap().output;
            let twice = compress(&CompressorKind::TopK { k }, &once, &mut rng(0)).unwrap().output;
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn randk_contractive_in_expectation(
            entries in proptest::collection::vec(-10.0f64..10.0, 2..12),
            seed in 0u64..1000,
        ) {
            let d = entries.len();
            let k = (d / 2).max(1);
            let x = Vector::from_vec(entries);
            prop_assume!(x.norm_sq() > 1e-6);
            let kind = CompressorKind::RandK { k };
            let mut r = rng(seed);
            let n = 1000;
            let ratios: Vec<f64> = (0..n)
                .map(|_| compress(&kind, &x, &mut r).unwrap().output.dist_sq(&x) / x.norm_sq())
                .collect();
            let mean = ratios.iter().sum::<f64>() / n as f64;
            let var = ratios.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            let se = (var / n as f64).sqrt();
            let delta = k as f64 / d as f64;
            // 5σ band: proptest samples hundreds of cases, so a 3σ band
            // trips on multiple testing alone
            prop_assert!(mean <= (1.0 - delta) + 5.0 * se + 1e-9,
                "mean {mean} vs bound {} (se {se})", 1.0 - delta);
        }

        #[test]
        fn repeated_cost_scales_with_rounds(
            entries in proptest::collection::vec(-10.0f64..10.0, 2..12),
            rounds in 1u32..6,
        ) {
            let d = entries.len();
            let k = (d / 3).max(1);
            let x = Vector::from_vec(entries);
            let base = CompressorKind::TopK { k };
            let base_cost = compress(&base, &x, &mut rng(0)).unwrap();
            let rep = CompressorKind::Repeated { base: Box::new(base), rounds };
            let rep_cost = compress(&rep, &x, &mut rng(0)).unwrap();
            prop_assert_eq!(rep_cost.transmitted_scalars,
                rounds as u64 * base_cost.transmitted_scalars);
            prop_assert_eq!(rep_cost.transmitted_indices,
                rounds as u64 * base_cost.transmitted_indices);
            prop_assert_eq!(rep_cost.transmitted_messages, rounds as u64);
        }

        #[test]
        fn repeated_residual_within_power_bound(
            entries in proptest::collection::vec(-10.0f64..10.0, 3..10),
            rounds in 1u32..5,
        ) {
            // TopK is deterministic, so the (1−δ)^R bound holds per call.
            let d = entries.len();
            let x = Vector::from_vec(entries);
            let kind = CompressorKind::Repeated {
                base: Box::new(CompressorKind::TopK { k: 1 }),
                rounds,
            };
            let res = compress(&kind, &x, &mut rng(0)).unwrap();
            let delta = 1.0 / d as f64;
            let bound = (1.0 - delta).powi(rounds as i32) * x.norm_sq();
            prop_assert!(res.output.dist_sq(&x) <= bound + 1e-12);
        }

        #[test]
        fn absolute_bounds_hold_per_call(
            entries in proptest::collection::vec(-10.0f64..10.0, 1..20),
            step in 0.01f64..2.0,
        ) {
            let x = Vector::from_vec(entries.clone());
            let d = entries.len();
            for kind in [
                CompressorKind::AbsoluteRound { step },
                CompressorKind::AbsoluteThreshold { threshold: step },
            ] {
                let res = compress(&kind, &x, &mut rng(0)).unwrap();
                let bound = contraction_parameter(&kind, d).unwrap().delta_abs().unwrap();
                prop_assert!(res.output.dist_sq(&x) <= bound * bound + 1e-12);
            }
        }
    }
}

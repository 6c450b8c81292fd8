//! Run configuration schema.
//!
//! A run file is a single JSON document; every block validates before any
//! computation starts, and a (config, seed) pair fully determines the run.

use serde::{Deserialize, Serialize};

use crate::compressors::CompressorKind;
use crate::problems::ProblemKind;

fn default_true() -> bool {
    true
}

fn default_lambda_reg() -> f64 {
    1e-6
}

fn default_reference_tolerance() -> f64 {
    1e-10
}

fn default_reference_max_iterations() -> u64 {
    5_000_000
}

fn default_samples_per_client() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub kind: ProblemKind,
    pub n_clients: usize,
    pub d: usize,
    #[serde(default = "default_samples_per_client")]
    pub samples_per_client: usize,
    #[serde(default)]
    pub heterogeneity: f64,
    #[serde(default)]
    pub sigma2: f64,
    #[serde(default = "default_lambda_reg")]
    pub lambda_reg: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum MethodConfig {
    /// Accelerated error feedback with gradient difference compression;
    /// two compressed messages per client per round.
    Adef,
    /// Accelerated method with plain error feedback; one message per round.
    VanillaAccEf,
    /// Unaccelerated error feedback with constant stepsize `eta`
    /// (taken from the grid when absent).
    Ef {
        #[serde(default)]
        eta: Option<f64>,
    },
    /// Naively compressed accelerated method; the base compressor is applied
    /// `rounds` times per message.
    Neolithic { rounds: u32 },
    /// Accelerated method under an absolute compressor.
    AbsoluteAcc,
    /// Accelerated stochastic gradient without compression.
    UncompressedAcc,
}

impl MethodConfig {
    pub fn name(&self) -> &'static str {
        match self {
            MethodConfig::Adef => "adef",
            MethodConfig::VanillaAccEf => "vanilla_acc_ef",
            MethodConfig::Ef { .. } => "ef",
            MethodConfig::Neolithic { .. } => "neolithic",
            MethodConfig::AbsoluteAcc => "absolute_acc",
            MethodConfig::UncompressedAcc => "uncompressed_acc",
        }
    }

    pub fn needs_schedule(&self) -> bool {
        !matches!(self, MethodConfig::Ef { .. })
    }

    pub fn needs_compressor(&self) -> bool {
        !matches!(self, MethodConfig::UncompressedAcc)
    }
}

/// Schedule block. Missing `m` means theory mode: the closed-form `M` is
/// evaluated from the problem constants. Missing `delta` is derived from the
/// compressor's declared contraction parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ScheduleConfig {
    #[serde(rename = "experiment_gamma")]
    ExperimentGamma {
        #[serde(default)]
        gamma: Option<f64>,
        #[serde(default)]
        delta: Option<f64>,
    },
    #[serde(rename = "theorem_adef")]
    TheoremAdef {
        #[serde(default)]
        m: Option<f64>,
        #[serde(default)]
        delta: Option<f64>,
    },
    #[serde(rename = "theorem_vanilla")]
    TheoremVanilla {
        #[serde(default)]
        m: Option<f64>,
        #[serde(default)]
        delta: Option<f64>,
        #[serde(default)]
        zeta2: Option<f64>,
    },
    #[serde(rename = "theorem_absolute")]
    TheoremAbsolute {
        #[serde(default)]
        m: Option<f64>,
    },
    #[serde(rename = "custom")]
    Custom { a: Vec<f64>, a0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub method: MethodConfig,
    #[serde(default)]
    pub compressor: Option<CompressorKind>,
    #[serde(default)]
    pub schedule: Option<ScheduleConfig>,
    pub rounds: u64,
    pub seeds: Vec<u64>,
    /// Grid over `gamma` (or `eta` for plain error feedback); when present,
    /// grid search runs every value with the same seeds and selects the
    /// argmin of the averaged final suboptimality.
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
    #[serde(default = "default_true")]
    pub write_traces: bool,
    #[serde(default)]
    pub export_data: bool,
    #[serde(default = "default_reference_tolerance")]
    pub reference_tolerance: f64,
    #[serde(default = "default_reference_max_iterations")]
    pub reference_max_iterations: u64,
}

impl RunConfig {
    /// Parse a config document, naming the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de)
            .map_err(|e| format!("{} (at {})", e.inner(), e.path()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

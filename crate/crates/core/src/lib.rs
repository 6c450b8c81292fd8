//! Simulator for distributed convex optimization under communication
//! compression: compression operators, synthetic problems, accelerated and
//! error-feedback methods over a client/server round structure, exact
//! communication accounting, and trace diagnostics.

pub mod algorithms;
pub mod cli;
pub mod compressors;
pub mod diagnostics;
pub mod harness;
pub mod problems;
pub mod streams;
pub mod vector;
pub mod verify;

pub use compressors::{compress, contraction_parameter, CompressionResult, CompressorKind};
pub use problems::{bregman, solve_reference, Oracle, Problem, ReferenceSolution};
pub use streams::{Channel, SeedPlan};
pub use vector::Vector;

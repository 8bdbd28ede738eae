//! Spectrum-based fault localization over basic-block coverage.
//!
//! The pipeline: run a program on a test suite while recording which basic
//! blocks each run enters, classify every run as passing or failing against
//! an expected-output oracle, then score each block's hit column against
//! the pass/fail decision vector with the SFLM similarity kernel. The block
//! most similar to the decision vector is the localization verdict.
//!
//! Modules:
//! - [`spectrum`]: coverage bits, the ternary block-hit function, the
//!   runs × blocks spectrum matrix, and its CSV interchange format.
//! - [`kernel`]: the SFLM kernel and baseline suspiciousness coefficients.
//! - [`minilang`]: a small imperative language front end that produces
//!   spectra from real executions (parser, leader-statement control-flow
//!   graph, tracing interpreter, test-suite files).
//! - [`localizer`]: per-block scoring, ranking, verdict, and report
//!   rendering.

pub mod kernel;
pub mod localizer;
pub mod minilang;
pub mod spectrum;

pub use kernel::{baseline_scores, eta, phi, sflm, BaselineScores, KernelError, SimilarityScore};
pub use localizer::{evaluate_rank, localize, LocalizerError, ReportEntry, SuspiciousnessReport};
pub use spectrum::{
    feature_vector, hit_function, BinaryVector, Bit, BlockFeatureVector, CsvError, HitValue,
    SpectrumError, SpectrumMatrix,
};

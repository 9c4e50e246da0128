//! Model-based grasp slip detection over discretized tactile force
//! distributions.
//!
//! A [`ForceFrame`] holds one `3 x n x n` force distribution. Two
//! classifiers consume it: a Coulomb test on whole-sensor totals and a
//! per-taxel stick-ratio test that also responds to rotational slip. The
//! [`sim`] module produces labeled frame sequences from analytic
//! contact-mechanics fields, and [`eval`] scores detector output against
//! those labels.

pub mod cli;
pub mod detect;
pub mod error;
pub mod eval;
pub mod format;
pub mod grid;
pub mod sequence;
pub mod sim;
pub mod trace;

pub use detect::{
    classify, coulomb_baseline_classify, detector_step, stick_ratio, stick_ratio_classify,
    Detector, DetectorConfig, DetectorKind, DetectorState, SlipState, StickRatioResult,
};
pub use error::{Error, Result};
pub use eval::{
    average_runs, compare_detectors, score_run, Comparison, ConfusionCounts, MetricsReport,
};
pub use format::{read_sequence, write_sequence};
pub use grid::{net_moment_z, total_shear_magnitude, AggregateForces, ForceFrame, TaxelGridSpec};
pub use sequence::{LabeledSequence, TruthInterval};
pub use trace::TraceRecord;

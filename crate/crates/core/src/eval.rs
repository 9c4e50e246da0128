//! Frame-level scoring of detector output against ground truth.

use crate::detect::{stick_ratio, Detector, DetectorConfig, DetectorKind, SlipState};
use crate::error::{Error, Result};
use crate::grid::AggregateForces;
use crate::sequence::LabeledSequence;
use crate::trace::TraceRecord;

/// Confusion counts with SLIP as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
    /// Frames predicted NO_CONTACT.
    pub ignored: usize,
    /// Frames with a contact prediction but no ground-truth interval.
    pub unlabeled: usize,
}

impl ConfusionCounts {
    pub fn scored(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    pub fn accuracy(&self) -> Option<f64> {
        ratio(self.true_pos + self.true_neg, self.scored())
    }

    pub fn precision(&self) -> Option<f64> {
        ratio(self.true_pos, self.true_pos + self.false_pos)
    }

    pub fn recall(&self) -> Option<f64> {
        ratio(self.true_pos, self.true_pos + self.false_neg)
    }

    fn add(&mut self, other: &ConfusionCounts) {
        self.true_pos += other.true_pos;
        self.false_pos += other.false_pos;
        self.true_neg += other.true_neg;
        self.false_neg += other.false_neg;
        self.ignored += other.ignored;
        self.unlabeled += other.unlabeled;
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Metrics of one detector run, or the mean over several runs.
///
/// Undefined ratios are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub run_id: String,
    pub detector: DetectorKind,
    pub config: DetectorConfig,
    /// Summed over runs for averaged reports.
    pub counts: ConfusionCounts,
    pub runs: usize,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

impl MetricsReport {
    pub fn from_counts(
        run_id: impl Into<String>,
        detector: DetectorKind,
        config: DetectorConfig,
        counts: ConfusionCounts,
    ) -> Self {
        Self {
            run_id: run_id.into(),
            detector,
            config,
            counts,
            runs: 1,
            accuracy: counts.accuracy(),
            precision: counts.precision(),
            recall: counts.recall(),
        }
    }
}

/// Compares one prediction per frame with the truth interval containing the
/// frame's timestamp.
pub fn confusion(predictions: &[SlipState], sequence: &LabeledSequence) -> Result<ConfusionCounts> {
    if predictions.len() != sequence.frames.len() {
        return Err(Error::LengthMismatch {
            predictions: predictions.len(),
            frames: sequence.frames.len(),
        });
    }
    let mut counts = ConfusionCounts::default();
    for (prediction, frame) in predictions.iter().zip(&sequence.frames) {
        if *prediction == SlipState::NoContact {
            counts.ignored += 1;
            continue;
        }
        let Some(truth) = sequence.truth_at(frame.timestamp()) else {
            counts.unlabeled += 1;
            continue;
        };
        match (*prediction == SlipState::Slip, truth == SlipState::Slip) {
            (true, true) => counts.true_pos += 1,
            (true, false) => counts.false_pos += 1,
            (false, false) => counts.true_neg += 1,
            (false, true) => counts.false_neg += 1,
        }
    }
    Ok(counts)
}

pub fn score_run(
    run_id: &str,
    detector: DetectorKind,
    config: DetectorConfig,
    predictions: &[SlipState],
    sequence: &LabeledSequence,
) -> Result<MetricsReport> {
    let counts = confusion(predictions, sequence)?;
    Ok(MetricsReport::from_counts(run_id, detector, config, counts))
}

/// Arithmetic mean of each metric over the runs where it is defined; counts
/// are summed.
pub fn average_runs(reports: &[MetricsReport]) -> Result<MetricsReport> {
    let first = reports.first().ok_or(Error::EmptyReports)?;
    if reports
        .iter()
        .any(|r| r.detector != first.detector || r.config != first.config)
    {
        return Err(Error::MixedConfigs);
    }
    if reports.len() == 1 {
        return Ok(first.clone());
    }
    let mean = |metric: fn(&MetricsReport) -> Option<f64>| {
        let values: Vec<f64> = reports.iter().filter_map(metric).collect();
        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
    };
    let mut counts = ConfusionCounts::default();
    for report in reports {
        counts.add(&report.counts);
    }
    let ids: Vec<&str> = reports.iter().map(|r| r.run_id.as_str()).collect();
    Ok(MetricsReport {
        run_id: format!("mean({})", ids.join(",")),
        detector: first.detector,
        config: first.config,
        counts,
        runs: reports.iter().map(|r| r.runs).sum(),
        accuracy: mean(|r| r.accuracy),
        precision: mean(|r| r.precision),
        recall: mean(|r| r.recall),
    })
}

/// Both detectors run over the same frames.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub baseline: MetricsReport,
    pub stick_ratio: MetricsReport,
    pub trace: Vec<TraceRecord>,
}

pub fn compare_detectors(
    sequence: &LabeledSequence,
    config: &DetectorConfig,
    run_id: &str,
) -> Result<Comparison> {
    let mut baseline = Detector::new(DetectorKind::Baseline, *config)?;
    let mut stick = Detector::new(DetectorKind::StickRatio, *config)?;
    let mut trace = Vec::with_capacity(sequence.frames.len());
    for frame in &sequence.frames {
        let agg = AggregateForces::compute(frame, &sequence.grid)?;
        trace.push(TraceRecord {
            timestamp: frame.timestamp(),
            normal: agg.normal,
            shear: agg.shear,
            moment_z: agg.moment_z,
            stick_ratio: stick_ratio(frame, config).ratio(),
            state_baseline: baseline.step(frame)?,
            state_stick_ratio: stick.step(frame)?,
            truth: sequence.truth_at(frame.timestamp()),
        });
    }
    let predictions = |f: fn(&TraceRecord) -> SlipState| trace.iter().map(f).collect::<Vec<_>>();
    let baseline = score_run(
        run_id,
        DetectorKind::Baseline,
        *config,
        &predictions(|r| r.state_baseline),
        sequence,
    )?;
    let stick_ratio = score_run(
        run_id,
        DetectorKind::StickRatio,
        *config,
        &predictions(|r| r.state_stick_ratio),
        sequence,
    )?;
    Ok(Comparison {
        baseline,
        stick_ratio,
        trace,
    })
}

//! Frame sequences with ground-truth slip intervals.

use crate::detect::SlipState;
use crate::error::{Error, Result};
use crate::grid::{ForceFrame, TaxelGridSpec};
use crate::sim::PhaseRecord;

/// Half-open `[start_s, end_s)` interval with a STICK or SLIP label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthInterval {
    pub start_s: f64,
    pub end_s: f64,
    pub state: SlipState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSequence {
    pub grid: TaxelGridSpec,
    pub frame_rate_hz: f64,
    pub frames: Vec<ForceFrame>,
    /// Ordered, disjoint intervals covering the in-contact part of the timeline.
    pub truth: Vec<TruthInterval>,
    /// Per-phase analytic summary; only populated by the simulator.
    pub phases: Vec<PhaseRecord>,
}

impl LabeledSequence {
    pub fn new(
        grid: TaxelGridSpec,
        frame_rate_hz: f64,
        frames: Vec<ForceFrame>,
        truth: Vec<TruthInterval>,
    ) -> Result<Self> {
        let seq = Self {
            grid,
            frame_rate_hz,
            frames,
            truth,
            phases: Vec::new(),
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frame_rate_hz.is_finite() && self.frame_rate_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "frame rate must be positive, got {}",
                self.frame_rate_hz
            )));
        }
        for frame in &self.frames {
            frame.check_grid(&self.grid)?;
        }
        for pair in self.frames.windows(2) {
            if pair[1].timestamp() < pair[0].timestamp() {
                return Err(Error::TimestampRegression {
                    previous: pair[0].timestamp(),
                    next: pair[1].timestamp(),
                });
            }
        }
        for (i, interval) in self.truth.iter().enumerate() {
            if interval.state == SlipState::NoContact {
                return Err(Error::InvalidParameter(
                    "truth intervals must be STICK or SLIP".into(),
                ));
            }
            if interval.end_s.is_nan()
                || interval.start_s.is_nan()
                || interval.end_s <= interval.start_s
            {
                return Err(Error::InvalidParameter(format!(
                    "empty truth interval [{}, {})",
                    interval.start_s, interval.end_s
                )));
            }
            if i > 0 && interval.start_s < self.truth[i - 1].end_s {
                return Err(Error::InvalidParameter(format!(
                    "truth interval starting at {} overlaps its predecessor",
                    interval.start_s
                )));
            }
        }
        Ok(())
    }

    /// Ground-truth state at time `t`, if `t` lies inside a labeled interval.
    pub fn truth_at(&self, t: f64) -> Option<SlipState> {
        let idx = self.truth.partition_point(|iv| iv.start_s <= t);
        let interval = self.truth.get(idx.checked_sub(1)?)?;
        (t < interval.end_s).then_some(interval.state)
    }

    pub fn slip_intervals(&self) -> impl Iterator<Item = &TruthInterval> {
        self.truth.iter().filter(|iv| iv.state == SlipState::Slip)
    }
}

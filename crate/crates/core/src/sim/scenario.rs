//! Piecewise-linear loading scenarios and their analytic ground truth.

use crate::detect::{SlipState, DEFAULT_SR_THRESHOLD};
use crate::error::{Error, Result};
use crate::grid::{ForceFrame, TaxelGridSpec};
use crate::sequence::{LabeledSequence, TruthInterval};

use super::fields::{
    analytic_stick_fraction, analytic_torsional_stick_fraction, cattaneo_mindlin_shear,
    full_slip_torque, hertz_pressure, torsional_partial_slip, ContactParams,
};
use super::noise::{add_noise, DEFAULT_NOISE_SIGMA};

pub const PRESET_NAMES: &[&str] = &["ttrtt", "translate-only", "rotate-only", "hold"];

const GRIP_S: f64 = 1.0;
const SETTLE_S: f64 = 1.0;
const RAMP_S: f64 = 2.0;
const SLIDE_S: f64 = 3.0;
const RELEASE_S: f64 = 0.5;
const PEAK_RATIO: f64 = 3.0;
const FRAME_RATE_HZ: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    Grip,
    Translate,
    Rotate,
    Hold,
}

/// One segment of a scenario.
///
/// Translate and rotate phases ramp their load ratio linearly from zero to
/// `peak_ratio` over `ramp_s`, hold it for `hold_s`, then ramp back to zero
/// over `release_s`. The ratio is `Q / (mu P)` for translation and
/// `M / M_slip` for rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    /// Normal load ramps linearly from zero to the full load.
    Grip {
        duration_s: f64,
    },
    Translate {
        direction: [f64; 2],
        ramp_s: f64,
        hold_s: f64,
        release_s: f64,
        peak_ratio: f64,
    },
    Rotate {
        ramp_s: f64,
        hold_s: f64,
        release_s: f64,
        peak_ratio: f64,
    },
    Hold {
        duration_s: f64,
    },
}

impl Phase {
    pub fn translate(direction: [f64; 2]) -> Self {
        Phase::Translate {
            direction,
            ramp_s: RAMP_S,
            hold_s: SLIDE_S,
            release_s: RELEASE_S,
            peak_ratio: PEAK_RATIO,
        }
    }

    pub fn rotate() -> Self {
        Phase::Rotate {
            ramp_s: RAMP_S,
            hold_s: SLIDE_S,
            release_s: RELEASE_S,
            peak_ratio: PEAK_RATIO,
        }
    }

    pub fn kind(&self) -> PhaseKind {
        match self {
            Phase::Grip { .. } => PhaseKind::Grip,
            Phase::Translate { .. } => PhaseKind::Translate,
            Phase::Rotate { .. } => PhaseKind::Rotate,
            Phase::Hold { .. } => PhaseKind::Hold,
        }
    }

    pub fn duration_s(&self) -> f64 {
        match *self {
            Phase::Grip { duration_s } | Phase::Hold { duration_s } => duration_s,
            Phase::Translate {
                ramp_s,
                hold_s,
                release_s,
                ..
            }
            | Phase::Rotate {
                ramp_s,
                hold_s,
                release_s,
                ..
            } => ramp_s + hold_s + release_s,
        }
    }

    /// `(ramp_s, hold_s, release_s, peak_ratio)` of a loading phase.
    fn ramp(&self) -> Option<(f64, f64, f64, f64)> {
        match *self {
            Phase::Translate {
                ramp_s,
                hold_s,
                release_s,
                peak_ratio,
                ..
            }
            | Phase::Rotate {
                ramp_s,
                hold_s,
                release_s,
                peak_ratio,
            } => Some((ramp_s, hold_s, release_s, peak_ratio)),
            _ => None,
        }
    }

    /// Load ratio at `tau` seconds into the phase.
    fn load_ratio(&self, tau: f64) -> f64 {
        let Some((ramp, hold, release, peak)) = self.ramp() else {
            return 0.0;
        };
        if tau < ramp {
            peak * tau / ramp
        } else if tau < ramp + hold {
            peak
        } else if tau < ramp + hold + release {
            peak * (1.0 - (tau - ramp - hold) / release)
        } else {
            0.0
        }
    }

    fn validate(&self) -> Result<()> {
        let nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be nonnegative, got {v}"
                )))
            }
        };
        match *self {
            Phase::Grip { duration_s } => {
                if !(duration_s.is_finite() && duration_s > 0.0) {
                    return Err(Error::InvalidParameter(
                        "grip duration must be positive".into(),
                    ));
                }
            }
            Phase::Hold { duration_s } => nonneg("hold duration", duration_s)?,
            _ => {}
        }
        if let Phase::Translate { direction, .. } = self {
            let norm = direction[0].hypot(direction[1]);
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::InvalidParameter(
                    "translation direction must be nonzero".into(),
                ));
            }
        }
        if let Some((ramp, hold, release, peak)) = self.ramp() {
            if !(ramp.is_finite() && ramp > 0.0) {
                return Err(Error::InvalidParameter(
                    "ramp duration must be positive".into(),
                ));
            }
            nonneg("hold duration", hold)?;
            if !(release.is_finite() && release > 0.0) {
                return Err(Error::InvalidParameter(
                    "release duration must be positive".into(),
                ));
            }
            if !(peak.is_finite() && peak > 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "peak load ratio must exceed 1, got {peak}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub phases: Vec<Phase>,
    pub frame_rate_hz: f64,
    pub noise_sigma: f64,
    /// Ground truth is SLIP when the analytic stick fraction is below this.
    pub truth_threshold: f64,
}

impl ScenarioSpec {
    pub fn new(phases: Vec<Phase>) -> Self {
        Self {
            phases,
            frame_rate_hz: FRAME_RATE_HZ,
            noise_sigma: DEFAULT_NOISE_SIGMA,
            truth_threshold: DEFAULT_SR_THRESHOLD,
        }
    }

    /// Named scenario. `ttrtt` is four translations and one rotation in the
    /// order T-T-R-T-T, each followed by a settling hold.
    pub fn preset(name: &str) -> Result<Self> {
        let settle = Phase::Hold {
            duration_s: SETTLE_S,
        };
        let mut phases = vec![Phase::Grip { duration_s: GRIP_S }, settle];
        let motions = match name {
            "ttrtt" => vec![
                Phase::translate([1.0, 0.0]),
                Phase::translate([0.0, 1.0]),
                Phase::rotate(),
                Phase::translate([-1.0, 0.0]),
                Phase::translate([0.0, -1.0]),
            ],
            "translate-only" => vec![Phase::translate([1.0, 0.0])],
            "rotate-only" => vec![Phase::rotate()],
            "hold" => return Ok(Self::new(vec![Phase::Hold { duration_s: 5.0 }])),
            _ => {
                return Err(Error::UnknownPreset {
                    name: name.to_string(),
                    available: PRESET_NAMES.join(", "),
                })
            }
        };
        for motion in motions {
            phases.push(motion);
            phases.push(settle);
        }
        Ok(Self::new(phases))
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_frame_rate(mut self, hz: f64) -> Self {
        self.frame_rate_hz = hz;
        self
    }

    pub fn duration_s(&self) -> f64 {
        self.phases.iter().map(Phase::duration_s).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.phases.is_empty() {
            return Err(Error::InvalidParameter("scenario has no phases".into()));
        }
        if !(self.frame_rate_hz.is_finite() && self.frame_rate_hz > 0.0) {
            return Err(Error::InvalidParameter(
                "frame rate must be positive".into(),
            ));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::InvalidParameter(
                "noise sigma must be nonnegative".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.truth_threshold) {
            return Err(Error::InvalidParameter(
                "truth threshold must lie in [0, 1]".into(),
            ));
        }
        if self
            .phases
            .iter()
            .filter(|p| p.kind() == PhaseKind::Grip)
            .count()
            > 1
        {
            return Err(Error::InvalidParameter(
                "at most one grip phase is allowed".into(),
            ));
        }
        self.phases.iter().try_for_each(Phase::validate)
    }
}

/// Analytic timing of one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord {
    pub kind: PhaseKind,
    pub start_s: f64,
    pub end_s: f64,
    /// Smallest analytic stick fraction reached during the phase.
    pub min_stick_fraction: f64,
    /// When the analytic stick fraction first drops below the truth threshold.
    pub label_onset_s: Option<f64>,
    /// When the load ratio first reaches full sliding.
    pub full_slip_s: Option<f64>,
}

fn stick_fraction(kind: PhaseKind, ratio: f64) -> f64 {
    match kind {
        PhaseKind::Translate => analytic_stick_fraction(ratio, 1.0, 1.0),
        PhaseKind::Rotate => analytic_torsional_stick_fraction(ratio),
        _ => 1.0,
    }
}

/// Load ratio at which the analytic stick fraction equals `threshold`.
fn critical_ratio(kind: PhaseKind, threshold: f64) -> f64 {
    match kind {
        PhaseKind::Translate => 1.0 - threshold.powf(1.5),
        PhaseKind::Rotate => 1.0 - threshold * threshold,
        _ => f64::INFINITY,
    }
}

fn phase_record(phase: &Phase, start_s: f64, threshold: f64) -> PhaseRecord {
    let kind = phase.kind();
    let end_s = start_s + phase.duration_s();
    let (min_stick_fraction, label_onset_s, full_slip_s) = match phase.ramp() {
        Some((ramp, _, _, peak)) => {
            let critical = critical_ratio(kind, threshold);
            // Strict `<` threshold: a stick fraction equal to the threshold is STICK.
            let onset = (critical < peak && threshold > 0.0)
                .then(|| start_s + ramp * critical.max(0.0) / peak);
            (
                stick_fraction(kind, peak),
                onset,
                Some(start_s + ramp / peak),
            )
        }
        None => (1.0, None, None),
    };
    PhaseRecord {
        kind,
        start_s,
        end_s,
        min_stick_fraction,
        label_onset_s,
        full_slip_s,
    }
}

/// Per-frame noise seed derived from the scenario seed.
fn frame_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Samples the scenario at its frame rate and labels every in-contact frame
/// from the analytic stick fraction.
pub fn generate_scenario(
    spec: &ScenarioSpec,
    params: &ContactParams,
    grid: &TaxelGridSpec,
    seed: u64,
) -> Result<LabeledSequence> {
    spec.validate()?;
    params.check_fits(grid)?;
    let m_slip = full_slip_torque(params, grid)?;

    let mut records = Vec::with_capacity(spec.phases.len());
    let mut start = 0.0;
    for phase in &spec.phases {
        records.push(phase_record(phase, start, spec.truth_threshold));
        start += phase.duration_s();
    }
    let total = start;
    let grip_index = spec.phases.iter().position(|p| p.kind() == PhaseKind::Grip);

    let frame_count = (total * spec.frame_rate_hz).round() as usize;
    let mut frames = Vec::with_capacity(frame_count);
    let mut labels: Vec<Option<SlipState>> = Vec::with_capacity(frame_count);
    let mut phase_index = 0;
    for i in 0..frame_count {
        let t = i as f64 / spec.frame_rate_hz;
        while phase_index + 1 < records.len() && t >= records[phase_index].end_s {
            phase_index += 1;
        }
        let phase = &spec.phases[phase_index];
        let tau = t - records[phase_index].start_s;

        let load_fraction = match grip_index {
            Some(g) if phase_index < g => 0.0,
            Some(g) if phase_index == g => (tau / phase.duration_s()).clamp(0.0, 1.0),
            _ => 1.0,
        };

        let frame = if load_fraction > 0.0 {
            let local = params.with_load(params.load_n * load_fraction)?;
            let fz = hertz_pressure(&local, grid)?;
            let ratio = phase.load_ratio(tau);
            let (fx, fy) = match *phase {
                Phase::Translate { direction, .. } if ratio > 0.0 => {
                    let q = ratio * local.mu * local.load_n;
                    let field = cattaneo_mindlin_shear(&local, q, direction, grid)?;
                    (field.fx, field.fy)
                }
                Phase::Rotate { .. } if ratio > 0.0 => {
                    let field = torsional_partial_slip(&local, ratio * m_slip, grid)?;
                    (field.fx, field.fy)
                }
                _ => (vec![0.0; fz.len()], vec![0.0; fz.len()]),
            };
            let state = if stick_fraction(phase.kind(), ratio) < spec.truth_threshold {
                SlipState::Slip
            } else {
                SlipState::Stick
            };
            labels.push(Some(state));
            ForceFrame::new(t, grid.n(), fx, fy, fz)?
        } else {
            labels.push(None);
            ForceFrame::zeros(t, grid.n())?
        };
        frames.push(add_noise(&frame, spec.noise_sigma, frame_seed(seed, i))?);
    }

    let truth = intervals_from_labels(&frames, &labels, spec.frame_rate_hz);
    let mut sequence = LabeledSequence::new(*grid, spec.frame_rate_hz, frames, truth)?;
    sequence.phases = records;
    Ok(sequence)
}

/// Collapses per-frame labels into half-open intervals; each interval ends
/// at the timestamp of the frame after its last member.
fn intervals_from_labels(
    frames: &[ForceFrame],
    labels: &[Option<SlipState>],
    frame_rate_hz: f64,
) -> Vec<TruthInterval> {
    let end_of = |i: usize| {
        frames
            .get(i + 1)
            .map(ForceFrame::timestamp)
            .unwrap_or_else(|| frames[i].timestamp() + 1.0 / frame_rate_hz)
    };
    let mut intervals: Vec<TruthInterval> = Vec::new();
    let mut open: Option<(usize, SlipState)> = None;
    for (i, label) in labels.iter().enumerate() {
        match (open, *label) {
            (Some((_, state)), Some(l)) if state == l => {}
            (current, next) => {
                if let Some((first, state)) = current {
                    intervals.push(TruthInterval {
                        start_s: frames[first].timestamp(),
                        end_s: frames[i].timestamp(),
                        state,
                    });
                }
                open = next.map(|s| (i, s));
            }
        }
    }
    if let Some((first, state)) = open {
        intervals.push(TruthInterval {
            start_s: frames[first].timestamp(),
            end_s: end_of(labels.len() - 1),
            state,
        });
    }
    intervals
}

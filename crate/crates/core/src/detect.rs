//! Slip classifiers: the total-force Coulomb baseline and the per-taxel
//! stick-ratio detector, plus a debounced sequential wrapper.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{total_shear_magnitude, ForceFrame, DEFAULT_CONTACT_EPSILON};

/// Friction coefficient used when none is given.
pub const DEFAULT_MU: f64 = 0.45;
/// Stick ratio below which the stick-ratio detector reports slip.
pub const DEFAULT_SR_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlipState {
    Stick,
    Slip,
    NoContact,
}

impl SlipState {
    pub fn as_str(&self) -> &'static str {
        match self {
            SlipState::Stick => "STICK",
            SlipState::Slip => "SLIP",
            SlipState::NoContact => "NO_CONTACT",
        }
    }
}

impl fmt::Display for SlipState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SlipState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "STICK" => Ok(SlipState::Stick),
            "SLIP" => Ok(SlipState::Slip),
            "NO_CONTACT" => Ok(SlipState::NoContact),
            other => Err(Error::InvalidParameter(format!(
                "unknown slip state {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Baseline,
    StickRatio,
}

impl DetectorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DetectorKind::Baseline => "baseline",
            DetectorKind::StickRatio => "stick-ratio",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub mu: f64,
    pub sr_threshold: f64,
    pub contact_epsilon: f64,
    /// Consecutive identical raw classifications needed to switch state.
    pub debounce_k: u32,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            mu: DEFAULT_MU,
            sr_threshold: DEFAULT_SR_THRESHOLD,
            contact_epsilon: DEFAULT_CONTACT_EPSILON,
            debounce_k: 1,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive, got {}",
                self.mu
            )));
        }
        if !(0.0..=1.0).contains(&self.sr_threshold) {
            return Err(Error::InvalidParameter(format!(
                "sr_threshold must lie in [0, 1], got {}",
                self.sr_threshold
            )));
        }
        if !(self.contact_epsilon.is_finite() && self.contact_epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "contact_epsilon must be nonnegative, got {}",
                self.contact_epsilon
            )));
        }
        if self.debounce_k == 0 {
            return Err(Error::InvalidParameter(
                "debounce_k must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Stick and contact taxel counts of one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StickRatioResult {
    pub stick_count: usize,
    pub contact_count: usize,
}

impl StickRatioResult {
    /// `C / A`, or `None` when nothing is in contact.
    pub fn ratio(&self) -> Option<f64> {
        (self.contact_count > 0).then(|| self.stick_count as f64 / self.contact_count as f64)
    }
}

/// Coulomb condition on whole-sensor totals: slip when `F_T > mu * F_N`.
pub fn coulomb_baseline_classify(frame: &ForceFrame, config: &DetectorConfig) -> SlipState {
    let eps = config.contact_epsilon;
    if !frame.fz().iter().any(|&f| f > eps) {
        return SlipState::NoContact;
    }
    let (fx, fy) = frame.shear_components();
    if total_shear_magnitude(fx, fy) > config.mu * frame.normal_force() {
        SlipState::Slip
    } else {
        SlipState::Stick
    }
}

/// Counts contacting taxels and those within their local friction bound.
///
/// A taxel is in contact when `f_z > epsilon` and sticks when
/// `f_T <= mu * f_z` (equality sticks).
pub fn stick_ratio(frame: &ForceFrame, config: &DetectorConfig) -> StickRatioResult {
    let eps = config.contact_epsilon;
    let mu = config.mu;
    let mut contact_count = 0;
    let mut stick_count = 0;
    for ((&fx, &fy), &fz) in frame.fx().iter().zip(frame.fy()).zip(frame.fz()) {
        if fz > eps {
            contact_count += 1;
            if fx.hypot(fy) <= mu * fz {
                stick_count += 1;
            }
        }
    }
    StickRatioResult {
        stick_count,
        contact_count,
    }
}

pub fn stick_ratio_classify(result: &StickRatioResult, config: &DetectorConfig) -> SlipState {
    match result.ratio() {
        None => SlipState::NoContact,
        Some(sr) if sr < config.sr_threshold => SlipState::Slip,
        Some(_) => SlipState::Stick,
    }
}

/// Raw (undebounced) classification of one frame.
pub fn classify(frame: &ForceFrame, config: &DetectorConfig, kind: DetectorKind) -> SlipState {
    match kind {
        DetectorKind::Baseline => coulomb_baseline_classify(frame, config),
        DetectorKind::StickRatio => stick_ratio_classify(&stick_ratio(frame, config), config),
    }
}

/// Sequential detector state: the published decision plus the k-of-k
/// debounce bookkeeping.
///
/// `NoContact` is published immediately. The first contact frame after
/// `NoContact` (or at the start) is also published immediately; afterwards
/// a change needs `debounce_k` consecutive identical raw classifications.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DetectorState {
    current: Option<SlipState>,
    candidate: Option<SlipState>,
    run: u32,
    last_timestamp: Option<f64>,
}

impl DetectorState {
    pub fn current(&self) -> Option<SlipState> {
        self.current
    }

    fn update(&mut self, raw: SlipState, debounce_k: u32) -> SlipState {
        match (self.current, raw) {
            (_, SlipState::NoContact) | (None, _) | (Some(SlipState::NoContact), _) => {
                self.current = Some(raw);
                self.candidate = None;
                self.run = 0;
            }
            (Some(current), raw) if current == raw => {
                self.candidate = None;
                self.run = 0;
            }
            (Some(_), raw) => {
                if self.candidate == Some(raw) {
                    self.run += 1;
                } else {
                    self.candidate = Some(raw);
                    self.run = 1;
                }
                if self.run >= debounce_k {
                    self.current = Some(raw);
                    self.candidate = None;
                    self.run = 0;
                }
            }
        }
        self.current.unwrap_or(raw)
    }
}

/// Advances the detector by one frame.
pub fn detector_step(
    mut state: DetectorState,
    frame: &ForceFrame,
    config: &DetectorConfig,
    kind: DetectorKind,
) -> Result<(DetectorState, SlipState)> {
    if let Some(previous) = state.last_timestamp {
        if frame.timestamp() < previous {
            return Err(Error::TimestampRegression {
                previous,
                next: frame.timestamp(),
            });
        }
    }
    state.last_timestamp = Some(frame.timestamp());
    let raw = classify(frame, config, kind);
    let published = state.update(raw, config.debounce_k);
    Ok((state, published))
}

/// Owned detector that carries its state across frames.
#[derive(Debug, Clone)]
pub struct Detector {
    kind: DetectorKind,
    config: DetectorConfig,
    state: DetectorState,
}

impl Detector {
    pub fn new(kind: DetectorKind, config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            kind,
            config,
            state: DetectorState::default(),
        })
    }

    pub fn kind(&self) -> DetectorKind {
        self.kind
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn step(&mut self, frame: &ForceFrame) -> Result<SlipState> {
        let (state, out) = detector_step(self.state, frame, &self.config, self.kind)?;
        self.state = state;
        Ok(out)
    }

    pub fn reset(&mut self) {
        self.state = DetectorState::default();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, fx: f64, fy: f64, fz: f64) -> ForceFrame {
        let len = n * n;
        ForceFrame::new(0.0, n, vec![fx; len], vec![fy; len], vec![fz; len]).unwrap()
    }

    /// Frame with totals F_T = `shear`, F_N = `normal` concentrated on one taxel.
    fn point(shear: f64, normal: f64) -> ForceFrame {
        let mut fx = vec![0.0; 4];
        let mut fz = vec![0.0; 4];
        fx[0] = shear;
        fz[0] = normal;
        ForceFrame::new(0.0, 2, fx, vec![0.0; 4], fz).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(DetectorConfig::default().validate().is_ok());
        let bad = [
            DetectorConfig {
                mu: 0.0,
                ..Default::default()
            },
            DetectorConfig {
                sr_threshold: 1.5,
                ..Default::default()
            },
            DetectorConfig {
                contact_epsilon: -1.0,
                ..Default::default()
            },
            DetectorConfig {
                debounce_k: 0,
                ..Default::default()
            },
        ];
        for config in bad {
            assert!(config.validate().is_err(), "{config:?}");
        }
    }

    #[test]
    fn baseline_cases() {
        let config = DetectorConfig::default();
        assert_eq!(
            coulomb_baseline_classify(&point(0.0, 1.0), &config),
            SlipState::Stick
        );
        assert_eq!(
            coulomb_baseline_classify(&point(0.5, 1.0), &config),
            SlipState::Slip
        );
        assert_eq!(
            coulomb_baseline_classify(&point(0.45, 1.0), &config),
            SlipState::Stick
        );
        assert_eq!(
            coulomb_baseline_classify(&ForceFrame::zeros(0.0, 4).unwrap(), &config),
            SlipState::NoContact
        );
    }

    #[test]
    fn full_stick_ratio_is_one() {
        let config = DetectorConfig::default();
        let result = stick_ratio(&uniform(5, 0.0, 0.0, 0.2), &config);
        assert_eq!(result.contact_count, 25);
        assert_eq!(result.ratio(), Some(1.0));
    }

    #[test]
    fn empty_frame_has_no_ratio() {
        let config = DetectorConfig::default();
        let result = stick_ratio(&ForceFrame::zeros(0.0, 5).unwrap(), &config);
        assert_eq!(
            result,
            StickRatioResult {
                stick_count: 0,
                contact_count: 0
            }
        );
        assert_eq!(result.ratio(), None);
        assert_eq!(stick_ratio_classify(&result, &config), SlipState::NoContact);
    }

    #[test]
    fn stick_ratio_equality_sticks() {
        let config = DetectorConfig {
            mu: 0.5,
            ..Default::default()
        };
        // f_T = 0.5 * 0.25 exactly in binary.
        let result = stick_ratio(&uniform(2, 0.125, 0.0, 0.25), &config);
        assert_eq!(result.stick_count, 4);
    }

    #[test]
    fn threshold_is_strict() {
        let config = DetectorConfig::default();
        let sr = |c, a| StickRatioResult {
            stick_count: c,
            contact_count: a,
        };
        assert_eq!(stick_ratio_classify(&sr(4, 10), &config), SlipState::Slip);
        assert_eq!(stick_ratio_classify(&sr(5, 10), &config), SlipState::Stick);
    }

    fn frame_for(state: SlipState, t: f64) -> ForceFrame {
        match state {
            SlipState::Stick => point(0.0, 1.0),
            SlipState::Slip => point(1.0, 1.0),
            SlipState::NoContact => ForceFrame::zeros(0.0, 2).unwrap(),
        }
        .with_timestamp(t)
    }

    fn run(raw: &[SlipState], debounce_k: u32) -> Vec<SlipState> {
        let config = DetectorConfig {
            debounce_k,
            ..Default::default()
        };
        let mut detector = Detector::new(DetectorKind::Baseline, config).unwrap();
        raw.iter()
            .enumerate()
            .map(|(i, &s)| detector.step(&frame_for(s, i as f64)).unwrap())
            .collect()
    }

    #[test]
    fn debounce_pass_through() {
        use SlipState::*;
        assert_eq!(run(&[Stick, Slip, Stick], 1), vec![Stick, Slip, Stick]);
    }

    #[test]
    fn debounce_two_of_two() {
        use SlipState::*;
        assert_eq!(
            run(&[Stick, Slip, Slip, Stick, Slip], 2),
            vec![Stick, Stick, Slip, Slip, Slip]
        );
    }

    #[test]
    fn no_contact_bypasses_debounce() {
        use SlipState::*;
        assert_eq!(
            run(&[Stick, NoContact, Slip, Stick, Stick, Stick], 3),
            vec![Stick, NoContact, Slip, Slip, Slip, Stick]
        );
        assert_eq!(run(&[NoContact; 4], 2), vec![NoContact; 4]);
    }

    #[test]
    fn timestamp_regression_is_rejected() {
        let config = DetectorConfig::default();
        let mut detector = Detector::new(DetectorKind::StickRatio, config).unwrap();
        detector.step(&frame_for(SlipState::Stick, 1.0)).unwrap();
        detector.step(&frame_for(SlipState::Stick, 1.0)).unwrap();
        assert!(matches!(
            detector.step(&frame_for(SlipState::Stick, 0.5)),
            Err(Error::TimestampRegression { .. })
        ));
    }

    #[test]
    fn slip_state_round_trips_through_strings() {
        for s in [SlipState::Stick, SlipState::Slip, SlipState::NoContact] {
            assert_eq!(s.as_str().parse::<SlipState>().unwrap(), s);
        }
        assert!("slip".parse::<SlipState>().is_err());
    }
}

//! Python bindings for the taxel slip detection toolkit.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use taxslip_core as core;
use taxslip_core::detect::{DetectorConfig, DetectorKind, SlipState};
use taxslip_core::sim::{ContactParams, ScenarioSpec, PRESET_NAMES};

fn to_py(err: core::Error) -> PyErr {
    match err {
        core::Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_kind(kind: &str) -> PyResult<DetectorKind> {
    match kind {
        "baseline" => Ok(DetectorKind::Baseline),
        "stick-ratio" | "stick_ratio" => Ok(DetectorKind::StickRatio),
        other => Err(PyValueError::new_err(format!(
            "unknown detector {other:?} (expected 'baseline' or 'stick-ratio')"
        ))),
    }
}

#[pyclass(name = "TaxelGrid", module = "taxslip")]
pub struct PyTaxelGrid {
    inner: core::TaxelGridSpec,
}

#[pymethods]
impl PyTaxelGrid {
    #[new]
    #[pyo3(signature = (n = core::grid::DEFAULT_N, pitch_mm = core::grid::DEFAULT_PITCH_MM))]
    fn new(n: usize, pitch_mm: f64) -> PyResult<Self> {
        let inner = core::TaxelGridSpec::new(n, pitch_mm).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn pitch_mm(&self) -> f64 {
        self.inner.pitch_mm()
    }

    #[getter]
    fn taxel_count(&self) -> usize {
        self.inner.taxel_count()
    }

    /// Sensor-frame `(x, y)` of the taxel at `(row, col)` in millimetres.
    fn coords(&self, row: usize, col: usize) -> (f64, f64) {
        self.inner.coords(row, col)
    }

    fn __repr__(&self) -> String {
        format!(
            "TaxelGrid(n={}, pitch_mm={})",
            self.inner.n(),
            self.inner.pitch_mm()
        )
    }
}

#[pyclass(name = "ForceFrame", module = "taxslip")]
pub struct PyForceFrame {
    inner: core::ForceFrame,
}

#[pymethods]
impl PyForceFrame {
    #[new]
    fn new(timestamp: f64, n: usize, fx: Vec<f64>, fy: Vec<f64>, fz: Vec<f64>) -> PyResult<Self> {
        let inner = core::ForceFrame::new(timestamp, n, fx, fy, fz).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn timestamp(&self) -> f64 {
        self.inner.timestamp()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn fx(&self) -> Vec<f64> {
        self.inner.fx().to_vec()
    }

    #[getter]
    fn fy(&self) -> Vec<f64> {
        self.inner.fy().to_vec()
    }

    #[getter]
    fn fz(&self) -> Vec<f64> {
        self.inner.fz().to_vec()
    }

    fn normal_force(&self) -> f64 {
        self.inner.normal_force()
    }

    #[pyo3(signature = (epsilon = core::grid::DEFAULT_CONTACT_EPSILON))]
    fn contact_set(&self, epsilon: f64) -> Vec<usize> {
        self.inner.contact_set(epsilon).into_iter().collect()
    }

    /// Net normal, shear and torsional loads as a dict.
    fn aggregates<'py>(&self, py: Python<'py>, grid: &PyTaxelGrid) -> PyResult<Bound<'py, PyDict>> {
        let a = core::AggregateForces::compute(&self.inner, &grid.inner).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("normal", a.normal)?;
        d.set_item("shear_x", a.shear_x)?;
        d.set_item("shear_y", a.shear_y)?;
        d.set_item("shear", a.shear)?;
        d.set_item("moment_z", a.moment_z)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "ForceFrame(timestamp={}, n={})",
            self.inner.timestamp(),
            self.inner.n()
        )
    }
}

#[pyclass(name = "DetectorConfig", module = "taxslip")]
pub struct PyDetectorConfig {
    inner: DetectorConfig,
}

#[pymethods]
impl PyDetectorConfig {
    #[new]
    #[pyo3(signature = (
        mu = core::detect::DEFAULT_MU,
        sr_threshold = core::detect::DEFAULT_SR_THRESHOLD,
        contact_epsilon = core::grid::DEFAULT_CONTACT_EPSILON,
        debounce_k = 1,
    ))]
    fn new(mu: f64, sr_threshold: f64, contact_epsilon: f64, debounce_k: u32) -> PyResult<Self> {
        let inner = DetectorConfig {
            mu,
            sr_threshold,
            contact_epsilon,
            debounce_k,
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    #[getter]
    fn sr_threshold(&self) -> f64 {
        self.inner.sr_threshold
    }

    #[getter]
    fn contact_epsilon(&self) -> f64 {
        self.inner.contact_epsilon
    }

    #[getter]
    fn debounce_k(&self) -> u32 {
        self.inner.debounce_k
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "DetectorConfig(mu={}, sr_threshold={}, contact_epsilon={}, debounce_k={})",
            c.mu, c.sr_threshold, c.contact_epsilon, c.debounce_k
        )
    }
}

fn config_or_default(config: Option<&PyDetectorConfig>) -> DetectorConfig {
    config.map(|c| c.inner).unwrap_or_default()
}

/// Streaming detector; `step` returns "STICK", "SLIP" or "NO_CONTACT".
#[pyclass(name = "Detector", module = "taxslip")]
pub struct PyDetector {
    inner: core::Detector,
}

#[pymethods]
impl PyDetector {
    #[new]
    #[pyo3(signature = (kind = "stick-ratio", config = None))]
    fn new(kind: &str, config: Option<&PyDetectorConfig>) -> PyResult<Self> {
        let inner =
            core::Detector::new(parse_kind(kind)?, config_or_default(config)).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    fn step(&mut self, frame: &PyForceFrame) -> PyResult<&'static str> {
        self.inner
            .step(&frame.inner)
            .map(|s| s.as_str())
            .map_err(to_py)
    }

    fn reset(&mut self) {
        self.inner.reset();
    }
}

/// Fraction of contact taxels inside their friction cone, or None without contact.
#[pyfunction]
#[pyo3(signature = (frame, config = None))]
fn stick_ratio(frame: &PyForceFrame, config: Option<&PyDetectorConfig>) -> Option<f64> {
    core::detect::stick_ratio(&frame.inner, &config_or_default(config)).ratio()
}

/// Single-frame classification without debouncing.
#[pyfunction]
#[pyo3(signature = (frame, kind = "stick-ratio", config = None))]
fn classify(
    frame: &PyForceFrame,
    kind: &str,
    config: Option<&PyDetectorConfig>,
) -> PyResult<&'static str> {
    let state = core::detect::classify(&frame.inner, &config_or_default(config), parse_kind(kind)?);
    Ok(state.as_str())
}

#[pyclass(name = "Sequence", module = "taxslip")]
pub struct PySequence {
    inner: core::LabeledSequence,
}

#[pymethods]
impl PySequence {
    #[getter]
    fn grid(&self) -> PyTaxelGrid {
        PyTaxelGrid {
            inner: self.inner.grid,
        }
    }

    #[getter]
    fn frame_rate_hz(&self) -> f64 {
        self.inner.frame_rate_hz
    }

    #[getter]
    fn frames(&self) -> Vec<PyForceFrame> {
        self.inner
            .frames
            .iter()
            .map(|f| PyForceFrame { inner: f.clone() })
            .collect()
    }

    /// Ground-truth intervals as `(start_s, end_s, state)` tuples.
    #[getter]
    fn truth(&self) -> Vec<(f64, f64, &'static str)> {
        self.inner
            .truth
            .iter()
            .map(|iv| (iv.start_s, iv.end_s, iv.state.as_str()))
            .collect()
    }

    fn truth_at(&self, t: f64) -> Option<&'static str> {
        self.inner.truth_at(t).map(|s: SlipState| s.as_str())
    }

    fn frame(&self, index: usize) -> PyResult<PyForceFrame> {
        self.inner
            .frames
            .get(index)
            .map(|f| PyForceFrame { inner: f.clone() })
            .ok_or_else(|| PyValueError::new_err(format!("frame index {index} out of range")))
    }

    fn __len__(&self) -> usize {
        self.inner.frames.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Sequence(frames={}, n={}, frame_rate_hz={})",
            self.inner.frames.len(),
            self.inner.grid.n(),
            self.inner.frame_rate_hz
        )
    }
}

/// Simulates a preset grasp scenario with ground-truth labels.
#[pyfunction]
#[pyo3(signature = (
    preset,
    seed = 0,
    n = core::grid::DEFAULT_N,
    pitch_mm = core::grid::DEFAULT_PITCH_MM,
    radius_mm = 12.0,
    load_n = 5.0,
    mu = core::detect::DEFAULT_MU,
    center_mm = (0.0, 0.0),
    noise = core::sim::DEFAULT_NOISE_SIGMA,
    frame_rate_hz = 100.0,
))]
#[allow(clippy::too_many_arguments)]
fn generate_scenario(
    preset: &str,
    seed: u64,
    n: usize,
    pitch_mm: f64,
    radius_mm: f64,
    load_n: f64,
    mu: f64,
    center_mm: (f64, f64),
    noise: f64,
    frame_rate_hz: f64,
) -> PyResult<PySequence> {
    let grid = core::TaxelGridSpec::new(n, pitch_mm).map_err(to_py)?;
    let params =
        ContactParams::new(radius_mm, load_n, mu, [center_mm.0, center_mm.1]).map_err(to_py)?;
    let spec = ScenarioSpec::preset(preset)
        .map_err(to_py)?
        .with_noise(noise)
        .with_frame_rate(frame_rate_hz);
    let inner = core::sim::generate_scenario(&spec, &params, &grid, seed).map_err(to_py)?;
    Ok(PySequence { inner })
}

fn report_dict<'py>(py: Python<'py>, r: &core::MetricsReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let c = &r.counts;
    d.set_item("run_id", &r.run_id)?;
    d.set_item("detector", r.detector.as_str())?;
    d.set_item("runs", r.runs)?;
    d.set_item("tp", c.true_pos)?;
    d.set_item("fp", c.false_pos)?;
    d.set_item("tn", c.true_neg)?;
    d.set_item("fn", c.false_neg)?;
    d.set_item("ignored", c.ignored)?;
    d.set_item("unlabeled", c.unlabeled)?;
    d.set_item("accuracy", r.accuracy)?;
    d.set_item("precision", r.precision)?;
    d.set_item("recall", r.recall)?;
    Ok(d)
}

/// Runs both detectors over a labeled sequence and scores them.
#[pyfunction]
#[pyo3(signature = (sequence, config = None, run_id = "run"))]
fn compare_detectors<'py>(
    py: Python<'py>,
    sequence: &PySequence,
    config: Option<&PyDetectorConfig>,
    run_id: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let cmp = core::compare_detectors(&sequence.inner, &config_or_default(config), run_id)
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("baseline", report_dict(py, &cmp.baseline)?)?;
    d.set_item("stick_ratio", report_dict(py, &cmp.stick_ratio)?)?;
    let ratios: Vec<Option<f64>> = cmp.trace.iter().map(|r| r.stick_ratio).collect();
    d.set_item("stick_ratio_trace", ratios)?;
    Ok(d)
}

#[pyfunction]
fn read_sequence(path: PathBuf) -> PyResult<PySequence> {
    let inner = core::read_sequence(&path).map_err(to_py)?;
    Ok(PySequence { inner })
}

#[pyfunction]
fn write_sequence(sequence: &PySequence, path: PathBuf) -> PyResult<()> {
    core::write_sequence(&sequence.inner, &path).map_err(to_py)
}

#[pymodule]
fn taxslip(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTaxelGrid>()?;
    m.add_class::<PyForceFrame>()?;
    m.add_class::<PyDetectorConfig>()?;
    m.add_class::<PyDetector>()?;
    m.add_class::<PySequence>()?;
    m.add_function(wrap_pyfunction!(stick_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(generate_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(compare_detectors, m)?)?;
    m.add_function(wrap_pyfunction!(read_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(write_sequence, m)?)?;
    m.add("PRESETS", PRESET_NAMES.to_vec())?;
    Ok(())
}

//! Taxel grid geometry, the per-frame force distribution, and the aggregate
//! force and moment quantities derived from it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Default number of taxels per side.
pub const DEFAULT_N: usize = 20;
/// Default taxel pitch in millimeters.
pub const DEFAULT_PITCH_MM: f64 = 1.5;
/// Default contact threshold on the normal force of a taxel, in newtons.
pub const DEFAULT_CONTACT_EPSILON: f64 = 1e-3;

/// Square taxel grid with its origin at the geometric center.
///
/// Taxels are indexed row-major, `i = row * n + col`. Row 0 is the top
/// row (largest `y`), column 0 the leftmost (smallest `x`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxelGridSpec {
    n: usize,
    pitch_mm: f64,
}

impl TaxelGridSpec {
    pub fn new(n: usize, pitch_mm: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("n must be at least 1".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::InvalidGrid(format!("n = {n} exceeds {}", u16::MAX)));
        }
        if !(pitch_mm.is_finite() && pitch_mm > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "pitch must be positive and finite, got {pitch_mm}"
            )));
        }
        Ok(Self { n, pitch_mm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pitch_mm(&self) -> f64 {
        self.pitch_mm
    }

    pub fn taxel_count(&self) -> usize {
        self.n * self.n
    }

    /// Distance from the grid center to an edge of the sensing area.
    pub fn half_side_mm(&self) -> f64 {
        0.5 * self.n as f64 * self.pitch_mm
    }

    /// Coordinates `(x, y)` of the taxel at `(row, col)` in millimeters.
    pub fn coords(&self, row: usize, col: usize) -> (f64, f64) {
        let half = (self.n as f64 - 1.0) / 2.0;
        (
            (col as f64 - half) * self.pitch_mm,
            (half - row as f64) * self.pitch_mm,
        )
    }

    /// Coordinates of every taxel in index order.
    pub fn taxel_coords(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.taxel_count()).map(move |i| self.coords(i / self.n, i % self.n))
    }
}

impl Default for TaxelGridSpec {
    fn default() -> Self {
        Self {
            n: DEFAULT_N,
            pitch_mm: DEFAULT_PITCH_MM,
        }
    }
}

/// One timestamped `3 x n x n` contact-force distribution, newtons per taxel.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceFrame {
    timestamp: f64,
    n: usize,
    fx: Vec<f64>,
    fy: Vec<f64>,
    fz: Vec<f64>,
}

impl ForceFrame {
    pub fn new(timestamp: f64, n: usize, fx: Vec<f64>, fy: Vec<f64>, fz: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("n must be at least 1".into()));
        }
        if !timestamp.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "timestamp must be finite, got {timestamp}"
            )));
        }
        let expected = n * n;
        for (name, field) in [("fx", &fx), ("fy", &fy), ("fz", &fz)] {
            if field.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    actual: field.len(),
                });
            }
            if let Some(index) = field.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    component: name,
                    index,
                });
            }
        }
        Ok(Self {
            timestamp,
            n,
            fx,
            fy,
            fz,
        })
    }

    pub fn zeros(timestamp: f64, n: usize) -> Result<Self> {
        let len = n * n;
        Self::new(timestamp, n, vec![0.0; len], vec![0.0; len], vec![0.0; len])
    }

    pub fn timestamp(&self) -> f64 {
        self.timestamp
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fx(&self) -> &[f64] {
        &self.fx
    }

    pub fn fy(&self) -> &[f64] {
        &self.fy
    }

    pub fn fz(&self) -> &[f64] {
        &self.fz
    }

    pub fn with_timestamp(mut self, timestamp: f64) -> Self {
        self.timestamp = timestamp;
        self
    }

    /// Fails unless the frame has the grid's dimensions.
    pub fn check_grid(&self, grid: &TaxelGridSpec) -> Result<()> {
        if self.n != grid.n() {
            return Err(Error::DimensionMismatch {
                expected: grid.taxel_count(),
                actual: self.n * self.n,
            });
        }
        Ok(())
    }

    /// Sum of the normal components over all taxels.
    pub fn normal_force(&self) -> f64 {
        self.fz.iter().sum()
    }

    /// Sums of the `x` and `y` shear components over all taxels.
    pub fn shear_components(&self) -> (f64, f64) {
        (self.fx.iter().sum(), self.fy.iter().sum())
    }

    /// Shear magnitude at taxel `i`.
    pub fn taxel_shear(&self, i: usize) -> f64 {
        self.fx[i].hypot(self.fy[i])
    }

    /// Indices of the taxels whose normal force exceeds `epsilon`.
    pub fn contact_set(&self, epsilon: f64) -> BTreeSet<usize> {
        self.fz
            .iter()
            .enumerate()
            .filter(|(_, &f)| f > epsilon)
            .map(|(i, _)| i)
            .collect()
    }

    /// Multiplies every force component by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let scale = |v: &[f64]| v.iter().map(|x| x * factor).collect();
        Self {
            timestamp: self.timestamp,
            n: self.n,
            fx: scale(&self.fx),
            fy: scale(&self.fy),
            fz: scale(&self.fz),
        }
    }

    /// Rotates the distribution by 90 degrees counter-clockwise about the grid
    /// center, rotating each shear vector along with its taxel.
    pub fn rotated_quarter_turn(&self) -> Self {
        let n = self.n;
        let len = n * n;
        let (mut fx, mut fy, mut fz) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
        for row in 0..n {
            for col in 0..n {
                let src = row * n + col;
                let dst = (n - 1 - col) * n + row;
                fx[dst] = -self.fy[src];
                fy[dst] = self.fx[src];
                fz[dst] = self.fz[src];
            }
        }
        Self {
            timestamp: self.timestamp,
            n,
            fx,
            fy,
            fz,
        }
    }

    /// Taxel-wise sum of two frames of equal size; keeps this frame's timestamp.
    pub fn superpose(&self, other: &ForceFrame) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n * self.n,
                actual: other.n * other.n,
            });
        }
        let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(Self {
            timestamp: self.timestamp,
            n: self.n,
            fx: add(&self.fx, &other.fx),
            fy: add(&self.fy, &other.fy),
            fz: add(&self.fz, &other.fz),
        })
    }
}

/// Total shear magnitude from its two components.
pub fn total_shear_magnitude(fx: f64, fy: f64) -> f64 {
    fx.hypot(fy)
}

/// Net moment about the `z` axis through the grid center, in N·mm.
pub fn net_moment_z(frame: &ForceFrame, grid: &TaxelGridSpec) -> Result<f64> {
    frame.check_grid(grid)?;
    Ok(grid
        .taxel_coords()
        .zip(frame.fx.iter().zip(&frame.fy))
        .map(|((x, y), (fx, fy))| x * fy - y * fx)
        .sum())
}

/// Whole-sensor force and moment totals of one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateForces {
    pub normal: f64,
    pub shear_x: f64,
    pub shear_y: f64,
    pub shear: f64,
    /// Moment about `z` in N·mm.
    pub moment_z: f64,
}

impl AggregateForces {
    pub fn compute(frame: &ForceFrame, grid: &TaxelGridSpec) -> Result<Self> {
        let moment_z = net_moment_z(frame, grid)?;
        let (shear_x, shear_y) = frame.shear_components();
        Ok(Self {
            normal: frame.normal_force(),
            shear_x,
            shear_y,
            shear: total_shear_magnitude(shear_x, shear_y),
            moment_z,
        })
    }
}

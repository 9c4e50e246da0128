//! Hertz pressure, Cattaneo–Mindlin translational shear and a torsional
//! partial-slip construction, all sampled at taxel centers.

use crate::error::{Error, Result};
use crate::grid::TaxelGridSpec;

/// Relative excess applied to tractions in sliding regions so that they
/// resolve to slip under the non-strict local stick test.
pub const TIE_BREAK: f64 = 1e-6;

/// Geometry and load of a single circular contact patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactParams {
    pub radius_mm: f64,
    pub load_n: f64,
    pub mu: f64,
    pub center_mm: [f64; 2],
}

impl ContactParams {
    pub fn new(radius_mm: f64, load_n: f64, mu: f64, center_mm: [f64; 2]) -> Result<Self> {
        let params = Self {
            radius_mm,
            load_n,
            mu,
            center_mm,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius_mm.is_finite() && self.radius_mm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "contact radius must be positive, got {}",
                self.radius_mm
            )));
        }
        if !(self.load_n.is_finite() && self.load_n > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "normal load must be positive, got {}",
                self.load_n
            )));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive, got {}",
                self.mu
            )));
        }
        if !self.center_mm.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter(
                "contact center must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Fails unless the contact disc lies within the sensing area.
    pub fn check_fits(&self, grid: &TaxelGridSpec) -> Result<()> {
        self.validate()?;
        let center = self.center_mm[0].hypot(self.center_mm[1]);
        let half_side_mm = grid.half_side_mm();
        if center + self.radius_mm > half_side_mm * (1.0 + 1e-12) {
            return Err(Error::ContactOutsideGrid {
                center_mm: center,
                radius_mm: self.radius_mm,
                half_side_mm,
            });
        }
        Ok(())
    }

    /// Same contact at a different normal load; the radius follows the Hertz
    /// scaling `a ∝ P^(1/3)`.
    pub fn with_load(&self, load_n: f64) -> Result<Self> {
        Self::new(
            self.radius_mm * (load_n / self.load_n).cbrt(),
            load_n,
            self.mu,
            self.center_mm,
        )
    }

    /// Taxel offsets `(dx, dy)` from the contact center.
    fn offsets<'a>(&'a self, grid: &'a TaxelGridSpec) -> impl Iterator<Item = (f64, f64)> + 'a {
        grid.taxel_coords()
            .map(move |(x, y)| (x - self.center_mm[0], y - self.center_mm[1]))
    }
}

/// Tangential traction field, newtons per taxel.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearField {
    pub fx: Vec<f64>,
    pub fy: Vec<f64>,
    /// Radius of the stick region in millimeters; zero under full sliding.
    pub stick_radius_mm: f64,
}

impl ShearField {
    fn zeros(len: usize, stick_radius_mm: f64) -> Self {
        Self {
            fx: vec![0.0; len],
            fy: vec![0.0; len],
            stick_radius_mm,
        }
    }
}

/// Unnormalized Hertz profile `sqrt(1 - r²/a²)`, zero for `r >= a`.
pub fn hertz_profile(r: f64, a: f64) -> f64 {
    if r < a {
        (1.0 - (r / a).powi(2)).sqrt()
    } else {
        0.0
    }
}

struct Pressure {
    fz: Vec<f64>,
    /// Newtons per unit of profile; `fz[i] = scale * hertz_profile(r_i, a)`.
    /// `None` when no taxel center falls inside the disc.
    scale: Option<f64>,
    radii: Vec<f64>,
}

fn pressure(params: &ContactParams, grid: &TaxelGridSpec) -> Result<Pressure> {
    params.check_fits(grid)?;
    let a = params.radius_mm;
    let radii: Vec<f64> = params.offsets(grid).map(|(dx, dy)| dx.hypot(dy)).collect();
    let profile: Vec<f64> = radii.iter().map(|&r| hertz_profile(r, a)).collect();
    let total: f64 = profile.iter().sum();
    if total > 0.0 {
        let scale = params.load_n / total;
        Ok(Pressure {
            fz: profile.iter().map(|p| p * scale).collect(),
            scale: Some(scale),
            radii,
        })
    } else {
        // Contact smaller than the taxel spacing: the whole load lands on the
        // nearest taxel.
        let nearest = radii
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut fz = vec![0.0; radii.len()];
        fz[nearest] = params.load_n;
        Ok(Pressure {
            fz,
            scale: None,
            radii,
        })
    }
}

/// Hertz pressure sampled at taxel centers, normalized so the taxel sum
/// equals the normal load.
pub fn hertz_pressure(params: &ContactParams, grid: &TaxelGridSpec) -> Result<Vec<f64>> {
    Ok(pressure(params, grid)?.fz)
}

/// Analytic stick-area fraction `(c/a)²` of a Cattaneo–Mindlin contact under
/// tangential load `q`.
pub fn analytic_stick_fraction(q: f64, mu: f64, load: f64) -> f64 {
    let ratio = q / (mu * load);
    if ratio >= 1.0 {
        0.0
    } else if ratio <= 0.0 {
        1.0
    } else {
        (1.0 - ratio).powf(2.0 / 3.0)
    }
}

/// Analytic stick-area fraction of the torsional construction at torque
/// ratio `m = M / M_slip`.
///
/// The continuum torque of the superposed-Hertz azimuthal traction is
/// `M_slip * (1 - (c/a)^4)`, so `(c/a)² = sqrt(1 - m)`.
pub fn analytic_torsional_stick_fraction(torque_ratio: f64) -> f64 {
    if torque_ratio >= 1.0 {
        0.0
    } else if torque_ratio <= 0.0 {
        1.0
    } else {
        (1.0 - torque_ratio).sqrt()
    }
}

/// Translational partial-slip shear field for tangential load `q` along
/// `direction`.
///
/// The slip annulus carries `(1 + TIE_BREAK) * mu * f_z`. Inside the stick
/// disc of radius `c = a * (1 - q / (mu P))^(1/3)` the traction is
/// `mu * (f_z - beta * sqrt(1 - r²/c²))`, with `beta` chosen so the taxel sum
/// equals `q`. For `q >= mu P` every taxel slides.
pub fn cattaneo_mindlin_shear(
    params: &ContactParams,
    q: f64,
    direction: [f64; 2],
    grid: &TaxelGridSpec,
) -> Result<ShearField> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tangential load must be nonnegative, got {q}"
        )));
    }
    let norm = direction[0].hypot(direction[1]);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidParameter(
            "shear direction must be nonzero".into(),
        ));
    }
    let (ux, uy) = (direction[0] / norm, direction[1] / norm);
    let Pressure { fz, radii, .. } = pressure(params, grid)?;
    let mu = params.mu;
    let a = params.radius_mm;
    if q == 0.0 {
        return Ok(ShearField::zeros(fz.len(), a));
    }

    let ratio = q / (mu * params.load_n);
    let c = if ratio < 1.0 {
        a * (1.0 - ratio).cbrt()
    } else {
        0.0
    };
    let core: Vec<f64> = radii.iter().map(|&r| hertz_profile(r, c)).collect();
    let core_sum: f64 = core.iter().sum();

    let slide = (1.0 + TIE_BREAK) * mu;
    let magnitudes: Vec<f64> = if core_sum > 0.0 {
        let mut slip_part = 0.0;
        let mut stick_part = 0.0;
        let mut beta_max = f64::INFINITY;
        for (&f, &g) in fz.iter().zip(&core) {
            if g > 0.0 {
                stick_part += mu * f;
                beta_max = beta_max.min(f / g);
            } else {
                slip_part += slide * f;
            }
        }
        let beta = ((slip_part + stick_part - q) / (mu * core_sum)).clamp(0.0, beta_max);
        fz.iter()
            .zip(&core)
            .map(|(&f, &g)| {
                if g > 0.0 {
                    mu * (f - beta * g)
                } else {
                    slide * f
                }
            })
            .collect()
    } else {
        fz.iter().map(|&f| slide * f).collect()
    };

    Ok(ShearField {
        fx: magnitudes.iter().map(|m| m * ux).collect(),
        fy: magnitudes.iter().map(|m| m * uy).collect(),
        stick_radius_mm: c,
    })
}

/// Torque at which every contacting taxel slides: `Σ mu f_z r` about the
/// contact center, in N·mm.
pub fn full_slip_torque(params: &ContactParams, grid: &TaxelGridSpec) -> Result<f64> {
    let p = pressure(params, grid)?;
    Ok(params.mu * p.fz.iter().zip(&p.radii).map(|(f, r)| f * r).sum::<f64>())
}

fn torsional_magnitudes(p: &Pressure, mu: f64, a: f64, c: f64, out: &mut Vec<f64>) {
    out.clear();
    let scale = p.scale.unwrap_or(0.0);
    out.extend(p.fz.iter().zip(&p.radii).map(|(&f, &r)| {
        if r < c {
            mu * (f - scale * (c * c - r * r).sqrt() / a)
        } else {
            (1.0 + TIE_BREAK) * mu * f
        }
    }));
}

/// Azimuthal partial-slip traction field with net moment `mz` (N·mm) about
/// the contact center.
///
/// Outside a stick core of radius `c` the traction is `(1 + TIE_BREAK) * mu * f_z`;
/// inside it is `mu * (f_z - s * sqrt(c² - r²) / a)` with `s` the pressure
/// scale, so the core sticks strictly. `c` is found by bisection on the
/// taxel-summed torque. Torques at or above [`full_slip_torque`] give full
/// sliding. A taxel exactly at the contact center carries no shear.
pub fn torsional_partial_slip(
    params: &ContactParams,
    mz: f64,
    grid: &TaxelGridSpec,
) -> Result<ShearField> {
    if !(mz.is_finite() && mz >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "torque must be nonnegative, got {mz}"
        )));
    }
    let p = pressure(params, grid)?;
    let a = params.radius_mm;
    let mu = params.mu;
    if mz == 0.0 {
        return Ok(ShearField::zeros(p.fz.len(), a));
    }
    let m_slip = mu * p.fz.iter().zip(&p.radii).map(|(f, r)| f * r).sum::<f64>();

    let mut magnitudes = Vec::with_capacity(p.fz.len());
    let c = if mz >= m_slip || p.scale.is_none() {
        0.0
    } else {
        let torque = |c: f64, buf: &mut Vec<f64>| -> f64 {
            torsional_magnitudes(&p, mu, a, c, buf);
            buf.iter().zip(&p.radii).map(|(m, r)| m * r).sum()
        };
        // Torque decreases in c, from (1 + TIE_BREAK) M_slip at c = 0 to 0 at c = a.
        let (mut lo, mut hi) = (0.0, a);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if torque(mid, &mut magnitudes) > mz {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    torsional_magnitudes(&p, mu, a, c, &mut magnitudes);

    let mut field = ShearField::zeros(p.fz.len(), c);
    for (i, (dx, dy)) in params.offsets(grid).enumerate() {
        let r = p.radii[i];
        if r > 0.0 {
            field.fx[i] = -magnitudes[i] * dy / r;
            field.fy[i] = magnitudes[i] * dx / r;
        }
    }
    Ok(field)
}

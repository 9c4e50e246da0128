//! Analytic soft-contact traction fields and labeled scenario generation.

mod fields;
mod noise;
mod scenario;

pub use fields::{
    analytic_stick_fraction, analytic_torsional_stick_fraction, cattaneo_mindlin_shear,
    full_slip_torque, hertz_pressure, torsional_partial_slip, ContactParams, ShearField, TIE_BREAK,
};
pub use noise::{add_noise, DEFAULT_NOISE_SIGMA};
pub use scenario::{generate_scenario, Phase, PhaseKind, PhaseRecord, ScenarioSpec, PRESET_NAMES};

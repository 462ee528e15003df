//! Electrostatic calibration of the frequency-shift measurement.
//!
//! Lengths are passed in nm, voltages in V, frequency shifts in rad/s and the
//! calibration constant C = ω₀/(2k) in s/kg. Gradients are reported in μN/m.

mod electrostatics;
mod extract;
mod fit;
mod linalg;

pub use electrostatics::{electrostatic_gradient_factor, frequency_shift_forward, sphere_plate_capacitance};
pub use extract::{average_sets, extract_casimir, resample, ExtractedPoint};
pub use fit::{fit_calibration, fit_parabola, CalibrationFit, FitOptions, ParabolaFit, SeparationGroup};

/// One recorded frequency shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRecord {
    pub z_piezo: f64,
    pub applied_voltage: f64,
    pub delta_omega: f64,
}

impl ShiftRecord {
    pub fn new(z_piezo: f64, applied_voltage: f64, delta_omega: f64) -> Self {
        ShiftRecord {
            z_piezo,
            applied_voltage,
            delta_omega,
        }
    }
}

/// PLL frequency resolution, rad/s.
pub const PLL_RESOLUTION: f64 = 0.0553;

/// Voltages of one measurement: 0.083–0.183 V in 0.01 V steps, with 0.133 V
/// applied eleven times instead of once.
pub fn standard_voltages() -> alloc::vec::Vec<f64> {
    let mut v = alloc::vec::Vec::with_capacity(21);
    for i in 0..11 {
        let x = 0.083 + 0.01 * i as f64;
        if i != 5 {
            v.push(x);
        }
    }
    v.extend(core::iter::repeat(0.133).take(11));
    v
}

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_finite, Error, Result};
use crate::units::EPSILON_0;

const MAX_TERMS: usize = 10_000_000;

fn geometry_tau(a: f64, r: f64) -> Result<f64> {
    if !(a > 0.0 && r > a && r.is_finite()) {
        return Err(Error::InvalidInput("electrostatics requires 0 < a < R"));
    }
    // cosh τ = 1 + a/R, written to stay accurate for a ≪ R.
    let x = a / r;
    Ok((x + (x * (x + 2.0)).sqrt()).ln_1p())
}

/// X′(a, R) in N/(V²·m): the electrostatic force gradient per squared
/// voltage for a sphere of radius R at closest separation a (both nm).
pub fn electrostatic_gradient_factor(a: f64, r: f64) -> Result<f64> {
    let tau = geometry_tau(a, r)?;
    let (a_m, r_m) = (a * 1e-9, r * 1e-9);
    let coth_t = 1.0 / tau.tanh();
    let csch_t = 1.0 / tau.sinh();
    let mut sum = 0.0;
    for n in 1..=MAX_TERMS {
        let nf = n as f64;
        let nt = nf * tau;
        let csch_n = 1.0 / nt.sinh();
        let coth_n = 1.0 / nt.tanh();
        let term = csch_n * (nf * coth_n * (nf * coth_n - coth_t) - csch_t * csch_t + nf * nf * csch_n * csch_n);
        sum += term;
        if term.abs() < 1e-12 * sum.abs() || csch_n == 0.0 {
            let pref = 2.0 * core::f64::consts::PI * EPSILON_0 / (a_m * (2.0 * r_m + a_m)).sqrt();
            return Ok(pref * sum);
        }
    }
    Err(Error::NotConverged { iterations: MAX_TERMS })
}

/// Sphere–plate capacitance (F) from the image-charge series.
pub fn sphere_plate_capacitance(a: f64, r: f64) -> Result<f64> {
    let tau = geometry_tau(a, r)?;
    let mut sum = 0.0;
    for n in 1..=MAX_TERMS {
        let term = 1.0 / (n as f64 * tau).sinh();
        sum += term;
        if term < 1e-16 * sum {
            return Ok(4.0 * core::f64::consts::PI * EPSILON_0 * r * 1e-9 * tau.sinh() * sum);
        }
    }
    Err(Error::NotConverged { iterations: MAX_TERMS })
}

/// Forward model Δω = −C·X′(a,R)(V − V₀)² − C·F′ (rad/s), with F′ in μN/m.
pub fn frequency_shift_forward(a: f64, r: f64, v_applied: f64, v0: f64, cal_const: f64, casimir_gradient: f64) -> Result<f64> {
    check_finite(casimir_gradient, "Casimir gradient")?;
    let x = electrostatic_gradient_factor(a, r)?;
    let dv = v_applied - v0;
    Ok(-cal_const * (x * dv * dv + casimir_gradient * 1e-6))
}

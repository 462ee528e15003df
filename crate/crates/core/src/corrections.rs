//! Roughness correction and conservative theoretical bands.

use crate::error::{check_finite, Error, Result};
use crate::lifshitz::{gradient_finite_t, gradient_zero_t, SummationPolicy, SystemGeometry};
use crate::reflection::Boundary;

/// rms roughness (nm) of the sphere and of the plate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoughnessParams {
    pub delta_sphere: f64,
    pub delta_plate: f64,
}

impl RoughnessParams {
    pub fn new(delta_sphere: f64, delta_plate: f64) -> Result<Self> {
        if !(delta_sphere >= 0.0 && delta_plate >= 0.0 && delta_sphere.is_finite() && delta_plate.is_finite()) {
            return Err(Error::InvalidInput("roughness amplitudes must be finite and non-negative"));
        }
        Ok(RoughnessParams {
            delta_sphere,
            delta_plate,
        })
    }

    /// Roughness of the measured sample: 0.9 nm on the sphere, 1.5 nm on graphene.
    pub fn experimental() -> Self {
        RoughnessParams {
            delta_sphere: 0.9,
            delta_plate: 1.5,
        }
    }

    /// (δ_s² + δ_g²)/a² exceeds 0.01, where the multiplicative form stops
    /// being a small correction.
    pub fn too_rough_for(&self, a: f64) -> bool {
        self.mean_square() / (a * a) > 0.01
    }

    fn mean_square(&self) -> f64 {
        self.delta_sphere * self.delta_sphere + self.delta_plate * self.delta_plate
    }

    /// Multiplicative factor 1 + 10(δ_s² + δ_g²)/a².
    pub fn factor(&self, a: f64) -> f64 {
        1.0 + 10.0 * self.mean_square() / (a * a)
    }
}

pub fn roughness_correct(value: f64, rough: &RoughnessParams, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidInput("separation must be positive"));
    }
    check_finite(value, "gradient")?;
    Ok(value * rough.factor(a))
}

/// Parameter uncertainties entering the band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyBudget {
    /// eV
    pub gap_err: f64,
    /// eV
    pub mu_err: f64,
    /// nm
    pub radius_err: f64,
    pub optical_rel_err: f64,
    pub pfa_lower_factor_enabled: bool,
}

impl UncertaintyBudget {
    pub const ZERO: UncertaintyBudget = UncertaintyBudget {
        gap_err: 0.0,
        mu_err: 0.0,
        radius_err: 0.0,
        optical_rel_err: 0.0,
        pfa_lower_factor_enabled: false,
    };

    pub fn experimental() -> Self {
        UncertaintyBudget {
            gap_err: 0.05,
            mu_err: 0.01,
            radius_err: 50.0,
            optical_rel_err: 0.005,
            pfa_lower_factor_enabled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.gap_err, self.mu_err, self.radius_err, self.optical_rel_err];
        if vals.iter().all(|v| *v >= 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidInput("uncertainties must be finite and non-negative"))
        }
    }
}

/// Theoretical band (μN/m) at one separation, with the roughness-corrected
/// central value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientBand {
    pub lower: f64,
    pub center: f64,
    pub upper: f64,
    /// K; zero for the T = 0 theory.
    pub center_t: f64,
}

impl GradientBand {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.upper + self.lower)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

fn gradient(geom: &SystemGeometry, plate: &Boundary, sphere: &Boundary, temperature: f64, policy: &SummationPolicy) -> Result<f64> {
    let r = if temperature > 0.0 {
        gradient_finite_t(geom, plate, sphere, temperature, policy)?
    } else {
        gradient_zero_t(geom, plate, sphere, policy)?
    };
    if !r.converged {
        return Err(Error::MatsubaraCap {
            l_used: r.l_used,
            partial: r.value,
            tail: f64::NAN,
        });
    }
    Ok(r.value)
}

/// Band from the extreme sheet parameters: μ + δμ with Δ − δΔ on top,
/// μ − δμ with Δ + δΔ at the bottom. `temperature` = 0 selects the
/// zero-temperature theory.
pub fn build_band(
    geom: &SystemGeometry,
    plate: &Boundary,
    sphere: &Boundary,
    budget: &UncertaintyBudget,
    rough: &RoughnessParams,
    temperature: f64,
    policy: &SummationPolicy,
) -> Result<GradientBand> {
    budget.validate()?;
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidInput("temperature must be non-negative"));
    }
    let a = geom.separation;
    let r = geom.sphere_radius;
    let center = gradient(geom, plate, sphere, temperature, policy)?;
    let (hi, lo) = match plate.sheet() {
        Some(sheet) if budget.gap_err > 0.0 || budget.mu_err > 0.0 => {
            let up = plate.with_sheet(sheet.shifted(-budget.gap_err, budget.mu_err));
            let down = plate.with_sheet(sheet.shifted(budget.gap_err, -budget.mu_err));
            (
                gradient(geom, &up, sphere, temperature, policy)?,
                gradient(geom, &down, sphere, temperature, policy)?,
            )
        }
        _ => (center, center),
    };
    let f = rough.factor(a);
    let mut upper = hi * f * (r + budget.radius_err) / r * (1.0 + budget.optical_rel_err);
    let mut lower = lo * f * (r - budget.radius_err) / r * (1.0 - budget.optical_rel_err);
    if budget.pfa_lower_factor_enabled {
        lower *= 1.0 - a / r;
    }
    let center = center * f;
    // Numerical noise can invert a degenerate band by a few ulps.
    if lower > upper {
        core::mem::swap(&mut lower, &mut upper);
    }
    Ok(GradientBand {
        lower: lower.min(center),
        center,
        upper: upper.max(center),
        center_t: temperature,
    })
}

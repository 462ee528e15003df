use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{fermi_pair, psi_unchecked, softplus, GrapheneSheet, PolarizationPair, SpectralContext};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, Tolerance};
use crate::units::{thermal_energy, ALPHA, HBAR_C};

// Fermi factors below e^{-36} are dropped.
const FERMI_CUTOFF: f64 = 36.0;

/// Undoped, zero-temperature tensor at the context frequency:
/// Π₀₀ = αk⊥²Ψ(D)/q̃, Π = αk⊥²q̃Ψ(D).
pub fn pt_order0(ctx: &SpectralContext, sheet: &GrapheneSheet) -> Result<PolarizationPair> {
    if !(ctx.q_tilde > 0.0) {
        return Err(Error::InvalidInput("q̃ must be positive (k⊥ = ξ = 0 is excluded)"));
    }
    Ok(order0_unchecked(ctx, sheet))
}

#[inline]
pub(crate) fn order0_unchecked(ctx: &SpectralContext, sheet: &GrapheneSheet) -> PolarizationPair {
    let k2 = ctx.kperp * ctx.kperp;
    let p = psi_unchecked(ctx.gap_ratio(sheet));
    PolarizationPair {
        pi00: ALPHA * k2 * p / ctx.q_tilde,
        pi: ALPHA * k2 * ctx.q_tilde * p,
    }
}

fn sorted_edges(lo: f64, hi: f64, interior: &[f64]) -> Vec<f64> {
    let mut edges = Vec::with_capacity(interior.len() + 2);
    edges.push(lo);
    for &x in interior {
        if x > lo && x < hi && x.is_finite() {
            edges.push(x);
        }
    }
    edges.push(hi);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    edges.dedup();
    edges
}

/// Dimensionless u-integrals of the explicit thermal part for ξ > 0.
///
/// Returns `[I₀₀, I_Π]` with Π₀₀⁽¹⁾ = 4αq̃I₀₀/v² and Π⁽¹⁾ = −4αq̃I_Π/v²
/// (v = v_F/c). The Π integrand is pre-multiplied by (ξ/c)² so that it stays
/// regular as γ = ξ/(cq̃) → 0.
pub fn thermal_integrals(ctx: &SpectralContext, sheet: &GrapheneSheet, tol: &Tolerance) -> Result<[f64; 2]> {
    let kt = thermal_energy(ctx.temperature);
    let xc = ctx.xi_wavenumber();
    let qt = ctx.q_tilde;
    let gamma = xc / qt;
    let d = ctx.gap_ratio(sheet);
    let b = HBAR_C * qt / (2.0 * kt);
    let m = sheet.chemical_potential() / kt;
    let u_max = (FERMI_CUTOFF + m) / b;
    if !(u_max > d) {
        return Ok([0.0, 0.0]);
    }
    let d2g = d * d * (1.0 - gamma * gamma);
    let pi_shift = (qt * qt - xc * xc) * d * d;
    let integrand = |u: f64| -> [f64; 2] {
        let f = fermi_pair(b * u, m);
        if f == 0.0 {
            return [0.0, 0.0];
        }
        let z = Complex64::new(1.0 - u * u + d2g, 2.0 * gamma * u);
        let s = z.sqrt();
        let n00 = Complex64::new(1.0 - u * u, 2.0 * gamma * u);
        let r00 = 1.0 - (n00 / s).re;
        let w = Complex64::new(xc, u * qt);
        let npi = w * w + pi_shift;
        let rpi = xc * xc - (npi / s).re;
        [f * r00, f * rpi]
    };
    let knee = m / b;
    let branch = (1.0 + d2g).sqrt();
    let edges = sorted_edges(d, u_max, &[knee, branch]);
    let est = integrate_panels(integrand, &edges, tol)?;
    Ok(est.value)
}

/// Explicit temperature / chemical potential contribution (Π₀₀⁽¹⁾, Π⁽¹⁾) for
/// a nonzero Matsubara frequency.
pub fn pt_thermal(ctx: &SpectralContext, sheet: &GrapheneSheet, tol: &Tolerance) -> Result<PolarizationPair> {
    if !(ctx.temperature > 0.0) {
        return Err(Error::InvalidInput("temperature must be positive"));
    }
    if ctx.l == Some(0) || !(ctx.xi_energy > 0.0) {
        return Err(Error::InvalidInput("the static term uses pt_l0"));
    }
    if !(ctx.q_tilde > 0.0) {
        return Err(Error::InvalidInput("q̃ must be positive"));
    }
    let [i00, ipi] = thermal_integrals(ctx, sheet, tol)?;
    let v = sheet.fermi_velocity_ratio();
    let pref = 4.0 * ALPHA * ctx.q_tilde / (v * v);
    Ok(PolarizationPair {
        pi00: pref * i00,
        pi: -pref * ipi,
    })
}

/// Full tensor for l ≥ 1: undoped zero-temperature part plus explicit thermal
/// part.
pub fn pt_exact_lgeq1(ctx: &SpectralContext, sheet: &GrapheneSheet, tol: &Tolerance) -> Result<PolarizationPair> {
    Ok(pt_order0(ctx, sheet)? + pt_thermal(ctx, sheet, tol)?)
}

/// Complete tensor of the static (l = 0) term.
///
/// The finite integral over u ∈ [D₀, √(1+D₀²)] is evaluated in the variable
/// φ with u = √(1+D₀²) cos φ, which removes the inverse square-root endpoint
/// singularity.
pub fn pt_l0(kperp: f64, sheet: &GrapheneSheet, temperature: f64, tol: &Tolerance) -> Result<PolarizationPair> {
    if !(kperp > 0.0 && kperp.is_finite()) {
        return Err(Error::InvalidInput("k⊥ must be positive"));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidInput("temperature must be positive"));
    }
    let v = sheet.fermi_velocity_ratio();
    let kt = thermal_energy(temperature);
    let hvk = HBAR_C * v * kperp;
    let d0 = sheet.gap() / hvk;
    let b0 = hvk / (2.0 * kt);
    let m = sheet.chemical_potential() / kt;
    let p = psi_unchecked(d0);

    let half_gap = sheet.gap() / (2.0 * kt);
    let log_term = softplus(-half_gap - m) + softplus(-half_gap + m);
    let thermal_const = 8.0 * ALPHA * (kt / HBAR_C) / (v * v) * log_term;

    let radius = (1.0 + d0 * d0).sqrt();
    // φ = π/2 − θ, so that u = √(1+D₀²) cos φ and φ ∈ [0, arctan(1/D₀)].
    let phi1 = if d0 == 0.0 { core::f64::consts::FRAC_PI_2 } else { (1.0 / d0).atan() };
    let ([i1, i2], i2_err) = if phi1 > 0.0 {
        let integrand = |phi: f64| -> [f64; 2] {
            let (sn, cs) = phi.sin_cos();
            let f = fermi_pair(b0 * radius * cs, m);
            // 1 − u² and D₀² − u² rewritten without cancellation.
            [f * (sn * sn - d0 * d0 * cs * cs), f * (d0 * d0 * sn * sn - cs * cs)]
        };
        let knee = m / b0;
        let mut interior = [f64::NAN];
        if knee > d0 && knee < radius {
            let x = knee / radius;
            interior[0] = (1.0 - x * x).sqrt().atan2(x);
        }
        let edges = sorted_edges(0.0, phi1, &interior);
        let est = integrate_panels(integrand, &edges, tol)?;
        (est.value, est.error[1])
    } else {
        ([0.0, 0.0], 0.0)
    };
    // For a doped sheet Ψ + 4I₂ cancels exactly; a residue within the
    // quadrature error is zero.
    let mut bracket = p + 4.0 * i2;
    if bracket.abs() <= 4.0 * i2_err + 64.0 * f64::EPSILON * (p.abs() + 4.0 * i2.abs()) {
        bracket = 0.0;
    }
    Ok(PolarizationPair {
        pi00: ALPHA * kperp * p / v + thermal_const - 4.0 * ALPHA * kperp / v * i1,
        pi: ALPHA * v * kperp.powi(3) * bracket,
    })
}

/// Bracket Ψ(Δ/ħξ) + Y(T, Δ, μ) of the simplified l ≥ 1 tensor; it does not
/// depend on k⊥, so callers evaluate it once per Matsubara frequency.
pub fn approx_bracket(xi_energy: f64, sheet: &GrapheneSheet, temperature: f64, tol: &Tolerance) -> Result<f64> {
    if !(xi_energy > 0.0) {
        return Err(Error::InvalidInput("approximation needs ξ > 0"));
    }
    if !(temperature > 0.0) {
        return Err(Error::InvalidInput("temperature must be positive"));
    }
    let d = sheet.gap() / xi_energy;
    let kt = thermal_energy(temperature);
    let b = xi_energy / (2.0 * kt);
    let m = sheet.chemical_potential() / kt;
    let u_max = (FERMI_CUTOFF + m) / b;
    let y = if u_max > d {
        let integrand = |u: f64| [2.0 * fermi_pair(b * u, m) * (u * u + d * d) / (u * u + 1.0)];
        let edges = sorted_edges(d, u_max, &[m / b]);
        integrate_panels(integrand, &edges, tol)?.value[0]
    } else {
        0.0
    };
    Ok(psi_unchecked(d) + y)
}

/// Tensor from a precomputed [`approx_bracket`].
#[inline]
pub(crate) fn approx_from_bracket(ctx: &SpectralContext, bracket: f64) -> PolarizationPair {
    let xc = ctx.xi_wavenumber();
    let k2 = ctx.kperp * ctx.kperp;
    PolarizationPair {
        pi00: ALPHA * k2 / xc * bracket,
        pi: ALPHA * xc * k2 * bracket,
    }
}

/// Simplified complete tensor for l ≥ 1, valid when ξ₁ ≫ v_F/(2a).
pub fn pt_approx_lgeq1(ctx: &SpectralContext, sheet: &GrapheneSheet, tol: &Tolerance) -> Result<PolarizationPair> {
    if ctx.l == Some(0) {
        return Err(Error::InvalidInput("approximation is for l ≥ 1"));
    }
    let bracket = approx_bracket(ctx.xi_energy, sheet, ctx.temperature, tol)?;
    Ok(approx_from_bracket(ctx, bracket))
}


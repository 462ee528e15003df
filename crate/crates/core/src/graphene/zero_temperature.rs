use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::tensor::order0_unchecked;
use super::{GrapheneSheet, PolarizationPair, SpectralContext};
use crate::error::{check_finite, Error, Result};
use crate::units::{ALPHA, HBAR_C};

const BRANCH_GUARD: f64 = 1e-12;

/// Complete tensor at T = 0 for a doped, gapped sheet at imaginary frequency
/// ħξ = `xi_energy` (eV).
///
/// For 2μ ≤ Δ the doping does not contribute and the undoped form is
/// returned. Otherwise the closed form with M = 1 + D², D = Δ/(ħcq̃) and
/// y = (ħξ + 2iμ)/(ħv_F k⊥√M) is used on the principal branches of the
/// square root and logarithm.
pub fn pt_zero_temperature(xi_energy: f64, kperp: f64, sheet: &GrapheneSheet) -> Result<PolarizationPair> {
    check_finite(xi_energy, "frequency")?;
    if xi_energy < 0.0 {
        return Err(Error::InvalidInput("frequency must be non-negative"));
    }
    if !(kperp > 0.0 && kperp.is_finite()) {
        return Err(Error::InvalidInput("k⊥ must be positive"));
    }
    let v = sheet.fermi_velocity_ratio();
    let ctx = SpectralContext::at_frequency(xi_energy, kperp, v, 0.0);
    let mu = sheet.chemical_potential();
    if 2.0 * mu <= sheet.gap() {
        return Ok(order0_unchecked(&ctx, sheet));
    }
    let hvk = HBAR_C * v * kperp;
    let mut pair = doped(&ctx, sheet, xi_energy, hvk);
    if pair.is_none() {
        // Exactly on the branch point 1 + y² = 0: step just off the cut.
        let nudged = xi_energy + BRANCH_GUARD.max(1e-9 * hvk);
        let ctx = SpectralContext::at_frequency(nudged, kperp, v, 0.0);
        pair = doped(&ctx, sheet, nudged, hvk);
    }
    pair.ok_or(Error::InvalidInput("branch point of the zero-temperature tensor"))
}

fn doped(ctx: &SpectralContext, sheet: &GrapheneSheet, xi_energy: f64, hvk: f64) -> Option<PolarizationPair> {
    let v = sheet.fermi_velocity_ratio();
    let mu = sheet.chemical_potential();
    let d = ctx.gap_ratio(sheet);
    let m = 1.0 + d * d;
    let y = Complex64::new(xi_energy, 2.0 * mu) / (hvk * m.sqrt());
    let one_plus_y2 = y * y + 1.0;
    if one_plus_y2.norm() < BRANCH_GUARD {
        return None;
    }
    let w = one_plus_y2.sqrt();
    let a = (y * w).im;
    let lg = (y + w).ln().im;
    let xc = ctx.xi_wavenumber();
    let k2 = ctx.kperp * ctx.kperp;
    let qt = ctx.q_tilde;
    let pi = core::f64::consts::PI;
    let doping = 8.0 * ALPHA * (mu / HBAR_C) / (v * v);
    let pi00 = doping - ALPHA * k2 / qt * (2.0 * m * a + (2.0 - m) * (2.0 * lg - pi));
    let pi_tr = -doping * xc * xc + 2.0 * ALPHA * qt * k2 * (m * a - (2.0 - m) * lg + 0.5 * pi * (2.0 - m));
    Some(PolarizationPair { pi00, pi: pi_tr })
}

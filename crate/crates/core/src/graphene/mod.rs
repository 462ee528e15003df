//! Dirac-model response of a graphene sheet at imaginary frequencies.
//!
//! The polarization tensor enters the reflection coefficients only through
//! Π₀₀ and the combination Π = k⊥²Π_β^β − q²Π₀₀. Both are stored divided by
//! ħ: Π₀₀ in 1/nm and Π in 1/nm³.
//!
//! Available forms:
//! * [`pt_order0`]: undoped sheet at T = 0 evaluated at the given frequency;
//! * [`pt_thermal`]: explicit temperature / chemical potential part for l ≥ 1;
//! * [`pt_l0`]: complete tensor of the static Matsubara term;
//! * [`pt_approx_lgeq1`]: simplified complete tensor for l ≥ 1 valid when
//!   ξ₁ ≫ v_F/(2a);
//! * [`pt_zero_temperature`]: complete T = 0 tensor at arbitrary ξ.

mod tensor;
mod zero_temperature;

pub use tensor::{
    approx_bracket, pt_approx_lgeq1, pt_exact_lgeq1, pt_l0, pt_order0, pt_thermal, thermal_integrals,
};
pub use zero_temperature::pt_zero_temperature;
pub(crate) use tensor::approx_from_bracket;

use core::ops::{Add, Mul};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_finite, Error, Result};
use crate::units::{energy_to_wavenumber, matsubara_energy, DEFAULT_VF_RATIO, HBAR_C};

/// Energy gap, chemical potential and Fermi velocity of a sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrapheneSheet {
    gap: f64,
    chemical_potential: f64,
    fermi_velocity_ratio: f64,
}

impl GrapheneSheet {
    /// Sheet with gap Δ and chemical potential μ (eV), v_F/c = 1/300.
    pub fn new(gap: f64, chemical_potential: f64) -> Result<Self> {
        Self::with_fermi_velocity(gap, chemical_potential, DEFAULT_VF_RATIO)
    }

    pub fn with_fermi_velocity(gap: f64, chemical_potential: f64, fermi_velocity_ratio: f64) -> Result<Self> {
        check_finite(gap, "gap")?;
        check_finite(chemical_potential, "chemical potential")?;
        if gap < 0.0 {
            return Err(Error::InvalidInput("gap must be non-negative"));
        }
        if chemical_potential < 0.0 {
            return Err(Error::InvalidInput("chemical potential must be non-negative"));
        }
        if !(fermi_velocity_ratio > 0.0 && fermi_velocity_ratio < 1.0) {
            return Err(Error::InvalidInput("Fermi velocity ratio must lie in (0, 1)"));
        }
        Ok(GrapheneSheet {
            gap,
            chemical_potential,
            fermi_velocity_ratio,
        })
    }

    /// Δ = μ = 0.
    pub fn pristine() -> Self {
        GrapheneSheet {
            gap: 0.0,
            chemical_potential: 0.0,
            fermi_velocity_ratio: DEFAULT_VF_RATIO,
        }
    }

    /// Δ = 0.29 eV, μ = 0.24 eV.
    pub fn experimental() -> Self {
        GrapheneSheet {
            gap: 0.29,
            chemical_potential: 0.24,
            fermi_velocity_ratio: DEFAULT_VF_RATIO,
        }
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential
    }

    pub fn fermi_velocity_ratio(&self) -> f64 {
        self.fermi_velocity_ratio
    }

    /// Copy with shifted parameters, clamped at zero.
    pub fn shifted(&self, gap_shift: f64, mu_shift: f64) -> Self {
        GrapheneSheet {
            gap: (self.gap + gap_shift).max(0.0),
            chemical_potential: (self.chemical_potential + mu_shift).max(0.0),
            fermi_velocity_ratio: self.fermi_velocity_ratio,
        }
    }
}

/// Per-frequency, per-wave-vector kinematics shared by tensor and reflection
/// evaluations. Wave numbers are in 1/nm, `xi_energy` is ħξ in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralContext {
    /// Matsubara index, `None` for a continuous frequency.
    pub l: Option<usize>,
    pub xi_energy: f64,
    pub kperp: f64,
    pub q: f64,
    pub q_tilde: f64,
    pub temperature: f64,
}

impl SpectralContext {
    /// Context at an arbitrary imaginary frequency.
    pub fn at_frequency(xi_energy: f64, kperp: f64, fermi_velocity_ratio: f64, temperature: f64) -> Self {
        let xc = energy_to_wavenumber(xi_energy);
        let vk = fermi_velocity_ratio * kperp;
        SpectralContext {
            l: None,
            xi_energy,
            kperp,
            q: kperp.hypot(xc),
            q_tilde: vk.hypot(xc),
            temperature,
        }
    }

    /// Context at the Matsubara frequency ξ_l = 2πk_BTl/ħ.
    pub fn matsubara(l: usize, temperature: f64, kperp: f64, fermi_velocity_ratio: f64) -> Self {
        let mut ctx = Self::at_frequency(matsubara_energy(l, temperature), kperp, fermi_velocity_ratio, temperature);
        ctx.l = Some(l);
        ctx
    }

    /// Builds the context from q instead of k⊥ (k⊥² = q² − (ξ/c)²).
    pub fn from_q(xi_energy: f64, q: f64, fermi_velocity_ratio: f64, temperature: f64) -> Self {
        let xc = energy_to_wavenumber(xi_energy);
        let k2 = ((q - xc) * (q + xc)).max(0.0);
        let kperp = k2.sqrt();
        let vk = fermi_velocity_ratio * kperp;
        SpectralContext {
            l: None,
            xi_energy,
            kperp,
            q,
            q_tilde: vk.hypot(xc),
            temperature,
        }
    }

    /// ξ/c in 1/nm.
    #[inline]
    pub fn xi_wavenumber(&self) -> f64 {
        energy_to_wavenumber(self.xi_energy)
    }

    /// D = Δ/(ħc q̃).
    #[inline]
    pub(crate) fn gap_ratio(&self, sheet: &GrapheneSheet) -> f64 {
        sheet.gap / (HBAR_C * self.q_tilde)
    }
}

/// Π₀₀/ħ (1/nm) and Π/ħ (1/nm³).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarizationPair {
    pub pi00: f64,
    pub pi: f64,
}

impl PolarizationPair {
    pub const ZERO: PolarizationPair = PolarizationPair { pi00: 0.0, pi: 0.0 };

    pub fn new(pi00: f64, pi: f64) -> Self {
        PolarizationPair { pi00, pi }
    }
}

impl Add for PolarizationPair {
    type Output = PolarizationPair;
    fn add(self, rhs: Self) -> Self {
        PolarizationPair {
            pi00: self.pi00 + rhs.pi00,
            pi: self.pi + rhs.pi,
        }
    }
}

impl Mul<f64> for PolarizationPair {
    type Output = PolarizationPair;
    fn mul(self, s: f64) -> Self {
        PolarizationPair {
            pi00: self.pi00 * s,
            pi: self.pi * s,
        }
    }
}

/// Ψ(x) = 2[x + (1 − x²) arctan(1/x)], with Ψ(0) = π.
pub fn psi(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidInput("Ψ requires a non-negative argument"));
    }
    Ok(psi_unchecked(x))
}

#[inline]
pub(crate) fn psi_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        core::f64::consts::PI
    } else if x.is_infinite() {
        0.0
    } else if x < 4.0 {
        2.0 * (x + (1.0 - x * x) * (1.0 / x).atan())
    } else {
        // x + (1 − x²)arctan(1/x) = Σ (−1)ⁿ [1/(2n+1) + 1/(2n+3)] x^{−(2n+1)}
        let inv2 = 1.0 / (x * x);
        let mut power = 1.0 / x;
        let mut sum = 0.0;
        let mut n = 0.0;
        let mut sign = 1.0;
        loop {
            let term = sign * (1.0 / (2.0 * n + 1.0) + 1.0 / (2.0 * n + 3.0)) * power;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
            power *= inv2;
            sign = -sign;
            n += 1.0;
        }
        2.0 * sum
    }
}

/// Chemical potential μ = ħv_F√(πn̄) in eV from an areal carrier density
/// given in cm⁻².
pub fn chemical_potential_from_concentration(n_bar_cm2: f64, fermi_velocity_ratio: f64) -> Result<f64> {
    check_finite(n_bar_cm2, "density")?;
    if n_bar_cm2 < 0.0 {
        return Err(Error::InvalidInput("density must be non-negative"));
    }
    let n_nm2 = n_bar_cm2 * 1e-14;
    Ok(HBAR_C * fermi_velocity_ratio * (core::f64::consts::PI * n_nm2).sqrt())
}

/// As [`chemical_potential_from_concentration`], also propagating a density
/// uncertainty: δμ = μ δn̄ / (2n̄).
pub fn chemical_potential_with_error(n_bar_cm2: f64, n_err_cm2: f64, fermi_velocity_ratio: f64) -> Result<(f64, f64)> {
    let mu = chemical_potential_from_concentration(n_bar_cm2, fermi_velocity_ratio)?;
    if !(n_err_cm2 >= 0.0) {
        return Err(Error::InvalidInput("density error must be non-negative"));
    }
    let err = if n_bar_cm2 > 0.0 {
        0.5 * mu * n_err_cm2 / n_bar_cm2
    } else {
        HBAR_C * fermi_velocity_ratio * (core::f64::consts::PI * n_err_cm2 * 1e-14).sqrt()
    };
    Ok((mu, err))
}

/// Σ_κ 1/(e^{x + κm} + 1) for κ = ±1, evaluated without overflow.
#[inline]
pub(crate) fn fermi_pair(x: f64, m: f64) -> f64 {
    fermi(x + m) + fermi(x - m)
}

#[inline]
fn fermi(z: f64) -> f64 {
    if z > 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

/// ln(1 + eˣ) without overflow.
#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn psi_reference_values() {
        assert_eq!(psi(0.0).unwrap(), PI);
        assert_relative_eq!(psi(1.0).unwrap(), 2.0, max_relative = 1e-15);
        // 2[10 − 99·arctan(0.1)] evaluated at 50 digits.
        assert_relative_eq!(psi(10.0).unwrap(), 0.265_606_806_749_918_6, max_relative = 1e-14);
        assert!(psi(-1e-3).is_err());
    }

    #[test]
    fn psi_series_matches_direct_near_switch() {
        for &x in &[3.9, 4.0, 4.1, 6.0] {
            let direct = 2.0 * (x + (1.0 - x * x) * (1.0f64 / x).atan());
            let series = psi_unchecked(x.max(4.0));
            if x >= 4.0 {
                assert_relative_eq!(direct, series, max_relative = 1e-12);
            }
        }
        let x = 440.9;
        assert_relative_eq!(psi(x).unwrap(), 8.0 / (3.0 * x), max_relative = 1e-5);
    }

    #[test]
    fn psi_decreasing() {
        let mut prev = psi(0.0).unwrap();
        for i in 1..2000 {
            let v = psi(i as f64 * 0.01).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn chemical_potential_values() {
        let mu = chemical_potential_from_concentration(4.2e12, 1.0 / 300.0).unwrap();
        assert!((mu - 0.24).abs() < 0.005, "{mu}");
        let (_, err) = chemical_potential_with_error(4.2e12, 0.3e12, 1.0 / 300.0).unwrap();
        assert!((err - 0.0085).abs() < 1e-3 && err <= 0.01, "{err}");
        assert_eq!(chemical_potential_from_concentration(0.0, 0.1).unwrap(), 0.0);
        let quarter = chemical_potential_from_concentration(1.05e12, 1.0 / 300.0).unwrap();
        assert_relative_eq!(quarter, mu / 2.0, max_relative = 1e-14);
        assert!((quarter - 0.12).abs() < 0.002);
        assert!(chemical_potential_from_concentration(-1.0, 0.1).is_err());
    }

    #[test]
    fn sheet_validation() {
        assert!(GrapheneSheet::new(-0.1, 0.0).is_err());
        assert!(GrapheneSheet::new(0.1, -0.1).is_err());
        assert!(GrapheneSheet::with_fermi_velocity(0.1, 0.1, 1.0).is_err());
        let p = GrapheneSheet::pristine();
        assert_eq!((p.gap(), p.chemical_potential()), (0.0, 0.0));
    }

    #[test]
    fn context_kinematics() {
        let ctx = SpectralContext::matsubara(3, 294.0, 2e-3, 1.0 / 300.0);
        let xc = ctx.xi_wavenumber();
        assert_relative_eq!(ctx.q * ctx.q, ctx.kperp.powi(2) + xc * xc, max_relative = 1e-12);
        let v = 1.0 / 300.0;
        assert_relative_eq!(ctx.q_tilde.powi(2), (v * ctx.kperp).powi(2) + xc * xc, max_relative = 1e-12);
        assert_relative_eq!(ctx.xi_energy, 2.0 * PI * crate::units::K_B * 294.0 * 3.0, max_relative = 1e-15);
        let back = SpectralContext::from_q(ctx.xi_energy, ctx.q, v, 294.0);
        assert_relative_eq!(back.kperp, ctx.kperp, max_relative = 1e-10);
    }

    #[test]
    fn fermi_helpers_stable() {
        assert_eq!(fermi_pair(800.0, 0.0), 0.0);
        assert_relative_eq!(fermi_pair(0.0, 0.0), 1.0);
        assert_relative_eq!(softplus(0.0), 2f64.ln());
        assert_relative_eq!(softplus(800.0), 800.0);
    }
}

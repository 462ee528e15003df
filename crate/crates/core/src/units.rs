//! Physical constants and unit conversions.
//!
//! Everything inside the crate is expressed in eV, nm and K.

/// ħc in eV·nm.
pub const HBAR_C: f64 = 197.326_980_4;
/// Boltzmann constant in eV/K.
pub const K_B: f64 = 8.617_333_262e-5;
/// Fine structure constant e²/(ħc).
pub const ALPHA: f64 = 1.0 / 137.035_999_084;
/// Elementary charge in C, i.e. J per eV.
pub const EV_J: f64 = 1.602_176_634e-19;
/// Vacuum permittivity in F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Default Fermi velocity ratio v_F/c.
pub const DEFAULT_VF_RATIO: f64 = 1.0 / 300.0;

/// 1 eV/nm² expressed in μN/m.
pub const EV_PER_NM2_IN_UN_PER_M: f64 = EV_J * 1e18 * 1e6;
/// 1 eV/nm³ expressed in Pa.
pub const EV_PER_NM3_IN_PA: f64 = EV_J * 1e27;

/// Thermal energy k_B T in eV.
#[inline]
pub fn thermal_energy(temperature: f64) -> f64 {
    K_B * temperature
}

/// Matsubara photon energy ħξ_l = 2π k_B T l in eV.
#[inline]
pub fn matsubara_energy(l: usize, temperature: f64) -> f64 {
    2.0 * core::f64::consts::PI * K_B * temperature * l as f64
}

/// Converts a photon energy (eV) to the wave number ξ/c in 1/nm.
#[inline]
pub fn energy_to_wavenumber(energy: f64) -> f64 {
    energy / HBAR_C
}

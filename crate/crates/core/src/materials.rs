//! Dielectric permittivities of bulk boundary materials along the imaginary
//! frequency axis.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_finite, Error, Result};
use crate::units::energy_to_wavenumber;

/// Value used for ε(i·0) of a Drude metal instead of infinity.
pub const DRUDE_STATIC_CAP: f64 = 1e12;

/// One Lorentz oscillator term `s / (1 + (ξ/ω)² + γξ/ω²)`; energies in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub strength: f64,
    pub resonance_energy: f64,
    pub damping_energy: f64,
}

impl Oscillator {
    pub const fn new(strength: f64, resonance_energy: f64, damping_energy: f64) -> Self {
        Oscillator {
            strength,
            resonance_energy,
            damping_energy,
        }
    }

    #[inline]
    fn response(&self, xi: f64) -> f64 {
        let w = self.resonance_energy;
        self.strength / (1.0 + (xi / w) * (xi / w) + self.damping_energy * xi / (w * w))
    }
}

/// How a metal's static (l = 0) TE response is treated.
///
/// With the Drude convention the transverse-electric reflection of a metal at
/// zero frequency vanishes; with the plasma convention ε(iξ)ξ² tends to ωp².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroModeConvention {
    #[default]
    Drude,
    Plasma,
}

/// Rule producing ε(iξ) for a bulk material.
#[derive(Debug, Clone, PartialEq)]
pub enum PermittivityModel {
    Vacuum,
    DrudeMetal {
        plasma_energy: f64,
        relaxation_energy: f64,
    },
    PlasmaMetal {
        plasma_energy: f64,
    },
    OscillatorDielectric {
        oscillators: Vec<Oscillator>,
    },
    /// Nodes `(ħξ [eV], ε)` with strictly increasing ħξ > 0.
    Tabulated {
        table: Vec<(f64, f64)>,
    },
}

impl PermittivityModel {
    pub fn drude(plasma_energy: f64, relaxation_energy: f64) -> Result<Self> {
        if !(plasma_energy > 0.0 && relaxation_energy >= 0.0)
            || !plasma_energy.is_finite()
            || !relaxation_energy.is_finite()
        {
            return Err(Error::InvalidInput("Drude parameters must be finite, ωp > 0, γ ≥ 0"));
        }
        Ok(PermittivityModel::DrudeMetal {
            plasma_energy,
            relaxation_energy,
        })
    }

    pub fn plasma(plasma_energy: f64) -> Result<Self> {
        if !(plasma_energy > 0.0) || !plasma_energy.is_finite() {
            return Err(Error::InvalidInput("plasma energy must be finite and positive"));
        }
        Ok(PermittivityModel::PlasmaMetal { plasma_energy })
    }

    pub fn oscillators(oscillators: Vec<Oscillator>) -> Result<Self> {
        if oscillators.is_empty() {
            return Err(Error::EmptyModel("oscillator list"));
        }
        for o in &oscillators {
            let ok = o.strength >= 0.0
                && o.resonance_energy > 0.0
                && o.damping_energy >= 0.0
                && o.strength.is_finite()
                && o.resonance_energy.is_finite()
                && o.damping_energy.is_finite();
            if !ok {
                return Err(Error::InvalidInput("oscillator parameters must be finite and non-negative"));
            }
        }
        Ok(PermittivityModel::OscillatorDielectric { oscillators })
    }

    pub fn tabulated(table: Vec<(f64, f64)>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::EmptyModel("permittivity table"));
        }
        for (i, &(xi, eps)) in table.iter().enumerate() {
            if !(xi > 0.0 && xi.is_finite() && eps >= 1.0 && eps.is_finite()) {
                return Err(Error::InvalidInput("table nodes need ħξ > 0 and finite ε ≥ 1"));
            }
            if i > 0 && xi <= table[i - 1].0 {
                return Err(Error::InvalidInput("table frequencies must be strictly increasing"));
            }
        }
        Ok(PermittivityModel::Tabulated { table })
    }

    /// Au with ωp = 9.0 eV, γ = 0.035 eV.
    pub fn gold_drude() -> Self {
        PermittivityModel::DrudeMetal {
            plasma_energy: 9.0,
            relaxation_energy: 0.035,
        }
    }

    pub fn gold_plasma() -> Self {
        PermittivityModel::PlasmaMetal { plasma_energy: 9.0 }
    }

    /// Fused silica: one UV and one IR oscillator (ε(0) ≈ 3.80).
    pub fn silica() -> Self {
        PermittivityModel::OscillatorDielectric {
            oscillators: alloc::vec![
                Oscillator::new(1.098, 13.39, 0.0),
                Oscillator::new(1.703, 0.1237, 0.0),
            ],
        }
    }

    pub fn is_metal(&self) -> bool {
        matches!(
            self,
            PermittivityModel::DrudeMetal { .. } | PermittivityModel::PlasmaMetal { .. }
        )
    }

    fn plasma_energy(&self) -> Option<f64> {
        match *self {
            PermittivityModel::DrudeMetal { plasma_energy, .. }
            | PermittivityModel::PlasmaMetal { plasma_energy } => Some(plasma_energy),
            _ => None,
        }
    }

    /// ε(iξ) at photon energy `xi_energy` = ħξ in eV.
    pub fn eps_at_imaginary_frequency(&self, xi_energy: f64) -> Result<f64> {
        check_finite(xi_energy, "frequency must be finite")?;
        if xi_energy < 0.0 {
            return Err(Error::InvalidInput("frequency must be non-negative"));
        }
        match self {
            PermittivityModel::OscillatorDielectric { oscillators } if oscillators.is_empty() => {
                Err(Error::EmptyModel("oscillator list"))
            }
            PermittivityModel::Tabulated { table } if table.is_empty() => {
                Err(Error::EmptyModel("permittivity table"))
            }
            _ => Ok(self.eps(xi_energy)),
        }
    }

    /// Unchecked ε(iξ); `xi_energy` must be finite and ≥ 0.
    pub fn eps(&self, xi: f64) -> f64 {
        match self {
            PermittivityModel::Vacuum => 1.0,
            PermittivityModel::DrudeMetal {
                plasma_energy,
                relaxation_energy,
            } => {
                if xi == 0.0 {
                    DRUDE_STATIC_CAP
                } else {
                    (1.0 + plasma_energy * plasma_energy / (xi * (xi + relaxation_energy)))
                        .min(DRUDE_STATIC_CAP)
                }
            }
            PermittivityModel::PlasmaMetal { plasma_energy } => {
                if xi == 0.0 {
                    DRUDE_STATIC_CAP
                } else {
                    (1.0 + plasma_energy * plasma_energy / (xi * xi)).min(DRUDE_STATIC_CAP)
                }
            }
            PermittivityModel::OscillatorDielectric { oscillators } => {
                1.0 + oscillators.iter().map(|o| o.response(xi)).sum::<f64>()
            }
            PermittivityModel::Tabulated { table } => interpolate_log_log(table, xi),
        }
    }

    /// ε(iξ)·(ξ/c)² in 1/nm², with the proper ξ → 0 limit.
    ///
    /// At ξ = 0 the product vanishes for dielectrics and Drude metals, and
    /// equals (ωp/ħc)² for plasma metals or when `convention` is
    /// [`ZeroModeConvention::Plasma`].
    pub fn eps_xi_squared(&self, xi: f64, convention: ZeroModeConvention) -> f64 {
        if xi == 0.0 {
            return match (self, convention) {
                (PermittivityModel::PlasmaMetal { plasma_energy }, _) => {
                    energy_to_wavenumber(*plasma_energy).powi(2)
                }
                (m, ZeroModeConvention::Plasma) if m.is_metal() => {
                    energy_to_wavenumber(m.plasma_energy().unwrap_or(0.0)).powi(2)
                }
                _ => 0.0,
            };
        }
        let xc = energy_to_wavenumber(xi);
        match self {
            // Avoid the cap: ε ξ² stays finite as ξ → 0.
            PermittivityModel::DrudeMetal {
                plasma_energy,
                relaxation_energy,
            } => {
                let wp = energy_to_wavenumber(*plasma_energy);
                xc * xc + wp * wp * xi / (xi + relaxation_energy)
            }
            PermittivityModel::PlasmaMetal { plasma_energy } => {
                let wp = energy_to_wavenumber(*plasma_energy);
                xc * xc + wp * wp
            }
            m => m.eps(xi) * xc * xc,
        }
    }
}

fn interpolate_log_log(table: &[(f64, f64)], xi: f64) -> f64 {
    let first = table[0];
    let last = table[table.len() - 1];
    if xi <= first.0 {
        return first.1;
    }
    if xi >= last.0 {
        return last.1;
    }
    let idx = table.partition_point(|&(x, _)| x <= xi);
    let (x0, e0) = table[idx - 1];
    let (x1, e1) = table[idx];
    if xi == x0 {
        return e0;
    }
    let t = (xi.ln() - x0.ln()) / (x1.ln() - x0.ln());
    (e0.ln() + t * (e1.ln() - e0.ln())).exp()
}

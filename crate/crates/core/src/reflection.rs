//! Reflection coefficients on the imaginary frequency axis.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graphene::{pt_l0, GrapheneSheet, PolarizationPair, SpectralContext};
use crate::quadrature::Tolerance;
use crate::materials::{PermittivityModel, ZeroModeConvention};

/// Planar boundary facing vacuum.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    /// Semispace of a bulk material.
    BareHalfspace(PermittivityModel),
    /// Graphene sheet lying on a semispace substrate.
    GrapheneCoatedHalfspace {
        substrate: PermittivityModel,
        sheet: GrapheneSheet,
    },
    /// Graphene sheet in vacuum.
    FreestandingGraphene(GrapheneSheet),
    /// Unit reflection for both polarizations (test and debug reference).
    IdealReflector,
}

impl Boundary {
    pub fn sheet(&self) -> Option<&GrapheneSheet> {
        match self {
            Boundary::GrapheneCoatedHalfspace { sheet, .. } | Boundary::FreestandingGraphene(sheet) => Some(sheet),
            _ => None,
        }
    }

    /// Copy of the boundary with the graphene sheet replaced.
    pub fn with_sheet(&self, new_sheet: GrapheneSheet) -> Boundary {
        match self {
            Boundary::GrapheneCoatedHalfspace { substrate, .. } => Boundary::GrapheneCoatedHalfspace {
                substrate: substrate.clone(),
                sheet: new_sheet,
            },
            Boundary::FreestandingGraphene(_) => Boundary::FreestandingGraphene(new_sheet),
            other => other.clone(),
        }
    }

    /// Substrate permittivity seen below the sheet (vacuum for a freestanding sheet).
    pub fn substrate(&self) -> Option<&PermittivityModel> {
        match self {
            Boundary::BareHalfspace(m) => Some(m),
            Boundary::GrapheneCoatedHalfspace { substrate, .. } => Some(substrate),
            Boundary::FreestandingGraphene(_) => Some(&PermittivityModel::Vacuum),
            Boundary::IdealReflector => None,
        }
    }
}

/// Substrate response at one frequency: ε and ε(ξ/c)² (1/nm²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubstrateResponse {
    pub eps: f64,
    pub eps_xi_sq: f64,
}

impl SubstrateResponse {
    pub fn new(model: &PermittivityModel, xi_energy: f64, convention: ZeroModeConvention) -> Self {
        SubstrateResponse {
            eps: model.eps(xi_energy),
            eps_xi_sq: model.eps_xi_squared(xi_energy, convention),
        }
    }

    pub const VACUUM_STATIC: SubstrateResponse = SubstrateResponse {
        eps: 1.0,
        eps_xi_sq: 0.0,
    };

    #[inline]
    fn k_medium(&self, kperp: f64) -> f64 {
        (kperp * kperp + self.eps_xi_sq).sqrt()
    }
}

/// Fresnel coefficients (r_TM, r_TE) of a bare semispace.
pub fn fresnel(ctx: &SpectralContext, model: &PermittivityModel) -> (f64, f64) {
    fresnel_response(ctx, &SubstrateResponse::new(model, ctx.xi_energy, ZeroModeConvention::Drude))
}

#[inline]
pub fn fresnel_response(ctx: &SpectralContext, sub: &SubstrateResponse) -> (f64, f64) {
    let k = sub.k_medium(ctx.kperp);
    let q = ctx.q;
    let eq = sub.eps * q;
    let rtm = if sub.eps.is_infinite() { 1.0 } else { (eq - k) / (eq + k) };
    (rtm, (q - k) / (q + k))
}

/// Coefficients (R_TM, R_TE) of a graphene sheet on a substrate, with the
/// tensor components stored divided by ħ.
#[inline]
pub fn graphene_dressed(ctx: &SpectralContext, sub: &SubstrateResponse, pt: &PolarizationPair) -> (f64, f64) {
    let k = sub.k_medium(ctx.kperp);
    let q = ctx.q;
    let k2 = ctx.kperp * ctx.kperp;
    let eq = sub.eps * q;
    let dress = q * k * pt.pi00;
    let rtm = (k2 * (eq - k) + dress) / (k2 * (eq + k) + dress);
    let rte = (k2 * (q - k) - pt.pi) / (k2 * (q + k) + pt.pi);
    (rtm, rte)
}

/// Boundary-level convenience: dressed coefficients of a graphene boundary
/// given its tensor (ignored for bare and ideal boundaries).
pub fn boundary_coefficients(
    ctx: &SpectralContext,
    boundary: &Boundary,
    pt: &PolarizationPair,
    convention: ZeroModeConvention,
) -> (f64, f64) {
    match boundary {
        Boundary::IdealReflector => (1.0, -1.0),
        Boundary::BareHalfspace(m) => fresnel_response(ctx, &SubstrateResponse::new(m, ctx.xi_energy, convention)),
        Boundary::GrapheneCoatedHalfspace { substrate, .. } => {
            graphene_dressed(ctx, &SubstrateResponse::new(substrate, ctx.xi_energy, convention), pt)
        }
        Boundary::FreestandingGraphene(_) => {
            graphene_dressed(ctx, &SubstrateResponse::new(&PermittivityModel::Vacuum, ctx.xi_energy, convention), pt)
        }
    }
}

/// Largest |R_TE| of the static term over `kperp_grid` (1/nm) at temperature
/// T, for a graphene-bearing boundary.
pub fn te_zero_mode_magnitude(
    boundary: &Boundary,
    temperature: f64,
    kperp_grid: &[f64],
    convention: ZeroModeConvention,
) -> Result<f64> {
    let sheet = boundary
        .sheet()
        .ok_or(Error::InvalidInput("boundary carries no graphene sheet"))?;
    let sub = match boundary.substrate() {
        Some(m) => SubstrateResponse::new(m, 0.0, convention),
        None => SubstrateResponse::VACUUM_STATIC,
    };
    let tol = Tolerance::new(1e-14, 1e-10);
    let mut worst: f64 = 0.0;
    for &k in kperp_grid {
        let pt = pt_l0(k, sheet, temperature, &tol)?;
        let ctx = SpectralContext::at_frequency(0.0, k, sheet.fermi_velocity_ratio(), temperature);
        worst = worst.max(graphene_dressed(&ctx, &sub, &pt).1.abs());
    }
    Ok(worst)
}

//! Lifshitz sums: sphere–plate force gradients in the proximity force
//! approximation, plate–plate pressures, thermal corrections and
//! thermal-regime diagnostics.
//!
//! Every transverse-momentum integral is written in the variable y = 2aq,
//! for which q k⊥ dk⊥ = y² dy/(8a³), and truncated at y = y_min + 60. Signs
//! are chosen so that attraction is positive.

use alloc::vec::Vec;
use core::cell::Cell;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graphene::{self, approx_bracket, pt_l0, pt_thermal, pt_zero_temperature, PolarizationPair, SpectralContext};
use crate::materials::{PermittivityModel, ZeroModeConvention};
use crate::quadrature::{integrate_panels, Tolerance};
use crate::reflection::{fresnel_response, graphene_dressed, Boundary, SubstrateResponse};
use crate::units::{
    energy_to_wavenumber, matsubara_energy, thermal_energy, DEFAULT_VF_RATIO, EV_PER_NM2_IN_UN_PER_M,
    EV_PER_NM3_IN_PA, HBAR_C, K_B,
};

const Y_SPAN: f64 = 60.0;

/// Sphere radius R and closest separation a, both in nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemGeometry {
    pub sphere_radius: f64,
    pub separation: f64,
}

impl SystemGeometry {
    pub fn new(sphere_radius: f64, separation: f64) -> Result<Self> {
        if !(separation > 0.0 && sphere_radius > separation && sphere_radius.is_finite()) {
            return Err(Error::InvalidInput("geometry requires 0 < a < R"));
        }
        Ok(SystemGeometry {
            sphere_radius,
            separation,
        })
    }

    /// Sphere of the experiment, R = 60.35 μm.
    pub fn experimental(separation: f64) -> Result<Self> {
        Self::new(60_350.0, separation)
    }

    /// True when a/R exceeds 0.1 and the proximity force approximation
    /// becomes questionable.
    pub fn pfa_warning(&self) -> bool {
        self.separation / self.sphere_radius > 0.1
    }
}

/// Which form of the graphene tensor is used inside a Matsubara sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TensorModel {
    /// Static term from its closed form, l ≥ 1 from undoped part plus the
    /// explicit thermal integrals.
    Exact,
    /// Static term exact, l ≥ 1 from the simplified ξ₁ ≫ v_F/(2a) form.
    #[default]
    Approximate,
    /// Zero-temperature tensor at every Matsubara frequency (implicit
    /// temperature dependence only).
    ZeroTemperature,
}

/// Convergence controls for the Lifshitz sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationPolicy {
    pub rel_tol: f64,
    pub l_max_cap: usize,
    pub quadrature_tol: f64,
    pub zero_mode_te_metal: ZeroModeConvention,
    pub tensor: TensorModel,
}

impl Default for SummationPolicy {
    fn default() -> Self {
        SummationPolicy {
            rel_tol: 1e-8,
            l_max_cap: 5000,
            quadrature_tol: 1e-9,
            zero_mode_te_metal: ZeroModeConvention::Drude,
            tensor: TensorModel::Approximate,
        }
    }
}

impl SummationPolicy {
    pub fn validate(&self) -> Result<()> {
        let ok = |t: f64| t > 0.0 && t < 1e-3;
        if !ok(self.rel_tol) || !ok(self.quadrature_tol) {
            return Err(Error::InvalidInput("tolerances must lie in (0, 1e-3)"));
        }
        if self.l_max_cap == 0 {
            return Err(Error::InvalidInput("l_max_cap must be positive"));
        }
        Ok(())
    }

    pub fn with_tensor(mut self, tensor: TensorModel) -> Self {
        self.tensor = tensor;
        self
    }

    fn inner_tol(&self, abs: f64) -> Tolerance {
        Tolerance::new(abs, self.quadrature_tol)
    }
}

/// Force gradient in μN/m (positive = attractive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientResult {
    pub value: f64,
    pub achieved_error: f64,
    pub l_used: usize,
    /// False when the Matsubara cap was hit; `value` is then a partial sum.
    pub converged: bool,
}

/// One boundary prepared for a single frequency.
struct Prepared<'a> {
    boundary: &'a Boundary,
    sub: SubstrateResponse,
    tensor: LevelTensor,
    vf: f64,
}

#[derive(Clone, Copy)]
enum LevelTensor {
    None,
    Static { temperature: f64 },
    Exact { temperature: f64 },
    Approx { bracket: f64 },
    ZeroT,
}

impl<'a> Prepared<'a> {
    fn new(
        boundary: &'a Boundary,
        xi: f64,
        temperature: Option<f64>,
        policy: &SummationPolicy,
    ) -> Result<Prepared<'a>> {
        let conv = policy.zero_mode_te_metal;
        let sub = match boundary.substrate() {
            Some(m) => SubstrateResponse::new(m, xi, conv),
            None => SubstrateResponse::VACUUM_STATIC,
        };
        let (tensor, vf) = match boundary.sheet() {
            None => (LevelTensor::None, DEFAULT_VF_RATIO),
            Some(sheet) => {
                let t = match temperature {
                    None => LevelTensor::ZeroT,
                    Some(_) if policy.tensor == TensorModel::ZeroTemperature => LevelTensor::ZeroT,
                    Some(temp) if xi == 0.0 => LevelTensor::Static { temperature: temp },
                    Some(temp) => match policy.tensor {
                        TensorModel::Exact => LevelTensor::Exact { temperature: temp },
                        _ => LevelTensor::Approx {
                            bracket: approx_bracket(xi, sheet, temp, &Tolerance::new(1e-14, policy.quadrature_tol))?,
                        },
                    },
                };
                (t, sheet.fermi_velocity_ratio())
            }
        };
        Ok(Prepared {
            boundary,
            sub,
            tensor,
            vf,
        })
    }

    fn coefficients(&self, xi: f64, q: f64, tol: &Tolerance) -> Result<(f64, f64)> {
        let ctx = SpectralContext::from_q(xi, q, self.vf, 0.0);
        match self.boundary {
            Boundary::IdealReflector => Ok((1.0, -1.0)),
            Boundary::BareHalfspace(_) => Ok(fresnel_response(&ctx, &self.sub)),
            _ => {
                let sheet = self.boundary.sheet().ok_or(Error::InvalidInput("graphene boundary without sheet"))?;
                if ctx.kperp == 0.0 {
                    return Ok(fresnel_response(&ctx, &self.sub));
                }
                let pt = match self.tensor {
                    LevelTensor::None => PolarizationPair::ZERO,
                    LevelTensor::Static { temperature } => pt_l0(ctx.kperp, sheet, temperature, tol)?,
                    LevelTensor::Exact { temperature } => {
                        let mut c = ctx;
                        c.temperature = temperature;
                        graphene::pt_order0(&c, sheet)? + pt_thermal(&c, sheet, tol)?
                    }
                    LevelTensor::Approx { bracket } => graphene::approx_from_bracket(&ctx, bracket),
                    LevelTensor::ZeroT => pt_zero_temperature(xi, ctx.kperp, sheet)?,
                };
                Ok(graphene_dressed(&ctx, &self.sub, &pt))
            }
        }
    }
}

#[inline]
fn mode_sum(r1: (f64, f64), r2: (f64, f64), e: f64, tm_only: bool) -> f64 {
    let term = |p: f64| {
        let x = p * e;
        x / (1.0 - x)
    };
    let tm = term(r1.0 * r2.0);
    if tm_only {
        tm
    } else {
        tm + term(r1.1 * r2.1)
    }
}

/// ∫ y² Σ_σ r_σR_σe^{−y}/(1 − r_σR_σe^{−y}) dy at one frequency.
fn level_integral(
    a: f64,
    xi: f64,
    temperature: Option<f64>,
    b1: &Boundary,
    b2: &Boundary,
    policy: &SummationPolicy,
    abs_tol: f64,
    tm_only: bool,
) -> Result<(f64, f64)> {
    let p1 = Prepared::new(b1, xi, temperature, policy)?;
    let p2 = Prepared::new(b2, xi, temperature, policy)?;
    let inner = Tolerance::new(1e-14, policy.quadrature_tol);
    let y0 = 2.0 * a * energy_to_wavenumber(xi);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let integrand = |y: f64| -> [f64; 1] {
        if failure.get().is_some() {
            return [0.0];
        }
        let q = y / (2.0 * a);
        let r1 = p1.coefficients(xi, q, &inner);
        let r2 = p2.coefficients(xi, q, &inner);
        match (r1, r2) {
            (Ok(r1), Ok(r2)) => [y * y * mode_sum(r1, r2, (-y).exp(), tm_only)],
            (Err(e), _) | (_, Err(e)) => {
                failure.set(Some(e));
                [0.0]
            }
        }
    };
    // Split near the peak of y²e^{−y} so that the first panel resolves
    // the small-y region.
    let edges = [y0, y0 + 2.0, y0 + 8.0, y0 + Y_SPAN];
    let est = integrate_panels(integrand, &edges, &policy.inner_tol(abs_tol))?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok((est.value[0], est.error[0]))
}

/// Result of a Matsubara sum in y-integral units (before prefactors).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraSum {
    /// Σ′ over all terms (static term halved).
    pub total: f64,
    /// The halved static term alone.
    pub zero_mode: f64,
    pub error: f64,
    pub l_used: usize,
    pub converged: bool,
}

/// Evaluates Σ′_l ∫ y² Σ_σ(...) dy at temperature `temperature`.
pub fn matsubara_sum(
    a: f64,
    temperature: f64,
    b1: &Boundary,
    b2: &Boundary,
    policy: &SummationPolicy,
    tm_only: bool,
) -> Result<MatsubaraSum> {
    policy.validate()?;
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidInput("temperature must be positive"));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidInput("separation must be positive"));
    }
    let (t0, e0) = level_integral(a, 0.0, Some(temperature), b1, b2, policy, 1e-300, tm_only)?;
    let zero_mode = 0.5 * t0;
    let mut total = zero_mode;
    let mut error = 0.5 * e0;
    let mut recent: [f64; 3] = [f64::NAN; 3];
    for l in 1..=policy.l_max_cap {
        let xi = matsubara_energy(l, temperature);
        let abs_tol = 1e-3 * policy.rel_tol * total.abs().max(1e-300);
        let (t, e) = level_integral(a, xi, Some(temperature), b1, b2, policy, abs_tol, tm_only)?;
        total += t;
        error += e;
        recent = [recent[1], recent[2], t.abs()];
        if l >= 3 {
            let rho = (recent[2] / recent[1]).max(recent[1] / recent[0]);
            let tail = if rho < 1.0 { recent[2] * rho / (1.0 - rho) } else { f64::INFINITY };
            if recent[2] == 0.0 || tail <= policy.rel_tol * total.abs() {
                return Ok(MatsubaraSum {
                    total,
                    zero_mode,
                    error: error + if tail.is_finite() { tail } else { 0.0 },
                    l_used: l,
                    converged: true,
                });
            }
        }
    }
    Ok(MatsubaraSum {
        total,
        zero_mode,
        error,
        l_used: policy.l_max_cap,
        converged: false,
    })
}

/// ∫₀^∞ dE ∫ y² Σ_σ(...) dy over photon energies E = ħξ (eV), using the
/// zero-temperature tensor for graphene boundaries.
pub fn frequency_integral(a: f64, b1: &Boundary, b2: &Boundary, policy: &SummationPolicy, tm_only: bool) -> Result<(f64, f64)> {
    policy.validate()?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidInput("separation must be positive"));
    }
    // Beyond y = 2aE/ħc ≈ 100 the integrand is below e^{-100}.
    let e_max = (100.0 * HBAR_C / (2.0 * a)).min(1e3);
    let mut edges: Vec<f64> = alloc::vec![0.0];
    let mut e = 1e-5;
    while e < e_max {
        edges.push(e);
        e *= 10.0;
    }
    edges.push(e_max);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let integrand = |energy: f64| -> [f64; 1] {
        if failure.get().is_some() {
            return [0.0];
        }
        match level_integral(a, energy, None, b1, b2, policy, 1e-300, tm_only) {
            Ok((v, _)) => [v],
            Err(err) => {
                failure.set(Some(err));
                [0.0]
            }
        }
    };
    let tol = Tolerance::new(1e-300, policy.rel_tol.max(10.0 * policy.quadrature_tol));
    let est = integrate_panels(integrand, &edges, &tol)?;
    if let Some(err) = failure.take() {
        return Err(err);
    }
    Ok((est.value[0], est.error[0]))
}

/// Sphere–plate gradient at temperature T (K).
pub fn gradient_finite_t(
    geom: &SystemGeometry,
    plate: &Boundary,
    sphere: &Boundary,
    temperature: f64,
    policy: &SummationPolicy,
) -> Result<GradientResult> {
    let a = geom.separation;
    let s = matsubara_sum(a, temperature, sphere, plate, policy, false)?;
    let pref = 2.0 * thermal_energy(temperature) * geom.sphere_radius / (8.0 * a * a * a) * EV_PER_NM2_IN_UN_PER_M;
    Ok(GradientResult {
        value: pref * s.total,
        achieved_error: pref * s.error,
        l_used: s.l_used,
        converged: s.converged,
    })
}

/// Sphere–plate gradient at T = 0 from the frequency integral.
pub fn gradient_zero_t(geom: &SystemGeometry, plate: &Boundary, sphere: &Boundary, policy: &SummationPolicy) -> Result<GradientResult> {
    let a = geom.separation;
    let (v, err) = frequency_integral(a, sphere, plate, policy, false)?;
    let pref = geom.sphere_radius / (core::f64::consts::PI * 8.0 * a * a * a) * EV_PER_NM2_IN_UN_PER_M;
    Ok(GradientResult {
        value: pref * v,
        achieved_error: pref * err,
        l_used: 0,
        converged: true,
    })
}

/// Absolute (μN/m) and relative thermal correction F′(a,T) − F′(a,0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalCorrection {
    pub finite_t: f64,
    pub zero_t: f64,
    pub absolute: f64,
    pub relative: f64,
}

impl ThermalCorrection {
    fn from_pair(finite_t: f64, zero_t: f64) -> Self {
        ThermalCorrection {
            finite_t,
            zero_t,
            absolute: finite_t - zero_t,
            relative: (finite_t - zero_t) / zero_t,
        }
    }
}

fn check_converged(r: GradientResult) -> Result<GradientResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::MatsubaraCap {
            l_used: r.l_used,
            partial: r.value,
            tail: f64::NAN,
        })
    }
}

/// Thermal correction with the tensor form selected by `policy.tensor`.
pub fn thermal_correction(
    geom: &SystemGeometry,
    plate: &Boundary,
    sphere: &Boundary,
    temperature: f64,
    policy: &SummationPolicy,
) -> Result<ThermalCorrection> {
    let ft = check_converged(gradient_finite_t(geom, plate, sphere, temperature, policy)?)?;
    let f0 = gradient_zero_t(geom, plate, sphere, policy)?;
    Ok(ThermalCorrection::from_pair(ft.value, f0.value))
}

/// Relative thermal correction keeping only the implicit temperature
/// dependence (zero-temperature tensor inside the Matsubara sum).
pub fn thermal_correction_implicit(
    geom: &SystemGeometry,
    plate: &Boundary,
    sphere: &Boundary,
    temperature: f64,
    policy: &SummationPolicy,
) -> Result<ThermalCorrection> {
    thermal_correction(geom, plate, sphere, temperature, &policy.with_tensor(TensorModel::ZeroTemperature))
}

/// Plate–plate pressure (Pa, positive = attractive) and its static part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlatePressure {
    pub total: f64,
    pub zero_mode: f64,
    pub converged: bool,
}

impl PlatePressure {
    pub fn zero_mode_fraction(&self) -> f64 {
        self.zero_mode / self.total
    }
}

/// Pressure between two plates at separation `a` (nm). With `tm_only` only
/// the transverse magnetic polarization contributes.
pub fn pressure_plate_plate(
    b1: &Boundary,
    b2: &Boundary,
    a: f64,
    temperature: f64,
    policy: &SummationPolicy,
    tm_only: bool,
) -> Result<PlatePressure> {
    let s = matsubara_sum(a, temperature, b1, b2, policy, tm_only)?;
    let pref = thermal_energy(temperature) / (core::f64::consts::PI * 8.0 * a * a * a) * EV_PER_NM3_IN_PA;
    Ok(PlatePressure {
        total: pref * s.total,
        zero_mode: pref * s.zero_mode,
        converged: s.converged,
    })
}

/// Plate–plate pressure at T = 0 (Pa).
pub fn pressure_zero_t(b1: &Boundary, b2: &Boundary, a: f64, policy: &SummationPolicy) -> Result<f64> {
    let (v, _) = frequency_integral(a, b1, b2, policy, false)?;
    Ok(v / (2.0 * core::f64::consts::PI * core::f64::consts::PI * 8.0 * a * a * a) * EV_PER_NM3_IN_PA)
}

/// Separation (μm) from which the static Matsubara term carries at least
/// `fraction` of the plate–plate pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeThreshold {
    pub threshold_um: f64,
    /// Zero-mode fraction on the probe grid as (a [μm], fraction).
    pub probes: Vec<(f64, f64)>,
    /// Whether the fraction increased monotonically over the probe grid.
    pub monotone: bool,
}

const REGIME_MIN_UM: f64 = 0.05;
const REGIME_MAX_UM: f64 = 20.0;

pub fn thermal_regime_threshold(
    b1: &Boundary,
    b2: &Boundary,
    temperature: f64,
    fraction: f64,
    policy: &SummationPolicy,
) -> Result<RegimeThreshold> {
    if !(fraction > 0.5 && fraction < 1.0) {
        return Err(Error::InvalidInput("fraction must lie in (0.5, 1)"));
    }
    let ratio = |a_um: f64| -> Result<f64> {
        let p = pressure_plate_plate(b1, b2, a_um * 1e3, temperature, policy, false)?;
        Ok(p.zero_mode_fraction())
    };
    let n = 41;
    let mut probes = Vec::with_capacity(n);
    let span = (REGIME_MAX_UM / REGIME_MIN_UM).ln();
    for i in 0..n {
        let a = REGIME_MIN_UM * (span * i as f64 / (n - 1) as f64).exp();
        probes.push((a, ratio(a)?));
    }
    let monotone = probes.windows(2).all(|w| w[1].1 >= w[0].1);
    // First probe from which all larger probes satisfy the fraction.
    let mut first = None;
    for i in (0..n).rev() {
        if probes[i].1 >= fraction {
            first = Some(i);
        } else {
            break;
        }
    }
    let idx = match first {
        Some(0) => return Err(Error::NoBracket("fraction already reached at 0.05 μm")),
        Some(i) => i,
        None => return Err(Error::NoBracket("fraction not reached below 20 μm")),
    };
    let (mut lo, mut hi) = (probes[idx - 1].0, probes[idx].0);
    while (hi - lo) / hi > 0.01 {
        let mid = (lo * hi).sqrt();
        if ratio(mid)? >= fraction {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RegimeThreshold {
        threshold_um: hi,
        probes,
        monotone,
    })
}

/// Effective temperatures (K): k_BT_eff = ħc/(2a) and k_BT_eff^gr = ħv_F/(2a).
pub fn effective_temperatures(a: f64, fermi_velocity_ratio: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) {
        return Err(Error::InvalidInput("separation must be positive"));
    }
    let t_eff = HBAR_C / (2.0 * a) / K_B;
    Ok((t_eff, t_eff * fermi_velocity_ratio))
}

/// Au sphere boundary from a permittivity model.
pub fn sphere_of(material: PermittivityModel) -> Boundary {
    Boundary::BareHalfspace(material)
}

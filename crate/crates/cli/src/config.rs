//! Run configuration: a TOML file plus `--set section.key=value` overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use casimir_core::corrections::{RoughnessParams, UncertaintyBudget};
use casimir_core::materials::{Oscillator, PermittivityModel, ZeroModeConvention};
use casimir_core::{Boundary, GrapheneSheet, SummationPolicy, TensorModel};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
    #[serde(default)]
    pub material: BTreeMap<String, MaterialSpec>,
    #[serde(default)]
    pub graphene: GrapheneSpec,
    #[serde(default)]
    pub system: SystemSpec,
    #[serde(default)]
    pub geometry: GeometrySpec,
    #[serde(default)]
    pub uncertainty: UncertaintySpec,
    #[serde(default)]
    pub roughness: RoughnessSpec,
    #[serde(default)]
    pub policy: PolicySpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub thermal: ThermalSpec,
    #[serde(default)]
    pub regime: RegimeSpec,
    #[serde(default)]
    pub calibration: CalibrationSpec,
    #[serde(default)]
    pub synth: SynthSpec,
    /// Directory that relative paths (tables) are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_temperature() -> f64 {
    294.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaterialKind {
    Vacuum,
    Drude,
    Plasma,
    Oscillators,
    Table,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub kind: MaterialKind,
    pub plasma_energy_ev: Option<f64>,
    pub relaxation_energy_ev: Option<f64>,
    /// Rows `[strength, resonance_ev, damping_ev]`.
    pub oscillators: Option<Vec<[f64; 3]>>,
    /// Two-column CSV `xi_ev, eps`.
    pub table_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrapheneSpec {
    pub gap_ev: f64,
    pub mu_ev: f64,
    pub vf_ratio: f64,
}

impl Default for GrapheneSpec {
    fn default() -> Self {
        GrapheneSpec {
            gap_ev: 0.29,
            mu_ev: 0.24,
            vf_ratio: 1.0 / 300.0,
        }
    }
}

/// Boundary strings: `ideal`, `material:<name>`, `graphene`,
/// `graphene-on:<name>`, `pristine`, `pristine-on:<name>`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemSpec {
    pub sphere: String,
    pub plate: String,
}

impl Default for SystemSpec {
    fn default() -> Self {
        SystemSpec {
            sphere: "material:gold".into(),
            plate: "graphene-on:silica".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySpec {
    pub radius_nm: f64,
    pub a_min_nm: f64,
    pub a_max_nm: f64,
    pub a_step_nm: f64,
}

impl Default for GeometrySpec {
    fn default() -> Self {
        GeometrySpec {
            radius_nm: 60_350.0,
            a_min_nm: 250.0,
            a_max_nm: 700.0,
            a_step_nm: 10.0,
        }
    }
}

impl GeometrySpec {
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.a_max_nm - self.a_min_nm) / self.a_step_nm + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.a_min_nm + i as f64 * self.a_step_nm).collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UncertaintySpec {
    pub gap_err_ev: f64,
    pub mu_err_ev: f64,
    pub radius_err_nm: f64,
    pub optical_rel_err: f64,
    pub pfa_lower_factor: bool,
}

impl Default for UncertaintySpec {
    fn default() -> Self {
        let b = UncertaintyBudget::experimental();
        UncertaintySpec {
            gap_err_ev: b.gap_err,
            mu_err_ev: b.mu_err,
            radius_err_nm: b.radius_err,
            optical_rel_err: b.optical_rel_err,
            pfa_lower_factor: b.pfa_lower_factor_enabled,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RoughnessSpec {
    pub delta_sphere_nm: f64,
    pub delta_plate_nm: f64,
}

impl Default for RoughnessSpec {
    fn default() -> Self {
        let r = RoughnessParams::experimental();
        RoughnessSpec {
            delta_sphere_nm: r.delta_sphere,
            delta_plate_nm: r.delta_plate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionSpec {
    Drude,
    Plasma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensorSpec {
    Exact,
    Approximate,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolicySpec {
    pub rel_tol: f64,
    pub l_max_cap: usize,
    pub quadrature_tol: f64,
    pub zero_mode_te_metal: ConventionSpec,
    pub tensor: TensorSpec,
}

impl Default for PolicySpec {
    fn default() -> Self {
        let p = SummationPolicy::default();
        PolicySpec {
            rel_tol: p.rel_tol,
            l_max_cap: p.l_max_cap,
            quadrature_tol: p.quadrature_tol,
            zero_mode_te_metal: ConventionSpec::Drude,
            tensor: TensorSpec::Approximate,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub name: String,
    pub plate: String,
    pub sphere: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThermalSpec {
    pub separations_nm: Vec<f64>,
    pub series: Vec<SeriesSpec>,
}

impl Default for ThermalSpec {
    fn default() -> Self {
        ThermalSpec {
            separations_nm: vec![100.0, 200.0, 300.0, 400.0],
            series: vec![SeriesSpec {
                name: "on-silica".into(),
                plate: "graphene-on:silica".into(),
                sphere: None,
            }],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub name: String,
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegimeSpec {
    pub fractions: Vec<f64>,
    pub pairs: Vec<PairSpec>,
}

impl Default for RegimeSpec {
    fn default() -> Self {
        let pair = |name: &str, first: &str, second: &str| PairSpec {
            name: name.into(),
            first: first.into(),
            second: second.into(),
        };
        RegimeSpec {
            fractions: vec![0.9, 0.95, 0.99],
            pairs: vec![
                pair("silica-gold", "material:silica", "material:gold"),
                pair("coated-silica-gold", "graphene-on:silica", "material:gold"),
                pair("graphene-gold", "graphene", "material:gold"),
                pair("pristine-gold", "pristine", "material:gold"),
                pair("pristine-pristine", "pristine", "pristine"),
            ],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationSpec {
    pub pll_resolution_rad_s: f64,
    pub z0_min_nm: f64,
    pub z0_max_nm: f64,
    pub max_iterations: usize,
    /// Separation error attached to extracted points.
    pub separation_error_nm: f64,
    /// Step of the common grid the sets are resampled onto.
    pub grid_step_nm: f64,
}

impl Default for CalibrationSpec {
    fn default() -> Self {
        CalibrationSpec {
            pll_resolution_rad_s: casimir_core::calibration::PLL_RESOLUTION,
            z0_min_nm: 1.0,
            z0_max_nm: 5000.0,
            max_iterations: 200,
            separation_error_nm: 0.6,
            grid_step_nm: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSet {
    pub v0_v: f64,
    pub z0_nm: f64,
    pub c_s_per_kg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSpec {
    pub seed: u64,
    /// Temperature of the model the synthetic data are drawn from.
    pub temperature_k: f64,
    pub noise_rad_s: f64,
    pub z_step_nm: f64,
    pub sets: Vec<SynthSet>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            seed: 2021,
            temperature_k: 294.0,
            noise_rad_s: casimir_core::calibration::PLL_RESOLUTION,
            z_step_nm: 1.0,
            sets: vec![
                SynthSet {
                    v0_v: 0.1324,
                    z0_nm: 236.9,
                    c_s_per_kg: 4.599e5,
                },
                SynthSet {
                    v0_v: 0.1324,
                    z0_nm: 238.8,
                    c_s_per_kg: 4.593e5,
                },
            ],
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config deserializes")
    }
}

/// Parses the right-hand side of an override as a TOML value, falling back
/// to a bare string.
fn parse_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("bad override key `{path}`")));
    }
    let mut node = table;
    for k in &keys[..keys.len() - 1] {
        let entry = node
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override `{path}`: `{k}` is not a section")))?;
    }
    node.insert(keys[keys.len() - 1].to_string(), parse_value(raw.trim()));
    Ok(())
}

impl RunConfig {
    /// Parses config text and applies overrides in order.
    pub fn from_str_with(text: &str, overrides: &[String], base_dir: &Path) -> Result<Self, CliError> {
        let mut table: toml::Table = text.parse().map_err(|e| CliError::Config(format!("{e}")))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let mut cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
                Self::from_str_with(&text, overrides, &base)
            }
            None => Self::from_str_with("", overrides, Path::new(".")),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        let g = &self.geometry;
        if !(g.radius_nm > 0.0) {
            return bad("geometry.radius_nm must be positive");
        }
        if !(g.a_min_nm > 0.0 && g.a_min_nm < g.a_max_nm) {
            return bad("geometry needs 0 < a_min_nm < a_max_nm");
        }
        if !(g.a_step_nm > 0.0) {
            return bad("geometry.a_step_nm must be positive");
        }
        if !(self.temperature_k >= 0.0 && self.temperature_k.is_finite()) {
            return bad("temperature_k must be non-negative");
        }
        if self.regime.fractions.iter().any(|f| !(*f > 0.5 && *f < 1.0)) {
            return bad("regime.fractions must lie in (0.5, 1)");
        }
        if self.thermal.separations_nm.iter().any(|a| !(*a > 0.0)) {
            return bad("thermal.separations_nm must be positive");
        }
        let c = &self.calibration;
        if !(c.pll_resolution_rad_s > 0.0 && c.grid_step_nm > 0.0 && c.z0_min_nm < c.z0_max_nm) {
            return bad("calibration settings out of range");
        }
        if !(self.synth.z_step_nm > 0.0 && self.synth.noise_rad_s >= 0.0) {
            return bad("synth settings out of range");
        }
        self.policy()?;
        self.budget()?;
        self.roughness()?;
        self.sheet()?;
        self.boundary(&self.system.sphere)?;
        self.boundary(&self.system.plate)?;
        Ok(())
    }

    pub fn policy(&self) -> Result<SummationPolicy, CliError> {
        let p = SummationPolicy {
            rel_tol: self.policy.rel_tol,
            l_max_cap: self.policy.l_max_cap,
            quadrature_tol: self.policy.quadrature_tol,
            zero_mode_te_metal: match self.policy.zero_mode_te_metal {
                ConventionSpec::Drude => ZeroModeConvention::Drude,
                ConventionSpec::Plasma => ZeroModeConvention::Plasma,
            },
            tensor: match self.policy.tensor {
                TensorSpec::Exact => TensorModel::Exact,
                TensorSpec::Approximate => TensorModel::Approximate,
            },
        };
        p.validate().map_err(|e| CliError::Config(format!("policy: {e}")))?;
        Ok(p)
    }

    pub fn budget(&self) -> Result<UncertaintyBudget, CliError> {
        let u = &self.uncertainty;
        let b = UncertaintyBudget {
            gap_err: u.gap_err_ev,
            mu_err: u.mu_err_ev,
            radius_err: u.radius_err_nm,
            optical_rel_err: u.optical_rel_err,
            pfa_lower_factor_enabled: u.pfa_lower_factor,
        };
        b.validate().map_err(|e| CliError::Config(format!("uncertainty: {e}")))?;
        Ok(b)
    }

    pub fn roughness(&self) -> Result<RoughnessParams, CliError> {
        RoughnessParams::new(self.roughness.delta_sphere_nm, self.roughness.delta_plate_nm)
            .map_err(|e| CliError::Config(format!("roughness: {e}")))
    }

    pub fn sheet(&self) -> Result<GrapheneSheet, CliError> {
        let g = &self.graphene;
        GrapheneSheet::with_fermi_velocity(g.gap_ev, g.mu_ev, g.vf_ratio).map_err(|e| CliError::Config(format!("graphene: {e}")))
    }

    fn pristine_sheet(&self) -> Result<GrapheneSheet, CliError> {
        GrapheneSheet::with_fermi_velocity(0.0, 0.0, self.graphene.vf_ratio).map_err(|e| CliError::Config(format!("graphene: {e}")))
    }

    /// Material by name; `gold`, `gold-plasma`, `silica` and `vacuum` are
    /// built in unless redefined.
    pub fn material(&self, name: &str) -> Result<PermittivityModel, CliError> {
        if let Some(spec) = self.material.get(name) {
            return self.build_material(name, spec);
        }
        match name {
            "gold" => Ok(PermittivityModel::gold_drude()),
            "gold-plasma" => Ok(PermittivityModel::gold_plasma()),
            "silica" => Ok(PermittivityModel::silica()),
            "vacuum" => Ok(PermittivityModel::Vacuum),
            _ => Err(CliError::Config(format!("unknown material `{name}`"))),
        }
    }

    fn build_material(&self, name: &str, spec: &MaterialSpec) -> Result<PermittivityModel, CliError> {
        let err = |m: String| CliError::Config(format!("material.{name}: {m}"));
        let need = |v: Option<f64>, key: &str| v.ok_or_else(|| err(format!("`{key}` is required")));
        let model = match spec.kind {
            MaterialKind::Vacuum => Ok(PermittivityModel::Vacuum),
            MaterialKind::Drude => PermittivityModel::drude(
                need(spec.plasma_energy_ev, "plasma_energy_ev")?,
                need(spec.relaxation_energy_ev, "relaxation_energy_ev")?,
            ),
            MaterialKind::Plasma => PermittivityModel::plasma(need(spec.plasma_energy_ev, "plasma_energy_ev")?),
            MaterialKind::Oscillators => {
                let rows = spec.oscillators.as_ref().ok_or_else(|| err("`oscillators` is required".into()))?;
                PermittivityModel::oscillators(rows.iter().map(|r| Oscillator::new(r[0], r[1], r[2])).collect())
            }
            MaterialKind::Table => {
                let file = spec.table_file.as_ref().ok_or_else(|| err("`table_file` is required".into()))?;
                let path = self.base_dir.join(file);
                let table = crate::io::read_permittivity_table(&path)?;
                PermittivityModel::tabulated(table)
            }
        };
        model.map_err(|e| err(e.to_string()))
    }

    /// Resolves a boundary string.
    pub fn boundary(&self, spec: &str) -> Result<Boundary, CliError> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let substrate = |arg: Option<&str>| -> Result<PermittivityModel, CliError> {
            self.material(arg.ok_or_else(|| CliError::Config(format!("`{spec}` needs a material name")))?)
        };
        match head {
            "ideal" => Ok(Boundary::IdealReflector),
            "material" => Ok(Boundary::BareHalfspace(substrate(arg)?)),
            "graphene" => Ok(Boundary::FreestandingGraphene(self.sheet()?)),
            "pristine" => Ok(Boundary::FreestandingGraphene(self.pristine_sheet()?)),
            "graphene-on" => Ok(Boundary::GrapheneCoatedHalfspace {
                substrate: substrate(arg)?,
                sheet: self.sheet()?,
            }),
            "pristine-on" => Ok(Boundary::GrapheneCoatedHalfspace {
                substrate: substrate(arg)?,
                sheet: self.pristine_sheet()?,
            }),
            _ => Err(CliError::Config(format!("unknown boundary `{spec}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.geometry.grid().len(), 46);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        let r = RunConfig::from_str_with("[geometry]\nradius = 3\n", &[], Path::new("."));
        assert!(matches!(r, Err(CliError::Config(_))));
        let r = RunConfig::from_str_with("colour = 1\n", &[], Path::new("."));
        assert!(matches!(r, Err(CliError::Config(_))));
    }

    #[test]
    fn overrides_apply() {
        let cfg = RunConfig::from_str_with(
            "temperature_k = 300\n",
            &["geometry.a_min_nm=300".into(), "temperature_k=0".into(), "system.plate=graphene".into()],
            Path::new("."),
        )
        .unwrap();
        assert_eq!(cfg.geometry.a_min_nm, 300.0);
        assert_eq!(cfg.temperature_k, 0.0);
        assert_eq!(cfg.system.plate, "graphene");
    }

    #[test]
    fn bad_ranges_rejected() {
        let r = RunConfig::from_str_with("", &["geometry.a_min_nm=800".into()], Path::new("."));
        assert!(matches!(r, Err(CliError::Config(_))));
        let r = RunConfig::from_str_with("", &["system.plate=material:unobtainium".into()], Path::new("."));
        assert!(matches!(r, Err(CliError::Config(_))));
    }

    #[test]
    fn custom_material() {
        let cfg = RunConfig::from_str_with(
            "[material.glass]\nkind = \"oscillators\"\noscillators = [[1.5, 10.0, 0.0]]\n[system]\nplate = \"graphene-on:glass\"\n",
            &[],
            Path::new("."),
        )
        .unwrap();
        let b = cfg.boundary(&cfg.system.plate).unwrap();
        assert!(matches!(b, Boundary::GrapheneCoatedHalfspace { .. }));
    }
}

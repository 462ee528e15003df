//! Command implementations. Each `*_rows` function is pure and returns the
//! table it computes; the `cmd_*` wrappers write files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use casimir_core::analysis::{self, MeasurementPoint, MeasurementSeries, TheoryTable};
use casimir_core::calibration::{
    self, average_sets, extract_casimir, fit_calibration, resample, ExtractedPoint, FitOptions, ShiftRecord,
};
use casimir_core::corrections::{build_band, RoughnessParams, UncertaintyBudget};
use casimir_core::lifshitz::{effective_temperatures, thermal_correction, thermal_correction_implicit, thermal_regime_threshold};
use casimir_core::{Boundary, SystemGeometry};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::io::{
    self, CalibrationDoc, GradientRow, MeasurementRow, RegimeRow, ReportDoc, ReportRow, SetCalibration, ShiftRow,
    ThermalRow, SCHEMA_VERSION,
};

/// Which plate/sphere pair `gradient` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientMode {
    #[default]
    Configured,
    /// Configured sheet suspended in vacuum.
    Freestanding,
    /// Unit reflection on both bodies, no corrections.
    IdealMetal,
}

/// Runs `f` on a pool with `threads` workers (all cores when `None`).
pub fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        b = b.num_threads(n);
    }
    let pool = b.build().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(pool.install(f))
}

fn at(a: f64) -> String {
    format!("a = {a} nm")
}

fn geometry(cfg: &RunConfig, a: f64) -> Result<SystemGeometry, CliError> {
    SystemGeometry::new(cfg.geometry.radius_nm, a).map_err(|e| CliError::from_core(e, &at(a)))
}

struct Setup {
    plate: Boundary,
    sphere: Boundary,
    budget: UncertaintyBudget,
    rough: RoughnessParams,
}

fn setup(cfg: &RunConfig, mode: GradientMode) -> Result<Setup, CliError> {
    let sphere = cfg.boundary(&cfg.system.sphere)?;
    match mode {
        GradientMode::Configured => Ok(Setup {
            plate: cfg.boundary(&cfg.system.plate)?,
            sphere,
            budget: cfg.budget()?,
            rough: cfg.roughness()?,
        }),
        GradientMode::Freestanding => Ok(Setup {
            plate: cfg.boundary("graphene")?,
            sphere,
            budget: cfg.budget()?,
            rough: cfg.roughness()?,
        }),
        GradientMode::IdealMetal => Ok(Setup {
            plate: Boundary::IdealReflector,
            sphere: Boundary::IdealReflector,
            budget: UncertaintyBudget::ZERO,
            rough: RoughnessParams::default(),
        }),
    }
}

/// Gradient table over the configured separations (μN/m). Values are
/// roughness-corrected; bands follow the uncertainty budget.
pub fn gradient_rows(cfg: &RunConfig, mode: GradientMode) -> Result<Vec<GradientRow>, CliError> {
    let s = setup(cfg, mode)?;
    let policy = cfg.policy()?;
    let t = cfg.temperature_k;
    cfg.geometry
        .grid()
        .par_iter()
        .map(|&a| {
            let geom = geometry(cfg, a)?;
            let band = |temp: f64| {
                build_band(&geom, &s.plate, &s.sphere, &s.budget, &s.rough, temp, &policy).map_err(|e| CliError::from_core(e, &at(a)))
            };
            let bt = band(t)?;
            let b0 = if t > 0.0 { band(0.0)? } else { bt };
            Ok(GradientRow {
                a_nm: a,
                fprime_t: bt.center,
                fprime_0: b0.center,
                band_t_lo: bt.lower,
                band_t_hi: bt.upper,
                band_0_lo: b0.lower,
                band_0_hi: b0.upper,
            })
        })
        .collect()
}

/// Relative thermal corrections (full and implicit) for every configured
/// series and separation.
pub fn thermal_rows(cfg: &RunConfig) -> Result<Vec<ThermalRow>, CliError> {
    let policy = cfg.policy()?;
    let t = cfg.temperature_k;
    if !(t > 0.0) {
        return Err(CliError::Config("thermal corrections need temperature_k > 0".into()));
    }
    let mut jobs = Vec::new();
    for s in &cfg.thermal.series {
        let plate = cfg.boundary(&s.plate)?;
        let sphere = cfg.boundary(s.sphere.as_deref().unwrap_or(&cfg.system.sphere))?;
        for &a in &cfg.thermal.separations_nm {
            jobs.push((s.name.clone(), plate.clone(), sphere.clone(), a));
        }
    }
    jobs.par_iter()
        .map(|(name, plate, sphere, a)| {
            let geom = geometry(cfg, *a)?;
            let ctx = || format!("series {name}, {}", at(*a));
            let full = thermal_correction(&geom, plate, sphere, t, &policy).map_err(|e| CliError::from_core(e, &ctx()))?;
            let imp = thermal_correction_implicit(&geom, plate, sphere, t, &policy).map_err(|e| CliError::from_core(e, &ctx()))?;
            Ok(ThermalRow {
                series: name.clone(),
                a_nm: *a,
                fprime_t: full.finite_t,
                fprime_0: full.zero_t,
                delta_abs: full.absolute,
                delta_rel_pct: 100.0 * full.relative,
                delta_implicit_pct: 100.0 * imp.relative,
            })
        })
        .collect()
}

/// Separations beyond which the static Matsubara term carries the given
/// fractions of the plate–plate pressure.
pub fn regime_rows(cfg: &RunConfig) -> Result<Vec<RegimeRow>, CliError> {
    let policy = cfg.policy()?;
    let t = cfg.temperature_k;
    if !(t > 0.0) {
        return Err(CliError::Config("the regime threshold needs temperature_k > 0".into()));
    }
    let mut jobs = Vec::new();
    for p in &cfg.regime.pairs {
        let b1 = cfg.boundary(&p.first)?;
        let b2 = cfg.boundary(&p.second)?;
        for &f in &cfg.regime.fractions {
            jobs.push((p.name.clone(), b1.clone(), b2.clone(), f));
        }
    }
    jobs.par_iter()
        .map(|(name, b1, b2, f)| {
            let ctx = format!("pair {name}, fraction {f}");
            let r = thermal_regime_threshold(b1, b2, t, *f, &policy).map_err(|e| CliError::from_core(e, &ctx))?;
            let (t_eff, _) =
                effective_temperatures(r.threshold_um * 1e3, cfg.graphene.vf_ratio).map_err(|e| CliError::from_core(e, &ctx))?;
            Ok(RegimeRow {
                pair: name.clone(),
                fraction: *f,
                threshold_um: r.threshold_um,
                t_eff_k: t_eff,
                monotone: r.monotone,
            })
        })
        .collect()
}

/// Theory bands at `temperature` on the configured step, covering
/// `[lo, hi]`.
pub fn theory_table(cfg: &RunConfig, temperature: f64, lo: f64, hi: f64, with_budget: bool) -> Result<TheoryTable, CliError> {
    let s = setup(cfg, GradientMode::Configured)?;
    let budget = if with_budget { s.budget } else { UncertaintyBudget::ZERO };
    let policy = cfg.policy()?;
    let step = cfg.geometry.a_step_nm;
    // Nodes sit on the configured grid a_min + i·step, extended to cover [lo, hi].
    let a_min = cfg.geometry.a_min_nm;
    let mut start = a_min - ((a_min - lo) / step).ceil() * step;
    while start <= 0.0 {
        start += step;
    }
    let n = ((hi - start) / step).ceil().max(1.0) as usize + 1;
    let nodes: Result<Vec<_>, CliError> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = start + i as f64 * step;
            let geom = geometry(cfg, a)?;
            let band = build_band(&geom, &s.plate, &s.sphere, &budget, &s.rough, temperature, &policy)
                .map_err(|e| CliError::from_core(e, &at(a)))?;
            Ok((a, band))
        })
        .collect();
    TheoryTable::new(nodes?).map_err(|e| CliError::from_core(e, "theory table"))
}

/// Synthetic frequency shifts for the configured calibration sets, drawn
/// from the roughness-corrected model at `synth.temperature_k`.
pub fn synth_shift_rows(cfg: &RunConfig) -> Result<Vec<ShiftRow>, CliError> {
    let sy = &cfg.synth;
    let g = &cfg.geometry;
    let lo = (g.a_min_nm - g.a_step_nm).max(0.5 * g.a_min_nm);
    let truth = theory_table(cfg, sy.temperature_k, lo, g.a_max_nm + g.a_step_nm, false)?;
    let noise = Normal::new(0.0, sy.noise_rad_s).map_err(|e| CliError::Config(format!("synth.noise_rad_s: {e}")))?;
    let voltages = calibration::standard_voltages();
    let mut rows = Vec::new();
    for (k, set) in sy.sets.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(sy.seed.wrapping_add(k as u64));
        let step = sy.z_step_nm;
        let z_lo = ((g.a_min_nm - set.z0_nm) / step).floor();
        let z_hi = ((g.a_max_nm - set.z0_nm) / step).ceil();
        let mut i = z_lo;
        while i <= z_hi {
            let z = i * step;
            let a = z + set.z0_nm;
            let fprime = truth.band_at(a).map_err(|e| CliError::from_core(e, &at(a)))?.center;
            for (run, &v) in voltages.iter().enumerate() {
                let clean = calibration::frequency_shift_forward(a, g.radius_nm, v, set.v0_v, set.c_s_per_kg, fprime)
                    .map_err(|e| CliError::from_core(e, &at(a)))?;
                let dw = if sy.noise_rad_s > 0.0 { clean + noise.sample(&mut rng) } else { clean };
                rows.push(ShiftRow {
                    z_piezo_nm: z,
                    voltage_v: v,
                    delta_omega_rad_s: dw,
                    set_id: k as u32 + 1,
                    run_id: run as u32,
                });
            }
            i += 1.0;
        }
    }
    Ok(rows)
}

/// Fits each set, extracts gradients, and averages the sets on a common
/// separation grid.
pub fn calibrate_rows(cfg: &RunConfig, shifts: &[ShiftRow]) -> Result<(CalibrationDoc, Vec<MeasurementRow>), CliError> {
    let mut by_set: BTreeMap<u32, Vec<ShiftRecord>> = BTreeMap::new();
    for r in shifts {
        by_set
            .entry(r.set_id)
            .or_default()
            .push(ShiftRecord::new(r.z_piezo_nm, r.voltage_v, r.delta_omega_rad_s));
    }
    if by_set.is_empty() {
        return Err(CliError::Config("no frequency-shift records".into()));
    }
    let c = &cfg.calibration;
    let opts = FitOptions {
        sphere_radius: cfg.geometry.radius_nm,
        pll_resolution: c.pll_resolution_rad_s,
        max_iterations: c.max_iterations,
        z0_range: (c.z0_min_nm, c.z0_max_nm),
    };
    let sets: Vec<(u32, Vec<ShiftRecord>)> = by_set.into_iter().collect();
    let fitted: Vec<(SetCalibration, Vec<ExtractedPoint>)> = sets
        .par_iter()
        .map(|(id, recs)| {
            let ctx = format!("set {id}");
            let fit = fit_calibration(recs, &opts).map_err(|e| CliError::from_core(e, &ctx))?;
            let pts = extract_casimir(recs, &fit, opts.sphere_radius, opts.pll_resolution).map_err(|e| CliError::from_core(e, &ctx))?;
            let cal = SetCalibration {
                set_id: *id,
                v0_v: fit.v0,
                v0_err_v: fit.v0_err,
                z0_nm: fit.z0,
                z0_err_nm: fit.z0_err,
                c_s_per_kg: fit.cal_const,
                c_err: fit.cal_const_err,
                line_d_v: fit.line_d,
                line_theta_v_per_nm: fit.line_theta,
                chi2: fit.chi2,
                dof: fit.dof,
            };
            Ok((cal, pts))
        })
        .collect::<Result<_, CliError>>()?;

    let lo = fitted.iter().map(|(_, p)| p.first().map_or(f64::INFINITY, |x| x.a)).fold(f64::NEG_INFINITY, f64::max);
    let hi = fitted.iter().map(|(_, p)| p.last().map_or(f64::NEG_INFINITY, |x| x.a)).fold(f64::INFINITY, f64::min);
    let step = c.grid_step_nm;
    let (first, last) = ((lo / step).ceil() as i64, (hi / step).floor() as i64);
    if first > last {
        return Err(CliError::Config("calibration sets do not overlap in separation".into()));
    }
    let grid: Vec<f64> = (first..=last).map(|i| i as f64 * step).collect();
    let resampled: Vec<Vec<ExtractedPoint>> = fitted.iter().map(|(_, p)| resample(p, &grid)).collect();
    let mean = average_sets(&resampled).map_err(|e| CliError::from_core(e, "averaging sets"))?;
    let rows = mean
        .iter()
        .map(|p| MeasurementRow {
            a_nm: p.a,
            gradient_un_per_m: p.gradient,
            err_gradient_un_per_m: p.total_err,
            err_a_nm: c.separation_error_nm,
        })
        .collect();
    let doc = CalibrationDoc {
        schema_version: SCHEMA_VERSION,
        sets: fitted.into_iter().map(|(c, _)| c).collect(),
    };
    Ok((doc, rows))
}

/// Compares measurements with the configured theory at `temperature_k`.
pub fn compare_doc(cfg: &RunConfig, rows: &[MeasurementRow]) -> Result<ReportDoc, CliError> {
    let pts: Vec<MeasurementPoint> = rows
        .iter()
        .map(|r| MeasurementPoint {
            a: r.a_nm,
            gradient: r.gradient_un_per_m,
            err_gradient: r.err_gradient_un_per_m,
            err_a: r.err_a_nm,
        })
        .collect();
    let series = MeasurementSeries::new(pts).map_err(|e| CliError::from_core(e, "measurements"))?;
    let (lo, hi) = series
        .points()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.a), h.max(p.a)));
    let theory = theory_table(cfg, cfg.temperature_k, lo, hi, true)?;
    let report = analysis::compare(&series, &theory).map_err(|e| CliError::from_core(e, "comparison"))?;
    let correction = if cfg.temperature_k == 0.0 {
        analysis::data_thermal_correction(&series, &theory, &report)
            .map_err(|e| CliError::from_core(e, "data thermal correction"))?
            .into_iter()
            .map(|(a, v)| [a, v])
            .collect()
    } else {
        Vec::new()
    };
    Ok(ReportDoc {
        schema_version: SCHEMA_VERSION,
        temperature_k: cfg.temperature_k,
        differences: report
            .differences
            .iter()
            .map(|d| ReportRow {
                a_nm: d.a,
                diff_un_per_m: d.diff,
                band_halfwidth_un_per_m: d.band_halfwidth,
                outside: d.outside(),
            })
            .collect(),
        excluded_intervals: report.excluded_intervals.iter().map(|&(a, b)| [a, b]).collect(),
        data_thermal_correction: correction,
    })
}

fn out_dir(cfg: &RunConfig, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let dir = match out {
        Some(p) => p.to_path_buf(),
        None if cfg.output.dir.is_absolute() => cfg.output.dir.clone(),
        None => cfg.base_dir.join(&cfg.output.dir),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

pub fn cmd_gradient(cfg: &RunConfig, mode: GradientMode, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let rows = gradient_rows(cfg, mode)?;
    let path = out_dir(cfg, out)?.join("gradient.csv");
    io::write_csv(&path, &rows)?;
    Ok(path)
}

pub fn cmd_thermal(cfg: &RunConfig, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let rows = thermal_rows(cfg)?;
    let path = out_dir(cfg, out)?.join("thermal.csv");
    io::write_csv(&path, &rows)?;
    Ok(path)
}

pub fn cmd_regime(cfg: &RunConfig, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let rows = regime_rows(cfg)?;
    let path = out_dir(cfg, out)?.join("regime.csv");
    io::write_csv(&path, &rows)?;
    Ok(path)
}

pub fn cmd_synth(cfg: &RunConfig, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let rows = synth_shift_rows(cfg)?;
    let path = out_dir(cfg, out)?.join("shifts.csv");
    io::write_csv(&path, &rows)?;
    Ok(path)
}

pub fn cmd_calibrate(cfg: &RunConfig, shifts: &Path, out: Option<&Path>) -> Result<(PathBuf, PathBuf), CliError> {
    let rows: Vec<ShiftRow> = io::read_csv(shifts)?;
    let (doc, meas) = calibrate_rows(cfg, &rows)?;
    let dir = out_dir(cfg, out)?;
    let (cal, m) = (dir.join("calibration.json"), dir.join("measurements.csv"));
    io::write_json(&cal, &doc)?;
    io::write_csv(&m, &meas)?;
    Ok((cal, m))
}

pub fn cmd_compare(cfg: &RunConfig, measurements: &Path, out: Option<&Path>) -> Result<(PathBuf, PathBuf), CliError> {
    let rows: Vec<MeasurementRow> = io::read_csv(measurements)?;
    let doc = compare_doc(cfg, &rows)?;
    let dir = out_dir(cfg, out)?;
    let (csv, json) = (dir.join("report.csv"), dir.join("report.json"));
    io::write_csv(&csv, &doc.differences)?;
    io::write_json(&json, &doc)?;
    Ok((csv, json))
}

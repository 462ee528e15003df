//! File formats. Every CSV has a header row; JSON documents carry
//! `schema_version`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientRow {
    pub a_nm: f64,
    #[serde(rename = "fprime_T")]
    pub fprime_t: f64,
    pub fprime_0: f64,
    #[serde(rename = "band_T_lo")]
    pub band_t_lo: f64,
    #[serde(rename = "band_T_hi")]
    pub band_t_hi: f64,
    pub band_0_lo: f64,
    pub band_0_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalRow {
    pub series: String,
    pub a_nm: f64,
    pub fprime_t: f64,
    pub fprime_0: f64,
    pub delta_abs: f64,
    /// Percent.
    pub delta_rel_pct: f64,
    /// Percent, zero-temperature tensor inside the Matsubara sum.
    pub delta_implicit_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeRow {
    pub pair: String,
    pub fraction: f64,
    pub threshold_um: f64,
    pub t_eff_k: f64,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftRow {
    pub z_piezo_nm: f64,
    pub voltage_v: f64,
    pub delta_omega_rad_s: f64,
    pub set_id: u32,
    pub run_id: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRow {
    pub a_nm: f64,
    pub gradient_un_per_m: f64,
    pub err_gradient_un_per_m: f64,
    pub err_a_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub a_nm: f64,
    pub diff_un_per_m: f64,
    pub band_halfwidth_un_per_m: f64,
    pub outside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetCalibration {
    pub set_id: u32,
    pub v0_v: f64,
    pub v0_err_v: f64,
    pub z0_nm: f64,
    pub z0_err_nm: f64,
    pub c_s_per_kg: f64,
    pub c_err: f64,
    pub line_d_v: f64,
    pub line_theta_v_per_nm: f64,
    pub chi2: f64,
    pub dof: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationDoc {
    pub schema_version: u32,
    pub sets: Vec<SetCalibration>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    pub temperature_k: f64,
    pub differences: Vec<ReportRow>,
    /// `[start, end]` pairs in nm.
    pub excluded_intervals: Vec<[f64; 2]>,
    /// `[a_nm, gradient_un_per_m]`, only present for a zero-temperature theory.
    pub data_thermal_correction: Vec<[f64; 2]>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| io_err(path, e))).collect()
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut f = File::create(path).map_err(|e| io_err(path, e))?;
    serde_json::to_writer_pretty(&mut f, doc).map_err(|e| io_err(path, e))?;
    f.write_all(b"\n").map_err(|e| io_err(path, e))?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, e))
}

#[derive(Deserialize)]
struct TableRow {
    xi_ev: f64,
    eps: f64,
}

/// Reads a `xi_ev, eps` permittivity table.
pub fn read_permittivity_table(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    Ok(read_csv::<TableRow>(path)?.into_iter().map(|r| (r.xi_ev, r.eps)).collect())
}

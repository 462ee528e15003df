use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use casimir::io::{read_csv, read_json, CalibrationDoc, GradientRow, MeasurementRow, ReportDoc, ShiftRow, SCHEMA_VERSION};

const COARSE: &[&str] = &["--set", "geometry.a_step_nm=150", "--set", "synth.z_step_nm=10", "--set", "calibration.grid_step_nm=10"];

fn casimir(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .arg("--out")
        .arg(out)
        .args(COARSE)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn gradient_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = casimir(dir.path(), &["gradient"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("gradient.csv")).unwrap();
    assert!(text.starts_with("a_nm,fprime_T,fprime_0,band_T_lo,band_T_hi,band_0_lo,band_0_hi\n"));
    let rows: Vec<GradientRow> = read_csv(&dir.path().join("gradient.csv")).unwrap();
    let a: Vec<f64> = rows.iter().map(|r| r.a_nm).collect();
    assert_eq!(a, [250.0, 400.0, 550.0, 700.0]);
    for r in &rows {
        assert!(r.band_t_lo <= r.fprime_t && r.fprime_t <= r.band_t_hi);
        assert!(r.fprime_t >= r.fprime_0);
    }
}

#[test]
fn freestanding_sheet_attracts_less_than_coated_plate() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(code(&casimir(d1.path(), &["gradient"])), 0);
    assert_eq!(code(&casimir(d2.path(), &["gradient", "--freestanding"])), 0);
    let coated: Vec<GradientRow> = read_csv(&d1.path().join("gradient.csv")).unwrap();
    let free: Vec<GradientRow> = read_csv(&d2.path().join("gradient.csv")).unwrap();
    for (c, f) in coated.iter().zip(&free) {
        assert!(f.fprime_t < c.fprime_t);
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let (d1, d4) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(code(&casimir(d1.path(), &["gradient", "--ideal-metal", "--threads", "1"])), 0);
    assert_eq!(code(&casimir(d4.path(), &["gradient", "--ideal-metal", "--threads", "4"])), 0);
    let a = fs::read(d1.path().join("gradient.csv")).unwrap();
    let b = fs::read(d4.path().join("gradient.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["gradient", "--set", "geometry.nonsense=1", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&bad_key), 2);
    let inverted = casimir(dir.path(), &["gradient", "--set", "geometry.a_min_nm=800"]);
    assert_eq!(code(&inverted), 2);
    let conf = dir.path().join("bad.toml");
    fs::write(&conf, "temperature_k = -4.0\n").unwrap();
    let negative = casimir(dir.path(), &["regime", "--config", conf.to_str().unwrap()]);
    assert_eq!(code(&negative), 2);
    let usage = casimir(dir.path(), &["gradient", "--freestanding", "--ideal-metal"]);
    assert_eq!(code(&usage), 2);
}

#[test]
fn missing_input_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = casimir(dir.path(), &["calibrate", "does-not-exist.csv"]);
    assert_eq!(code(&o), 4);
    let o = casimir(dir.path(), &["compare", "does-not-exist.csv"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn synth_calibrate_compare_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&casimir(p, &["synth"])), 0);
    let first = fs::read(p.join("shifts.csv")).unwrap();
    assert_eq!(code(&casimir(p, &["synth"])), 0);
    assert_eq!(first, fs::read(p.join("shifts.csv")).unwrap());
    let shifts: Vec<ShiftRow> = read_csv(&p.join("shifts.csv")).unwrap();
    assert!(shifts.iter().any(|r| r.set_id == 1) && shifts.iter().any(|r| r.set_id == 2));

    let shifts_path = p.join("shifts.csv");
    let o = casimir(p, &["calibrate", shifts_path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cal: CalibrationDoc = read_json(&p.join("calibration.json")).unwrap();
    assert_eq!(cal.schema_version, SCHEMA_VERSION);
    assert_eq!(cal.sets.len(), 2);
    for s in &cal.sets {
        assert!(s.z0_err_nm > 0.0 && s.c_err > 0.0 && s.v0_err_v > 0.0);
    }
    assert!((cal.sets[0].z0_nm - 236.9).abs() < 5.0 * cal.sets[0].z0_err_nm.max(0.2));
    let meas: Vec<MeasurementRow> = read_csv(&p.join("measurements.csv")).unwrap();
    assert!(meas.len() > 10);
    assert!(meas.windows(2).all(|w| w[1].a_nm > w[0].a_nm));

    let meas_path = p.join("measurements.csv");
    let o = casimir(p, &["compare", meas_path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: ReportDoc = read_json(&p.join("report.json")).unwrap();
    assert_eq!(report.schema_version, SCHEMA_VERSION);
    assert_eq!(report.differences.len(), meas.len());
    let text = fs::read_to_string(p.join("report.json")).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(text, again);
}

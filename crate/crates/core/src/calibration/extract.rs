use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::electrostatics::electrostatic_gradient_factor;
use super::fit::{CalibrationFit, SeparationGroup};
use super::ShiftRecord;
use crate::error::{Error, Result};

/// Casimir gradient (μN/m) at one separation (nm), averaged over repeats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractedPoint {
    pub a: f64,
    pub gradient: f64,
    /// Standard error of the mean (67% confidence).
    pub random_err: f64,
    /// PLL resolution propagated through 1/C.
    pub systematic_err: f64,
    pub total_err: f64,
    pub repeats: usize,
}

/// Converts frequency shifts into Casimir gradients with
/// F′ = −Δω/C − X′(a,R)(V − V₀)², a = z_piezo + z₀.
pub fn extract_casimir(records: &[ShiftRecord], fit: &CalibrationFit, sphere_radius: f64, pll_resolution: f64) -> Result<Vec<ExtractedPoint>> {
    if !(fit.cal_const > 0.0) {
        return Err(Error::InvalidInput("calibration constant must be positive"));
    }
    let systematic = pll_resolution / fit.cal_const * 1e6;
    SeparationGroup::collect(records)
        .into_iter()
        .map(|g| {
            let a = g.z_piezo + fit.z0;
            let x = electrostatic_gradient_factor(a, sphere_radius)?;
            let values: Vec<f64> = g
                .points
                .iter()
                .map(|&(v, dw)| {
                    let dv = v - fit.v0;
                    (-dw / fit.cal_const - x * dv * dv) * 1e6
                })
                .collect();
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let random = if n > 1 {
                let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
                (var / n as f64).sqrt()
            } else {
                0.0
            };
            Ok(ExtractedPoint {
                a,
                gradient: mean,
                random_err: random,
                systematic_err: systematic,
                total_err: random.hypot(systematic),
                repeats: n,
            })
        })
        .collect()
}

/// Linear interpolation of gradients and errors onto `grid` (nm); grid
/// points outside the data range are dropped.
pub fn resample(points: &[ExtractedPoint], grid: &[f64]) -> Vec<ExtractedPoint> {
    let mut out = Vec::new();
    if points.len() < 2 {
        return out;
    }
    for &a in grid {
        let idx = points.partition_point(|p| p.a < a);
        let (p0, p1) = if idx == 0 {
            if (points[0].a - a).abs() > 1e-9 {
                continue;
            }
            (points[0], points[1])
        } else if idx >= points.len() {
            continue;
        } else {
            (points[idx - 1], points[idx])
        };
        let t = (a - p0.a) / (p1.a - p0.a);
        let lerp = |x: f64, y: f64| x + t * (y - x);
        out.push(ExtractedPoint {
            a,
            gradient: lerp(p0.gradient, p1.gradient),
            random_err: lerp(p0.random_err, p1.random_err),
            systematic_err: lerp(p0.systematic_err, p1.systematic_err),
            total_err: lerp(p0.total_err, p1.total_err),
            repeats: p0.repeats.min(p1.repeats),
        });
    }
    out
}

/// Averages measurement sets sampled at identical separations: mean
/// gradients and mean errors.
pub fn average_sets(sets: &[Vec<ExtractedPoint>]) -> Result<Vec<ExtractedPoint>> {
    let first = sets.first().ok_or(Error::InvalidInput("no measurement sets"))?;
    if sets.iter().any(|s| s.len() != first.len()) {
        return Err(Error::InvalidInput("sets must share their separations"));
    }
    let n = sets.len() as f64;
    (0..first.len())
        .map(|i| {
            let a = first[i].a;
            if sets.iter().any(|s| (s[i].a - a).abs() > 1e-9 * a.abs().max(1.0)) {
                return Err(Error::InvalidInput("sets must share their separations"));
            }
            let avg = |f: fn(&ExtractedPoint) -> f64| sets.iter().map(|s| f(&s[i])).sum::<f64>() / n;
            Ok(ExtractedPoint {
                a,
                gradient: avg(|p| p.gradient),
                random_err: avg(|p| p.random_err),
                systematic_err: avg(|p| p.systematic_err),
                total_err: avg(|p| p.total_err),
                repeats: sets.iter().map(|s| s[i].repeats).sum(),
            })
        })
        .collect()
}

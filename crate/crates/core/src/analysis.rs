//! Comparison of measured gradients with theoretical bands.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::corrections::GradientBand;
use crate::error::{Error, Result};

/// Measured gradient (μN/m) with its error, at separation `a` ± `err_a` (nm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementPoint {
    pub a: f64,
    pub gradient: f64,
    pub err_gradient: f64,
    pub err_a: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSeries {
    points: Vec<MeasurementPoint>,
}

impl MeasurementSeries {
    pub fn new(points: Vec<MeasurementPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty measurement series"));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.a.is_finite() && p.gradient.is_finite() && p.err_gradient > 0.0 && p.err_a >= 0.0) {
                return Err(Error::InvalidInput("measurement needs finite values and positive errors"));
            }
            if i > 0 && p.a <= points[i - 1].a {
                return Err(Error::InvalidInput("separations must increase strictly"));
            }
        }
        Ok(MeasurementSeries { points })
    }

    pub fn points(&self) -> &[MeasurementPoint] {
        &self.points
    }
}

/// Theoretical bands on a separation grid, interpolated in log–log space by
/// monotone cubic Hermite splines.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryTable {
    a: Vec<f64>,
    bands: Vec<GradientBand>,
    // Node slopes d(ln F)/d(ln a) for lower, center, upper.
    slopes: [Vec<f64>; 3],
}

fn component(b: &GradientBand, c: usize) -> f64 {
    match c {
        0 => b.lower,
        1 => b.center,
        _ => b.upper,
    }
}

/// Fritsch–Carlson slopes for monotone Hermite interpolation.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 2 {
        let d = (y[1] - y[0]) / (x[1] - x[0]);
        return alloc::vec![d, d];
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut m = alloc::vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

impl TheoryTable {
    /// `nodes` are (a [nm], band) pairs with strictly increasing a and
    /// positive band values.
    pub fn new(nodes: Vec<(f64, GradientBand)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidInput("theory table needs at least two nodes"));
        }
        for (i, (a, b)) in nodes.iter().enumerate() {
            if !(*a > 0.0 && b.lower > 0.0 && b.lower <= b.upper) {
                return Err(Error::InvalidInput("theory nodes need a > 0 and 0 < lower ≤ upper"));
            }
            if i > 0 && *a <= nodes[i - 1].0 {
                return Err(Error::InvalidInput("theory separations must increase strictly"));
            }
        }
        let a: Vec<f64> = nodes.iter().map(|n| n.0).collect();
        let bands: Vec<GradientBand> = nodes.iter().map(|n| n.1).collect();
        let la: Vec<f64> = a.iter().map(|x| x.ln()).collect();
        let slopes = [0, 1, 2].map(|c| {
            let ly: Vec<f64> = bands.iter().map(|b| component(b, c).ln()).collect();
            pchip_slopes(&la, &ly)
        });
        Ok(TheoryTable { a, bands, slopes })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.a[0], self.a[self.a.len() - 1])
    }

    fn locate(&self, a: f64) -> Result<(usize, f64, f64)> {
        let (lo, hi) = self.range();
        if !(a >= lo && a <= hi) {
            return Err(Error::InvalidInput("separation outside the theory table"));
        }
        let i = self.a.partition_point(|x| *x <= a).clamp(1, self.a.len() - 1) - 1;
        let (x0, x1) = (self.a[i].ln(), self.a[i + 1].ln());
        Ok((i, (a.ln() - x0) / (x1 - x0), x1 - x0))
    }

    /// Value and d(ln F)/d(ln a) of one component.
    fn eval(&self, c: usize, i: usize, t: f64, h: f64) -> (f64, f64) {
        let y0 = component(&self.bands[i], c).ln();
        let y1 = component(&self.bands[i + 1], c).ln();
        let (m0, m1) = (self.slopes[c][i] * h, self.slopes[c][i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let y = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        let dy = ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * m1) / h;
        (y.exp(), dy)
    }

    pub fn band_at(&self, a: f64) -> Result<GradientBand> {
        let (i, t, h) = self.locate(a)?;
        Ok(GradientBand {
            lower: self.eval(0, i, t, h).0,
            center: self.eval(1, i, t, h).0,
            upper: self.eval(2, i, t, h).0,
            center_t: self.bands[i].center_t,
        })
    }

    /// dF′/da of the central curve, μN/m per nm.
    pub fn slope_at(&self, a: f64) -> Result<f64> {
        let (i, t, h) = self.locate(a)?;
        let (f, dlog) = self.eval(1, i, t, h);
        Ok(f * dlog / a)
    }
}

/// Theory-minus-experiment difference at one separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffPoint {
    pub a: f64,
    pub diff: f64,
    pub band_halfwidth: f64,
}

impl DiffPoint {
    /// Half-width combines theory half-band, experimental error and the
    /// separation error |dF′/da|·Δa in quadrature.
    pub fn new(a: f64, theory: f64, theory_half: f64, expt: f64, expt_err: f64, slope: f64, err_a: f64) -> Self {
        let sep = slope.abs() * err_a;
        DiffPoint {
            a,
            diff: theory - expt,
            band_halfwidth: (theory_half * theory_half + expt_err * expt_err + sep * sep).sqrt(),
        }
    }

    pub fn outside(&self) -> bool {
        self.diff.abs() > self.band_halfwidth
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub differences: Vec<DiffPoint>,
    /// Closed intervals [a_lo, a_hi] in nm.
    pub excluded_intervals: Vec<(f64, f64)>,
}

/// Minimum run of consecutive points outside the band that counts as an
/// exclusion.
pub const MIN_EXCLUSION_RUN: usize = 3;

/// Compares a series with a theory table. The theory half-band is the larger
/// distance from the central value to either band edge.
pub fn compare(series: &MeasurementSeries, theory: &TheoryTable) -> Result<ComparisonReport> {
    let differences: Vec<DiffPoint> = series
        .points()
        .iter()
        .map(|p| {
            let band = theory.band_at(p.a)?;
            let half = (band.upper - band.center).max(band.center - band.lower);
            let slope = theory.slope_at(p.a)?;
            Ok(DiffPoint::new(p.a, band.center, half, p.gradient, p.err_gradient, slope, p.err_a))
        })
        .collect::<Result<_>>()?;
    let excluded_intervals = excluded_intervals(&differences, MIN_EXCLUSION_RUN);
    Ok(ComparisonReport {
        differences,
        excluded_intervals,
    })
}

/// Maximal runs of at least `min_run` consecutive points outside the band.
pub fn excluded_intervals(points: &[DiffPoint], min_run: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=points.len() {
        let outside = i < points.len() && points[i].outside();
        match (outside, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if i - s >= min_run.max(1) {
                    out.push((points[s].a, points[i - 1].a));
                }
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Thermal correction read off the data: measured gradient minus the
/// zero-temperature theory, at points inside excluded intervals.
pub fn data_thermal_correction(series: &MeasurementSeries, theory_zero_t: &TheoryTable, report: &ComparisonReport) -> Result<Vec<(f64, f64)>> {
    series
        .points()
        .iter()
        .filter(|p| report.excluded_intervals.iter().any(|(lo, hi)| p.a >= *lo && p.a <= *hi))
        .map(|p| Ok((p.a, p.gradient - theory_zero_t.band_at(p.a)?.center)))
        .collect()
}

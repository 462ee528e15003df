use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::electrostatics::electrostatic_gradient_factor;
use super::linalg::spd_solve;
use super::{ShiftRecord, PLL_RESOLUTION};
use crate::error::{Error, Result};

/// Settings of the calibration fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// nm
    pub sphere_radius: f64,
    /// Per-point standard deviation of Δω, rad/s.
    pub pll_resolution: f64,
    pub max_iterations: usize,
    /// Search range for z₀, nm.
    pub z0_range: (f64, f64),
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            sphere_radius: 60_350.0,
            pll_resolution: PLL_RESOLUTION,
            max_iterations: 200,
            z0_range: (1.0, 5000.0),
        }
    }
}

/// Records sharing one piezo position.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationGroup {
    pub z_piezo: f64,
    /// (applied voltage V, Δω rad/s)
    pub points: Vec<(f64, f64)>,
}

impl SeparationGroup {
    /// Groups records by piezo position, in increasing order of z.
    pub fn collect(records: &[ShiftRecord]) -> Vec<SeparationGroup> {
        let mut sorted: Vec<ShiftRecord> = records.to_vec();
        sorted.sort_by(|a, b| a.z_piezo.total_cmp(&b.z_piezo));
        let mut groups: Vec<SeparationGroup> = Vec::new();
        for r in sorted {
            match groups.last_mut() {
                Some(g) if (g.z_piezo - r.z_piezo).abs() <= 1e-9 * r.z_piezo.abs().max(1.0) => {
                    g.points.push((r.applied_voltage, r.delta_omega))
                }
                _ => groups.push(SeparationGroup {
                    z_piezo: r.z_piezo,
                    points: alloc::vec![(r.applied_voltage, r.delta_omega)],
                }),
            }
        }
        groups
    }
}

/// Parabola Δω = κ(V − V₀)² + c fitted at one separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolaFit {
    pub z_piezo: f64,
    pub vertex: f64,
    pub vertex_err: f64,
    pub curvature: f64,
    pub curvature_err: f64,
    /// Δω at the vertex.
    pub offset: f64,
    pub chi2: f64,
}

/// Least-squares parabola in V with uniform weights 1/σ².
pub fn fit_parabola(z_piezo: f64, points: &[(f64, f64)], sigma: f64) -> Result<ParabolaFit> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidInput("σ must be positive"));
    }
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::RankDeficient("parabola fit needs at least three distinct voltages"));
    }
    let vc = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mut m = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for &(v, y) in points {
        let x = v - vc;
        let row = [1.0, x, x * x];
        for i in 0..3 {
            b[i] += row[i] * y;
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    let (p, inv) = spd_solve(m, b)?;
    if p[2] == 0.0 {
        return Err(Error::RankDeficient("flat voltage dependence"));
    }
    let s2 = sigma * sigma;
    let vertex = vc - p[1] / (2.0 * p[2]);
    let g = [0.0, -1.0 / (2.0 * p[2]), p[1] / (2.0 * p[2] * p[2])];
    let mut var_v = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            var_v += g[i] * inv[i][j] * g[j];
        }
    }
    let chi2 = points
        .iter()
        .map(|&(v, y)| {
            let x = v - vc;
            let r = y - (p[0] + p[1] * x + p[2] * x * x);
            r * r / s2
        })
        .sum();
    Ok(ParabolaFit {
        z_piezo,
        vertex,
        vertex_err: (s2 * var_v).sqrt(),
        curvature: p[2],
        curvature_err: (s2 * inv[2][2]).sqrt(),
        offset: p[0] - p[1] * p[1] / (4.0 * p[2]),
        chi2,
    })
}

/// Calibration parameters with 1σ errors.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationFit {
    /// V
    pub v0: f64,
    pub v0_err: f64,
    /// nm
    pub z0: f64,
    pub z0_err: f64,
    /// s/kg
    pub cal_const: f64,
    pub cal_const_err: f64,
    /// V₀(a) = d + θa with a in nm.
    pub line_d: f64,
    pub line_d_err: f64,
    pub line_theta: f64,
    pub line_theta_err: f64,
    /// χ² of the curvature fit and its degrees of freedom.
    pub chi2: f64,
    pub dof: usize,
    pub parabolas: Vec<ParabolaFit>,
}

struct CurvatureData<'a> {
    z: &'a [f64],
    kappa: &'a [f64],
    w: &'a [f64],
    r: f64,
}

impl CurvatureData<'_> {
    fn factors(&self, z0: f64) -> Result<Vec<f64>> {
        self.z.iter().map(|z| electrostatic_gradient_factor(z + z0, self.r)).collect()
    }

    fn best_c(&self, x: &[f64]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..x.len() {
            num -= self.w[i] * self.kappa[i] * x[i];
            den += self.w[i] * x[i] * x[i];
        }
        num / den
    }

    fn chi2(&self, c: f64, x: &[f64]) -> f64 {
        (0..x.len())
            .map(|i| {
                let r = self.kappa[i] + c * x[i];
                self.w[i] * r * r
            })
            .sum()
    }

    /// dX′/da by Richardson-extrapolated central differences.
    fn slopes(&self, z0: f64) -> Result<Vec<f64>> {
        self.z
            .iter()
            .map(|z| {
                let a = z + z0;
                let h = 1e-3 * a;
                let d = |h: f64| -> Result<f64> {
                    Ok((electrostatic_gradient_factor(a + h, self.r)? - electrostatic_gradient_factor(a - h, self.r)?) / (2.0 * h))
                };
                Ok((4.0 * d(0.5 * h)? - d(h)?) / 3.0)
            })
            .collect()
    }
}

/// Fits V₀, z₀ and C from shift records.
///
/// Each separation gets a parabola in V; the curvatures κ(z) = −C·X′(z + z₀)
/// are then fitted over (z₀, C) by a profile scan in z₀ followed by
/// Levenberg–Marquardt refinement, and the vertices are averaged and fitted
/// to a straight line in a.
pub fn fit_calibration(records: &[ShiftRecord], opts: &FitOptions) -> Result<CalibrationFit> {
    let groups = SeparationGroup::collect(records);
    if groups.len() < 3 {
        return Err(Error::RankDeficient("calibration needs at least three separations"));
    }
    let parabolas: Vec<ParabolaFit> = groups
        .iter()
        .map(|g| fit_parabola(g.z_piezo, &g.points, opts.pll_resolution))
        .collect::<Result<_>>()?;
    let z: Vec<f64> = parabolas.iter().map(|p| p.z_piezo).collect();
    let kappa: Vec<f64> = parabolas.iter().map(|p| p.curvature).collect();
    let w: Vec<f64> = parabolas.iter().map(|p| 1.0 / (p.curvature_err * p.curvature_err)).collect();
    let data = CurvatureData {
        z: &z,
        kappa: &kappa,
        w: &w,
        r: opts.sphere_radius,
    };

    // Profile scan: C is linear given z₀.
    let z_min = z.iter().cloned().fold(f64::INFINITY, f64::min);
    let (lo, hi) = (opts.z0_range.0.max(1e-3 - z_min), opts.z0_range.1);
    if !(hi > lo) {
        return Err(Error::InvalidInput("empty z₀ search range"));
    }
    let n_scan = 400;
    let mut best = (f64::INFINITY, lo, 0.0);
    for i in 0..=n_scan {
        let z0 = lo + (hi - lo) * (i as f64 / n_scan as f64).powi(2);
        if z_min + z0 <= 0.0 {
            continue;
        }
        let x = data.factors(z0)?;
        let c = data.best_c(&x);
        let chi2 = data.chi2(c, &x);
        if chi2 < best.0 {
            best = (chi2, z0, c);
        }
    }
    let (mut chi2, mut z0, mut c) = best;

    let mut lambda = 1e-3;
    let mut cov = [[0.0; 2]; 2];
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        let x = data.factors(z0)?;
        let dx = data.slopes(z0)?;
        let mut jtj = [[0.0; 2]; 2];
        let mut jtr = [0.0; 2];
        for i in 0..x.len() {
            let r = kappa[i] + c * x[i];
            let j = [c * dx[i], x[i]];
            for p in 0..2 {
                jtr[p] -= w[i] * j[p] * r;
                for q in 0..2 {
                    jtj[p][q] += w[i] * j[p] * j[q];
                }
            }
        }
        let (_, inv) = spd_solve(jtj, [0.0, 0.0])?;
        cov = inv;
        let mut accepted = false;
        while lambda < 1e16 {
            let mut damped = jtj;
            for p in 0..2 {
                damped[p][p] *= 1.0 + lambda;
            }
            let (step, _) = spd_solve(damped, jtr)?;
            let (nz0, nc) = (z0 + step[0], c + step[1]);
            if z_min + nz0 <= 0.0 {
                lambda *= 10.0;
                continue;
            }
            let nx = data.factors(nz0)?;
            let nchi2 = data.chi2(nc, &nx);
            if nchi2 <= chi2 {
                let small = step[0].abs() <= 1e-13 * z0.abs().max(1.0) && step[1].abs() <= 1e-13 * c.abs();
                let flat = chi2 - nchi2 <= 1e-15 * chi2;
                z0 = nz0;
                c = nc;
                chi2 = nchi2;
                lambda = (lambda * 0.1).max(1e-12);
                accepted = true;
                converged = small || flat;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted || converged {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            iterations: opts.max_iterations,
        });
    }

    // Residual potential: weighted mean and straight line in a.
    let (mut sw, mut swv) = (0.0, 0.0);
    let mut m = [[0.0; 2]; 2];
    let mut b = [0.0; 2];
    for p in &parabolas {
        let wv = 1.0 / (p.vertex_err * p.vertex_err);
        let a = p.z_piezo + z0;
        sw += wv;
        swv += wv * p.vertex;
        let row = [1.0, a];
        for i in 0..2 {
            b[i] += wv * row[i] * p.vertex;
            for j in 0..2 {
                m[i][j] += wv * row[i] * row[j];
            }
        }
    }
    let (line, line_cov) = spd_solve(m, b)?;
    let dof = parabolas.len().saturating_sub(2);
    Ok(CalibrationFit {
        v0: swv / sw,
        v0_err: (1.0 / sw).sqrt(),
        z0,
        z0_err: cov[0][0].sqrt(),
        cal_const: c,
        cal_const_err: cov[1][1].sqrt(),
        line_d: line[0],
        line_d_err: line_cov[0][0].sqrt(),
        line_theta: line[1],
        line_theta_err: line_cov[1][1].sqrt(),
        chi2,
        dof,
        parabolas,
    })
}

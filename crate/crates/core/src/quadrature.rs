//! Adaptive Gauss–Kronrod quadrature (21-point Kronrod / 10-point Gauss).
//!
//! The integrator works on vector-valued integrands `[f64; N]` so that
//! quantities sharing expensive sub-expressions (for example the two
//! polarization tensor components, which share Fermi factors and a complex
//! square root) are refined together. Subintervals are bisected in order of
//! decreasing error until the summed error estimate meets
//! `max(abs_tol, rel_tol·|I|)` for every component.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_758_438_761,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Convergence controls for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Maximum number of subintervals kept.
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            max_intervals: 2000,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-9, 1e-9)
    }
}

/// Result of an integration: value and summed error estimate per component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
struct Segment<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: [f64; N],
}

fn kronrod<const N: usize, F>(f: &mut F, lo: f64, hi: f64) -> Segment<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    for c in 0..N {
        k[c] = WGK[10] * fc[c];
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for c in 0..N {
            let s = f1[c] + f2[c];
            k[c] += WGK[j] * s;
            if j % 2 == 1 {
                g[c] += WG[j / 2] * s;
            }
        }
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for c in 0..N {
        value[c] = k[c] * half;
        error[c] = ((k[c] - g[c]) * half).abs();
    }
    Segment {
        lo,
        hi,
        value,
        error,
    }
}

fn converged<const N: usize>(value: &[f64; N], error: &[f64; N], tol: &Tolerance) -> bool {
    (0..N).all(|c| error[c] <= tol.abs.max(tol.rel * value[c].abs()))
}

/// Integrates a vector-valued function over the finite interval `[lo, hi]`.
pub fn integrate<const N: usize, F>(mut f: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidInput("integration limits must be finite"));
    }
    if lo == hi {
        return Ok(Estimate {
            value: [0.0; N],
            error: [0.0; N],
            evaluations: 0,
        });
    }
    let mut segments: Vec<Segment<N>> = Vec::with_capacity(16);
    segments.push(kronrod(&mut f, lo, hi));
    let mut evaluations = 21;
    loop {
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        for s in &segments {
            for c in 0..N {
                value[c] += s.value[c];
                error[c] += s.error[c];
            }
        }
        if converged(&value, &error, tol) {
            return Ok(Estimate {
                value,
                error,
                evaluations,
            });
        }
        // Bisect the segment contributing most to the worst component.
        let worst_component = (0..N)
            .max_by(|&a, &b| {
                let ra = error[a] / tol.abs.max(tol.rel * value[a].abs());
                let rb = error[b] / tol.abs.max(tol.rel * value[b].abs());
                ra.partial_cmp(&rb).unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        let (idx, _) = segments
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, s)| {
                if s.error[worst_component] > best.1 {
                    (i, s.error[worst_component])
                } else {
                    best
                }
            });
        let seg = segments.swap_remove(idx);
        let mid = 0.5 * (seg.lo + seg.hi);
        if segments.len() + 2 > tol.max_intervals || mid <= seg.lo || mid >= seg.hi {
            segments.push(seg);
            return Err(Error::QuadratureBudget {
                estimate: value[worst_component],
                achieved_error: error[worst_component],
            });
        }
        segments.push(kronrod(&mut f, seg.lo, mid));
        segments.push(kronrod(&mut f, mid, seg.hi));
        evaluations += 42;
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(mut f: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let est = integrate(|x| [f(x)], lo, hi, tol)?;
    Ok((est.value[0], est.error[0]))
}

/// Integrates over consecutive panels `[edges[i], edges[i+1]]`, summing the
/// results. Useful when the integrand has structure on very different scales.
pub fn integrate_panels<const N: usize, F>(mut f: F, edges: &[f64], tol: &Tolerance) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    let mut total = Estimate {
        value: [0.0; N],
        error: [0.0; N],
        evaluations: 0,
    };
    for w in edges.windows(2) {
        let est = integrate(&mut f, w[0], w[1], tol)?;
        for c in 0..N {
            total.value[c] += est.value[c];
            total.error[c] += est.error[c];
        }
        total.evaluations += est.evaluations;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let (v, _) = integrate_scalar(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, &Tolerance::default()).unwrap();
        assert!((v - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let tol = Tolerance::new(1e-10, 1e-10);
        let (v, _) = integrate_scalar(|x| 1.0 / x.sqrt(), 0.0, 1.0, &tol).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn vector_components_refined_together() {
        let est = integrate(|x| [x.sin(), x.cos() * x.cos()], 0.0, PI, &Tolerance::default()).unwrap();
        assert!((est.value[0] - 2.0).abs() < 1e-12);
        assert!((est.value[1] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn sharp_step_converges() {
        // Fermi-like step at x = 3 with width 1e-3.
        let f = |x: f64| 1.0 / (((x - 3.0) / 1e-3).exp() + 1.0);
        let (v, _) = integrate_scalar(f, 0.0, 10.0, &Tolerance::new(1e-11, 1e-11)).unwrap();
        assert!((v - 3.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_intervals: 4,
        };
        let r = integrate_scalar(|x| (1.0 / x).sin(), 1e-6, 1.0, &tol);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }
}

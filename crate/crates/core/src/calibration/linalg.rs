//! Dense solves for the handful of unknowns in the calibration fits.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Solves the symmetric positive-definite system `m x = b` by Cholesky
/// decomposition and returns x together with m⁻¹.
pub(crate) fn spd_solve<const N: usize>(m: [[f64; N]; N], b: [f64; N]) -> Result<([f64; N], [[f64; N]; N])> {
    let mut l = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(s > 1e-300 * m[i][i].abs().max(1e-300)) || !s.is_finite() {
                    return Err(Error::RankDeficient("normal matrix is singular"));
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let solve = |rhs: [f64; N]| {
        let mut y = [0.0; N];
        for i in 0..N {
            let mut s = rhs[i];
            for k in 0..i {
                s -= l[i][k] * y[k];
            }
            y[i] = s / l[i][i];
        }
        let mut x = [0.0; N];
        for i in (0..N).rev() {
            let mut s = y[i];
            for k in i + 1..N {
                s -= l[k][i] * x[k];
            }
            x[i] = s / l[i][i];
        }
        x
    };
    let x = solve(b);
    let mut inv = [[0.0; N]; N];
    for j in 0..N {
        let mut e = [0.0; N];
        e[j] = 1.0;
        let col = solve(e);
        for i in 0..N {
            inv[i][j] = col[i];
        }
    }
    Ok((x, inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_inverts() {
        let m = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let (x, inv) = spd_solve(m, [1.0, 2.0, 3.0]).unwrap();
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| m[i][j] * x[j]).sum();
            assert!((r - [1.0, 2.0, 3.0][i]).abs() < 1e-13);
            for k in 0..3 {
                let p: f64 = (0..3).map(|j| m[i][j] * inv[j][k]).sum();
                assert!((p - if i == k { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
        assert!(spd_solve([[1.0, 1.0], [1.0, 1.0]], [0.0, 0.0]).is_err());
    }
}

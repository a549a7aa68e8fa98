//! Real spherical harmonics on S², unit-normalized, without the
//! Condon-Shortley phase. Index of `Y_{l,m}` in a flat array: `l^2 + l + m`.
//!
//! `Y_{l,0} = N_l P_l(z)`, `Y_{l,m} = sqrt2 N_lm P_l^m(z) cos(m phi)` and
//! `Y_{l,-m} = sqrt2 N_lm P_l^m(z) sin(m phi)` for `m > 0`, where `P_l^m`
//! carries no `(-1)^m`. So `Y_{1,1}` is a positive multiple of `x`.

use std::f64::consts::PI;

pub fn index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Number of harmonics of degree at most `l_max`.
pub fn count(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 1)
}

/// All `Y_{l,m}(x)` with `l <= l_max` at a unit vector, in flat index order.
pub fn real_harmonics(l_max: usize, x: &[f64; 3]) -> Vec<f64> {
    let z = x[2];
    let mut out = vec![0.0; count(l_max)];
    // (x + iy)^m = sin^m(theta) e^{i m phi}
    let mut re = 1.0;
    let mut im = 0.0;
    // normalized P_m^m(z) / sin^m(theta)
    let mut diag = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            let (r, i) = (re * x[0] - im * x[1], re * x[1] + im * x[0]);
            re = r;
            im = i;
            diag *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
        }
        let mf = m as f64;
        let mut prev2 = 0.0;
        let mut prev = diag;
        for l in m..=l_max {
            let q = if l == m {
                diag
            } else if l == m + 1 {
                z * ((2 * m + 3) as f64).sqrt() * diag
            } else {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
                a * (z * prev - b * prev2)
            };
            if l > m {
                prev2 = prev;
                prev = q;
            }
            if m == 0 {
                out[index(l, 0)] = q;
            } else {
                out[index(l, m as i64)] = std::f64::consts::SQRT_2 * q * re;
                out[index(l, -(m as i64))] = std::f64::consts::SQRT_2 * q * im;
            }
        }
    }
    out
}

/// Degree-`l` block of [`real_harmonics`], ordered `m = -l..=l`.
pub fn degree(all: &[f64], l: usize) -> &[f64] {
    &all[l * l..(l + 1) * (l + 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees_match_cartesian_forms() {
        let x = [0.36, 0.48, 0.8];
        let y = real_harmonics(2, &x);
        let c1 = (3.0 / (4.0 * PI)).sqrt();
        assert!((y[index(1, 1)] - c1 * x[0]).abs() < 1e-14);
        assert!((y[index(1, -1)] - c1 * x[1]).abs() < 1e-14);
        assert!((y[index(1, 0)] - c1 * x[2]).abs() < 1e-14);
        let c2 = 0.5 * (15.0 / PI).sqrt();
        assert!((y[index(2, -2)] - c2 * x[0] * x[1]).abs() < 1e-14);
        assert!((y[index(2, 2)] - 0.5 * c2 * (x[0] * x[0] - x[1] * x[1])).abs() < 1e-14);
    }
}

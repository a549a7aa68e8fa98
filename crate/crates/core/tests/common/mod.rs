//! Independent reference computations for the integration tests.
#![allow(dead_code, clippy::excessive_precision)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

// Kronrod 15-point nodes/weights with the embedded 7-point Gauss weights.
const XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XK[i]) + f(c + h * XK[i]);
        k += WK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) with interval bisection.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth >= 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth + 1) + rec(f, m, b, tol / 2.0, depth + 1)
    }
    // start from panels of at most unit length so oscillatory integrands are seen
    let panels = ((b - a).abs().ceil() as usize).max(1);
    let h = (b - a) / panels as f64;
    (0..panels).map(|i| rec(f, a + i as f64 * h, a + (i + 1) as f64 * h, tol / panels as f64, 0)).sum()
}

/// `J_0(x) = (1/pi) ∫_0^pi cos(x sin t) dt`.
pub fn j0_integral(x: f64) -> f64 {
    integrate(&|t| (x * t.sin()).cos(), 0.0, PI, 1e-14) / PI
}

/// Transform of arclength on the unit circle, by adaptive quadrature.
pub fn circle_transform(xi: [f64; 2]) -> (f64, f64) {
    let phase = |t: f64| -TAU * (xi[0] * t.cos() + xi[1] * t.sin());
    let re = integrate(&|t| phase(t).cos(), 0.0, TAU, 1e-12);
    let im = integrate(&|t| phase(t).sin(), 0.0, TAU, 1e-12);
    (re, im)
}

/// Transform of Lebesgue measure on the segment from `a` to `a + s*u` in R^d.
pub fn segment_transform(a: &[f64], u: &[f64], s: f64, xi: &[f64]) -> (f64, f64) {
    let dot = |x: &[f64]| x.iter().zip(xi).map(|(p, q)| p * q).sum::<f64>();
    let phase = |t: f64| -TAU * (dot(a) + t * dot(u));
    let re = integrate(&|t| phase(t).cos(), 0.0, s, 1e-13);
    let im = integrate(&|t| phase(t).sin(), 0.0, s, 1e-13);
    (re, im)
}

/// Smallest distance between two points, by comparing every pair.
pub fn brute_min_distance(points: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            best = best.min(d);
        }
    }
    best
}

/// Euclidean norm.
pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `sum |lambda|^-gamma` over `0 < |lambda| <= r`, iterating backwards.
pub fn reversed_partial_sum(points: &[Vec<f64>], gamma: f64, r: f64) -> f64 {
    let mut s = 0.0;
    for p in points.iter().rev() {
        let n = norm(p);
        if n > 0.0 && n <= r {
            s += n.powf(-gamma);
        }
    }
    s
}

pub fn reversed_count(points: &[Vec<f64>], r: f64) -> usize {
    points.iter().rev().filter(|p| norm(p) <= r).count()
}

/// Lattice points of Z^d in the closed ball, by scanning the bounding cube.
pub fn lattice_ball(d: usize, r: f64) -> Vec<Vec<f64>> {
    let k = r.floor() as i64;
    let mut out = Vec::new();
    let mut idx = vec![-k; d];
    loop {
        let p: Vec<f64> = idx.iter().map(|v| *v as f64).collect();
        if norm(&p) <= r {
            out.push(p);
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            idx[i] += 1;
            if idx[i] <= k {
                break;
            }
            idx[i] = -k;
            i += 1;
        }
    }
}

/// Character of a rotation by `angle` on the degree-`l` harmonics.
pub fn rotation_character(l: usize, angle: f64) -> f64 {
    let half = angle / 2.0;
    if half.sin().abs() < 1e-12 {
        return (2 * l + 1) as f64;
    }
    ((2 * l + 1) as f64 * half).sin() / half.sin()
}

/// Rotation angle of a 3x3 rotation matrix from its trace.
pub fn rotation_angle(m: &[[f64; 3]; 3]) -> f64 {
    let t = m[0][0] + m[1][1] + m[2][2];
    ((t - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

/// Exact transform of Lebesgue measure on [0,1]^d.
pub fn box_transform(xi: &[f64]) -> Complex64 {
    xi.iter()
        .map(|&x| {
            if x == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar((PI * x).sin() / (PI * x), -PI * x)
            }
        })
        .product()
}

/// Random `delta`-separated points in `[-half, half]^d`, by dart throwing.
pub fn random_separated(rng: &mut ChaCha8Rng, d: usize, half: f64, delta: f64, darts: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for _ in 0..darts {
        let p: Vec<f64> = (0..d).map(|_| rng.random_range(-half..half)).collect();
        if out.iter().all(|q| p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>() >= delta * delta) {
            out.push(p);
        }
    }
    out
}

/// Optimal Bessel constant of `{e_p}` in `L^2([0,1]^d)`: the top eigenvalue
/// of the Gram matrix.
pub fn best_bessel_constant(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    let g = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        let diff: Vec<f64> = points[i].iter().zip(&points[j]).map(|(a, b)| a - b).collect();
        box_transform(&diff)
    });
    g.symmetric_eigen().eigenvalues.iter().cloned().fold(0.0, f64::max)
}

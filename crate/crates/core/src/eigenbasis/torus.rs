//! The same construction on the flat torus R²/Z² with a finite group of
//! rational translations. Eigenfunctions are `e_k(x) = exp(2 pi i k.x)`,
//! `k` in Z², and averaging multiplies `e_k` by `(1/#G) sum_t exp(2 pi i k.t)`,
//! which is 1 when `k.t` is an integer for every `t` and 0 otherwise.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Translation by `(num[0]/den, num[1]/den)` mod Z².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Translation {
    pub num: [i64; 2],
    pub den: i64,
}

impl Translation {
    pub fn new(num: [i64; 2], den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidGroup("translation denominator must be positive".into()));
        }
        Ok(Translation { num: [num[0].rem_euclid(den), num[1].rem_euclid(den)], den })
    }

    fn add(&self, o: &Translation) -> Translation {
        let den = self.den * o.den;
        Translation::new(
            [self.num[0] * o.den + o.num[0] * self.den, self.num[1] * o.den + o.num[1] * self.den],
            den,
        )
        .unwrap()
        .reduced()
    }

    fn reduced(&self) -> Translation {
        let g = gcd(gcd(self.num[0], self.num[1]), self.den);
        Translation { num: [self.num[0] / g, self.num[1] / g], den: self.den / g }
    }

    pub fn vector(&self) -> [f64; 2] {
        [self.num[0] as f64 / self.den as f64, self.num[1] as f64 / self.den as f64]
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a.rem_euclid(b)) }
}

/// Group generated by the given translations, enumerated by closure.
pub fn translation_group(generators: &[Translation]) -> Vec<Translation> {
    let zero = Translation { num: [0, 0], den: 1 };
    let mut elements = vec![zero];
    let mut frontier = vec![zero];
    while let Some(t) = frontier.pop() {
        for g in generators {
            let n = t.add(&g.reduced());
            if !elements.contains(&n) {
                elements.push(n);
                frontier.push(n);
            }
        }
    }
    elements
}

/// Averaging eigenvalue of `e_k` under the group.
pub fn averaging_factor(group: &[Translation], k: [i64; 2]) -> Complex64 {
    let s: Complex64 = group
        .iter()
        .map(|t| {
            let v = t.vector();
            Complex64::from_polar(1.0, TAU * (k[0] as f64 * v[0] + k[1] as f64 * v[1]))
        })
        .sum();
    s / group.len() as f64
}

/// Frequencies with `|k|_inf <= bound` fixed by averaging, i.e. in the dual
/// of the lattice generated by Z² and the translations.
pub fn fixed_frequencies(group: &[Translation], bound: i64) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if (averaging_factor(group, [a, b]) - 1.0).norm() < 1e-9 {
                out.push([a, b]);
            }
        }
    }
    out
}

/// Exact membership in the dual lattice: `k.t` integral for every element.
pub fn in_dual_lattice(group: &[Translation], k: [i64; 2]) -> bool {
    group.iter().all(|t| (k[0] * t.num[0] + k[1] * t.num[1]).rem_euclid(t.den) == 0)
}

/// Largest off-diagonal and diagonal deviation from `1/#G` of the Gram
/// matrix of the fixed exponentials on `[0, 1/q) x [0, 1)`, a fundamental
/// domain of the group generated by `(1/q, 0)`. Midpoint sums with `nodes`
/// points per axis are exact for these trigonometric polynomials once
/// `nodes` exceeds twice the frequency bound.
pub fn strip_gram(frequencies: &[[i64; 2]], q: i64, nodes: usize) -> (f64, f64) {
    let n = frequencies.len();
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    let w = 1.0 / (q as f64 * nodes as f64 * nodes as f64);
    for i in 0..n {
        for j in 0..n {
            let dk = [frequencies[i][0] - frequencies[j][0], frequencies[i][1] - frequencies[j][1]];
            let mut s = Complex64::new(0.0, 0.0);
            for a in 0..nodes {
                let x = (a as f64 + 0.5) / (q as f64 * nodes as f64);
                for b in 0..nodes {
                    let y = (b as f64 + 0.5) / nodes as f64;
                    s += Complex64::from_polar(1.0, TAU * (dk[0] as f64 * x + dk[1] as f64 * y));
                }
            }
            let g = s * w;
            if i == j {
                diag = diag.max((g.re - 1.0 / q as f64).abs());
            } else {
                off = off.max(g.norm());
            }
        }
    }
    (off, diag)
}

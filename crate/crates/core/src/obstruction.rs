//! The summability obstruction for curved boundaries.
//!
//! A lower frame bound needs `#(Lambda ∩ B_R) >= c R^gamma`, which makes
//! `sum |lambda|^{-gamma}` diverge. An upper (Bessel) bound together with a
//! positive local mass `|lambda|^gamma ∫_{B_r(lambda)} |mu^|^2 > c` caps the
//! same sum by `B mu(S) v_d r^d / c`. The report measures both sides on a
//! finite spectrum and locates the radius where the cap is exceeded.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{unit_ball_volume, Spectrum};
use crate::geometry::ConvexBody;
use crate::linalg::{norm, scale};
use crate::measure::{fit_line, fit_loglog, sphere_ft_closed_form, LineFit};
use crate::quadrature::gauss_legendre_on;

/// Default Gauss-Legendre nodes per integration variable.
pub const LOCAL_MASS_NODES: usize = 64;
/// Relative change under node doubling above which the ball integral is rejected.
pub const LOCAL_MASS_TOL: f64 = 0.01;
/// How many of the largest frequencies enter the local-mass infimum.
pub const LOCAL_MASS_SAMPLES: usize = 32;
/// Points in the radius ladder of the report.
pub const LADDER_POINTS: usize = 17;

/// `sum |lambda|^{-gamma}` over `0 < |lambda| <= radius`.
pub fn partial_sum(spectrum: &Spectrum, gamma: f64, radius: f64) -> f64 {
    spectrum
        .frequencies()
        .iter()
        .map(|l| norm(l))
        .filter(|&n| n > 0.0 && n <= radius)
        .map(|n| n.powf(-gamma))
        .sum()
}

/// Number of frequencies in the closed ball of the given radius, origin included.
pub fn counting_function(spectrum: &Spectrum, radius: f64) -> usize {
    spectrum.frequencies().iter().filter(|l| norm(l) <= radius).count()
}

/// Least-squares fit of `log count` against `log R`.
pub fn growth_exponent(radii: &[f64], values: &[f64]) -> LineFit {
    let (x, y): (Vec<f64>, Vec<f64>) = radii.iter().zip(values).filter(|(_, v)| **v > 0.0).map(|(r, v)| (*r, *v)).unzip();
    fit_loglog(&x, &y)
}

/// Fit of `log count` against `log (R^d / log R)`; slope 1 means the
/// borderline density `R^d / log R`.
pub fn log_corrected_growth(radii: &[f64], counts: &[f64], d: usize) -> LineFit {
    let (x, y): (Vec<f64>, Vec<f64>) = radii
        .iter()
        .zip(counts)
        .filter(|(r, c)| **r > 1.0 && **c > 0.0)
        .map(|(r, c)| ((r.powi(d as i32) / r.ln()).ln(), c.ln()))
        .unzip();
    fit_line(&x, &y)
}

/// Transform of the boundary measure of a centred ball of radius `R` in R^2
/// or R^3: `R^{d-1} sigma^(R xi)`.
pub fn sphere_transform(body: &ConvexBody) -> Result<impl Fn(&[f64]) -> f64> {
    let (d, radius) = match body {
        ConvexBody::Ball { dimension, radius } if *dimension == 2 || *dimension == 3 => (*dimension, *radius),
        ConvexBody::Ball { dimension, .. } => return Err(Error::UnsupportedDimension(*dimension)),
        _ => return Err(Error::InvalidBody("the obstruction report needs a ball".into())),
    };
    Ok(move |xi: &[f64]| {
        radius.powi(d as i32 - 1) * sphere_ft_closed_form(d, &scale(xi, radius)).map(|z| z.re).unwrap_or(f64::NAN)
    })
}

fn ball_integral(f: &dyn Fn(&[f64]) -> f64, centre: &[f64], r: f64, nodes: usize) -> Result<f64> {
    let d = centre.len();
    // Axis u along the centre (or e1 at the origin), v/w spanning the rest.
    let c = norm(centre);
    let u: Vec<f64> = if c > 0.0 { scale(centre, 1.0 / c) } else { unit(d, 0) };
    let frame = crate::linalg::orthonormal_complement(std::slice::from_ref(&u), d);
    // t = r sin(theta) removes the square-root endpoint of the chord length.
    let (th, thw) = gauss_legendre_on(nodes, -PI / 2.0, PI / 2.0);
    let mut total = 0.0;
    for (&a, &aw) in th.iter().zip(&thw) {
        let t = r * a.sin();
        let half = r * a.cos();
        let jac = r * a.cos();
        let base: Vec<f64> = centre.iter().zip(&u).map(|(c, u)| c + t * u).collect();
        let inner = match d {
            2 => {
                let (s, sw) = gauss_legendre_on(nodes, -half, half);
                s.iter()
                    .zip(&sw)
                    .map(|(&s, &w)| w * f(&axpy(&base, s, &frame[0])))
                    .sum::<f64>()
            }
            3 => {
                // disc of radius `half`: GL in the radius, trapezoid in the angle
                let (rho, rw) = gauss_legendre_on(nodes, 0.0, half);
                let m = 2 * nodes;
                let mut acc = 0.0;
                for (&p, &pw) in rho.iter().zip(&rw) {
                    let mut ring = 0.0;
                    for k in 0..m {
                        let phi = TAU * k as f64 / m as f64;
                        let x = axpy(&axpy(&base, p * phi.cos(), &frame[0]), p * phi.sin(), &frame[1]);
                        ring += f(&x);
                    }
                    acc += pw * p * ring * TAU / m as f64;
                }
                acc
            }
            _ => return Err(Error::UnsupportedDimension(d)),
        };
        total += aw * jac * inner;
    }
    Ok(total)
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(x, y)| x + a * y).collect()
}

/// `|lambda|^gamma ∫_{B_r(lambda)} |transform|^2`, checked against the same
/// integral with twice the nodes.
pub fn local_mass_with(transform: &dyn Fn(&[f64]) -> f64, lambda: &[f64], r: f64, gamma: f64, nodes: usize) -> Result<f64> {
    let sq = |x: &[f64]| transform(x).powi(2);
    let coarse = ball_integral(&sq, lambda, r, nodes)?;
    let fine = ball_integral(&sq, lambda, r, 2 * nodes)?;
    let scale = fine.abs().max(coarse.abs());
    if scale > 0.0 && (fine - coarse).abs() > LOCAL_MASS_TOL * scale {
        return Err(Error::QuadratureUnstable { coarse, fine });
    }
    Ok(norm(lambda).powf(gamma) * fine)
}

pub fn local_mass(transform: &dyn Fn(&[f64]) -> f64, lambda: &[f64], r: f64, gamma: f64) -> Result<f64> {
    local_mass_with(transform, lambda, r, gamma, LOCAL_MASS_NODES)
}

/// Threshold beyond which the local-mass bound is applied.
pub fn large_threshold(r: f64) -> f64 {
    (2.0 * r).max(20.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub radius: f64,
    pub partial_sum: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub dimension: usize,
    pub gamma: f64,
    pub r: f64,
    /// Threshold `L`; the budget concerns `|lambda| > L`.
    pub threshold: f64,
    pub spectrum_size: usize,
    /// `sup |xi|^{gamma/2} |mu^(xi)|` over sampled `xi`, and the same over the
    /// outer half of the sampled range; comparable values mean bounded.
    pub decay_sup: f64,
    pub decay_sup_outer: f64,
    pub ladder: Vec<LadderPoint>,
    pub count_growth: Option<LineFit>,
    pub sum_growth: Option<LineFit>,
    pub count_growth_log_corrected: Option<LineFit>,
    /// Infimum of the local mass over the largest frequencies beyond `L`.
    pub local_mass_min: Option<f64>,
    pub local_mass_tested: usize,
    /// `sum_{|lambda| > L} |lambda|^{-gamma}` over the whole finite spectrum.
    pub tail_sum: f64,
    pub bessel_bound: f64,
    pub mass: f64,
    /// `B mu(S) v_d r^d / c`.
    pub budget: Option<f64>,
    /// Smallest `|lambda|` at which the tail sum up to it exceeds the budget.
    pub r_star: Option<f64>,
    pub verdict: String,
}

/// Geometric ladder over one decade ending at `top`.
fn radius_ladder(top: f64) -> Vec<f64> {
    let bottom = (top / 10.0).max(1.0);
    (0..LADDER_POINTS)
        .map(|k| bottom * (top / bottom).powf(k as f64 / (LADDER_POINTS - 1) as f64))
        .collect()
}

pub fn dichotomy_report(body: &ConvexBody, spectrum: &Spectrum, gamma: f64, r: f64, bessel_bound: f64) -> Result<ObstructionReport> {
    let transform = sphere_transform(body)?;
    let d = body.dimension();
    if !spectrum.is_empty() && spectrum.dimension() != d {
        return Err(Error::DimensionMismatch { expected: d, found: spectrum.dimension() });
    }
    let threshold = large_threshold(r);
    let mut norms: Vec<(f64, usize)> = spectrum.frequencies().iter().enumerate().map(|(i, l)| (norm(l), i)).collect();
    norms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let top = norms.last().map(|x| x.0).unwrap_or(0.0);

    // decay hypothesis along a few directions
    let dirs: Vec<Vec<f64>> = match d {
        2 => (0..4).map(|k| { let a = PI / 8.0 * k as f64; vec![a.cos(), a.sin()] }).collect(),
        _ => vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.6, 0.8], vec![0.48, 0.6, 0.64]],
    };
    let reach = top.max(2.0 * threshold);
    let (mut decay_sup, mut decay_sup_outer) = (0.0f64, 0.0f64);
    let steps = (reach * 16.0).ceil() as usize;
    for dir in &dirs {
        for k in 0..=steps {
            let s = 1.0 + (reach - 1.0) * k as f64 / steps as f64;
            let v = s.powf(gamma / 2.0) * transform(&scale(dir, s)).abs();
            decay_sup = decay_sup.max(v);
            if s >= (1.0 + reach) / 2.0 {
                decay_sup_outer = decay_sup_outer.max(v);
            }
        }
    }

    let ladder: Vec<LadderPoint> = if top > 0.0 {
        radius_ladder(top)
            .into_iter()
            .map(|radius| LadderPoint {
                radius,
                partial_sum: partial_sum(spectrum, gamma, radius),
                count: counting_function(spectrum, radius),
            })
            .collect()
    } else {
        Vec::new()
    };
    let radii: Vec<f64> = ladder.iter().map(|p| p.radius).collect();
    let counts: Vec<f64> = ladder.iter().map(|p| p.count as f64).collect();
    let sums: Vec<f64> = ladder.iter().map(|p| p.partial_sum).collect();
    let usable = |v: &[f64]| v.iter().filter(|x| **x > 0.0).count() >= 3;
    let count_growth = usable(&counts).then(|| growth_exponent(&radii, &counts));
    let sum_growth = usable(&sums).then(|| growth_exponent(&radii, &sums));
    let count_growth_log_corrected = usable(&counts).then(|| log_corrected_growth(&radii, &counts, d));

    let tail: Vec<(f64, usize)> = norms.iter().cloned().filter(|x| x.0 > threshold).collect();
    let tested: Vec<&(f64, usize)> = tail.iter().rev().take(LOCAL_MASS_SAMPLES).collect();
    let mut local_mass_min: Option<f64> = None;
    for (_, i) in &tested {
        let m = local_mass(&transform, &spectrum.frequencies()[*i], r, gamma)?;
        local_mass_min = Some(local_mass_min.map_or(m, |c: f64| c.min(m)));
    }
    let tail_sum: f64 = tail.iter().map(|x| x.0.powf(-gamma)).sum();
    let mass = match body {
        ConvexBody::Ball { radius, .. } => d as f64 * unit_ball_volume(d) * radius.powi(d as i32 - 1),
        _ => unreachable!(),
    };
    let budget = local_mass_min
        .filter(|c| *c > 0.0)
        .map(|c| bessel_bound * mass * unit_ball_volume(d) * r.powi(d as i32) / c);
    let r_star = budget.and_then(|b| {
        let mut acc = 0.0;
        tail.iter().find(|x| {
            acc += x.0.powf(-gamma);
            acc > b
        })
        .map(|x| x.0)
    });

    let dense = count_growth.map(|f| f.slope >= gamma - 0.1);
    let verdict = match (budget, r_star, dense) {
        (_, Some(rs), _) => format!(
            "Bessel budget {:.4} (B = {}) is exhausted at R* = {:.4}: the tail sum of |lambda|^-{} passes the ceiling a Bessel bound allows, so this spectrum cannot carry a frame with that bound",
            budget.unwrap(), bessel_bound, rs, gamma
        ),
        (Some(b), None, Some(false)) => format!(
            "tail sum {:.4} stays below the budget {:.4}, but #(Lambda ∩ B_R) grows like R^{:.3} < R^{}: the density a lower frame bound needs is missing",
            tail_sum, b, count_growth.unwrap().slope, gamma
        ),
        (Some(b), None, _) => format!(
            "tail sum {:.4} has not reached the budget {:.4} within the truncated spectrum (largest |lambda| = {:.4})",
            tail_sum, b, top
        ),
        (None, _, _) => format!("no frequencies beyond L = {} to test the local mass on", threshold),
    };

    Ok(ObstructionReport {
        dimension: d,
        gamma,
        r,
        threshold,
        spectrum_size: spectrum.len(),
        decay_sup,
        decay_sup_outer,
        ladder,
        count_growth,
        sum_growth,
        count_growth_log_corrected,
        local_mass_min,
        local_mass_tested: tested.len(),
        tail_sum,
        bessel_bound,
        mass,
        budget,
        r_star,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_sums_and_counts() {
        let one = Spectrum::untagged(vec![vec![2.0, 0.0]]).unwrap();
        assert!((partial_sum(&one, 1.0, 10.0) - 0.5).abs() < 1e-15);
        assert_eq!(partial_sum(&one, 1.0, 1.5), 0.0);
        assert_eq!(counting_function(&one, 1.0), 0);
        let z2 = Spectrum::integer_ball(2, 12.0);
        assert_eq!(counting_function(&z2, 10.5), 349);
    }

    #[test]
    fn circle_local_mass_is_rotation_invariant() {
        let t = sphere_transform(&ConvexBody::unit_ball(2).unwrap()).unwrap();
        let a = local_mass(&t, &[35.0, 0.0], 5.0, 1.0).unwrap();
        let s = 35.0 / 2f64.sqrt();
        let b = local_mass(&t, &[s, s], 5.0, 1.0).unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-8 * a, "{a} {b}");
    }

    #[test]
    fn zero_transform_has_zero_mass() {
        let z = |_: &[f64]| 0.0;
        assert_eq!(local_mass(&z, &[30.0, 0.0], 5.0, 1.0).unwrap(), 0.0);
    }
}

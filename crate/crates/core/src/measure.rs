//! Quadrature surface measures and their Fourier transforms.
//!
//! A [`QuadratureMeasure`] is a list of pieces. Facet pieces are tensor grids,
//! whose transform factors into one-dimensional sums (closed form for the
//! midpoint rule), so the cost is independent of resolution. Sphere pieces
//! are explicit point clouds summed directly.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::geometry::{ConvexBody, Facet};
use crate::linalg::{add, dot, norm, scale};
use crate::quadrature::gauss_legendre_on;

/// Nodes per unit length required per unit of the largest frequency coordinate.
pub const NYQUIST_FACTOR: f64 = 4.0;
/// Smallest accepted facet resolution.
pub const MIN_RESOLUTION: f64 = 2.0;

/// One-dimensional rule along a facet axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    #[default]
    Midpoint,
    GaussLegendre,
}

#[derive(Debug, Clone, PartialEq)]
enum AxisRule {
    /// `n` cells of width `h`, node at each cell centre, weight `h`.
    Midpoint { n: usize, h: f64 },
    Nodes { t: Vec<f64>, w: Vec<f64> },
}

impl AxisRule {
    fn len(&self) -> usize {
        match self {
            AxisRule::Midpoint { n, .. } => *n,
            AxisRule::Nodes { t, .. } => t.len(),
        }
    }

    fn node(&self, j: usize) -> (f64, f64) {
        match self {
            AxisRule::Midpoint { h, .. } => ((j as f64 + 0.5) * h, *h),
            AxisRule::Nodes { t, w } => (t[j], w[j]),
        }
    }

    fn mass(&self) -> f64 {
        match self {
            AxisRule::Midpoint { n, h } => *n as f64 * h,
            AxisRule::Nodes { w, .. } => w.iter().sum(),
        }
    }

    /// `sum_j w_j t_j`.
    fn first_moment(&self) -> f64 {
        match self {
            AxisRule::Midpoint { n, h } => (*n as f64 * h).powi(2) / 2.0,
            AxisRule::Nodes { t, w } => t.iter().zip(w).map(|(t, w)| t * w).sum(),
        }
    }

    fn spacing(&self) -> f64 {
        match self {
            AxisRule::Midpoint { h, .. } => *h,
            AxisRule::Nodes { t, .. } => t.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max),
        }
    }

    /// `sum_j w_j exp(-2 pi i s t_j)` for the projected frequency `s`.
    fn transform(&self, s: f64) -> Complex64 {
        match self {
            AxisRule::Midpoint { n, h } => {
                let theta = TAU * s * h;
                let n = *n as f64;
                // sin(n θ/2) / sin(θ/2), rewritten around the nearest pole θ/2 = πk.
                let k = (theta / TAU).round();
                let eps = theta / 2.0 - PI * k;
                let ratio = if eps.abs() < 1e-300 {
                    n
                } else {
                    (n * eps).sin() / eps.sin()
                };
                let sign = if (k as i64 * (n as i64 - 1)).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                Complex64::from_polar(h * sign * ratio, -theta * n / 2.0)
            }
            AxisRule::Nodes { t, w } => t
                .iter()
                .zip(w)
                .map(|(t, w)| Complex64::from_polar(*w, -TAU * s * t))
                .sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct GridBlock {
    origin: Vec<f64>,
    axes: Vec<Vec<f64>>,
    rules: Vec<AxisRule>,
}

impl GridBlock {
    fn transform(&self, xi: &[f64]) -> Complex64 {
        let mut acc = Complex64::from_polar(1.0, -TAU * dot(xi, &self.origin));
        for (b, r) in self.axes.iter().zip(&self.rules) {
            acc *= r.transform(dot(xi, b));
        }
        acc
    }

    fn count(&self) -> usize {
        self.rules.iter().map(AxisRule::len).product()
    }

    fn for_each_node(&self, mut f: impl FnMut(Vec<f64>, f64)) {
        let k = self.rules.len();
        let mut idx = vec![0usize; k];
        let total = self.count();
        for _ in 0..total {
            let mut x = self.origin.clone();
            let mut w = 1.0;
            for a in 0..k {
                let (t, wt) = self.rules[a].node(idx[a]);
                x = add(&x, &scale(&self.axes[a], t));
                w *= wt;
            }
            f(x, w);
            for a in 0..k {
                idx[a] += 1;
                if idx[a] < self.rules[a].len() {
                    break;
                }
                idx[a] = 0;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Piece {
    Grid(GridBlock),
    Cloud { points: Vec<Vec<f64>>, weights: Vec<f64> },
}

/// Weighted point cloud approximating a surface measure.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMeasure {
    dimension: usize,
    pieces: Vec<Piece>,
    total_mass: f64,
    provenance: String,
    resolution: f64,
    spacing: f64,
}

/// Serialized form of a quadrature measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDocument {
    pub dimension: usize,
    pub provenance: String,
    pub resolution: f64,
    pub total_mass: f64,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl QuadratureMeasure {
    /// Builds a measure from explicit nodes; every weight must be positive.
    pub fn from_points(points: Vec<Vec<f64>>, weights: Vec<f64>, provenance: &str, resolution: f64) -> Result<Self> {
        let dimension = points.first().map(Vec::len).unwrap_or(0);
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidBody(format!(
                "{} points with {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dimension) {
            return Err(Error::DimensionMismatch { expected: dimension, found: p.len() });
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidBody(format!("weight {w} is not positive")));
        }
        let total_mass = weights.iter().sum();
        Ok(QuadratureMeasure {
            dimension,
            pieces: vec![Piece::Cloud { points, weights }],
            total_mass,
            provenance: provenance.to_string(),
            resolution,
            spacing: 1.0 / resolution,
        })
    }

    pub fn from_document(doc: &MeasureDocument) -> Result<Self> {
        let m = Self::from_points(doc.points.clone(), doc.weights.clone(), &doc.provenance, doc.resolution)?;
        if (m.total_mass - doc.total_mass).abs() > 1e-12 * doc.total_mass.abs().max(1.0) {
            return Err(Error::InvalidBody("total_mass does not match the weights".into()));
        }
        Ok(m)
    }

    pub fn to_document(&self) -> MeasureDocument {
        let (points, weights) = self.nodes();
        MeasureDocument {
            dimension: self.dimension,
            provenance: self.provenance.clone(),
            resolution: self.resolution,
            total_mass: self.total_mass,
            points,
            weights,
        }
    }

    /// Disjoint union; provenance strings are joined.
    pub fn union(parts: &[QuadratureMeasure]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidBody("empty union".into()))?;
        let mut out = first.clone();
        for p in &parts[1..] {
            if p.dimension != out.dimension {
                return Err(Error::DimensionMismatch { expected: out.dimension, found: p.dimension });
            }
            out.pieces.extend(p.pieces.iter().cloned());
            out.total_mass += p.total_mass;
            out.resolution = out.resolution.min(p.resolution);
            out.spacing = out.spacing.max(p.spacing);
            if !out.provenance.contains(&p.provenance) {
                out.provenance = format!("{} + {}", out.provenance, p.provenance);
            }
        }
        Ok(out)
    }

    /// Same measure shifted by `v`.
    pub fn translated(&self, v: &[f64]) -> Self {
        let mut out = self.clone();
        for piece in &mut out.pieces {
            match piece {
                Piece::Grid(b) => b.origin = add(&b.origin, v),
                Piece::Cloud { points, .. } => {
                    for p in points.iter_mut() {
                        *p = add(p, v);
                    }
                }
            }
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Largest gap between neighbouring nodes along any grid axis.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| match p {
                Piece::Grid(b) => b.count(),
                Piece::Cloud { weights, .. } => weights.len(),
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Barycentre `∫ x dmu / mu(R^d)`.
    pub fn centroid(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.dimension];
        for p in &self.pieces {
            match p {
                Piece::Grid(b) => {
                    let mass: f64 = b.rules.iter().map(AxisRule::mass).product();
                    let mut c = b.origin.clone();
                    for (axis, r) in b.axes.iter().zip(&b.rules) {
                        c = add(&c, &scale(axis, r.first_moment() / r.mass()));
                    }
                    acc = add(&acc, &scale(&c, mass));
                }
                Piece::Cloud { points, weights } => {
                    for (x, w) in points.iter().zip(weights) {
                        acc = add(&acc, &scale(x, *w));
                    }
                }
            }
        }
        scale(&acc, 1.0 / self.total_mass)
    }

    /// Materialized nodes and weights.
    pub fn nodes(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut pts = Vec::with_capacity(self.len());
        let mut ws = Vec::with_capacity(self.len());
        for p in &self.pieces {
            match p {
                Piece::Grid(b) => b.for_each_node(|x, w| {
                    pts.push(x);
                    ws.push(w);
                }),
                Piece::Cloud { points, weights } => {
                    pts.extend(points.iter().cloned());
                    ws.extend(weights.iter().cloned());
                }
            }
        }
        (pts, ws)
    }

    /// `AliasRisk` when the node spacing exceeds `1 / (4 max_i |xi_i|)`.
    pub fn nyquist_check(&self, max_coordinate: f64) -> Option<Warning> {
        if self.spacing * NYQUIST_FACTOR * max_coordinate > 1.0 + 1e-12 {
            Some(Warning::AliasRisk { spacing: self.spacing, max_frequency: max_coordinate })
        } else {
            None
        }
    }
}

/// Quadrature approximation of `∫ exp(-2 pi i xi·x) dmu(x)`.
pub fn fourier_transform(mu: &QuadratureMeasure, xi: &[f64]) -> Complex64 {
    mu.pieces
        .iter()
        .map(|p| match p {
            Piece::Grid(b) => b.transform(xi),
            Piece::Cloud { points, weights } => points
                .iter()
                .zip(weights)
                .map(|(x, w)| Complex64::from_polar(*w, -TAU * dot(xi, x)))
                .sum(),
        })
        .sum()
}

/// [`fourier_transform`] together with the Nyquist warning, if any.
pub fn fourier_transform_checked(mu: &QuadratureMeasure, xi: &[f64]) -> (Complex64, Option<Warning>) {
    let m = xi.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    (fourier_transform(mu, xi), mu.nyquist_check(m))
}

/// Tensor-product grid on a box facet with weights summing to its volume.
pub fn facet_quadrature(f: &Facet, resolution: f64) -> Result<QuadratureMeasure> {
    facet_quadrature_with(f, resolution, Rule::Midpoint)
}

pub fn facet_quadrature_with(f: &Facet, resolution: f64, rule: Rule) -> Result<QuadratureMeasure> {
    if !(resolution >= MIN_RESOLUTION) || !resolution.is_finite() {
        return Err(Error::ResolutionTooLow(resolution));
    }
    let rules: Vec<AxisRule> = f
        .sides
        .iter()
        .map(|&s| {
            let n = ((resolution * s) - 1e-9).ceil().max(1.0) as usize;
            match rule {
                Rule::Midpoint => AxisRule::Midpoint { n, h: s / n as f64 },
                Rule::GaussLegendre => {
                    let (t, w) = gauss_legendre_on(n, 0.0, s);
                    AxisRule::Nodes { t, w }
                }
            }
        })
        .collect();
    let spacing = rules.iter().map(AxisRule::spacing).fold(0.0, f64::max);
    let total_mass = rules.iter().map(AxisRule::mass).product();
    let provenance = match rule {
        Rule::Midpoint => "facet grid (midpoint)",
        Rule::GaussLegendre => "facet grid (gauss-legendre)",
    };
    Ok(QuadratureMeasure {
        dimension: f.ambient_dimension(),
        pieces: vec![Piece::Grid(GridBlock {
            origin: f.subspace.offset.clone(),
            axes: f.subspace.basis.clone(),
            rules,
        })],
        total_mass,
        provenance: provenance.to_string(),
        resolution,
        spacing,
    })
}

/// Sum of facet measures, the boundary measure of a polytope.
pub fn facets_quadrature(facets: &[Facet], resolution: f64) -> Result<QuadratureMeasure> {
    let parts = facets
        .iter()
        .map(|f| facet_quadrature(f, resolution))
        .collect::<Result<Vec<_>>>()?;
    QuadratureMeasure::union(&parts)
}

/// Surface measure of the centred sphere of the given radius in R^2 or R^3.
///
/// The circle uses the uniform trapezoid rule (spectrally accurate for
/// periodic integrands); the 2-sphere uses Gauss–Legendre in `cos θ` times
/// uniform longitudes.
pub fn sphere_quadrature(d: usize, radius: f64, resolution: f64) -> Result<QuadratureMeasure> {
    if !(resolution >= MIN_RESOLUTION) || !resolution.is_finite() {
        return Err(Error::ResolutionTooLow(resolution));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidBody(format!("radius {radius}")));
    }
    let (points, weights, provenance) = match d {
        2 => {
            let m = ((resolution * TAU * radius).ceil() as usize).max(8);
            let w = TAU * radius / m as f64;
            let pts = (0..m)
                .map(|j| {
                    let a = TAU * j as f64 / m as f64;
                    vec![radius * a.cos(), radius * a.sin()]
                })
                .collect();
            (pts, vec![w; m], "circle arc")
        }
        3 => {
            let nt = (resolution * PI * radius / 2.0).ceil() as usize + 8;
            let np = 2 * nt;
            let (zs, wz) = gauss_legendre_on(nt, -1.0, 1.0);
            let mut pts = Vec::with_capacity(nt * np);
            let mut ws = Vec::with_capacity(nt * np);
            for (z, wzi) in zs.iter().zip(&wz) {
                let s = (1.0 - z * z).max(0.0).sqrt();
                for k in 0..np {
                    let phi = TAU * k as f64 / np as f64;
                    pts.push(vec![radius * s * phi.cos(), radius * s * phi.sin(), radius * z]);
                    ws.push(radius * radius * wzi * TAU / np as f64);
                }
            }
            (pts, ws, "sphere grid")
        }
        _ => return Err(Error::UnsupportedDimension(d)),
    };
    let mut m = QuadratureMeasure::from_points(points, weights, provenance, resolution)?;
    m.spacing = match d {
        2 => TAU * radius / m.len() as f64,
        _ => PI * radius / ((resolution * PI * radius / 2.0).ceil() + 8.0),
    };
    Ok(m)
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

/// Exact transform of the unit sphere's surface measure in R^2 or R^3.
pub fn sphere_ft_closed_form(d: usize, xi: &[f64]) -> Result<Complex64> {
    let r = norm(xi);
    match d {
        2 => Ok(Complex64::new(TAU * bessel_j0(TAU * r), 0.0)),
        3 => {
            if r == 0.0 {
                Ok(Complex64::new(4.0 * PI, 0.0))
            } else {
                Ok(Complex64::new(2.0 * (TAU * r).sin() / r, 0.0))
            }
        }
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Leading stationary-phase term of the transform of a ball's boundary
/// measure: `C |xi|^{-(d-1)/2} cos(2 pi (rho*(xi) - (d-1)/8))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HerzAsymptotic {
    body: ConvexBody,
}

impl HerzAsymptotic {
    /// Only balls have a closed-form amplitude here.
    pub fn new(body: ConvexBody) -> Result<Self> {
        match body {
            ConvexBody::Ball { .. } => Ok(HerzAsymptotic { body }),
            _ => Err(Error::InvalidBody("asymptotic amplitude is only available for balls".into())),
        }
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn order(&self) -> f64 {
        (self.body.dimension() as f64 - 1.0) / 2.0
    }

    pub fn phase_shift(&self) -> f64 {
        (self.body.dimension() as f64 - 1.0) / 8.0
    }

    /// Direction-independent amplitude `2 R^{(d-1)/2}` of the radius-R sphere.
    pub fn amplitude(&self, _direction: &[f64]) -> f64 {
        2.0 * self.body.circumradius().powf(self.order())
    }

    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        let r = norm(xi);
        if r <= 1.0 {
            return Err(Error::TooCloseToOrigin(r));
        }
        let dir = scale(xi, 1.0 / r);
        Ok(self.amplitude(&dir)
            * r.powf(-self.order())
            * (TAU * (self.body.dual_norm(xi) - self.phase_shift())).cos())
    }
}

/// Convenience wrapper matching the other free functions.
pub fn herz_eval(h: &HerzAsymptotic, xi: &[f64]) -> Result<f64> {
    h.eval(xi)
}

/// Least-squares line through `(x, y)` with the standard error of the slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_stderr = if n > 2.0 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    LineFit { slope, intercept, slope_stderr }
}

/// Fit of `log y` against `log x`.
pub fn fit_loglog(x: &[f64], y: &[f64]) -> LineFit {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

/// How well the leading term tracks the exact circle/sphere transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerzComparison {
    /// Slope of the log-log fit of the residual envelope.
    pub residual_slope: f64,
    pub residual_slope_stderr: f64,
    /// Window centres and residual maxima used in the fit.
    pub envelope: Vec<(f64, f64)>,
    /// Largest distance from a zero of the exact transform to the nearest
    /// zero of the asymptotic cosine on `zero_range`.
    pub max_zero_offset: f64,
    pub zeros_compared: usize,
}

/// Compares the unit-sphere transform with its leading term along a ray.
///
/// The residual oscillates through zero, so the slope is fitted to its
/// maxima over windows of unit length (one period of the cosine).
pub fn herz_comparison(d: usize, fit_range: (f64, f64), zero_range: (f64, f64), samples_per_unit: usize) -> Result<HerzComparison> {
    let h = HerzAsymptotic::new(ConvexBody::unit_ball(d)?)?;
    let ray = |s: f64| {
        let mut v = vec![0.0; d];
        v[0] = s;
        v
    };
    let exact = |s: f64| -> Result<f64> { Ok(sphere_ft_closed_form(d, &ray(s))?.re) };
    let mut envelope = Vec::new();
    let mut start = fit_range.0;
    while start + 1.0 <= fit_range.1 + 1e-12 {
        let mut best: f64 = 0.0;
        for j in 0..=samples_per_unit {
            let s = start + j as f64 / samples_per_unit as f64;
            best = best.max((exact(s)? - h.eval(&ray(s))?).abs());
        }
        envelope.push((start + 0.5, best));
        start += 1.0;
    }
    let fit = if envelope.iter().all(|e| e.1 > 0.0) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = envelope.iter().cloned().unzip();
        fit_loglog(&xs, &ys)
    } else {
        // exact agreement (d = 3): report an infinitely steep decay
        LineFit { slope: f64::NEG_INFINITY, intercept: f64::NAN, slope_stderr: 0.0 }
    };

    let exact_zeros = bracket_zeros(|s| exact(s).unwrap_or(f64::NAN), zero_range, samples_per_unit)?;
    let phase = h.phase_shift();
    let mut max_zero_offset: f64 = 0.0;
    for z in &exact_zeros {
        // zeros of cos(2 pi (s - phase)) sit at s = phase + 1/4 + k/2
        let k = ((z - phase - 0.25) * 2.0).round();
        let nearest = phase + 0.25 + k / 2.0;
        max_zero_offset = max_zero_offset.max((z - nearest).abs());
    }
    Ok(HerzComparison {
        residual_slope: fit.slope,
        residual_slope_stderr: fit.slope_stderr,
        envelope,
        max_zero_offset,
        zeros_compared: exact_zeros.len(),
    })
}

/// Sign changes of `f` on a uniform grid, refined by bisection.
pub fn bracket_zeros(f: impl Fn(f64) -> f64, range: (f64, f64), samples_per_unit: usize) -> Result<Vec<f64>> {
    let n = ((range.1 - range.0) * samples_per_unit as f64).ceil() as usize;
    let step = (range.1 - range.0) / n as f64;
    let mut zeros = Vec::new();
    let mut a = range.0;
    let mut fa = f(a);
    for i in 1..=n {
        let b = range.0 + i as f64 * step;
        let fb = f(b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
                if hi - lo < 1e-14 {
                    break;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{unit_box, Facet};

    #[test]
    fn facet_masses() {
        let seg = Facet::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], vec![1.0]).unwrap();
        let q = facet_quadrature(&seg, 10.0).unwrap();
        assert_eq!(q.len(), 10);
        assert!((q.total_mass() - 1.0).abs() < 1e-14);
        let sq = facet_quadrature(&unit_box(2), 10.0).unwrap();
        assert_eq!(sq.len(), 100);
        let b = Facet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0], vec![2.0, 3.0]).unwrap();
        assert!((facet_quadrature(&b, 10.0).unwrap().total_mass() - 6.0).abs() < 1e-12);
        assert!(matches!(facet_quadrature(&seg, 1.5), Err(Error::ResolutionTooLow(_))));
    }

    #[test]
    fn sphere_masses() {
        assert!((sphere_quadrature(2, 1.0, 10.0).unwrap().total_mass() - TAU).abs() < 1e-10);
        assert!((sphere_quadrature(3, 1.0, 10.0).unwrap().total_mass() - 4.0 * PI).abs() < 1e-10);
        assert!((sphere_quadrature(3, 2.0, 10.0).unwrap().total_mass() - 16.0 * PI).abs() < 1e-10);
        assert!(matches!(sphere_quadrature(4, 1.0, 10.0), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn closed_form_grid_matches_direct_sum() {
        let b = Facet::new(
            vec![vec![0.6, 0.8, 0.0], vec![0.0, 0.0, 1.0]],
            vec![0.3, -1.0, 2.0],
            vec![1.5, 0.7],
        )
        .unwrap();
        let q = facet_quadrature(&b, 9.0).unwrap();
        let (pts, ws) = q.nodes();
        let doc = QuadratureMeasure::from_points(pts, ws, "copy", 9.0).unwrap();
        for xi in [[0.0, 0.0, 0.0], [1.3, -2.2, 0.4], [10.0 / 1.5, 0.0, 0.0], [30.0, 40.0, -7.0]] {
            let a = fourier_transform(&q, &xi);
            let b = fourier_transform(&doc, &xi);
            assert!((a - b).norm() < 1e-10, "{xi:?}: {a} vs {b}");
        }
    }

    #[test]
    fn centroid_of_grid_and_cloud() {
        let b = Facet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, -1.0], vec![2.0, 3.0]).unwrap();
        for rule in [Rule::Midpoint, Rule::GaussLegendre] {
            let c = facet_quadrature_with(&b, 7.0, rule).unwrap().centroid();
            assert!((c[0] - 2.0).abs() < 1e-12 && (c[1] - 0.5).abs() < 1e-12, "{c:?}");
        }
        let c = sphere_quadrature(2, 1.0, 8.0).unwrap().centroid();
        assert!(c[0].abs() < 1e-12 && c[1].abs() < 1e-12);
    }

    #[test]
    fn transform_at_origin_is_mass() {
        let q = sphere_quadrature(2, 1.5, 8.0).unwrap();
        assert!((fourier_transform(&q, &[0.0, 0.0]).re - q.total_mass()).abs() < 1e-12);
    }

    #[test]
    fn herz_examples() {
        let h = HerzAsymptotic::new(ConvexBody::unit_ball(2).unwrap()).unwrap();
        let v = h.eval(&[25.0, 0.0]).unwrap();
        assert!((v - 0.4 * 0.5f64.sqrt()).abs() < 1e-12);
        assert!((v - TAU * bessel_j0(TAU * 25.0)).abs() <= 0.01);
        assert!(matches!(h.eval(&[1.0, 0.0]), Err(Error::TooCloseToOrigin(_))));
        // rho* - 1/8 = 3/8 + k is a zero of the cosine
        assert!(h.eval(&[0.0, 3.375]).unwrap().abs() < 1e-12);
        assert!(HerzAsymptotic::new(ConvexBody::ellipsoid(vec![1.0, 2.0]).unwrap()).is_err());
    }

    #[test]
    fn alias_warning() {
        let seg = Facet::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], vec![1.0]).unwrap();
        let q = facet_quadrature(&seg, 10.0).unwrap();
        assert!(fourier_transform_checked(&q, &[2.0, 0.0]).1.is_none());
        assert!(fourier_transform_checked(&q, &[3.0, 0.0]).1.is_some());
    }

    #[test]
    fn line_fit_recovers_power() {
        let x: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-1.5)).collect();
        let f = fit_loglog(&x, &y);
        assert!((f.slope + 1.5).abs() < 1e-12);
        assert!(f.slope_stderr < 1e-10);
    }
}

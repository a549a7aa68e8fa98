//! Frame and Bessel bound estimation for a (measure, spectrum) pair.
//!
//! Bounds are estimated on a finite test space of exponentials
//! `e_xi(x) = exp(2 pi i xi·x)` with `xi` on a grid inside `B_band`. With the
//! test Gram `G_kl = <e_l, e_k>` and the analysis matrix
//! `Phi_{lambda,k} = <e_k, e_lambda>`, the frame ratio of `f = sum c_k e_k` is
//! `|Phi c|^2 / c* G c`. The full span is numerically meaningless (the Gram
//! is extremely ill-conditioned and contains combinations spiking at the
//! boundary of the support), so the test space is restricted to
//! combinations concentrated on the support relative to a slightly larger
//! reference set, in the spirit of prolate spheroidal functions. The estimates are the extremal eigenvalues of the frame
//! operator in an orthonormal basis of that space.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::geometry::Facet;
use crate::linalg::{
    distance, extremal_eigenvalues_power, hermitian_eigenvalues, norm, sub,
};
use crate::measure::{
    facets_quadrature, fourier_transform, sphere_quadrature, QuadratureMeasure, NYQUIST_FACTOR,
};
use crate::quadrature::composite_gauss_legendre;

/// Provenance of one spectrum point in the polytope construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumTag {
    pub class: usize,
    pub lattice: Vec<i64>,
    pub phase: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpectrumDocument {
    frequencies: Vec<Vec<f64>>,
    #[serde(default)]
    tags: Option<Vec<SpectrumTag>>,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    window: Option<f64>,
}

/// Finite set of frequencies, validated on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumDocument")]
pub struct Spectrum {
    frequencies: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tags: Option<Vec<SpectrumTag>>,
    delta: Option<f64>,
    window: f64,
}

impl TryFrom<SpectrumDocument> for Spectrum {
    type Error = Error;

    fn try_from(doc: SpectrumDocument) -> Result<Self> {
        let window = doc.window.unwrap_or_else(|| reach_of(&doc.frequencies));
        Spectrum::new(doc.frequencies, doc.tags, doc.delta, window)
    }
}

fn reach_of(freqs: &[Vec<f64>]) -> f64 {
    freqs.iter().map(|f| norm(f)).fold(0.0, f64::max)
}

impl Spectrum {
    /// Checks dimensions and pairwise distinctness. For untagged spectra a
    /// given `delta` is asserted as a separation; for tagged (constructed)
    /// spectra it records the construction's target separation of foreign
    /// projections, which the construction audits itself.
    pub fn new(
        frequencies: Vec<Vec<f64>>,
        tags: Option<Vec<SpectrumTag>>,
        delta: Option<f64>,
        window: f64,
    ) -> Result<Self> {
        let d = frequencies.first().map(Vec::len).unwrap_or(0);
        if let Some(f) = frequencies.iter().find(|f| f.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: f.len() });
        }
        if frequencies.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite frequency".into()));
        }
        if let Some(t) = &tags {
            if t.len() != frequencies.len() {
                return Err(Error::InvalidSpectrum(format!(
                    "{} tags for {} frequencies",
                    t.len(),
                    frequencies.len()
                )));
            }
        }
        let mut sorted: Vec<&Vec<f64>> = frequencies.iter().collect();
        sorted.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpectrum(format!("repeated frequency {:?}", w[0])));
        }
        if let Some(delta) = delta {
            if !(delta > 0.0) {
                return Err(Error::InvalidSpectrum(format!("separation {delta} must be positive")));
            }
        }
        if let (Some(delta), None) = (delta, &tags) {
            if let Some((a, b)) = closest_pair_below(&frequencies, delta) {
                return Err(Error::InvalidSpectrum(format!(
                    "points {:?} and {:?} are closer than {delta}",
                    frequencies[a], frequencies[b]
                )));
            }
        }
        Ok(Spectrum { frequencies, tags, delta, window })
    }

    pub fn untagged(frequencies: Vec<Vec<f64>>) -> Result<Self> {
        let window = reach_of(&frequencies);
        Spectrum::new(frequencies, None, None, window)
    }

    /// `Z^d ∩ B_radius` (closed ball), ordered lexicographically.
    pub fn integer_ball(d: usize, radius: f64) -> Self {
        let pts = integer_points_in_ball(d, radius)
            .into_iter()
            .map(|p| p.into_iter().map(|x| x as f64).collect())
            .collect();
        Spectrum { frequencies: pts, tags: None, delta: Some(1.0), window: radius }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn frequencies(&self) -> &[Vec<f64>] {
        &self.frequencies
    }

    pub fn tags(&self) -> Option<&[SpectrumTag]> {
        self.tags.as_deref()
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.frequencies.first().map(Vec::len).unwrap_or(0)
    }

    /// Largest `|lambda|`.
    pub fn reach(&self) -> f64 {
        reach_of(&self.frequencies)
    }

    /// Largest coordinate magnitude, used by the Nyquist rule.
    pub fn max_coordinate(&self) -> f64 {
        self.frequencies.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    /// Sub-spectrum of points satisfying `keep`; tags follow their points.
    pub fn filter(&self, keep: impl Fn(&[f64]) -> bool) -> Self {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(&self.frequencies[i])).collect();
        Spectrum {
            frequencies: idx.iter().map(|&i| self.frequencies[i].clone()).collect(),
            tags: self.tags.as_ref().map(|t| idx.iter().map(|&i| t[i].clone()).collect()),
            delta: self.delta,
            window: self.window,
        }
    }

    /// Smallest pairwise distance (infinite for fewer than two points).
    pub fn min_separation(&self) -> f64 {
        min_pairwise_distance(&self.frequencies)
    }
}

/// All integer points with `|z| <= radius`, lexicographic order.
pub fn integer_points_in_ball(d: usize, radius: f64) -> Vec<Vec<i64>> {
    let r = radius.floor() as i64;
    let r2 = radius * radius + 1e-9;
    let mut out = Vec::new();
    let mut cur = vec![-r; d];
    if d == 0 {
        return out;
    }
    loop {
        let n2: f64 = cur.iter().map(|&x| (x * x) as f64).sum();
        if n2 <= r2 {
            out.push(cur.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -r;
                }
                break;
            }
        }
    }
}

fn cell_of(x: &[f64], size: f64) -> Vec<i64> {
    x.iter().map(|v| (v / size).floor() as i64).collect()
}

fn neighbour_cells(c: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![c.to_vec()];
    for i in 0..c.len() {
        let mut next = Vec::with_capacity(out.len() * 3);
        for base in &out {
            for off in [-1, 0, 1] {
                let mut v = base.clone();
                v[i] += off;
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// First pair of points at distance `< delta`, found with a hash grid.
pub fn closest_pair_below(points: &[Vec<f64>], delta: f64) -> Option<(usize, usize)> {
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let c = cell_of(p, delta);
        for n in neighbour_cells(&c) {
            if let Some(list) = grid.get(&n) {
                for &j in list {
                    if distance(p, &points[j]) < delta {
                        return Some((j, i));
                    }
                }
            }
        }
        grid.entry(c).or_default().push(i);
    }
    None
}

/// Exact smallest pairwise distance (quadratic; meant for audits and tests).
pub fn min_pairwise_distance(points: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(distance(a, b));
        }
    }
    best
}

/// Surface measure that can be discretised at any resolution.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceMeasure {
    /// Sum of Hausdorff measures on box facets.
    Facets(Vec<Facet>),
    /// Surface measure of the centred sphere.
    Sphere { dimension: usize, radius: f64 },
    /// An explicit quadrature, used as is (no refinement ladder).
    Fixed(QuadratureMeasure),
}

impl SurfaceMeasure {
    pub fn dimension(&self) -> usize {
        match self {
            SurfaceMeasure::Facets(f) => f.first().map(Facet::ambient_dimension).unwrap_or(0),
            SurfaceMeasure::Sphere { dimension, .. } => *dimension,
            SurfaceMeasure::Fixed(q) => q.dimension(),
        }
    }

    pub fn quadrature(&self, resolution: f64) -> Result<QuadratureMeasure> {
        match self {
            SurfaceMeasure::Facets(f) => facets_quadrature(f, resolution),
            SurfaceMeasure::Sphere { dimension, radius } => sphere_quadrature(*dimension, *radius, resolution),
            SurfaceMeasure::Fixed(q) => Ok(q.clone()),
        }
    }

    /// Reference measure for the concentration criterion: every facet
    /// doubled about its centre. Spheres and fixed quadratures have none.
    pub fn reference_quadrature(&self, resolution: f64) -> Result<Option<QuadratureMeasure>> {
        match self {
            SurfaceMeasure::Facets(f) => {
                let doubled = f
                    .iter()
                    .map(|f| {
                        let mut offset = f.subspace.offset.clone();
                        for (b, s) in f.subspace.basis.iter().zip(&f.sides) {
                            offset = sub(&offset, &crate::linalg::scale(b, s / 2.0));
                        }
                        Facet::new(f.subspace.basis.clone(), offset, f.sides.iter().map(|s| 2.0 * s).collect())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Some(facets_quadrature(&doubled, resolution)?))
            }
            _ => Ok(None),
        }
    }

    /// Resolution meeting the Nyquist rule for `max_coordinate`, with
    /// oversampling where it is free (grid facets).
    pub fn default_resolution(&self, max_coordinate: f64) -> f64 {
        let base = (NYQUIST_FACTOR * max_coordinate).max(8.0);
        match self {
            SurfaceMeasure::Facets(_) => 16.0 * base,
            SurfaceMeasure::Sphere { .. } => 2.0 * base,
            SurfaceMeasure::Fixed(q) => q.resolution(),
        }
    }
}

/// Knobs for [`frame_bounds`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FrameOptions {
    /// Spacing of the test-frequency grid.
    pub grid_spacing: f64,
    /// Smallest accepted ratio `|f|^2_mu / |f|^2_reference` (relative to
    /// the best one) for test combinations. 0 keeps the whole span and fails
    /// on an ill-conditioned Gram.
    pub concentration: f64,
    /// Base resolution; chosen from the Nyquist rule when absent.
    pub resolution: Option<f64>,
    /// Resolutions `resolution * 2^i`, `i < ladder`, form the history.
    pub ladder: usize,
    pub max_condition: f64,
    pub dense_limit: usize,
    pub power_tolerance: f64,
}

impl Default for FrameOptions {
    fn default() -> Self {
        FrameOptions {
            grid_spacing: 0.5,
            concentration: 0.9,
            resolution: None,
            ladder: 2,
            max_condition: 1e10,
            dense_limit: 2000,
            power_tolerance: 1e-8,
        }
    }
}

/// One rung of the resolution ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub resolution: f64,
    pub a_est: f64,
    pub b_est: f64,
}

/// Description of the test family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSpace {
    pub band: f64,
    pub grid_spacing: f64,
    /// Number of grid exponentials in `B_band`.
    pub dimension: usize,
    /// Number of concentrated directions kept.
    pub selected: usize,
    pub gram_condition: f64,
}

/// Estimated frame bounds. These are discretisation estimates, never
/// certified bounds, which the `certified` flag records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub a_est: f64,
    pub b_est: f64,
    pub band: f64,
    pub resolution: f64,
    pub certified: bool,
    pub spectrum_size: usize,
    pub test_space: TestSpace,
    pub history: Vec<HistoryEntry>,
    /// Largest relative change of either bound along the ladder.
    pub drift: f64,
    pub warnings: Vec<Warning>,
}

/// Outcome of a single-resolution computation.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBounds {
    pub a_est: f64,
    pub b_est: f64,
    pub test_space: TestSpace,
    pub warnings: Vec<Warning>,
}

/// Rows `sqrt(w_i) exp(-2 pi i lambda·x_i)` over the materialised nodes.
pub fn analysis_matrix(mu: &QuadratureMeasure, spectrum: &Spectrum) -> (DMatrix<Complex64>, Option<Warning>) {
    let (pts, ws) = mu.nodes();
    let m = DMatrix::from_fn(spectrum.len(), pts.len(), |r, c| {
        let phase = -TAU * crate::linalg::dot(&spectrum.frequencies[r], &pts[c]);
        Complex64::from_polar(ws[c].sqrt(), phase)
    });
    (m, mu.nyquist_check(spectrum.max_coordinate()))
}

/// Test frequencies `spacing·Z^d ∩ B_band`.
pub fn test_grid(d: usize, band: f64, spacing: f64) -> Vec<Vec<f64>> {
    integer_points_in_ball(d, band / spacing)
        .into_iter()
        .map(|z| z.into_iter().map(|v| v as f64 * spacing).collect())
        .collect()
}

/// Frame bounds at the measure's own resolution.
///
/// With a `reference` measure (for facets: each facet doubled about its
/// centre) the test space is the span of combinations `f` with
/// `|f|^2_mu >= concentration |f|^2_reference`. Without one it is the range
/// of the test Gram up to the condition cap.
pub fn frame_bounds_discrete(
    mu: &QuadratureMeasure,
    reference: Option<&QuadratureMeasure>,
    spectrum: &Spectrum,
    band: f64,
    opts: &FrameOptions,
) -> Result<DiscreteBounds> {
    let d = mu.dimension();
    if !spectrum.is_empty() && spectrum.dimension() != d {
        return Err(Error::DimensionMismatch { expected: d, found: spectrum.dimension() });
    }
    let mut warnings = Vec::new();
    if band > spectrum.reach() - 1.0 {
        warnings.push(Warning::BandExceedsSpectrum { band, reach: spectrum.reach() });
    }
    let grid = test_grid(d, band, opts.grid_spacing);
    let max_coord = spectrum.max_coordinate() + band;
    if let Some(w) = mu.nyquist_check(max_coord) {
        warnings.push(w);
    }
    // Frame ratios do not change when the measure is translated (the phases
    // factor out of every modulus), so centre it first: for centrally
    // symmetric measures the Grams are then real and the cheaper real
    // eigensolver applies.
    let shift = crate::linalg::scale(&mu.centroid(), -1.0);
    let mu = &mu.translated(&shift);
    let reference = reference.map(|r| r.translated(&shift));
    let n = grid.len();
    let gram = |m: &QuadratureMeasure| DMatrix::from_fn(n, n, |k, l| fourier_transform(m, &sub(&grid[k], &grid[l])));

    let (basis, cond) = match &reference {
        Some(nu) => {
            // orthonormal basis of the span in L^2(reference) ...
            let e = gram_eigen(&gram(nu));
            let top = e.eigenvalues.iter().cloned().fold(0.0, f64::max);
            let range: Vec<usize> = (0..n).filter(|&i| e.eigenvalues[i] > RANGE_FLOOR * top).collect();
            let w = DMatrix::from_fn(n, range.len(), |row, c| {
                e.eigenvectors[(row, range[c])] / e.eigenvalues[range[c]].sqrt()
            });
            // ... then the concentration operator on it
            let conc = gram_eigen(&(w.adjoint() * gram(mu) * &w));
            let cmax = conc.eigenvalues.iter().cloned().fold(0.0, f64::max);
            let keep: Vec<usize> = (0..range.len())
                .filter(|&i| conc.eigenvalues[i] > 0.0 && conc.eigenvalues[i] >= opts.concentration * cmax)
                .collect();
            let cmin = keep.iter().map(|&i| conc.eigenvalues[i]).fold(f64::INFINITY, f64::min);
            let u = DMatrix::from_fn(range.len(), keep.len(), |row, c| {
                conc.eigenvectors[(row, keep[c])] / conc.eigenvalues[keep[c]].sqrt()
            });
            (w * u, cmax / cmin)
        }
        None => {
            let e = gram_eigen(&gram(mu));
            let top = e.eigenvalues.iter().cloned().fold(0.0, f64::max);
            let floor = (top / opts.max_condition).max(RANGE_FLOOR * top);
            let keep: Vec<usize> = (0..n).filter(|&i| e.eigenvalues[i] >= floor).collect();
            let low = e.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            if opts.concentration == 0.0 && keep.len() < n {
                return Err(Error::IllConditionedTestGram(if low > 0.0 { top / low } else { f64::INFINITY }));
            }
            let kept_low = keep.iter().map(|&i| e.eigenvalues[i]).fold(f64::INFINITY, f64::min);
            let w = DMatrix::from_fn(n, keep.len(), |row, c| {
                e.eigenvectors[(row, keep[c])] / e.eigenvalues[keep[c]].sqrt()
            });
            (w, top / kept_low)
        }
    };
    let r = basis.ncols();
    if r == 0 || !cond.is_finite() || cond > opts.max_condition {
        return Err(Error::IllConditionedTestGram(cond));
    }
    // Frame operator in that basis, accumulated in row blocks of the spectrum.
    let mut h = DMatrix::<Complex64>::zeros(r, r);
    const CHUNK: usize = 2048;
    for start in (0..spectrum.len()).step_by(CHUNK) {
        let end = (start + CHUNK).min(spectrum.len());
        let phi = DMatrix::from_fn(end - start, n, |i, k| {
            fourier_transform(mu, &sub(&spectrum.frequencies[start + i], &grid[k]))
        });
        let z = phi * &basis;
        h.gemm(Complex64::new(1.0, 0.0), &z.adjoint(), &z, Complex64::new(1.0, 0.0));
    }
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let (a, b) = if r <= opts.dense_limit {
        let ev = hermitian_eigenvalues(&h);
        (ev[0], ev[ev.len() - 1])
    } else {
        extremal_eigenvalues_power(&h, opts.power_tolerance, 10_000)
    };
    let a = a.max(0.0);
    Ok(DiscreteBounds {
        a_est: a,
        b_est: b.max(a),
        test_space: TestSpace {
            band,
            grid_spacing: opts.grid_spacing,
            dimension: n,
            selected: r,
            gram_condition: cond,
        },
        warnings,
    })
}

/// Relative eigenvalue floor below which a Gram direction counts as null.
const RANGE_FLOOR: f64 = 1e-10;

struct GramEigen {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

fn gram_eigen(g: &DMatrix<Complex64>) -> GramEigen {
    let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if g.iter().all(|z| z.im.abs() <= 1e-13 * scale) {
        let e = g.map(|z| z.re).symmetric_eigen();
        GramEigen {
            eigenvalues: e.eigenvalues.iter().cloned().collect(),
            eigenvectors: e.eigenvectors.map(|x| Complex64::new(x, 0.0)),
        }
    } else {
        let e = g.clone().symmetric_eigen();
        GramEigen { eigenvalues: e.eigenvalues.iter().cloned().collect(), eigenvectors: e.eigenvectors }
    }
}

/// Frame bounds with a resolution ladder; the reported values come from the
/// finest rung.
pub fn frame_bounds(
    surface: &SurfaceMeasure,
    spectrum: &Spectrum,
    band: f64,
    opts: &FrameOptions,
) -> Result<FrameReport> {
    let base = opts
        .resolution
        .unwrap_or_else(|| surface.default_resolution(spectrum.max_coordinate() + band));
    let rungs = if matches!(surface, SurfaceMeasure::Fixed(_)) { 1 } else { opts.ladder.max(1) };
    let mut history = Vec::new();
    let mut last = None;
    for i in 0..rungs {
        let res = base * 2f64.powi(i as i32);
        let mu = surface.quadrature(res)?;
        let reference = surface.reference_quadrature(res)?;
        let out = frame_bounds_discrete(&mu, reference.as_ref(), spectrum, band, opts)?;
        history.push(HistoryEntry { resolution: mu.resolution(), a_est: out.a_est, b_est: out.b_est });
        last = Some((mu.resolution(), out));
    }
    let (resolution, out) = last.expect("at least one rung");
    let rel = |x: f64, y: f64| if y.abs() > 0.0 { ((x - y) / y).abs() } else { (x - y).abs() };
    let drift = history
        .windows(2)
        .map(|w| rel(w[0].a_est, w[1].a_est).max(rel(w[0].b_est, w[1].b_est)))
        .fold(0.0, f64::max);
    Ok(FrameReport {
        a_est: out.a_est,
        b_est: out.b_est,
        band,
        resolution,
        certified: false,
        spectrum_size: spectrum.len(),
        test_space: out.test_space,
        history,
        drift,
        warnings: out.warnings,
    })
}

/// Volume of the unit ball in R^d.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => TAU / d as f64 * unit_ball_volume(d - 2),
    }
}

/// Smooth step from 0 to 1 on [0, 1] built from `exp(-1/t)`.
pub fn smoothstep(t: f64) -> f64 {
    let f = |s: f64| if s > 0.0 { (-1.0 / s).exp() } else { 0.0 };
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        f(t) / (f(t) + f(1.0 - t))
    }
}

/// The one-dimensional cutoff: 1 on [0,1], supported in [-1,2].
pub fn bump(x: f64) -> f64 {
    if (0.0..=1.0).contains(&x) {
        1.0
    } else if (-1.0..0.0).contains(&x) {
        smoothstep(x + 1.0)
    } else if x > 1.0 && x <= 2.0 {
        smoothstep(2.0 - x)
    } else {
        0.0
    }
}

const BUMP_STEP: f64 = 1.0 / 1024.0;
const BUMP_EXTENT: f64 = 64.0;
/// `||g''||_1` for the centred bump `g`; equals `4 max S' = 8`.
const BUMP_SECOND_VARIATION: f64 = 8.0;

struct BumpTransform {
    /// `|G(j h)|` for `j = 0 ..= T/h`, where `G` is the (real) transform of
    /// the bump centred at the origin; `|phi^| = |G|`.
    values: Vec<f64>,
    /// `|G'(j h)|`.
    slopes: Vec<f64>,
    /// Bound for `sup |G''|`.
    curvature: f64,
}

/// Centred bump `g(u) = bump(u + 1/2)`: 1 on `|u| <= 1/2`, smooth down to 0 at `|u| = 3/2`.
fn centred_bump(u: f64) -> f64 {
    bump(u + 0.5)
}

fn bump_nodes() -> (Vec<f64>, Vec<f64>) {
    let (mut us, mut ws) = composite_gauss_legendre(16, 32, 0.0, 0.5);
    let (u2, w2) = composite_gauss_legendre(16, 64, 0.5, 1.5);
    us.extend(u2);
    ws.extend(w2);
    (us, ws)
}

fn bump_transform() -> &'static BumpTransform {
    static CELL: OnceLock<BumpTransform> = OnceLock::new();
    CELL.get_or_init(|| {
        let count = (BUMP_EXTENT / BUMP_STEP) as usize;
        // G(xi) = 2 ∫_0^{3/2} g cos(2 pi xi u), G'(xi) = -2 ∫_0^{3/2} 2 pi u g sin(2 pi xi u),
        // with a phasor recurrence in xi re-seeded every 1024 steps.
        let (us, ws) = bump_nodes();
        let amp: Vec<f64> = us.iter().zip(&ws).map(|(u, w)| 2.0 * w * centred_bump(*u)).collect();
        let steps: Vec<Complex64> = us.iter().map(|u| Complex64::from_polar(1.0, TAU * BUMP_STEP * u)).collect();
        let mut phase = vec![Complex64::new(1.0, 0.0); us.len()];
        let mut values = Vec::with_capacity(count + 1);
        let mut slopes = Vec::with_capacity(count + 1);
        for j in 0..=count {
            if j % 1024 == 0 {
                let xi = j as f64 * BUMP_STEP;
                for (p, u) in phase.iter_mut().zip(&us) {
                    *p = Complex64::from_polar(1.0, TAU * xi * u);
                }
            }
            let mut g = 0.0;
            let mut dg = 0.0;
            for ((a, p), u) in amp.iter().zip(&phase).zip(&us) {
                g += a * p.re;
                dg -= TAU * u * a * p.im;
            }
            values.push(g.abs());
            slopes.push(dg.abs());
            for (p, s) in phase.iter_mut().zip(&steps) {
                *p *= s;
            }
        }
        let second_moment: f64 = us.iter().zip(&amp).map(|(u, a)| a * u * u).sum();
        BumpTransform { values, slopes, curvature: 4.0 * PI * PI * second_moment }
    })
}

/// `|phi^|` of the one-dimensional cutoff at `xi`, by direct quadrature.
pub fn bump_transform_abs(xi: f64) -> f64 {
    let (us, ws) = bump_nodes();
    us.iter()
        .zip(&ws)
        .map(|(u, w)| 2.0 * w * centred_bump(*u) * (TAU * xi * u).cos())
        .sum::<f64>()
        .abs()
}

/// Upper bound for `∫ sup_{|y-x|<=radius} |phi^(y)| dx` over the real line.
///
/// On each grid cell `|G|` is bounded from its endpoint values and a local
/// Lipschitz constant (endpoint slopes plus a curvature term); the maximal
/// function on a cell is bounded by the largest cell bound within reach.
/// Beyond the table, `|G(x)| <= ||g''||_1 / (4 pi^2 x^2)`.
pub fn bump_maximal_l1(radius: f64) -> f64 {
    let t = bump_transform();
    let h = BUMP_STEP;
    let cells = t.values.len() - 1;
    let cell_bound: Vec<f64> = (0..cells)
        .map(|k| {
            let lip = t.slopes[k].max(t.slopes[k + 1]) + t.curvature * h / 2.0;
            t.values[k].max(t.values[k + 1]) + lip * h / 2.0
        })
        .collect();
    // cell k < 0 mirrors cell -k-1
    let bound = |k: i64| cell_bound[if k < 0 { (-k - 1) as usize } else { k as usize }];
    let w = (radius / h).ceil() as i64;
    let covered = cells as i64 - w;
    let mut total = 0.0;
    for j in 0..covered.max(0) {
        let m = ((j - w)..=(j + w)).map(bound).fold(0.0, f64::max);
        total += h * m;
    }
    let edge = covered.max(0) as f64 * h;
    let tail = BUMP_SECOND_VARIATION / (4.0 * PI * PI * (edge - radius));
    2.0 * (total + tail)
}

/// Certified upper Bessel bound of `{e_gamma}` in `L^2([0,1]^d)` valid for
/// every `delta`-separated set `Gamma`.
///
/// With `phi` the product cutoff and `F = |phi^|`,
/// `sum |f^(gamma)|^2 <= ||F||_1 ||F^#||_1 / (v_d (delta/2)^d) ||f||^2`, where
/// `F^#` is the maximal function of radius `delta/2`, so that the balls
/// around distinct points are disjoint. The ball maximal function is
/// dominated by the product of one-dimensional ones.
pub fn certified_bessel_constant(delta: f64, d: usize) -> Result<f64> {
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if d == 0 {
        return Err(Error::UnsupportedDimension(d));
    }
    let rho = delta / 2.0;
    let l1 = bump_maximal_l1(rho);
    Ok(l1.powi(2 * d as i32) / (unit_ball_volume(d) * rho.powi(d as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::unit_box;
    use crate::measure::facet_quadrature;

    #[test]
    fn integer_ball_counts() {
        assert_eq!(integer_points_in_ball(1, 12.0).len(), 25);
        assert_eq!(integer_points_in_ball(2, 10.5).len(), 349);
        assert_eq!(integer_points_in_ball(2, 0.5).len(), 1);
    }

    #[test]
    fn spectrum_validation() {
        assert!(Spectrum::untagged(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        let s = Spectrum::new(vec![vec![0.0], vec![0.05]], None, Some(0.1), 1.0);
        assert!(matches!(s, Err(Error::InvalidSpectrum(_))));
        assert!(Spectrum::new(vec![vec![0.0], vec![0.1]], None, Some(0.1), 1.0).is_ok());
    }

    #[test]
    fn spectrum_json_roundtrip() {
        let s = Spectrum::integer_ball(2, 3.0);
        let back = Spectrum::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(s, back);
        let bad = r#"{"frequencies": [[0.0], [0.01]], "delta": 0.1, "window": 1.0}"#;
        assert!(Spectrum::from_json(bad).is_err());
    }

    #[test]
    fn analysis_matrix_examples() {
        let seg = crate::geometry::Facet::new(vec![vec![1.0]], vec![0.0], vec![1.0]).unwrap();
        let q = facet_quadrature(&seg, 100.0).unwrap();
        let s = Spectrum::untagged(vec![vec![0.0], vec![1.0]]).unwrap();
        let (m, _) = analysis_matrix(&q, &s);
        let (_, ws) = q.nodes();
        let row0: Complex64 = (0..ws.len()).map(|c| m[(0, c)] * ws[c].sqrt()).sum();
        assert!((row0.re - 1.0).abs() < 1e-12);
        let inner: Complex64 = (0..ws.len()).map(|c| m[(0, c)] * m[(1, c)].conj()).sum();
        assert!(inner.norm() < 1e-6);
    }

    #[test]
    fn circle_single_frequency() {
        let s = Spectrum::untagged(vec![vec![0.0, 0.0]]).unwrap();
        let r = frame_bounds(&SurfaceMeasure::Sphere { dimension: 2, radius: 1.0 }, &s, 1.0, &FrameOptions::default())
            .unwrap();
        assert!(r.a_est < r.b_est);
        assert!(r.b_est <= TAU * TAU + 1e-6);
        assert!(!r.certified);
    }

    #[test]
    fn lattice_on_unit_box_is_nearly_tight() {
        let s = Spectrum::integer_ball(2, 8.0);
        let r = frame_bounds(&SurfaceMeasure::Facets(vec![unit_box(2)]), &s, 3.0, &FrameOptions::default()).unwrap();
        assert!(r.b_est <= 1.0 + 1e-6, "{r:?}");
        assert!(r.a_est > 0.8, "{r:?}");
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn certificate_examples() {
        assert!(certified_bessel_constant(1.0, 1).unwrap() >= 1.0);
        assert!(certified_bessel_constant(0.5, 1).unwrap() >= 2.0);
        assert!(matches!(certified_bessel_constant(0.0, 1), Err(Error::DeltaOutOfRange(_))));
        assert!(matches!(certified_bessel_constant(2.5, 1), Err(Error::DeltaOutOfRange(_))));
        let a = certified_bessel_constant(0.1, 2).unwrap();
        let b = certified_bessel_constant(0.2, 2).unwrap();
        assert!(a > b);
    }

    #[test]
    fn bump_shape() {
        assert_eq!(bump(0.5), 1.0);
        assert_eq!(bump(-1.0), 0.0);
        assert_eq!(bump(2.5), 0.0);
        assert!((bump(-0.5) - 0.5).abs() < 1e-15);
        assert!((bump(1.5) - 0.5).abs() < 1e-15);
        assert!((bump_transform_abs(0.0) - 2.0).abs() < 1e-12);
    }
}

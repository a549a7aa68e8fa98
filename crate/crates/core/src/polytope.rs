//! Explicit frame spectra for polytope boundaries.
//!
//! For each translate class `j` the spectrum is `Gamma_j + A_j`: an oblique
//! lattice `Gamma_j` (base lattice in `V_j`, pushed along a direction
//! `omega` in `V_j^⊥` so that every foreign projection stays
//! `delta`-separated) plus a small phase set `A_j ⊂ V_j^⊥` that separates
//! the translates of the class.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{certified_bessel_constant, Spectrum, SpectrumTag};
use crate::geometry::{classify_facets, Facet, FacetClassification, FACET_TOL};
use crate::linalg::{add, coordinates, distance, dot, norm, project_onto, scale, smallest_singular_value, sub};

/// Default minimal angle between `omega` and every foreign `V_l^⊥`.
pub const THETA_MIN: f64 = 1e-3;
/// Candidate budget per lattice point before giving up.
pub const MAX_CANDIDATES: usize = 1_000_000;
/// Points closer than this are treated as the same frequency.
pub const COINCIDENCE_TOL: f64 = 1e-9;

/// Default magnitudes `k/16`, `k = 1..=32`, scanned by [`build_alpha`].
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=32).map(|k| k as f64 / 16.0).collect()
}

/// Random unit vector in `V_j^⊥` whose angle to every foreign `V_l^⊥` is at
/// least `theta_min`, i.e. `|P_{V_l} omega| >= sin(theta_min)`.
pub fn choose_direction<R: Rng>(
    classes: &FacetClassification,
    j: usize,
    trials: usize,
    theta_min: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let class = &classes.classes[j];
    let perp = class.perp_basis();
    let d = classes.dimension;
    if perp.is_empty() {
        // Full-dimensional facet: no normal directions. Only meaningful
        // without foreign classes, where any unit vector will do.
        if classes.m() == 1 {
            let mut e = vec![0.0; d];
            e[0] = 1.0;
            return Ok(e);
        }
        return Err(Error::DirectionSearchFailed { class: j, trials: 0 });
    }
    let threshold = theta_min.sin();
    for _ in 0..trials {
        // uniform direction in the perp space by rejection from the cube
        let coeffs: Vec<f64> = loop {
            let c: Vec<f64> = (0..perp.len()).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let n = norm(&c);
            if n > 1e-3 && n <= 1.0 {
                break c;
            }
        };
        let mut omega = vec![0.0; d];
        for (c, b) in coeffs.iter().zip(&perp) {
            omega = add(&omega, &scale(b, *c));
        }
        let omega = scale(&omega, 1.0 / norm(&omega));
        let ok = classes
            .classes
            .iter()
            .filter(|c| c.id != j)
            .all(|c| norm(&c.project(&omega)) >= threshold);
        if ok {
            return Ok(omega);
        }
    }
    Err(Error::DirectionSearchFailed { class: j, trials })
}

/// Oblique lattice `Gamma_j`: `N` points `z + t omega` over each retained
/// base-lattice point `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObliqueLattice {
    pub class: usize,
    pub omega: Vec<f64>,
    pub n: usize,
    pub delta: f64,
    pub window: f64,
    /// Step of the candidate sequence `0, d', -d', 2d', ...`.
    pub step: f64,
    /// Retained lattice points in enumeration order.
    pub lattice: Vec<Vec<i64>>,
    /// Their embeddings in `V_j`.
    pub base: Vec<Vec<f64>>,
    /// Accepted shifts per lattice point, in acceptance order.
    pub shifts: Vec<Vec<f64>>,
}

impl ObliqueLattice {
    /// All stored points `z + t omega`, lattice-major.
    pub fn points(&self) -> Vec<Vec<f64>> {
        self.base
            .iter()
            .zip(&self.shifts)
            .flat_map(|(z, ts)| ts.iter().map(move |t| add(z, &scale(&self.omega, *t))))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.shifts.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Phase set `A_j = {s alpha_0 : s = 1..#F_j}` with its Vandermonde bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSet {
    pub class: usize,
    pub alpha0: Vec<f64>,
    pub elements: Vec<Vec<f64>>,
    /// Smallest singular value of `M_j`.
    pub epsilon: f64,
    pub magnitude: f64,
}

impl PhaseSet {
    /// `M_{l s} = exp(-2 pi i tau^l · alpha^s)`.
    pub fn matrix(&self, translations: &[Vec<f64>]) -> DMatrix<Complex64> {
        vandermonde(translations, &self.elements)
    }
}

fn vandermonde(translations: &[Vec<f64>], alphas: &[Vec<f64>]) -> DMatrix<Complex64> {
    DMatrix::from_fn(translations.len(), alphas.len(), |l, s| {
        Complex64::from_polar(1.0, -std::f64::consts::TAU * dot(&translations[l], &alphas[s]))
    })
}

/// Picks `alpha_0` along the normal direction separating the first two
/// translates, maximising the smallest singular value of `M_j` over the
/// magnitude grid (scaled by the spread of the normal offsets).
pub fn build_alpha(classes: &FacetClassification, j: usize, grid: &[f64]) -> Result<PhaseSet> {
    let class = &classes.classes[j];
    let perp = class.perp_basis();
    let f = class.size();
    if f == 1 {
        let alpha0 = match perp.first() {
            Some(u) => scale(u, 1.0 / 16.0),
            None => vec![0.0; classes.dimension],
        };
        return Ok(PhaseSet {
            class: j,
            elements: vec![alpha0.clone()],
            magnitude: norm(&alpha0),
            alpha0,
            epsilon: 1.0,
        });
    }
    let diff = project_onto(&perp, &sub(&class.translations[0], &class.translations[1]));
    let len = norm(&diff);
    if len < FACET_TOL {
        return Err(Error::PhaseDegenerate { class: j, best: 0.0 });
    }
    let u = scale(&diff, 1.0 / len);
    let offsets: Vec<f64> = class.translations.iter().map(|t| dot(&u, t)).collect();
    let spread = offsets.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - offsets.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut best: Option<(f64, f64)> = None;
    for &g in grid {
        let a = g / spread;
        let alphas: Vec<Vec<f64>> = (1..=f).map(|s| scale(&u, s as f64 * a)).collect();
        let eps = smallest_singular_value(&vandermonde(&class.translations, &alphas));
        if best.is_none_or(|(_, e)| eps > e + 1e-12) {
            best = Some((a, eps));
        }
    }
    let (a, eps) = best.ok_or(Error::PhaseDegenerate { class: j, best: 0.0 })?;
    if eps < 1e-8 {
        return Err(Error::PhaseDegenerate { class: j, best: eps });
    }
    let alpha0 = scale(&u, a);
    Ok(PhaseSet {
        class: j,
        elements: (1..=f).map(|s| scale(&alpha0, s as f64)).collect(),
        alpha0,
        epsilon: eps,
        magnitude: a,
    })
}

/// Base lattice of a class inside `B_window`: `z ↦ sum z_i a_i / side_i`, so
/// that `exp(2 pi i z·x)` is an orthogonal basis of `L^2` of the box.
/// Ordered by norm, ties broken lexicographically.
pub fn base_lattice(classes: &FacetClassification, j: usize, window: f64) -> Vec<(Vec<i64>, Vec<f64>)> {
    let class = &classes.classes[j];
    let k = class.dimension();
    let bounds: Vec<i64> = class.sides.iter().map(|s| (window * s + 1e-9).floor() as i64).collect();
    let mut out = Vec::new();
    let mut cur: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let mut p = vec![0.0; classes.dimension];
        for i in 0..k {
            p = add(&p, &scale(&class.axes[i], cur[i] as f64 / class.sides[i]));
        }
        if norm(&p) <= window + 1e-9 {
            out.push((cur.clone(), p));
        }
        let mut i = k;
        loop {
            if i == 0 {
                out.sort_by(|a, b| norm(&a.1).total_cmp(&norm(&b.1)).then_with(|| a.0.cmp(&b.0)));
                return out;
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                for c in i + 1..k {
                    cur[c] = -bounds[c];
                }
                break;
            }
        }
    }
}

/// Hash grid over points with a fixed cell size.
struct PointGrid {
    cell: f64,
    cells: HashMap<Vec<i64>, Vec<Vec<f64>>>,
}

impl PointGrid {
    fn new(cell: f64) -> Self {
        PointGrid { cell, cells: HashMap::new() }
    }

    fn key(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|x| (x / self.cell).floor() as i64).collect()
    }

    /// Whether some stored point lies within `radius <= cell` of `p`.
    fn any_within(&self, p: &[f64], radius: f64) -> bool {
        let k = self.key(p);
        let mut found = false;
        visit_neighbours(&k, &mut |n| {
            if !found {
                if let Some(list) = self.cells.get(n) {
                    found = list.iter().any(|q| distance(p, q) < radius);
                }
            }
        });
        found
    }

    fn insert(&mut self, p: Vec<f64>) {
        let k = self.key(&p);
        self.cells.entry(k).or_default().push(p);
    }
}

fn visit_neighbours(k: &[i64], f: &mut impl FnMut(&Vec<i64>)) {
    let dim = k.len();
    let total = 3usize.pow(dim as u32);
    let mut n = k.to_vec();
    for code in 0..total {
        let mut c = code;
        for i in 0..dim {
            n[i] = k[i] + (c % 3) as i64 - 1;
            c /= 3;
        }
        f(&n);
    }
}

/// `i`-th element of the candidate sequence `0, s, -s, 2s, -2s, ...`.
fn candidate(i: usize, step: f64) -> f64 {
    if i == 0 {
        0.0
    } else {
        let k = i.div_ceil(2) as f64;
        if i % 2 == 1 {
            k * step
        } else {
            -k * step
        }
    }
}

/// Options for [`build_frame_spectrum`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildOptions {
    pub n: usize,
    pub delta: f64,
    pub window: f64,
    pub theta_min: f64,
    pub trials: usize,
    pub seed: u64,
    pub alpha_grid: Vec<f64>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            n: 4,
            delta: 0.1,
            window: 12.0,
            theta_min: THETA_MIN,
            trials: 10_000,
            seed: 0,
            alpha_grid: default_alpha_grid(),
        }
    }
}

/// `eps^2 N / m - (m - 1) C_delta M^2` and its companions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    pub epsilon: f64,
    pub n: usize,
    pub m: usize,
    pub delta: f64,
    pub max_class_size: usize,
    pub dimension: usize,
    pub bessel_constant: f64,
    /// Uses `eps^2`, as the intermediate estimate of the argument does.
    pub value: f64,
    /// The same expression with `eps` in place of `eps^2`.
    pub value_linear_eps: f64,
    /// Smallest `N` making `value` positive.
    pub min_n: usize,
}

pub fn lower_bound_certificate(
    epsilon: f64,
    n: usize,
    m: usize,
    delta: f64,
    max_class_size: usize,
    d: usize,
) -> Result<LowerBoundCertificate> {
    let c = certified_bessel_constant(delta, d)?;
    Ok(certificate_with_constant(epsilon, n, m, delta, max_class_size, d, c))
}

/// [`lower_bound_certificate`] with a given Bessel constant.
pub fn certificate_with_constant(
    epsilon: f64,
    n: usize,
    m: usize,
    delta: f64,
    max_class_size: usize,
    d: usize,
    c: f64,
) -> LowerBoundCertificate {
    let loss = (m as f64 - 1.0) * c * (max_class_size as f64).powi(2);
    let min_n = if m == 1 {
        1
    } else {
        (loss * m as f64 / (epsilon * epsilon)).floor() as usize + 1
    };
    LowerBoundCertificate {
        epsilon,
        n,
        m,
        delta,
        max_class_size,
        dimension: d,
        bessel_constant: c,
        value: epsilon * epsilon * n as f64 / m as f64 - loss,
        value_linear_eps: epsilon * n as f64 / m as f64 - loss,
        min_n,
    }
}

/// Full output of the construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameConstruction {
    pub classification: FacetClassification,
    pub lattices: Vec<ObliqueLattice>,
    pub phases: Vec<PhaseSet>,
    pub spectrum: Spectrum,
    pub certificate: LowerBoundCertificate,
}

/// Builds all oblique lattices at once.
///
/// Shifts are chosen in rounds: round `r` gives every (class, lattice point)
/// its `r`-th shift, so the spectrum for `N` is a prefix of the one for
/// `N + 1`. A candidate is accepted when every foreign projection stays
/// `delta`-separated from the class's earlier points and none of its phase
/// translates coincides with a frequency already in the spectrum.
pub fn build_gammas(
    classes: &FacetClassification,
    directions: &[Vec<f64>],
    phases: &[PhaseSet],
    opts: &BuildOptions,
) -> Result<Vec<ObliqueLattice>> {
    if !(opts.delta > 0.0) {
        return Err(Error::InvalidSpectrum(format!("delta {} must be positive", opts.delta)));
    }
    let m = classes.m();
    let mut lattices = Vec::with_capacity(m);
    for (j, omega) in directions.iter().enumerate() {
        let min_proj = classes
            .classes
            .iter()
            .filter(|c| c.id != j)
            .map(|c| norm(&c.project(omega)))
            .fold(f64::INFINITY, f64::min);
        let step = if m == 1 { opts.delta } else { opts.delta / min_proj };
        let (lattice, base): (Vec<_>, Vec<_>) = base_lattice(classes, j, opts.window).into_iter().unzip();
        let count = lattice.len();
        lattices.push(ObliqueLattice {
            class: j,
            omega: omega.clone(),
            n: opts.n,
            delta: opts.delta,
            window: opts.window,
            step,
            lattice,
            base,
            shifts: vec![Vec::with_capacity(opts.n); count],
        });
    }
    // projections[j][l]: class j's points projected into V_l (coordinates)
    let mut projections: Vec<Vec<Option<PointGrid>>> = (0..m)
        .map(|j| (0..m).map(|l| (l != j).then(|| PointGrid::new(opts.delta))).collect())
        .collect();
    let mut all = PointGrid::new(1.0);
    let mut cursors: Vec<Vec<usize>> = lattices.iter().map(|g| vec![0; g.lattice.len()]).collect();
    for _round in 0..opts.n {
        for j in 0..m {
            for zi in 0..lattices[j].lattice.len() {
                let mut tried = 0usize;
                loop {
                    if tried >= MAX_CANDIDATES {
                        return Err(Error::SeparationStall { class: j, lattice: lattices[j].lattice[zi].clone() });
                    }
                    let t = candidate(cursors[j][zi], lattices[j].step);
                    cursors[j][zi] += 1;
                    tried += 1;
                    let p = add(&lattices[j].base[zi], &scale(&lattices[j].omega, t));
                    let coords: Vec<Option<Vec<f64>>> = (0..m)
                        .map(|l| (l != j).then(|| coordinates(&classes.classes[l].axes, &p)))
                        .collect();
                    let separated = (0..m).all(|l| match (&projections[j][l], &coords[l]) {
                        (Some(grid), Some(q)) => !grid.any_within(q, opts.delta - 1e-12),
                        _ => true,
                    });
                    if !separated {
                        continue;
                    }
                    let lambdas: Vec<Vec<f64>> = phases[j].elements.iter().map(|a| add(&p, a)).collect();
                    if lambdas.iter().any(|l| all.any_within(l, COINCIDENCE_TOL)) {
                        continue;
                    }
                    for (l, q) in coords.into_iter().enumerate() {
                        if let (Some(grid), Some(q)) = (&mut projections[j][l], q) {
                            grid.insert(q);
                        }
                    }
                    for l in lambdas {
                        all.insert(l);
                    }
                    lattices[j].shifts[zi].push(t);
                    break;
                }
            }
        }
    }
    Ok(lattices)
}

/// Classify, choose directions and phases, build the lattices, and assemble
/// the tagged spectrum together with the lower-bound certificate.
pub fn build_frame_spectrum(facets: &[Facet], opts: &BuildOptions) -> Result<FrameConstruction> {
    let classes = classify_facets(facets)?;
    build_frame_spectrum_classified(classes, opts)
}

pub fn build_frame_spectrum_classified(classes: FacetClassification, opts: &BuildOptions) -> Result<FrameConstruction> {
    if opts.n == 0 {
        return Err(Error::InvalidSpectrum("N must be at least 1".into()));
    }
    if opts.window <= 0.0 {
        return Err(Error::InvalidSpectrum(format!("window {} must be positive", opts.window)));
    }
    let m = classes.m();
    let mut directions = Vec::with_capacity(m);
    for j in 0..m {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(j as u64));
        directions.push(choose_direction(&classes, j, opts.trials, opts.theta_min, &mut rng)?);
    }
    let phases = (0..m)
        .map(|j| build_alpha(&classes, j, &opts.alpha_grid))
        .collect::<Result<Vec<_>>>()?;
    let lattices = build_gammas(&classes, &directions, &phases, opts)?;
    let spectrum = assemble_spectrum(&lattices, &phases, opts)?;
    let eps = phases.iter().map(|p| p.epsilon).fold(f64::INFINITY, f64::min);
    let certificate = lower_bound_certificate(eps, opts.n, m, opts.delta, classes.max_class_size(), classes.dimension)?;
    Ok(FrameConstruction { classification: classes, lattices, phases, spectrum, certificate })
}

/// Spectrum of the first `n` rounds, in round-major order; nested in `n`.
pub fn assemble_spectrum(lattices: &[ObliqueLattice], phases: &[PhaseSet], opts: &BuildOptions) -> Result<Spectrum> {
    let rounds = lattices.iter().flat_map(|g| g.shifts.iter().map(Vec::len)).max().unwrap_or(0);
    let mut freqs = Vec::new();
    let mut tags = Vec::new();
    for r in 0..rounds {
        for (g, ph) in lattices.iter().zip(phases) {
            for zi in 0..g.lattice.len() {
                let Some(t) = g.shifts[zi].get(r) else { continue };
                let p = add(&g.base[zi], &scale(&g.omega, *t));
                for (s, a) in ph.elements.iter().enumerate() {
                    freqs.push(add(&p, a));
                    tags.push(SpectrumTag { class: g.class, lattice: g.lattice[zi].clone(), phase: s + 1 });
                }
            }
        }
    }
    Spectrum::new(freqs, Some(tags), Some(opts.delta), opts.window)
}

impl FrameConstruction {
    /// The construction truncated to its first `n` rounds.
    pub fn truncated(&self, n: usize) -> Result<FrameConstruction> {
        let mut out = self.clone();
        for g in &mut out.lattices {
            g.n = g.n.min(n);
            for s in &mut g.shifts {
                s.truncate(n);
            }
        }
        let opts = BuildOptions {
            n,
            delta: self.certificate.delta,
            window: self.lattices.first().map(|g| g.window).unwrap_or(0.0),
            ..BuildOptions::default()
        };
        out.spectrum = assemble_spectrum(&out.lattices, &out.phases, &opts)?;
        out.certificate = certificate_with_constant(
            self.certificate.epsilon,
            n,
            self.certificate.m,
            self.certificate.delta,
            self.certificate.max_class_size,
            self.certificate.dimension,
            self.certificate.bessel_constant,
        );
        Ok(out)
    }
}

/// Minimum distance of `P_{V_l}(Gamma_j)` for one ordered class pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairAudit {
    pub class: usize,
    pub foreign: usize,
    /// Exact when below `delta`; otherwise the smallest distance among
    /// neighbouring grid cells, which is at least `delta`.
    pub min_distance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationAudit {
    pub delta: f64,
    pub pairs: Vec<PairAudit>,
    /// Every retained lattice point carries exactly `N` points.
    pub fibers_ok: bool,
    pub passed: bool,
}

/// Checks foreign-projection separation for every ordered class pair and
/// the fibre counts. Every pair closer than `delta` is examined, via a hash
/// grid of cell `delta`.
pub fn separation_audit(c: &FrameConstruction) -> SeparationAudit {
    let delta = c.certificate.delta;
    let mut pairs = Vec::new();
    for g in &c.lattices {
        let pts = g.points();
        for other in &c.classification.classes {
            if other.id == g.class {
                continue;
            }
            let proj: Vec<Vec<f64>> = pts.iter().map(|p| coordinates(&other.axes, p)).collect();
            let min_distance = min_distance_hashed(&proj, delta);
            pairs.push(PairAudit {
                class: g.class,
                foreign: other.id,
                min_distance,
                passed: min_distance >= delta - 1e-12,
            });
        }
    }
    let fibers_ok = c.lattices.iter().all(|g| g.shifts.iter().all(|s| s.len() == g.n));
    let passed = fibers_ok && pairs.iter().all(|p| p.passed);
    SeparationAudit { delta, pairs, fibers_ok, passed }
}

fn min_distance_hashed(points: &[Vec<f64>], cell: f64) -> f64 {
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        grid.entry(p.iter().map(|x| (x / cell).floor() as i64).collect()).or_default().push(i);
    }
    let mut best = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        let k: Vec<i64> = p.iter().map(|x| (x / cell).floor() as i64).collect();
        visit_neighbours(&k, &mut |n| {
            if let Some(list) = grid.get(n) {
                for &j in list {
                    if j > i {
                        best = best.min(distance(p, &points[j]));
                    }
                }
            }
        });
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{regular_triangle, unit_box, unit_cube_boundary, unit_square_boundary};

    #[test]
    fn candidate_sequence() {
        let seq: Vec<f64> = (0..5).map(|i| candidate(i, 0.5)).collect();
        assert_eq!(seq, vec![0.0, 0.5, -0.5, 1.0, -1.0]);
    }

    #[test]
    fn triangle_direction_is_a_normal() {
        let c = classify_facets(&regular_triangle()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = choose_direction(&c, 0, 100, THETA_MIN, &mut rng).unwrap();
        assert!(w[0].abs() < 1e-12 && (w[1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cube_direction_is_axis() {
        let c = classify_facets(&unit_cube_boundary()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for j in 0..3 {
            let w = choose_direction(&c, j, 100, THETA_MIN, &mut rng).unwrap();
            let perp = c.classes[j].perp_basis();
            assert!((norm(&project_onto(&perp, &w)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_subspaces_have_no_direction() {
        // two parallel segments of different length: distinct classes, same V
        let a = Facet::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], vec![1.0]).unwrap();
        let b = Facet::new(vec![vec![1.0, 0.0]], vec![0.0, 1.0], vec![2.0]).unwrap();
        let c = classify_facets(&[a, b]).unwrap();
        assert_eq!(c.m(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            choose_direction(&c, 0, 50, THETA_MIN, &mut rng),
            Err(Error::DirectionSearchFailed { .. })
        ));
    }

    #[test]
    fn square_phase_set() {
        let c = classify_facets(&unit_square_boundary()).unwrap();
        for j in 0..2 {
            let p = build_alpha(&c, j, &default_alpha_grid()).unwrap();
            assert!((p.magnitude - 0.5).abs() < 1e-12);
            assert!((p.epsilon - 2f64.sqrt()).abs() < 1e-12);
            let direct = smallest_singular_value(&p.matrix(&c.classes[j].translations));
            assert!((direct - p.epsilon).abs() < 1e-12);
        }
    }

    #[test]
    fn coincident_projections_are_degenerate() {
        let a = Facet::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], vec![1.0]).unwrap();
        let b = Facet::new(vec![vec![1.0, 0.0]], vec![3.0, 0.0], vec![1.0]).unwrap();
        let c = classify_facets(&[a, b]).unwrap();
        assert!(!c.violations.is_empty());
        assert!(matches!(build_alpha(&c, 0, &default_alpha_grid()), Err(Error::PhaseDegenerate { .. })));
    }

    #[test]
    fn counting_examples() {
        let tri = build_frame_spectrum(&regular_triangle(), &BuildOptions::default()).unwrap();
        assert_eq!(tri.spectrum.len(), 300);
        let sq = build_frame_spectrum(&unit_square_boundary(), &BuildOptions::default()).unwrap();
        assert_eq!(sq.spectrum.len(), 400);
        assert!(separation_audit(&sq).passed);
    }

    #[test]
    fn single_box_gives_the_lattice() {
        let opts = BuildOptions { n: 1, window: 5.0, ..BuildOptions::default() };
        let c = build_frame_spectrum(&[unit_box(2)], &opts).unwrap();
        assert_eq!(c.spectrum.len(), crate::frame::integer_points_in_ball(2, 5.0).len());
        for f in c.spectrum.frequencies() {
            assert!(f.iter().all(|x| (x - x.round()).abs() < 1e-12));
        }
    }

    #[test]
    fn certificate_formula() {
        let c = certificate_with_constant(1.0, 10, 1, 0.1, 1, 2, 5.0);
        assert_eq!(c.value, 10.0);
        assert_eq!(c.min_n, 1);
        let c = certificate_with_constant(1.0, 10, 3, 0.1, 1, 2, 2.5);
        assert_eq!(c.min_n, 16);
        assert!((c.value - (10.0 / 3.0 - 5.0)).abs() < 1e-12);
    }

    #[test]
    fn spectra_are_nested_in_n() {
        let big = build_frame_spectrum(&regular_triangle(), &BuildOptions { n: 6, ..BuildOptions::default() }).unwrap();
        let small = build_frame_spectrum(&regular_triangle(), &BuildOptions { n: 3, ..BuildOptions::default() }).unwrap();
        assert_eq!(small.spectrum.frequencies(), &big.spectrum.frequencies()[..small.spectrum.len()]);
        assert_eq!(big.truncated(3).unwrap().spectrum, small.spectrum);
    }
}

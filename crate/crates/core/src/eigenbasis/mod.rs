//! Group-averaged eigenbases on S².
//!
//! For a finite rotation group G the averaging projector
//! `P f = (1/#G) sum f∘phi` maps each harmonic space E_l to itself. Its
//! fixed vectors in every E_l, restricted to a fundamental domain of the
//! action, form an orthogonal basis of L² of that domain.

pub mod harmonics;
pub mod torus;

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{fibonacci_sphere, gauss_legendre_on};
use harmonics::{count, degree, real_harmonics};

pub type Rotation = [[f64; 3]; 3];

/// Entry tolerance of the group axiom checks.
pub const GROUP_TOL: f64 = 1e-12;
/// Eigenvalues of a projector must stay out of this band.
pub const FORBIDDEN_BAND: (f64, f64) = (0.01, 0.99);

fn mat_mul(a: &Rotation, b: &Rotation) -> Rotation {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn transpose(a: &Rotation) -> Rotation {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn apply(a: &Rotation, x: &[f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|k| a[i][k] * x[k]).sum())
}

fn close(a: &Rotation, b: &Rotation) -> bool {
    (0..3).all(|i| (0..3).all(|j| (a[i][j] - b[i][j]).abs() <= GROUP_TOL))
}

const IDENTITY: Rotation = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn rotation_z(angle: f64) -> Rotation {
    let (s, c) = angle.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

/// Half-turn about the x-axis.
const FLIP: Rotation = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryGroup {
    pub name: String,
    pub elements: Vec<Rotation>,
}

impl IsometryGroup {
    /// Validates orthogonality, identity, closure and inverses.
    pub fn new(name: &str, elements: Vec<Rotation>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidGroup(msg));
        if elements.is_empty() {
            return bad("no elements".into());
        }
        for (i, g) in elements.iter().enumerate() {
            if !close(&mat_mul(&transpose(g), g), &IDENTITY) {
                return bad(format!("element {i} is not orthogonal"));
            }
        }
        let find = |m: &Rotation| elements.iter().position(|g| close(g, m));
        if find(&IDENTITY).is_none() {
            return bad("identity missing".into());
        }
        for (i, g) in elements.iter().enumerate() {
            if find(&transpose(g)).is_none() {
                return bad(format!("inverse of element {i} missing"));
            }
            for (j, h) in elements.iter().enumerate() {
                if find(&mat_mul(g, h)).is_none() {
                    return bad(format!("product of elements {i} and {j} missing"));
                }
            }
        }
        for i in 0..elements.len() {
            for j in 0..i {
                if close(&elements[i], &elements[j]) {
                    return bad(format!("elements {j} and {i} coincide"));
                }
            }
        }
        Ok(IsometryGroup { name: name.to_string(), elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Parses `trivial`, `cyclic:n` or `dihedral:n`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, n) = match spec.split_once(':') {
            Some((k, n)) => (k, n.trim().parse::<usize>().map_err(|_| Error::InvalidGroup(format!("bad order in {spec:?}")))?),
            None => (spec, 1),
        };
        match kind.trim() {
            "trivial" => trivial_group(),
            "cyclic" => cyclic_group(n),
            "dihedral" => dihedral_group(n),
            other => Err(Error::InvalidGroup(format!("unknown group kind {other:?}"))),
        }
    }
}

pub fn trivial_group() -> Result<IsometryGroup> {
    IsometryGroup::new("trivial", vec![IDENTITY])
}

/// Rotations by multiples of `2 pi / n` about the z-axis.
pub fn cyclic_group(n: usize) -> Result<IsometryGroup> {
    if n == 0 {
        return Err(Error::InvalidGroup("cyclic order must be positive".into()));
    }
    IsometryGroup::new(&format!("cyclic-{n}"), (0..n).map(|k| rotation_z(TAU * k as f64 / n as f64)).collect())
}

/// `sigma^k` and `sigma^k tau` with `sigma` the rotation by `2 pi / n` about
/// z and `tau` the half-turn about x.
pub fn dihedral_group(n: usize) -> Result<IsometryGroup> {
    if n < 2 {
        return Err(Error::InvalidGroup("dihedral order must be at least 2".into()));
    }
    let mut elements: Vec<Rotation> = (0..n).map(|k| rotation_z(TAU * k as f64 / n as f64)).collect();
    for k in 0..n {
        elements.push(mat_mul(&rotation_z(TAU * k as f64 / n as f64), &FLIP));
    }
    IsometryGroup::new(&format!("dihedral-{n}"), elements)
}

/// Product rule on S²: Gauss-Legendre in `z` times uniform longitudes.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    /// Exact for polynomials of degree at most `2 nz - 1` in z and
    /// trigonometric degree below `nphi` in longitude.
    pub fn new(nz: usize, nphi: usize) -> Self {
        let (z, w) = gauss_legendre_on(nz, -1.0, 1.0);
        let mut points = Vec::with_capacity(nz * nphi);
        let mut weights = Vec::with_capacity(nz * nphi);
        for (zi, wi) in z.iter().zip(&w) {
            let s = (1.0 - zi * zi).max(0.0).sqrt();
            for k in 0..nphi {
                let phi = TAU * k as f64 / nphi as f64;
                points.push([s * phi.cos(), s * phi.sin(), *zi]);
                weights.push(wi * TAU / nphi as f64);
            }
        }
        SphereGrid { points, weights }
    }

    /// The `(l+1) x (2l+2)` grid, exact for products of two degree-`l` harmonics.
    pub fn for_degree(l: usize) -> Self {
        SphereGrid::new(l + 1, 2 * l + 2)
    }
}

/// `<P Y_m, Y_m'>` for `m, m'` in degree `l`, with `Y∘phi` evaluated pointwise.
pub fn projector_matrix(group: &IsometryGroup, l: usize, grid: &SphereGrid) -> Result<DMatrix<f64>> {
    let k = 2 * l + 1;
    let base: Vec<Vec<f64>> = grid.points.iter().map(|x| degree(&real_harmonics(l, x), l).to_vec()).collect();
    let gram = |images: &dyn Fn(&[f64; 3]) -> Vec<f64>| {
        let mut m = DMatrix::<f64>::zeros(k, k);
        for ((x, w), y) in grid.points.iter().zip(&grid.weights).zip(&base) {
            let img = images(x);
            for a in 0..k {
                for b in 0..k {
                    m[(a, b)] += w * img[a] * y[b];
                }
            }
        }
        m
    };
    let identity = gram(&|x| degree(&real_harmonics(l, x), l).to_vec());
    let dev = (&identity - DMatrix::<f64>::identity(k, k)).abs().max();
    if dev > 1e-9 {
        return Err(Error::GridTooCoarse(dev));
    }
    let p = gram(&|x| {
        let mut acc = vec![0.0; k];
        for g in &group.elements {
            for (a, v) in degree(&real_harmonics(l, &apply(g, x)), l).iter().enumerate() {
                acc[a] += v;
            }
        }
        acc.iter().map(|v| v / group.order() as f64).collect()
    });
    Ok(p)
}

/// Trace of `f -> f∘phi` on E_l, by quadrature.
pub fn character(rotation: &Rotation, l: usize, grid: &SphereGrid) -> f64 {
    let mut t = 0.0;
    for (x, w) in grid.points.iter().zip(&grid.weights) {
        let a = real_harmonics(l, &apply(rotation, x));
        let b = real_harmonics(l, x);
        t += w * degree(&a, l).iter().zip(degree(&b, l)).map(|(u, v)| u * v).sum::<f64>();
    }
    t
}

/// Orthonormal basis of the eigenvalue-1 space of a symmetric projector.
///
/// The eigendecomposition only checks the spectrum and fixes the dimension;
/// the basis itself is Gram-Schmidt on the columns of `P` in index order,
/// which does not depend on how the eigensolver rotates a degenerate space.
pub fn fixed_subspace(p: &DMatrix<f64>) -> Result<(Vec<Vec<f64>>, usize)> {
    let sym = (p + p.transpose()) * 0.5;
    let e = sym.clone().symmetric_eigen();
    let mut dim = 0;
    for &v in e.eigenvalues.iter() {
        if v > FORBIDDEN_BAND.0 && v < FORBIDDEN_BAND.1 {
            return Err(Error::NotIdempotent(v));
        }
        if v >= FORBIDDEN_BAND.1 {
            dim += 1;
        }
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut candidates: Vec<(usize, f64)> = (0..sym.ncols()).map(|j| (j, sym.column(j).norm())).collect();
    // strongest columns first, ties by index, so near-null columns never seed the basis
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for (j, _) in candidates {
        if basis.len() == dim {
            break;
        }
        let mut v: Vec<f64> = sym.column(j).iter().cloned().collect();
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    if basis.len() != dim {
        return Err(Error::NotIdempotent(basis.len() as f64));
    }
    Ok((basis, dim))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeBasis {
    pub l: usize,
    /// Row-major `(2l+1) x (2l+1)` projector in the real-harmonic basis.
    pub projector: Vec<Vec<f64>>,
    /// Coefficients over `Y_{l,-l..=l}` of each fixed vector.
    pub fixed: Vec<Vec<f64>>,
    pub dimension: usize,
    pub trace: f64,
    pub symmetry_error: f64,
    pub idempotence_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedEigenbasis {
    pub group: String,
    pub group_order: usize,
    pub l_max: usize,
    pub convention: String,
    pub degrees: Vec<DegreeBasis>,
}

pub const CONVENTION: &str = "real spherical harmonics, unit L2(S^2) norm, no Condon-Shortley phase, index l^2+l+m, m<0 sine / m>0 cosine";

impl ProjectedEigenbasis {
    pub fn build(group: &IsometryGroup, l_max: usize) -> Result<Self> {
        let mut degrees = Vec::new();
        for l in 0..=l_max {
            let p = projector_matrix(group, l, &SphereGrid::for_degree(l))?;
            let symmetry_error = (&p - p.transpose()).abs().max();
            let idempotence_error = (&p * &p - &p).abs().max();
            let trace = p.trace();
            let (fixed, dimension) = fixed_subspace(&p)?;
            if (trace - dimension as f64).abs() > 1e-6 {
                return Err(Error::NotIdempotent(trace));
            }
            degrees.push(DegreeBasis {
                l,
                projector: p.row_iter().map(|r| r.iter().cloned().collect()).collect(),
                fixed,
                dimension,
                trace,
                symmetry_error,
                idempotence_error,
            });
        }
        Ok(ProjectedEigenbasis {
            group: group.name.clone(),
            group_order: group.order(),
            l_max,
            convention: CONVENTION.to_string(),
            degrees,
        })
    }

    pub fn total_dimension(&self) -> usize {
        self.degrees.iter().map(|d| d.dimension).sum()
    }

    /// Values of every fixed basis function at `x`, degree by degree.
    pub fn eval(&self, x: &[f64; 3]) -> Vec<f64> {
        let y = real_harmonics(self.l_max, x);
        let mut out = Vec::with_capacity(self.total_dimension());
        for d in &self.degrees {
            let yl = degree(&y, d.l);
            for c in &d.fixed {
                out.push(c.iter().zip(yl).map(|(a, b)| a * b).sum());
            }
        }
        out
    }
}

pub type Indicator = Arc<dyn Fn(&[f64; 3]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum DomainKind {
    /// `{z > 0, 0 <= phi < 2 pi / n}`.
    HemisphereWedge(usize),
    /// `{0 <= phi < 2 pi / n}`, a domain for the cyclic group.
    Lune(usize),
    FullSphere,
    Custom(Indicator),
}

impl std::fmt::Debug for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainKind::HemisphereWedge(n) => write!(f, "HemisphereWedge({n})"),
            DomainKind::Lune(n) => write!(f, "Lune({n})"),
            DomainKind::FullSphere => write!(f, "FullSphere"),
            DomainKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WedgeDomain {
    pub kind: DomainKind,
}

/// Longitude in `[0, 2 pi)`.
fn longitude(x: &[f64; 3]) -> f64 {
    let a = x[1].atan2(x[0]);
    if a < 0.0 { a + TAU } else { a }
}

impl WedgeDomain {
    pub fn hemisphere_wedge(n: usize) -> Self {
        WedgeDomain { kind: DomainKind::HemisphereWedge(n) }
    }

    pub fn lune(n: usize) -> Self {
        WedgeDomain { kind: DomainKind::Lune(n) }
    }

    /// The standard domain for a parsed group: wedge for dihedral, lune for
    /// cyclic, the sphere for the trivial group.
    pub fn for_group(group: &IsometryGroup) -> Self {
        let n = group.order();
        if group.name.starts_with("dihedral") {
            WedgeDomain::hemisphere_wedge(n / 2)
        } else if n == 1 {
            WedgeDomain::full_sphere()
        } else {
            WedgeDomain::lune(n)
        }
    }

    pub fn full_sphere() -> Self {
        WedgeDomain { kind: DomainKind::FullSphere }
    }

    pub fn custom(indicator: Indicator) -> Self {
        WedgeDomain { kind: DomainKind::Custom(indicator) }
    }

    pub fn contains(&self, x: &[f64; 3]) -> bool {
        match &self.kind {
            DomainKind::HemisphereWedge(n) => x[2] > 0.0 && longitude(x) < TAU / *n as f64,
            DomainKind::Lune(n) => longitude(x) < TAU / *n as f64,
            DomainKind::FullSphere => true,
            DomainKind::Custom(f) => f(x),
        }
    }

    /// Quadrature on the domain, exact for trigonometric polynomials of
    /// degree up to about `2 n` in each angle. Wedges use Gauss-Legendre in
    /// colatitude and longitude over the wedge itself; custom domains restrict
    /// a global grid (first-order accurate at the boundary).
    pub fn quadrature(&self, n: usize) -> SphereGrid {
        match &self.kind {
            DomainKind::HemisphereWedge(_) | DomainKind::Lune(_) => {
                let (top, k) = match &self.kind {
                    DomainKind::HemisphereWedge(k) => (PI / 2.0, *k),
                    DomainKind::Lune(k) => (PI, *k),
                    _ => unreachable!(),
                };
                let (th, thw) = gauss_legendre_on(n, 0.0, top);
                let (ph, phw) = gauss_legendre_on(n, 0.0, TAU / k as f64);
                let mut points = Vec::new();
                let mut weights = Vec::new();
                for (t, tw) in th.iter().zip(&thw) {
                    for (p, pw) in ph.iter().zip(&phw) {
                        points.push([t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]);
                        weights.push(tw * pw * t.sin());
                    }
                }
                SphereGrid { points, weights }
            }
            DomainKind::FullSphere => SphereGrid::new(n, 2 * n),
            DomainKind::Custom(f) => {
                let g = SphereGrid::new(4 * n, 8 * n);
                let (points, weights) = g.points.into_iter().zip(g.weights).filter(|(x, _)| f(x)).unzip();
                SphereGrid { points, weights }
            }
        }
    }

    pub fn area(&self, n: usize) -> f64 {
        self.quadrature(n).weights.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    pub samples: usize,
    pub max_overlap: f64,
    pub coverage: f64,
    pub area_ratio: f64,
    pub passed: bool,
}

/// Overlap and coverage of the translates `phi D` on quasi-uniform samples.
pub fn tiling_check(domain: &WedgeDomain, group: &IsometryGroup, samples: usize) -> TilingReport {
    let pts = fibonacci_sphere(samples);
    let inverses: Vec<Rotation> = group.elements.iter().map(transpose).collect();
    let g = group.order();
    let mut pair = vec![0usize; g * g];
    let mut covered = 0usize;
    let mut member = vec![false; g];
    for x in &pts {
        for (i, inv) in inverses.iter().enumerate() {
            member[i] = domain.contains(&apply(inv, x));
        }
        if member.iter().any(|m| *m) {
            covered += 1;
        }
        for i in 0..g {
            for j in 0..i {
                if member[i] && member[j] {
                    pair[i * g + j] += 1;
                }
            }
        }
    }
    let max_overlap = pair.iter().cloned().max().unwrap_or(0) as f64 / samples as f64;
    let coverage = covered as f64 / samples as f64;
    let area_ratio = g as f64 * domain.area(64) / (4.0 * PI);
    TilingReport {
        samples,
        max_overlap,
        coverage,
        area_ratio,
        passed: max_overlap < 1e-3 && coverage > 1.0 - 1e-3,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub functions: usize,
    pub gram_offdiag_max: f64,
    /// Largest `|#G <e, e>_D - 1|` over the (unit-normalized) basis.
    pub gram_diag_deviation: f64,
    pub reconstruction_error: f64,
    pub invariance_error: f64,
    pub trials: usize,
}

/// Random polynomial of degree at most `l_max` in x, y, z.
fn random_polynomial(l_max: usize, rng: &mut ChaCha8Rng) -> Vec<((usize, usize, usize), f64)> {
    let mut terms = Vec::new();
    for a in 0..=l_max {
        for b in 0..=l_max - a {
            for c in 0..=l_max - a - b {
                terms.push(((a, b, c), rng.random_range(-1.0..1.0)));
            }
        }
    }
    terms
}

fn eval_polynomial(p: &[((usize, usize, usize), f64)], x: &[f64; 3]) -> f64 {
    p.iter().map(|((a, b, c), w)| w * x[0].powi(*a as i32) * x[1].powi(*b as i32) * x[2].powi(*c as i32)).sum()
}

/// Orthogonality on D, invariance and completeness of the fixed basis.
pub fn verify_basis(domain: &WedgeDomain, group: &IsometryGroup, basis: &ProjectedEigenbasis, trials: usize, seed: u64) -> VerificationReport {
    let q = domain.quadrature(2 * basis.l_max + 24);
    let values: Vec<Vec<f64>> = q.points.iter().map(|x| basis.eval(x)).collect();
    let k = basis.total_dimension();
    let mut gram = DMatrix::<f64>::zeros(k, k);
    for (v, w) in values.iter().zip(&q.weights) {
        for a in 0..k {
            for b in 0..k {
                gram[(a, b)] += w * v[a] * v[b];
            }
        }
    }
    let mut off: f64 = 0.0;
    let mut diag_dev: f64 = 0.0;
    for a in 0..k {
        diag_dev = diag_dev.max((gram[(a, a)] * group.order() as f64 - 1.0).abs());
        for b in 0..k {
            if a != b {
                off = off.max(gram[(a, b)].abs());
            }
        }
    }

    let samples = fibonacci_sphere(1000);
    let mut invariance: f64 = 0.0;
    for x in &samples {
        let base = basis.eval(x);
        for g in &group.elements {
            let moved = basis.eval(&apply(g, x));
            for (a, b) in base.iter().zip(&moved) {
                invariance = invariance.max((a - b).abs());
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inside: Vec<[f64; 3]> = samples.iter().cloned().filter(|x| domain.contains(x)).collect();
    let mut recon: f64 = 0.0;
    for _ in 0..trials {
        let p = random_polynomial(basis.l_max, &mut rng);
        let f = |x: &[f64; 3]| group.elements.iter().map(|g| eval_polynomial(&p, &apply(g, x))).sum::<f64>() / group.order() as f64;
        let mut coef = vec![0.0; k];
        for ((x, w), v) in q.points.iter().zip(&q.weights).zip(&values) {
            let fx = f(x);
            for a in 0..k {
                coef[a] += w * fx * v[a];
            }
        }
        for a in 0..k {
            coef[a] /= gram[(a, a)];
        }
        let scale = inside.iter().map(|x| f(x).abs()).fold(0.0, f64::max).max(1e-300);
        for x in &inside {
            let v = basis.eval(x);
            let approx: f64 = coef.iter().zip(&v).map(|(c, e)| c * e).sum();
            recon = recon.max((approx - f(x)).abs() / scale);
        }
    }
    VerificationReport {
        functions: k,
        gram_offdiag_max: off,
        gram_diag_deviation: diag_dev,
        reconstruction_error: recon,
        invariance_error: invariance,
        trials,
    }
}

/// Number of flat-indexed harmonics up to `l_max`, re-exported for callers
/// sizing coefficient arrays.
pub fn harmonic_count(l_max: usize) -> usize {
    count(l_max)
}

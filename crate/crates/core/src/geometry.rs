//! Convex bodies, support functions, box facets and translate classes.

use std::cmp::Ordering;

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add, dot, norm, orthonormal_complement, project_onto, scale, sub};

/// Principal-angle and offset tolerance for facet comparisons.
pub const FACET_TOL: f64 = 1e-9;
/// Orthonormality tolerance for subspace bases.
pub const ORTHONORMAL_TOL: f64 = 1e-12;
/// Side lengths below this are rejected.
pub const MIN_SIDE: f64 = 1e-12;

/// Default number of rays used by [`cap_diameter`].
pub const DEFAULT_CAP_RAYS: usize = 10_000;

/// Closed half-space `normal · x <= offset` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// A compact convex body containing the origin in its interior.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Ball { dimension: usize, radius: f64 },
    Ellipsoid { semi_axes: Vec<f64> },
    PolytopeHull { vertices: Vec<Vec<f64>>, halfspaces: Vec<Halfspace> },
}

impl ConvexBody {
    pub fn ball(dimension: usize, radius: f64) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidBody(format!("dimension {dimension} < 2")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidBody(format!("radius {radius} must be positive")));
        }
        Ok(ConvexBody::Ball { dimension, radius })
    }

    pub fn unit_ball(dimension: usize) -> Result<Self> {
        Self::ball(dimension, 1.0)
    }

    pub fn ellipsoid(semi_axes: Vec<f64>) -> Result<Self> {
        if semi_axes.len() < 2 {
            return Err(Error::InvalidBody("an ellipsoid needs at least two semi-axes".into()));
        }
        if let Some(a) = semi_axes.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidBody(format!("semi-axis {a} must be positive")));
        }
        Ok(ConvexBody::Ellipsoid { semi_axes })
    }

    /// Convex hull of a vertex list. The supporting hyperplanes are found by
    /// exhaustive search over d-subsets of vertices, which is adequate for the
    /// small hulls used here.
    pub fn polytope_hull(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let d = vertices.first().map(Vec::len).unwrap_or(0);
        if d < 2 {
            return Err(Error::InvalidBody("polytope hull needs points in R^d, d >= 2".into()));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
        if vertices.len() < d + 1 {
            return Err(Error::InvalidBody(format!("{} vertices cannot span R^{d}", vertices.len())));
        }
        let scale_len = vertices.iter().map(|v| norm(v)).fold(0.0, f64::max).max(1.0);
        let tol = 1e-10 * scale_len;
        let mut halfspaces: Vec<Halfspace> = Vec::new();
        for subset in (0..vertices.len()).combinations(d) {
            let Some(normal) = hyperplane_normal(&subset.iter().map(|&i| &vertices[i][..]).collect::<Vec<_>>()) else {
                continue;
            };
            let mut h = dot(&normal, &vertices[subset[0]]);
            let mut normal = normal;
            if h < 0.0 {
                normal = scale(&normal, -1.0);
                h = -h;
            }
            if vertices.iter().any(|v| dot(&normal, v) > h + tol) {
                continue;
            }
            if h <= tol {
                return Err(Error::InvalidBody("origin is not in the interior of the hull".into()));
            }
            let duplicate = halfspaces
                .iter()
                .any(|hs| (hs.offset - h).abs() < tol && norm(&sub(&hs.normal, &normal)) < 1e-9);
            if !duplicate {
                halfspaces.push(Halfspace { normal, offset: h });
            }
        }
        if halfspaces.len() < d + 1 {
            return Err(Error::InvalidBody("vertices do not span a full-dimensional hull".into()));
        }
        Ok(ConvexBody::PolytopeHull { vertices, halfspaces })
    }

    pub fn dimension(&self) -> usize {
        match self {
            ConvexBody::Ball { dimension, .. } => *dimension,
            ConvexBody::Ellipsoid { semi_axes } => semi_axes.len(),
            ConvexBody::PolytopeHull { vertices, .. } => vertices[0].len(),
        }
    }

    /// Largest distance from the origin to the boundary.
    pub fn circumradius(&self) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => *radius,
            ConvexBody::Ellipsoid { semi_axes } => semi_axes.iter().cloned().fold(0.0, f64::max),
            ConvexBody::PolytopeHull { vertices, .. } => vertices.iter().map(|v| norm(v)).fold(0.0, f64::max),
        }
    }

    /// Smallest distance from the origin to the boundary.
    pub fn inradius(&self) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => *radius,
            ConvexBody::Ellipsoid { semi_axes } => semi_axes.iter().cloned().fold(f64::INFINITY, f64::min),
            ConvexBody::PolytopeHull { halfspaces, .. } => {
                halfspaces.iter().map(|h| h.offset).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// The constant `C_K >= 1` with `|x| / C_K <= dual_norm(x) <= C_K |x|`.
    pub fn duality_constant(&self) -> f64 {
        1f64.max(self.circumradius()).max(1.0 / self.inradius())
    }

    /// Gauge `inf { t > 0 : x / t in K }`.
    pub fn minkowski_functional(&self, x: &[f64]) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => norm(x) / radius,
            ConvexBody::Ellipsoid { semi_axes } => {
                x.iter().zip(semi_axes).map(|(xi, a)| (xi / a).powi(2)).sum::<f64>().sqrt()
            }
            ConvexBody::PolytopeHull { halfspaces, .. } => halfspaces
                .iter()
                .map(|h| dot(&h.normal, x) / h.offset)
                .fold(0.0, f64::max),
        }
    }

    /// Support function `sup_{x in K} x · xi`; exact for every kind of body.
    pub fn dual_norm(&self, xi: &[f64]) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => radius * norm(xi),
            ConvexBody::Ellipsoid { semi_axes } => {
                xi.iter().zip(semi_axes).map(|(v, a)| (a * v).powi(2)).sum::<f64>().sqrt()
            }
            ConvexBody::PolytopeHull { vertices, .. } => {
                vertices.iter().map(|v| dot(v, xi)).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }
}

fn hyperplane_normal(points: &[&[f64]]) -> Option<Vec<f64>> {
    let d = points[0].len();
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    let mut gram = DMatrix::<f64>::zeros(d, d);
    for v in &diffs {
        for i in 0..d {
            for j in 0..d {
                gram[(i, j)] += v[i] * v[j];
            }
        }
    }
    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale_ev = eig.eigenvalues.iter().cloned().fold(0.0, f64::max).max(1e-300);
    if d > 1 && eig.eigenvalues[order[1]] < 1e-10 * scale_ev {
        return None;
    }
    let v: Vec<f64> = eig.eigenvectors.column(order[0]).iter().cloned().collect();
    let n = norm(&v);
    Some(scale(&v, 1.0 / n))
}

/// Orthogonal projection of `x` onto the span of an orthonormal family.
pub fn project(basis: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    project_onto(basis, x)
}

/// Estimates the diameter of the cap `B_r(lambda) ∩ {dual_norm = t}`.
///
/// Rays are shot from the origin through the cone that can meet
/// `B_r(lambda)`; by homogeneity the level set along a ray `u` sits exactly
/// at `t u / dual_norm(u)`. The result is the largest pairwise distance among
/// the samples inside the ball, a lower bound for the true diameter.
pub fn cap_diameter(body: &ConvexBody, lambda: &[f64], t: f64, r: f64, rays: usize) -> Result<f64> {
    let d = body.dimension();
    if lambda.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: lambda.len() });
    }
    let len = norm(lambda);
    if len <= 0.0 || t <= 0.0 {
        return Err(Error::InvalidBody("cap needs |lambda| > 0 and t > 0".into()));
    }
    let axis = scale(lambda, 1.0 / len);
    let half_angle = if len > r { (r / len).asin() } else { std::f64::consts::PI };
    let directions = cone_directions(&axis, half_angle, rays.max(2))?;
    let inside: Vec<Vec<f64>> = directions
        .iter()
        .map(|u| scale(u, t / body.dual_norm(u)))
        .filter(|p| crate::linalg::distance(p, lambda) <= r)
        .collect();
    if inside.is_empty() {
        return Err(Error::EmptyCap);
    }
    let mut diam: f64 = 0.0;
    for (i, a) in inside.iter().enumerate() {
        for b in &inside[i + 1..] {
            diam = diam.max(crate::linalg::distance(a, b));
        }
    }
    Ok(diam)
}

fn cone_directions(axis: &[f64], half_angle: f64, count: usize) -> Result<Vec<Vec<f64>>> {
    match axis.len() {
        2 => {
            let base = axis[1].atan2(axis[0]);
            Ok((0..count)
                .map(|i| {
                    let a = base - half_angle + 2.0 * half_angle * i as f64 / (count - 1) as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect())
        }
        3 => {
            let perp = orthonormal_complement(&[axis.to_vec()], 3);
            let cos_max = half_angle.cos();
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            Ok((0..count)
                .map(|i| {
                    let c = 1.0 - (1.0 - cos_max) * (i as f64 + 0.5) / count as f64;
                    let s = (1.0 - c * c).max(0.0).sqrt();
                    let phi = golden * i as f64;
                    let mut v = scale(axis, c);
                    v = add(&v, &scale(&perp[0], s * phi.cos()));
                    add(&v, &scale(&perp[1], s * phi.sin()))
                })
                .collect())
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Affine subspace `offset + span(basis)` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineSubspace {
    pub basis: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl AffineSubspace {
    pub fn new(basis: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        let d = offset.len();
        if basis.is_empty() || basis.len() > d {
            return Err(Error::InvalidSubspace(format!("{} basis vectors in R^{d}", basis.len())));
        }
        for (i, b) in basis.iter().enumerate() {
            if b.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: b.len() });
            }
            for (j, c) in basis.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot(b, c) - target).abs() > ORTHONORMAL_TOL {
                    return Err(Error::InvalidSubspace(format!("basis vectors {i} and {j} are not orthonormal")));
                }
            }
        }
        Ok(AffineSubspace { basis, offset })
    }

    pub fn ambient_dimension(&self) -> usize {
        self.offset.len()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Projection onto the linear part.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        project_onto(&self.basis, x)
    }

    /// Orthonormal basis of the orthogonal complement of the linear part.
    pub fn perp_basis(&self) -> Vec<Vec<f64>> {
        orthonormal_complement(&self.basis, self.ambient_dimension())
    }

    /// True when every direction of `other` lies in this subspace's linear part.
    pub fn contains_direction(&self, other: &AffineSubspace) -> bool {
        other
            .basis
            .iter()
            .all(|b| norm(&sub(b, &self.project(b))) < FACET_TOL)
    }
}

/// Box piece `offset + sum t_i b_i`, `0 <= t_i <= side_i`, of a boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub subspace: AffineSubspace,
    pub sides: Vec<f64>,
    pub class_id: Option<usize>,
}

impl Facet {
    pub fn new(basis: Vec<Vec<f64>>, offset: Vec<f64>, sides: Vec<f64>) -> Result<Self> {
        let subspace = AffineSubspace::new(basis, offset)?;
        if sides.len() != subspace.dimension() {
            return Err(Error::DimensionMismatch { expected: subspace.dimension(), found: sides.len() });
        }
        if let Some(s) = sides.iter().find(|s| !(**s >= MIN_SIDE && s.is_finite())) {
            return Err(Error::DegenerateFacet(format!("side length {s}")));
        }
        Ok(Facet { subspace, sides, class_id: None })
    }

    pub fn dimension(&self) -> usize {
        self.subspace.dimension()
    }

    pub fn ambient_dimension(&self) -> usize {
        self.subspace.ambient_dimension()
    }

    /// k-dimensional volume.
    pub fn volume(&self) -> f64 {
        self.sides.iter().product()
    }

    pub fn translation(&self) -> &[f64] {
        &self.subspace.offset
    }

    pub fn translated(&self, v: &[f64]) -> Facet {
        let mut f = self.clone();
        f.subspace.offset = add(&f.subspace.offset, v);
        f
    }

    /// Same point set with axes flipped to a positive leading component and
    /// sorted, so that translates share identical axes.
    pub fn canonical(&self) -> Facet {
        let mut offset = self.subspace.offset.clone();
        let mut axes: Vec<(Vec<f64>, f64)> = Vec::new();
        for (b, &s) in self.subspace.basis.iter().zip(&self.sides) {
            let lead = b.iter().find(|c| c.abs() > FACET_TOL).cloned().unwrap_or(1.0);
            if lead < 0.0 {
                offset = add(&offset, &scale(b, s));
                axes.push((scale(b, -1.0), s));
            } else {
                axes.push((b.clone(), s));
            }
        }
        axes.sort_by(|a, b| cmp_tol(&a.0, &b.0).then(a.1.total_cmp(&b.1)));
        let (basis, sides): (Vec<_>, Vec<_>) = axes.into_iter().unzip();
        Facet {
            subspace: AffineSubspace { basis, offset },
            sides,
            class_id: self.class_id,
        }
    }

    /// Whether two canonical facets are translates of one another.
    fn same_shape(&self, other: &Facet) -> bool {
        self.dimension() == other.dimension()
            && self
                .subspace
                .basis
                .iter()
                .zip(&other.subspace.basis)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() < FACET_TOL))
            && self.sides.iter().zip(&other.sides).all(|(a, b)| (a - b).abs() < FACET_TOL)
    }
}

fn cmp_tol(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > FACET_TOL {
            return x.total_cmp(y).reverse();
        }
    }
    Ordering::Equal
}

/// JSON form of one facet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetSpec {
    pub basis: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
    pub sides: Vec<f64>,
}

/// JSON document `{"dimension": d, "facets": [...]}` describing a polytope boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDocument {
    pub dimension: usize,
    pub facets: Vec<FacetSpec>,
}

impl PolytopeDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_facets(&self) -> Result<Vec<Facet>> {
        self.facets
            .iter()
            .map(|f| {
                if f.offset.len() != self.dimension {
                    return Err(Error::DimensionMismatch { expected: self.dimension, found: f.offset.len() });
                }
                Facet::new(f.basis.clone(), f.offset.clone(), f.sides.clone())
            })
            .collect()
    }

    pub fn from_facets(facets: &[Facet]) -> Self {
        PolytopeDocument {
            dimension: facets.first().map(Facet::ambient_dimension).unwrap_or(0),
            facets: facets
                .iter()
                .map(|f| FacetSpec {
                    basis: f.subspace.basis.clone(),
                    offset: f.subspace.offset.clone(),
                    sides: f.sides.clone(),
                })
                .collect(),
        }
    }
}

/// Boundary of the equilateral triangle with unit sides and a vertex at the origin.
pub fn regular_triangle() -> Vec<Facet> {
    let h = 3f64.sqrt() / 2.0;
    vec![
        Facet::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], vec![1.0]).unwrap(),
        Facet::new(vec![vec![-0.5, h]], vec![1.0, 0.0], vec![1.0]).unwrap(),
        Facet::new(vec![vec![-0.5, -h]], vec![0.5, h], vec![1.0]).unwrap(),
    ]
}

/// Boundary of the unit square `[0,1]^2`.
pub fn unit_square_boundary() -> Vec<Facet> {
    vec![
        Facet::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], vec![1.0]).unwrap(),
        Facet::new(vec![vec![0.0, 1.0]], vec![1.0, 0.0], vec![1.0]).unwrap(),
        Facet::new(vec![vec![-1.0, 0.0]], vec![1.0, 1.0], vec![1.0]).unwrap(),
        Facet::new(vec![vec![0.0, -1.0]], vec![0.0, 1.0], vec![1.0]).unwrap(),
    ]
}

/// Boundary of the unit cube `[0,1]^3` as six unit squares.
pub fn unit_cube_boundary() -> Vec<Facet> {
    let e = |i: usize| {
        let mut v = vec![0.0; 3];
        v[i] = 1.0;
        v
    };
    let mut facets = Vec::new();
    for normal in 0..3 {
        let axes: Vec<Vec<f64>> = (0..3).filter(|&i| i != normal).map(e).collect();
        for level in [0.0, 1.0] {
            let mut offset = vec![0.0; 3];
            offset[normal] = level;
            facets.push(Facet::new(axes.clone(), offset, vec![1.0, 1.0]).unwrap());
        }
    }
    facets
}

/// The full-dimensional unit cube `[0,1]^d` as a single facet.
pub fn unit_box(d: usize) -> Facet {
    let basis = (0..d)
        .map(|i| {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v
        })
        .collect();
    Facet::new(basis, vec![0.0; d], vec![1.0; d]).unwrap()
}

/// One translate class: `Q + {tau_1, ..., tau_n}` with a common box `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetClass {
    pub id: usize,
    /// Canonical orthonormal axes of the reference box.
    pub axes: Vec<Vec<f64>>,
    pub sides: Vec<f64>,
    pub translations: Vec<Vec<f64>>,
    /// Indices into the facet list that was classified.
    pub members: Vec<usize>,
}

impl FacetClass {
    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn size(&self) -> usize {
        self.translations.len()
    }

    pub fn ambient_dimension(&self) -> usize {
        self.translations[0].len()
    }

    pub fn subspace(&self) -> AffineSubspace {
        AffineSubspace { basis: self.axes.clone(), offset: vec![0.0; self.ambient_dimension()] }
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        project_onto(&self.axes, x)
    }

    pub fn perp_basis(&self) -> Vec<Vec<f64>> {
        orthonormal_complement(&self.axes, self.ambient_dimension())
    }

    /// Reference box at the origin.
    pub fn reference_facet(&self) -> Facet {
        Facet {
            subspace: self.subspace(),
            sides: self.sides.clone(),
            class_id: Some(self.id),
        }
    }

    pub fn facets(&self) -> Vec<Facet> {
        self.translations
            .iter()
            .map(|t| Facet {
                subspace: AffineSubspace { basis: self.axes.clone(), offset: t.clone() },
                sides: self.sides.clone(),
                class_id: Some(self.id),
            })
            .collect()
    }
}

/// Partition of a facet list into translate classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetClassification {
    pub dimension: usize,
    pub classes: Vec<FacetClass>,
    /// Non-fatal findings, e.g. parallel facets sharing an affine subspace.
    pub violations: Vec<String>,
}

impl FacetClassification {
    pub fn m(&self) -> usize {
        self.classes.len()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(FacetClass::size).max().unwrap_or(0)
    }

    pub fn facets(&self) -> Vec<Facet> {
        self.classes.iter().flat_map(FacetClass::facets).collect()
    }
}

/// Groups facets into translate classes and checks the dimension hypothesis.
///
/// Fails with [`Error::HypothesisViolation`] when a lower-dimensional facet
/// direction fits inside a higher-dimensional facet's subspace.
pub fn classify_facets(facets: &[Facet]) -> Result<FacetClassification> {
    let Some(first) = facets.first() else {
        return Err(Error::DegenerateFacet("empty facet list".into()));
    };
    let d = first.ambient_dimension();
    let mut classes: Vec<(Facet, FacetClass)> = Vec::new();
    for (idx, f) in facets.iter().enumerate() {
        if f.ambient_dimension() != d {
            return Err(Error::DimensionMismatch { expected: d, found: f.ambient_dimension() });
        }
        let c = f.canonical();
        match classes.iter_mut().find(|(rep, _)| rep.same_shape(&c)) {
            Some((_, class)) => {
                class.translations.push(c.subspace.offset.clone());
                class.members.push(idx);
            }
            None => {
                let id = classes.len();
                let class = FacetClass {
                    id,
                    axes: c.subspace.basis.clone(),
                    sides: c.sides.clone(),
                    translations: vec![c.subspace.offset.clone()],
                    members: vec![idx],
                };
                classes.push((c, class));
            }
        }
    }
    let classes: Vec<FacetClass> = classes.into_iter().map(|(_, c)| c).collect();
    let mut violations = Vec::new();
    for a in &classes {
        for b in &classes {
            if a.id == b.id {
                continue;
            }
            let (va, vb) = (a.subspace(), b.subspace());
            if a.dimension() > b.dimension() && va.contains_direction(&vb) {
                return Err(Error::HypothesisViolation(format!(
                    "class {} ({}-dimensional) has a translate inside the subspace of class {} ({}-dimensional)",
                    b.id,
                    b.dimension(),
                    a.id,
                    a.dimension()
                )));
            }
            if a.id < b.id && a.dimension() == b.dimension() && va.contains_direction(&vb) {
                violations.push(format!("classes {} and {} share a subspace direction", a.id, b.id));
            }
        }
        let perp = a.perp_basis();
        for (i, s) in a.translations.iter().enumerate() {
            for t in &a.translations[i + 1..] {
                let diff = project_onto(&perp, &sub(s, t));
                if norm(&diff) < FACET_TOL {
                    violations.push(format!(
                        "class {} has two facets in the same affine subspace",
                        a.id
                    ));
                }
            }
        }
    }
    Ok(FacetClassification { dimension: d, classes, violations })
}

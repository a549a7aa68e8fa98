mod common;

use proptest::prelude::*;
use std::f64::consts::TAU;

use surfframe::frame::SurfaceMeasure;
use surfframe::geometry::*;
use surfframe::measure::*;

fn measures() -> Vec<QuadratureMeasure> {
    vec![
        facets_quadrature(&regular_triangle(), 64.0).unwrap(),
        facets_quadrature(&unit_square_boundary(), 64.0).unwrap(),
        facet_quadrature_with(&unit_box(2), 32.0, Rule::GaussLegendre).unwrap(),
        sphere_quadrature(2, 1.0, 64.0).unwrap(),
        sphere_quadrature(3, 1.0, 16.0).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conjugate_symmetry(which in 0usize..5, raw in prop::collection::vec(-12.0f64..12.0, 3)) {
        let mu = &measures()[which];
        let xi = &raw[..mu.dimension()];
        let minus: Vec<f64> = xi.iter().map(|v| -v).collect();
        let a = fourier_transform(mu, xi);
        let b = fourier_transform(mu, &minus);
        prop_assert!((a - b.conj()).norm() <= 1e-12 * mu.total_mass().max(1.0));
    }

    #[test]
    fn transform_is_bounded_by_the_mass(which in 0usize..5, raw in prop::collection::vec(-40.0f64..40.0, 3)) {
        let mu = &measures()[which];
        let xi = &raw[..mu.dimension()];
        prop_assert!(fourier_transform(mu, xi).norm() <= fourier_transform(mu, &vec![0.0; mu.dimension()]).re * (1.0 + 1e-12));
    }
}

#[test]
fn j0_matches_the_integral_definition() {
    for k in 0..20 {
        let x = 0.37 + 2.9 * k as f64;
        let (lib, oracle) = (bessel_j0(x), common::j0_integral(x));
        assert!((lib - oracle).abs() < 1e-12, "x = {x}: {lib} vs {oracle}");
    }
}

#[test]
fn circle_quadrature_matches_adaptive_integration() {
    let surface = SurfaceMeasure::Sphere { dimension: 2, radius: 1.0 };
    let mu = surface.quadrature(surface.default_resolution(50.0)).unwrap();
    for k in 0..10 {
        let r = 5.0 * k as f64 + 0.3;
        let a = 0.7 * k as f64;
        let xi = [r * a.cos(), r * a.sin()];
        let (re, im) = common::circle_transform(xi);
        let got = fourier_transform(&mu, &xi);
        assert!((got.re - re).abs() < 1e-8 && (got.im - im).abs() < 1e-8, "{xi:?}: {got} vs {re} {im}");
    }
}

#[test]
fn sphere_closed_forms_match_quadrature() {
    for d in [2usize, 3] {
        let surface = SurfaceMeasure::Sphere { dimension: d, radius: 1.0 };
        let mu = surface.quadrature(surface.default_resolution(50.0)).unwrap();
        for k in 0..25 {
            let r = 2.0 * k as f64;
            let mut xi = vec![0.0; d];
            xi[0] = r * 0.6;
            xi[1] = r * 0.8;
            let exact = sphere_ft_closed_form(d, &xi).unwrap();
            assert!((fourier_transform(&mu, &xi) - exact).norm() < 1e-8, "d = {d}, |xi| = {r}");
        }
    }
}

#[test]
fn triangle_sides_match_segment_integrals() {
    let mu = facets_quadrature(&regular_triangle(), SurfaceMeasure::Facets(regular_triangle()).default_resolution(60.0)).unwrap();
    for xi in [[0.3, -0.2], [4.1, 2.7], [-7.5, 9.9]] {
        let mut re = 0.0;
        let mut im = 0.0;
        for f in regular_triangle() {
            let (a, b) = common::segment_transform(&f.subspace.offset, &f.subspace.basis[0], f.sides[0], &xi);
            re += a;
            im += b;
        }
        let got = fourier_transform(&mu, &xi);
        assert!((got.re - re).abs() < 1e-6 && (got.im - im).abs() < 1e-6, "{xi:?}: {got} vs {re} {im}");
    }
}

#[test]
fn circle_decay_order_is_stable() {
    let sup = |hi: f64| {
        let mut best: f64 = 0.0;
        let steps = ((hi - 10.0) * 64.0) as usize;
        for i in 0..=steps {
            let s = 10.0 + (hi - 10.0) * i as f64 / steps as f64;
            best = best.max(s.sqrt() * (TAU * bessel_j0(TAU * s)).abs());
        }
        best
    };
    let (a, b) = (sup(200.0), sup(400.0));
    assert!(a.is_finite() && (b - a).abs() < 0.01 * a, "{a} {b}");
}

#[test]
fn herz_residual_slope_for_the_circle() {
    let h = herz_comparison(2, (10.0, 200.0), (20.0, 40.0), 64).unwrap();
    assert!(h.residual_slope <= -1.3, "{}", h.residual_slope);
    assert!(h.max_zero_offset < 0.02);
}

#[test]
fn measure_document_roundtrip() {
    let mu = facets_quadrature(&regular_triangle(), 8.0).unwrap();
    let doc = mu.to_document();
    let back = QuadratureMeasure::from_document(&serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap()).unwrap();
    for xi in [[0.5, 0.25], [3.0, -1.0]] {
        assert!((fourier_transform(&mu, &xi) - fourier_transform(&back, &xi)).norm() < 1e-12);
    }
}

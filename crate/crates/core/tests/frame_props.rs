mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use surfframe::frame::*;
use surfframe::geometry::*;
use surfframe::measure::QuadratureMeasure;

fn triangle_setup() -> (QuadratureMeasure, QuadratureMeasure) {
    let s = SurfaceMeasure::Facets(regular_triangle());
    let res = s.default_resolution(10.0);
    (s.quadrature(res).unwrap(), s.reference_quadrature(res).unwrap().unwrap())
}

fn lattice_subset(mask: &[bool]) -> Spectrum {
    let all = Spectrum::integer_ball(2, 6.0);
    let keep: Vec<Vec<f64>> = all.frequencies().iter().zip(mask.iter().cycle()).filter(|(_, m)| **m).map(|(f, _)| f.clone()).collect();
    Spectrum::untagged(keep).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bounds_grow_with_the_spectrum(mask in prop::collection::vec(any::<bool>(), 16)) {
        let (mu, nu) = triangle_setup();
        let opts = FrameOptions::default();
        let small = lattice_subset(&mask);
        let big = Spectrum::integer_ball(2, 6.0);
        prop_assume!(!small.is_empty());
        let a = frame_bounds_discrete(&mu, Some(&nu), &small, 2.0, &opts).unwrap();
        let b = frame_bounds_discrete(&mu, Some(&nu), &big, 2.0, &opts).unwrap();
        prop_assert!(a.a_est <= b.a_est + 1e-9 * b.b_est);
        prop_assert!(a.b_est <= b.b_est * (1.0 + 1e-12));
    }

    #[test]
    fn bounds_ignore_translation(x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let (mu, nu) = triangle_setup();
        let spectrum = Spectrum::integer_ball(2, 5.0);
        let opts = FrameOptions::default();
        let a = frame_bounds_discrete(&mu, Some(&nu), &spectrum, 2.0, &opts).unwrap();
        let b = frame_bounds_discrete(&mu.translated(&[x, y]), Some(&nu.translated(&[x, y])), &spectrum, 2.0, &opts).unwrap();
        prop_assert!((a.a_est - b.a_est).abs() <= 1e-9 * a.b_est);
        prop_assert!((a.b_est - b.b_est).abs() <= 1e-9 * a.b_est);
    }
}

#[test]
fn single_frequency_on_the_circle() {
    // only the constant survives: B is the total mass and A vanishes
    let circle = SurfaceMeasure::Sphere { dimension: 2, radius: 1.0 };
    let spectrum = Spectrum::untagged(vec![vec![0.0, 0.0]]).unwrap();
    let opts = FrameOptions { ladder: 1, ..FrameOptions::default() };
    let r = frame_bounds(&circle, &spectrum, 1.0, &opts).unwrap();
    assert!((r.b_est - TAU).abs() < 1e-6, "{}", r.b_est);
    assert!(r.a_est < 1e-8);
    assert!(r.test_space.selected > 1);
}

#[test]
fn removing_the_origin_loses_the_lower_bound() {
    let square = SurfaceMeasure::Facets(vec![unit_box(2)]);
    let full = Spectrum::integer_ball(2, 20.0);
    let punctured = full.filter(|f| f.iter().any(|v| *v != 0.0));
    let opts = FrameOptions { ladder: 1, ..FrameOptions::default() };
    let a_full = frame_bounds(&square, &full, 10.0, &opts).unwrap().a_est;
    let a_removed = frame_bounds(&square, &punctured, 10.0, &opts).unwrap().a_est;
    assert!(a_full > 0.9, "{a_full}");
    assert!(a_removed <= 0.1 && a_removed < a_full / 10.0, "{a_removed} vs {a_full}");
}

#[test]
fn empirical_bessel_ratios_respect_the_certificate() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..50 {
        let d = 1 + trial % 2;
        let pts = if d == 1 {
            common::random_separated(&mut rng, 1, 15.0, 0.1, 4000)
        } else {
            common::random_separated(&mut rng, 2, 1.0, 0.1, 3000)
        };
        let n = pts.len();
        let top = common::best_bessel_constant(&pts);
        let cert = certified_bessel_constant(0.1, d).unwrap();
        assert!(top <= cert, "d = {d}, {n} points: ratio {top} above {cert}");
        assert!(top >= 1.0 - 1e-9);
    }
}

#[test]
fn bessel_certificate_anchors() {
    assert!(certified_bessel_constant(1.0, 1).unwrap() >= 1.0);
    assert!(certified_bessel_constant(0.5, 1).unwrap() >= 2.0);
    // below delta = 1 denser sets must cost more
    let c: Vec<f64> = [0.5, 0.25, 0.1, 0.05].iter().map(|&d| certified_bessel_constant(d, 1).unwrap()).collect();
    assert!(c.windows(2).all(|w| w[0] <= w[1]), "{c:?}");
    assert!(certified_bessel_constant(0.0, 1).is_err());
    assert!(certified_bessel_constant(0.1, 0).is_err());
}

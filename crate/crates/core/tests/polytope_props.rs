mod common;

use proptest::prelude::*;

use surfframe::geometry::*;
use surfframe::polytope::*;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn brute_audit(c: &FrameConstruction) -> f64 {
    let mut best = f64::INFINITY;
    for g in &c.lattices {
        let pts = g.points();
        for other in c.classification.classes.iter().filter(|o| o.id != g.class) {
            let proj: Vec<Vec<f64>> = pts.iter().map(|p| other.axes.iter().map(|a| dot(a, p)).collect()).collect();
            best = best.min(common::brute_min_distance(&proj));
        }
    }
    best
}

fn opts(n: usize, window: f64, seed: u64) -> BuildOptions {
    BuildOptions { n, window, seed, ..BuildOptions::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn foreign_projections_are_separated(shape in 0usize..3, n in 1usize..5, seed in 0u64..1000, delta in 0.05f64..0.5) {
        let (facets, window) = match shape {
            0 => (regular_triangle(), 6.0),
            1 => (unit_square_boundary(), 6.0),
            _ => (unit_cube_boundary(), 2.5),
        };
        let c = build_frame_spectrum(&facets, &BuildOptions { delta, ..opts(n, window, seed) }).unwrap();
        let audit = separation_audit(&c);
        prop_assert!(audit.passed);
        prop_assert!(brute_audit(&c) >= delta - 1e-12);
        for g in &c.lattices {
            prop_assert!(g.shifts.iter().all(|s| s.len() == n));
        }
        prop_assert!(c.spectrum.min_separation() > 0.0);
    }
}

#[test]
fn epsilon_is_the_smallest_singular_value() {
    for facets in [regular_triangle(), unit_square_boundary(), unit_cube_boundary()] {
        let c = build_frame_spectrum(&facets, &opts(1, 3.0, 0)).unwrap();
        for (p, class) in c.phases.iter().zip(&c.classification.classes) {
            let sv = p.matrix(&class.translations).singular_values();
            let smallest = sv.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!((smallest - p.epsilon).abs() < 1e-12, "{smallest} vs {}", p.epsilon);
        }
    }
    let sq = build_frame_spectrum(&unit_square_boundary(), &opts(1, 3.0, 0)).unwrap();
    assert!(sq.phases.iter().all(|p| p.epsilon >= 1.0));
}

#[test]
fn construction_is_deterministic() {
    let a = build_frame_spectrum(&regular_triangle(), &opts(4, 8.0, 17)).unwrap();
    let b = build_frame_spectrum(&regular_triangle(), &opts(4, 8.0, 17)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn spectra_are_nested_in_n() {
    let big = build_frame_spectrum(&unit_square_boundary(), &opts(6, 6.0, 3)).unwrap();
    for n in 1..6 {
        let small = build_frame_spectrum(&unit_square_boundary(), &opts(n, 6.0, 3)).unwrap();
        assert_eq!(small.spectrum.frequencies(), &big.spectrum.frequencies()[..small.spectrum.len()]);
        assert_eq!(small.spectrum, big.truncated(n).unwrap().spectrum);
    }
}

#[test]
fn fibre_sizes_count_the_spectrum() {
    let c = build_frame_spectrum(&regular_triangle(), &opts(5, 6.0, 0)).unwrap();
    let points: usize = c.lattices.iter().map(|g| g.lattice.len()).sum();
    assert_eq!(c.spectrum.len(), 5 * points);
}

#[test]
fn certificate_threshold_is_sharp() {
    let c = build_frame_spectrum(&unit_square_boundary(), &opts(1, 3.0, 0)).unwrap().certificate;
    let at = |n| certificate_with_constant(c.epsilon, n, c.m, c.delta, c.max_class_size, c.dimension, c.bessel_constant);
    assert!(at(c.min_n).value > 0.0);
    assert!(at(c.min_n - 1).value <= 0.0);
}

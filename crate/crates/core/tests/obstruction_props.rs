mod common;

use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

use surfframe::frame::{unit_ball_volume, Spectrum};
use surfframe::geometry::ConvexBody;
use surfframe::measure::bessel_j0;
use surfframe::obstruction::*;

fn distinct(points: Vec<(i32, i32)>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (a, b) in points {
        let p = vec![a as f64 * 0.37, b as f64 * 0.53];
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sums_match_a_reversed_scan(points in prop::collection::vec((-60i32..60, -60i32..60), 1..200), gamma in 0.5f64..3.0, r in 0.0f64..40.0) {
        let pts = distinct(points);
        let s = Spectrum::untagged(pts.clone()).unwrap();
        let ours = partial_sum(&s, gamma, r);
        let theirs = common::reversed_partial_sum(&pts, gamma, r);
        prop_assert!((ours - theirs).abs() <= 1e-12 * theirs.max(1.0));
        prop_assert_eq!(counting_function(&s, r), common::reversed_count(&pts, r));
    }
}

#[test]
fn inverse_square_sum_grows_like_two_pi_log() {
    let z2 = Spectrum::integer_ball(2, 1000.0);
    let radii = [10.0f64, 100.0, 1000.0];
    let sums: Vec<f64> = radii.iter().map(|&r| partial_sum(&z2, 2.0, r)).collect();
    let x: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let fit = surfframe::measure::fit_line(&x, &sums);
    assert!((fit.slope / TAU - 1.0).abs() < 0.05, "{}", fit.slope);
}

#[test]
fn circle_local_mass_approaches_its_average() {
    // |sigma^|^2 averages 2/|xi|, so the mass tends to 2 pi r^2 = 50 pi
    let t = sphere_transform(&ConvexBody::unit_ball(2).unwrap()).unwrap();
    let mut smallest = f64::INFINITY;
    for k in 0..40 {
        let len = 20.0 + 180.0 * k as f64 / 39.0;
        let a = 0.61 * k as f64;
        let c = local_mass(&t, &[len * a.cos(), len * a.sin()], 5.0, 1.0).unwrap();
        assert!((c / (50.0 * PI) - 1.0).abs() < 0.05, "|lambda| = {len}: {c}");
        smallest = smallest.min(c);
    }
    assert!(smallest > 0.0);
}

#[test]
fn bessel_budget_holds_for_the_lattice() {
    // c * tail <= sum of ball integrals <= v_d r^d sup_xi sum |sigma^(lambda - xi)|^2
    let r = 5.0;
    let body = ConvexBody::unit_ball(2).unwrap();
    let t = sphere_transform(&body).unwrap();
    let pts = common::lattice_ball(2, 30.0);
    let threshold = large_threshold(r);
    let tail: Vec<&Vec<f64>> = pts.iter().filter(|p| common::norm(p) > threshold).collect();
    let masses: Vec<f64> = tail.iter().map(|p| local_mass(&t, p, r, 1.0).unwrap()).collect();
    let c = masses.iter().cloned().fold(f64::INFINITY, f64::min);
    let tail_sum: f64 = tail.iter().map(|p| 1.0 / common::norm(p)).sum();
    let integrals: f64 = tail.iter().zip(&masses).map(|(p, m)| m / common::norm(p)).sum();
    assert!(c * tail_sum <= integrals * (1.0 + 1e-12));

    let sigma = |x: f64| TAU * bessel_j0(TAU * x);
    let mut sup: f64 = 0.0;
    let steps = 40;
    for i in 0..=steps {
        for j in 0..=steps {
            let xi = [-r + 2.0 * r * i as f64 / steps as f64, -r + 2.0 * r * j as f64 / steps as f64];
            if common::norm(&xi) > r {
                continue;
            }
            let s: f64 = pts.iter().map(|p| sigma(common::norm(&[p[0] - xi[0], p[1] - xi[1]])).powi(2)).sum();
            sup = sup.max(s);
        }
    }
    let ceiling = unit_ball_volume(2) * r * r * sup;
    assert!(integrals <= 1.05 * ceiling, "{integrals} vs {ceiling}");

    // the report's budget is the same expression with B = sup / mu(S)
    let spectrum = Spectrum::untagged(pts.clone()).unwrap();
    let rep = dichotomy_report(&body, &spectrum, 1.0, r, sup / TAU).unwrap();
    let expected = sup / TAU * rep.mass * unit_ball_volume(2) * r * r / rep.local_mass_min.unwrap();
    assert!((rep.budget.unwrap() - expected).abs() < 1e-9 * expected);
    assert!((rep.mass - TAU).abs() < 1e-12);
}

#[test]
fn sparse_spectrum_lacks_density() {
    let pts: Vec<Vec<f64>> = (0..12).map(|k| vec![2f64.powi(k), 0.0]).collect();
    let rep = dichotomy_report(&ConvexBody::unit_ball(2).unwrap(), &Spectrum::untagged(pts).unwrap(), 1.0, 5.0, 10.0).unwrap();
    assert!(rep.r_star.is_none());
    assert!(rep.count_growth.unwrap().slope < 0.5);
    assert!(rep.verdict.contains("density"), "{}", rep.verdict);
}

#[test]
fn lattice_exhausts_the_budget() {
    let rep = dichotomy_report(&ConvexBody::unit_ball(2).unwrap(), &Spectrum::integer_ball(2, 100.0), 1.0, 5.0, 10.0).unwrap();
    let c = rep.local_mass_min.unwrap();
    assert!(c > 0.0);
    let rs = rep.r_star.unwrap();
    // the exact crossing: the tail sum up to R* is the first to pass the budget
    let pts = common::lattice_ball(2, rs);
    let upto: f64 = pts.iter().map(|p| common::norm(p)).filter(|&n| n > rep.threshold).map(|n| 1.0 / n).sum();
    assert!(upto > rep.budget.unwrap());
    assert!(rep.decay_sup.is_finite() && rep.decay_sup_outer <= rep.decay_sup);
}

#[test]
fn non_balls_are_rejected() {
    let ell = ConvexBody::ellipsoid(vec![1.0, 2.0]).unwrap();
    assert!(dichotomy_report(&ell, &Spectrum::integer_ball(2, 5.0), 1.0, 5.0, 10.0).is_err());
    let s = Spectrum::integer_ball(3, 3.0);
    assert!(dichotomy_report(&ConvexBody::unit_ball(2).unwrap(), &s, 1.0, 5.0, 10.0).is_err());
}

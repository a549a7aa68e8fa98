//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain numbers and returns a JSON string, so the page
//! needs no generated TypeScript types.

use serde_json::json;
use wasm_bindgen::prelude::*;

use surfframe::eigenbasis::{IsometryGroup, ProjectedEigenbasis};
use surfframe::geometry::{regular_triangle, unit_square_boundary, ConvexBody};
use surfframe::measure::{sphere_ft_closed_form, HerzAsymptotic};
use surfframe::polytope::{build_frame_spectrum, separation_audit, BuildOptions};

fn to_js<T>(r: surfframe::Result<T>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Exact sphere transform and its leading asymptotic term along a ray,
/// sampled on `[from, to]`.
#[wasm_bindgen]
pub fn herz_profile(dimension: usize, from: f64, to: f64, samples: usize) -> Result<String, JsValue> {
    let h = to_js(HerzAsymptotic::new(to_js(ConvexBody::unit_ball(dimension))?))?;
    let samples = samples.clamp(2, 20_000);
    let mut xs = Vec::with_capacity(samples);
    let mut exact = Vec::with_capacity(samples);
    let mut lead = Vec::with_capacity(samples);
    for i in 0..samples {
        let s = from + (to - from) * i as f64 / (samples - 1) as f64;
        let mut xi = vec![0.0; dimension];
        xi[0] = s;
        xs.push(s);
        exact.push(to_js(sphere_ft_closed_form(dimension, &xi))?.re);
        lead.push(if s > 1.0 { to_js(h.eval(&xi))? } else { f64::NAN });
    }
    Ok(json!({ "xi": xs, "exact": exact, "asymptotic": lead }).to_string())
}

/// Frame spectrum for the triangle (`shape = "triangle"`) or the square.
#[wasm_bindgen]
pub fn frame_spectrum(shape: &str, n: usize, delta: f64, window: f64, seed: u64) -> Result<String, JsValue> {
    let facets = match shape {
        "triangle" => regular_triangle(),
        "square" => unit_square_boundary(),
        other => return Err(JsValue::from_str(&format!("unknown shape {other:?}"))),
    };
    let opts = BuildOptions { n, delta, window, seed, ..BuildOptions::default() };
    let c = to_js(build_frame_spectrum(&facets, &opts))?;
    let audit = separation_audit(&c);
    let classes: Vec<usize> = c.spectrum.tags().map(|t| t.iter().map(|t| t.class).collect()).unwrap_or_default();
    Ok(json!({
        "frequencies": c.spectrum.frequencies(),
        "classes": classes,
        "certificate": c.certificate,
        "epsilons": c.phases.iter().map(|p| p.epsilon).collect::<Vec<_>>(),
        "audit_passed": audit.passed,
    })
    .to_string())
}

/// Fixed dimensions per degree, and one fixed basis function of degree `l`
/// sampled on a longitude-latitude grid.
#[wasm_bindgen]
pub fn eigenbasis_map(group: &str, l_max: usize, l: usize, index: usize, width: usize, height: usize) -> Result<String, JsValue> {
    let g = to_js(IsometryGroup::parse(group))?;
    let basis = to_js(ProjectedEigenbasis::build(&g, l_max.min(30)))?;
    let dims: Vec<usize> = basis.degrees.iter().map(|d| d.dimension).collect();
    let mut values = Vec::new();
    if let Some(deg) = basis.degrees.get(l) {
        if let Some(coef) = deg.fixed.get(index) {
            let (w, h) = (width.clamp(8, 720), height.clamp(4, 360));
            for row in 0..h {
                let theta = std::f64::consts::PI * (row as f64 + 0.5) / h as f64;
                for col in 0..w {
                    let phi = std::f64::consts::TAU * (col as f64 + 0.5) / w as f64;
                    let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
                    let y = surfframe::eigenbasis::harmonics::real_harmonics(deg.l, &x);
                    let yl = surfframe::eigenbasis::harmonics::degree(&y, deg.l);
                    values.push(coef.iter().zip(yl).map(|(a, b)| a * b).sum::<f64>());
                }
            }
        }
    }
    Ok(json!({ "group": basis.group, "order": basis.group_order, "dimensions": dims, "values": values }).to_string())
}

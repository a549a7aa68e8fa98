// Success paths only: building a JsValue error needs a wasm host.
use serde_json::Value;
use surfframe_wasm::{eigenbasis_map, frame_spectrum, herz_profile};

fn parse(s: Result<String, wasm_bindgen::JsValue>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn herz_profile_has_matching_series() {
    let v = parse(herz_profile(3, 1.5, 20.0, 100));
    assert_eq!(v["xi"].as_array().unwrap().len(), 100);
    assert_eq!(v["exact"].as_array().unwrap().len(), 100);
    let last = v["exact"][99].as_f64().unwrap() - v["asymptotic"][99].as_f64().unwrap();
    assert!(last.abs() < 0.05, "{last}");
}

#[test]
fn frame_spectrum_tags_every_frequency() {
    let v = parse(frame_spectrum("triangle", 2, 0.1, 6.0, 0));
    let n = v["frequencies"].as_array().unwrap().len();
    assert!(n > 0);
    assert_eq!(v["classes"].as_array().unwrap().len(), n);
    assert_eq!(v["audit_passed"], Value::Bool(true));
    assert_eq!(v["certificate"]["m"], 3);
}

#[test]
fn eigenbasis_map_fills_the_grid() {
    let v = parse(eigenbasis_map("dihedral:3", 6, 6, 0, 40, 20));
    assert_eq!(v["dimensions"].as_array().unwrap().len(), 7);
    assert_eq!(v["values"].as_array().unwrap().len(), 800);
    let empty = parse(eigenbasis_map("dihedral:3", 6, 1, 0, 40, 20));
    assert!(empty["values"].as_array().unwrap().is_empty());
}

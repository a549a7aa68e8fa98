//! Experiment recipes driven by a single JSON config, and parameter sweeps.
//!
//! Every run writes `<experiment>.json` (the resolved config, the version
//! string and the full result) and `<experiment>.csv` (plot data) into the
//! output directory. Column layouts are listed in REPORTS.md.

use std::path::{Path, PathBuf};

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::eigenbasis::{tiling_check, verify_basis, IsometryGroup, ProjectedEigenbasis, WedgeDomain};
use crate::error::{Error, Result};
use crate::frame::{frame_bounds, FrameOptions, FrameReport, Spectrum, SurfaceMeasure};
use crate::geometry::{regular_triangle, unit_box, unit_square_boundary, ConvexBody, Facet};
use crate::measure::herz_comparison;
use crate::obstruction::dichotomy_report;
use crate::polytope::{build_frame_spectrum, separation_audit, BuildOptions};
use crate::VERSION;

pub const EXPERIMENTS: [&str; 6] = ["parseval", "triangle-frame", "square-frame", "herz", "dichotomy", "eigenbasis"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Phases per lattice point; the square recipe defaults to the
    /// certificate's threshold.
    pub n: Option<usize>,
    pub delta: f64,
    pub window: f64,
    pub band: Option<f64>,
    pub resolution: Option<f64>,
    /// Radius of the integer-lattice spectrum (parseval, dichotomy).
    pub spectrum_radius: Option<f64>,
    /// Spectrum JSON file replacing the integer lattice (dichotomy).
    pub spectrum: Option<String>,
    pub dimension: usize,
    pub gamma: Option<f64>,
    pub r: f64,
    pub bessel_bound: f64,
    pub l_max: usize,
    pub group: String,
    pub trials: usize,
    pub concentration: f64,
    pub ladder: usize,
    pub fit_range: [f64; 2],
    pub zero_range: [f64; 2],
    pub seed: u64,
    pub output: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: String::new(),
            n: None,
            delta: 0.1,
            window: 12.0,
            band: None,
            resolution: None,
            spectrum_radius: None,
            spectrum: None,
            dimension: 2,
            gamma: None,
            r: 5.0,
            bessel_bound: 10.0,
            l_max: 12,
            group: "dihedral:3".into(),
            trials: 20,
            concentration: 0.9,
            ladder: 2,
            fit_range: [10.0, 200.0],
            zero_range: [20.0, 40.0],
            seed: 0,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(vec![e.to_string()]))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Field-level validation; every problem is reported at once.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            bad.push(format!("experiment: unknown kind {:?} (expected one of {})", self.experiment, EXPERIMENTS.join(", ")));
        }
        if self.n == Some(0) {
            bad.push("n: must be at least 1".into());
        }
        if !(self.delta > 0.0 && self.delta <= 2.0) {
            bad.push(format!("delta: {} outside (0, 2]", self.delta));
        }
        if !(self.window > 0.0) {
            bad.push(format!("window: {} must be positive", self.window));
        }
        if let Some(b) = self.band {
            if !(b > 0.0) {
                bad.push(format!("band: {b} must be positive"));
            }
        }
        if let Some(r) = self.resolution {
            if !(r >= crate::measure::MIN_RESOLUTION) {
                bad.push(format!("resolution: {r} below {}", crate::measure::MIN_RESOLUTION));
            }
        }
        if let Some(r) = self.spectrum_radius {
            if !(r > 0.0) {
                bad.push(format!("spectrum_radius: {r} must be positive"));
            }
        }
        let needs_sphere = matches!(self.experiment.as_str(), "herz" | "dichotomy");
        if needs_sphere && !(self.dimension == 2 || self.dimension == 3) {
            bad.push(format!("dimension: {} not in {{2, 3}}", self.dimension));
        }
        if self.experiment == "parseval" && !(1..=3).contains(&self.dimension) {
            bad.push(format!("dimension: {} not in 1..=3", self.dimension));
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0) {
                bad.push(format!("gamma: {g} must be positive"));
            }
        }
        if !(self.r > 0.0) {
            bad.push(format!("r: {} must be positive", self.r));
        }
        if !(self.bessel_bound > 0.0) {
            bad.push(format!("bessel_bound: {} must be positive", self.bessel_bound));
        }
        if self.l_max > 40 {
            bad.push(format!("l_max: {} above 40", self.l_max));
        }
        if let Err(e) = IsometryGroup::parse(&self.group) {
            bad.push(format!("group: {e}"));
        }
        if !(0.0..1.0).contains(&self.concentration) {
            bad.push(format!("concentration: {} outside [0, 1)", self.concentration));
        }
        if self.ladder == 0 {
            bad.push("ladder: must be at least 1".into());
        }
        if !(self.fit_range[0] > 1.0 && self.fit_range[1] >= self.fit_range[0] + 1.0) {
            bad.push(format!("fit_range: {:?} must satisfy 1 < lo <= hi - 1", self.fit_range));
        }
        if !(self.zero_range[0] > 1.0 && self.zero_range[1] > self.zero_range[0]) {
            bad.push(format!("zero_range: {:?} must satisfy 1 < lo < hi", self.zero_range));
        }
        if bad.is_empty() { Ok(()) } else { Err(Error::ConfigInvalid(bad)) }
    }

    /// Fills recipe-dependent defaults so reports record what actually ran.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        match c.experiment.as_str() {
            "parseval" => {
                c.band.get_or_insert(10.0);
                c.spectrum_radius.get_or_insert(20.0);
            }
            "triangle-frame" | "square-frame" => {
                c.band.get_or_insert(4.0);
                if c.experiment == "triangle-frame" {
                    c.n.get_or_insert(4);
                }
            }
            "dichotomy" => {
                c.gamma.get_or_insert(c.dimension as f64 - 1.0);
                if c.spectrum.is_none() {
                    c.spectrum_radius.get_or_insert(if c.dimension == 2 { 200.0 } else { 50.0 });
                }
            }
            _ => {}
        }
        c
    }

    /// Independent seed for one consumer of randomness.
    pub fn stream_seed(&self, stream: u64) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng.next_u64()
    }

    fn frame_options(&self) -> FrameOptions {
        FrameOptions {
            concentration: self.concentration,
            resolution: self.resolution,
            ladder: self.ladder,
            ..FrameOptions::default()
        }
    }
}

/// Headline numbers of a run, shared by reports and sweep rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub a_est: Option<f64>,
    pub b_est: Option<f64>,
    pub metric: Option<f64>,
    /// What `metric` measures for this recipe.
    pub metric_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub result: Value,
    /// Plot data written to the CSV file.
    #[serde(skip)]
    pub plot: Table,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn history_table(r: &FrameReport) -> Table {
    let mut t = Table::new(&["resolution", "a_est", "b_est"]);
    for h in &r.history {
        t.rows.push(vec![num(h.resolution), num(h.a_est), num(h.b_est)]);
    }
    t
}

fn polytope_recipe(c: &mut ExperimentConfig, facets: Vec<Facet>) -> Result<(Summary, Value, Table)> {
    let band = c.band.unwrap();
    let mut opts = BuildOptions { delta: c.delta, window: c.window, seed: c.stream_seed(1), ..BuildOptions::default() };
    let n = match c.n {
        Some(n) => n,
        None => {
            opts.n = 1;
            build_frame_spectrum(&facets, &opts)?.certificate.min_n
        }
    };
    c.n = Some(n);
    opts.n = n;
    let construction = build_frame_spectrum(&facets, &opts)?;
    let audit = separation_audit(&construction);
    let report = frame_bounds(&SurfaceMeasure::Facets(facets), &construction.spectrum, band, &c.frame_options())?;
    let cert = &construction.certificate;
    let target = c.delta * n as f64 / cert.m as f64 * cert.epsilon.powi(2);
    let eps: Vec<f64> = construction.phases.iter().map(|p| p.epsilon).collect();
    let summary = Summary {
        a_est: Some(report.a_est),
        b_est: Some(report.b_est),
        metric: Some(report.a_est / target),
        metric_name: "a_est / (delta N / m * eps^2)".into(),
    };
    let result = json!({
        "frame": report,
        "certificate": cert,
        "epsilons": eps,
        "target": target,
        "audit_passed": audit.passed,
        "audit": audit,
        "classes": construction.classification.m(),
    });
    Ok((summary, result, history_table(&report)))
}

fn load_spectrum(path: &str) -> Result<Spectrum> {
    Spectrum::from_json(&std::fs::read_to_string(path)?)
}

/// Runs one recipe without touching the filesystem (except to read an
/// input spectrum).
pub fn execute(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let mut c = config.resolved();
    let (summary, result, plot) = match c.experiment.as_str() {
        "parseval" => {
            let d = c.dimension;
            let spectrum = Spectrum::integer_ball(d, c.spectrum_radius.unwrap());
            let report = frame_bounds(&SurfaceMeasure::Facets(vec![unit_box(d)]), &spectrum, c.band.unwrap(), &c.frame_options())?;
            let (da, db) = ((report.a_est - 1.0).abs(), (report.b_est - 1.0).abs());
            let plot = history_table(&report);
            (
                Summary { a_est: Some(report.a_est), b_est: Some(report.b_est), metric: Some(da.max(db)), metric_name: "max |bound - 1|".into() },
                json!({ "frame": report, "a_deviation": da, "b_deviation": db }),
                plot,
            )
        }
        "triangle-frame" => polytope_recipe(&mut c, regular_triangle())?,
        "square-frame" => polytope_recipe(&mut c, unit_square_boundary())?,
        "herz" => {
            let h = herz_comparison(c.dimension, (c.fit_range[0], c.fit_range[1]), (c.zero_range[0], c.zero_range[1]), 64)?;
            let mut plot = Table::new(&["xi", "residual_max"]);
            for (x, y) in &h.envelope {
                plot.rows.push(vec![num(*x), num(*y)]);
            }
            (
                Summary { a_est: None, b_est: None, metric: Some(h.residual_slope), metric_name: "residual log-log slope".into() },
                serde_json::to_value(&h)?,
                plot,
            )
        }
        "dichotomy" => {
            let spectrum = match &c.spectrum {
                Some(p) => load_spectrum(p)?,
                None => Spectrum::integer_ball(c.dimension, c.spectrum_radius.unwrap()),
            };
            let body = ConvexBody::unit_ball(c.dimension)?;
            let rep = dichotomy_report(&body, &spectrum, c.gamma.unwrap(), c.r, c.bessel_bound)?;
            let mut plot = Table::new(&["radius", "partial_sum", "count"]);
            for p in &rep.ladder {
                plot.rows.push(vec![num(p.radius), num(p.partial_sum), p.count.to_string()]);
            }
            (
                Summary { a_est: None, b_est: None, metric: rep.r_star, metric_name: "R* where the Bessel budget is exhausted".into() },
                serde_json::to_value(&rep)?,
                plot,
            )
        }
        "eigenbasis" => {
            let group = IsometryGroup::parse(&c.group)?;
            let basis = ProjectedEigenbasis::build(&group, c.l_max)?;
            let domain = WedgeDomain::for_group(&group);
            let tiling = tiling_check(&domain, &group, 100_000);
            let verification = verify_basis(&domain, &group, &basis, c.trials, c.stream_seed(2));
            let mut plot = Table::new(&["l", "dimension", "trace", "symmetry_error", "idempotence_error"]);
            for d in &basis.degrees {
                plot.rows.push(vec![d.l.to_string(), d.dimension.to_string(), num(d.trace), num(d.symmetry_error), num(d.idempotence_error)]);
            }
            (
                Summary {
                    a_est: None,
                    b_est: None,
                    metric: Some(verification.gram_offdiag_max),
                    metric_name: "largest off-diagonal Gram entry on the domain".into(),
                },
                json!({ "tiling": tiling, "verification": verification, "basis": basis }),
                plot,
            )
        }
        _ => unreachable!("validated"),
    };
    Ok(RunReport { version: VERSION.to_string(), config: c, summary, result, plot })
}

fn output_dir(config: &ExperimentConfig, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf)
        .or_else(|| config.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn write_report(report: &RunReport, dir: &Path, stem: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(report)? + "\n")?;
    report.plot.write(&dir.join(format!("{stem}.csv")))?;
    Ok(path)
}

/// Runs a recipe and writes its JSON report and CSV plot data.
pub fn run(config: &ExperimentConfig, out: Option<&Path>) -> Result<RunReport> {
    let report = execute(config)?;
    write_report(&report, &output_dir(config, out), &config.experiment)?;
    Ok(report)
}

/// One row of a sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: String,
    pub value: String,
    pub status: String,
    pub a_est: Option<f64>,
    pub b_est: Option<f64>,
    pub metric: Option<f64>,
    pub error: Option<String>,
}

pub const SWEEP_COLUMNS: [&str; 7] = ["parameter", "value", "status", "a_est", "b_est", "metric", "error"];

/// Config with one field replaced; the value is parsed as JSON first (so
/// numbers stay numbers) and as a plain string otherwise.
pub fn with_parameter(config: &ExperimentConfig, param: &str, value: &str) -> Result<ExperimentConfig> {
    let key = param.to_ascii_lowercase();
    let mut doc = serde_json::to_value(config)?;
    let obj = doc.as_object_mut().expect("config serializes to an object");
    if !obj.contains_key(&key) {
        return Err(Error::ConfigInvalid(vec![format!("{param}: no such parameter")]));
    }
    let v: Value = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.to_string()));
    obj.insert(key, v);
    let c: ExperimentConfig = serde_json::from_value(doc).map_err(|e| Error::ConfigInvalid(vec![format!("{param}: {e}")]))?;
    c.validate()?;
    Ok(c)
}

/// Runs the recipe once per value. All configs are validated before any
/// run starts; numerical failures become error rows, anything else aborts.
pub fn sweep(config: &ExperimentConfig, param: &str, values: &[String], workers: usize) -> Result<Vec<SweepRow>> {
    let configs = values.iter().map(|v| with_parameter(config, param, v)).collect::<Result<Vec<_>>>()?;
    let workers = workers.max(1);
    let mut results: Vec<Option<Result<RunReport>>> = (0..configs.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        for (chunk_cfg, chunk_out) in configs.chunks(workers.max(1)).zip(results.chunks_mut(workers)) {
            let handles: Vec<_> = chunk_cfg.iter().map(|c| s.spawn(move || execute(c))).collect();
            for (h, slot) in handles.into_iter().zip(chunk_out.iter_mut()) {
                *slot = Some(h.join().expect("sweep worker panicked"));
            }
        }
    });
    let mut rows = Vec::new();
    for (value, res) in values.iter().zip(results) {
        match res.expect("every slot filled") {
            Ok(r) => rows.push(SweepRow {
                parameter: param.to_string(),
                value: value.clone(),
                status: "ok".into(),
                a_est: r.summary.a_est,
                b_est: r.summary.b_est,
                metric: r.summary.metric,
                error: None,
            }),
            Err(e) if e.is_numerical() => rows.push(SweepRow {
                parameter: param.to_string(),
                value: value.clone(),
                status: "error".into(),
                a_est: None,
                b_est: None,
                metric: None,
                error: Some(e.to_string()),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

pub fn write_sweep(rows: &[SweepRow], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SWEEP_COLUMNS)?;
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.parameter.clone(),
            r.value.clone(),
            r.status.clone(),
            opt(r.a_est),
            opt(r.b_est),
            opt(r.metric),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Sweep plus CSV at `<out>/sweep_<param>.csv`.
pub fn run_sweep(config: &ExperimentConfig, param: &str, values: &[String], out: Option<&Path>, workers: usize) -> Result<(Vec<SweepRow>, PathBuf)> {
    let rows = sweep(config, param, values, workers)?;
    let path = output_dir(config, out).join(format!("sweep_{}.csv", param.to_ascii_lowercase()));
    write_sweep(&rows, &path)?;
    Ok((rows, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_kind_and_fields_are_rejected() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "bogus"}"#).unwrap();
        assert!(matches!(c.validate(), Err(Error::ConfigInvalid(_))));
        assert!(matches!(ExperimentConfig::from_json(r#"{"experiment": "herz", "colour": 1}"#), Err(Error::ConfigInvalid(_))));
        let c = ExperimentConfig::from_json(r#"{"experiment": "herz", "delta": 3, "r": -1}"#).unwrap();
        match c.validate() {
            Err(Error::ConfigInvalid(v)) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parameters_are_replaced_by_name() {
        let c = ExperimentConfig { experiment: "triangle-frame".into(), ..Default::default() };
        assert_eq!(with_parameter(&c, "N", "8").unwrap().n, Some(8));
        assert_eq!(with_parameter(&c, "group", "cyclic:4").unwrap().group, "cyclic:4");
        assert!(with_parameter(&c, "nope", "1").is_err());
        assert!(with_parameter(&c, "delta", "5").is_err());
    }

    #[test]
    fn stream_seeds_differ() {
        let c = ExperimentConfig::default();
        assert_ne!(c.stream_seed(1), c.stream_seed(2));
        assert_eq!(c.stream_seed(1), c.stream_seed(1));
    }
}

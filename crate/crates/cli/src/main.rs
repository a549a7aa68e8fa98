use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use surfframe::eigenbasis::{IsometryGroup, ProjectedEigenbasis};
use surfframe::frame::{frame_bounds, FrameOptions, Spectrum, SurfaceMeasure};
use surfframe::geometry::{ConvexBody, PolytopeDocument};
use surfframe::harness::{run, run_sweep, ExperimentConfig};
use surfframe::measure::{facets_quadrature, fourier_transform_checked, sphere_quadrature, MeasureDocument, QuadratureMeasure};
use surfframe::obstruction::dichotomy_report;
use surfframe::polytope::{build_frame_spectrum, separation_audit, BuildOptions};

#[derive(Parser)]
#[command(name = "surfframe", version, about = "Fourier frames for surface measures: experiments and tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RecipeArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's `output`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Unit box with an integer-lattice spectrum.
    Parseval(RecipeArgs),
    /// Constructed spectrum on the regular triangle boundary.
    TriangleFrame(RecipeArgs),
    /// Constructed spectrum on the unit square boundary.
    SquareFrame(RecipeArgs),
    /// Sphere transform against its leading asymptotic term.
    Herz(RecipeArgs),
    /// Summability dichotomy on a circle or sphere.
    Dichotomy(RecipeArgs),
    /// Group-averaged spherical-harmonic basis, from a config or directly.
    Eigenbasis {
        #[arg(long, conflicts_with_all = ["group", "lmax"])]
        config: Option<PathBuf>,
        /// `trivial`, `cyclic:n` or `dihedral:n`.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        lmax: Option<usize>,
        /// Directory with --config, basis JSON file otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a recipe once per value of one config parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Builds a frame spectrum for a polytope boundary.
    BuildFrame {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 12.0)]
        window: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimates frame bounds of a spectrum on a polytope boundary.
    Frame {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, default_value_t = 4.0)]
        band: f64,
        #[arg(long)]
        resolution: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dichotomy report for a given spectrum.
    Obstruction {
        /// `circle` or `sphere`.
        #[arg(long, default_value = "circle")]
        body: String,
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 10.0)]
        bessel_bound: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluates a measure's Fourier transform at many frequencies.
    Fourier {
        /// Polytope or quadrature-measure JSON. Omit with --sphere.
        #[arg(long, required_unless_present = "sphere")]
        measure: Option<PathBuf>,
        /// Unit sphere in this dimension (2 or 3).
        #[arg(long)]
        sphere: Option<usize>,
        /// Quadrature resolution for polytopes and spheres.
        #[arg(long)]
        resolution: Option<f64>,
        /// JSON array of frequency vectors, a spectrum document, or CSV rows.
        #[arg(long)]
        frequencies: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn recipe(name: &str, args: &RecipeArgs) -> Result<()> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if config.experiment.is_empty() {
        config.experiment = name.to_string();
    } else if config.experiment != name {
        bail!("config is for {:?}, not {name:?}", config.experiment);
    }
    let report = run(&config, args.out.as_deref())?;
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
    println!(
        "{name}: a_est {} b_est {} {} = {}",
        fmt(report.summary.a_est),
        fmt(report.summary.b_est),
        report.summary.metric_name,
        fmt(report.summary.metric)
    );
    Ok(())
}

fn load_measure(path: &Path, resolution: Option<f64>, max_coordinate: f64) -> Result<QuadratureMeasure> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("points").is_some() {
        let doc: MeasureDocument = serde_json::from_value(value)?;
        return Ok(QuadratureMeasure::from_document(&doc)?);
    }
    let facets = PolytopeDocument::from_json(&text)?.to_facets()?;
    let res = resolution.unwrap_or_else(|| SurfaceMeasure::Facets(facets.clone()).default_resolution(max_coordinate));
    Ok(facets_quadrature(&facets, res)?)
}

fn load_frequencies(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = read(path)?;
    if let Ok(list) = serde_json::from_str::<Vec<Vec<f64>>>(&text) {
        return Ok(list);
    }
    if let Ok(s) = Spectrum::from_json(&text) {
        return Ok(s.frequencies().to_vec());
    }
    let mut out = Vec::new();
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match row {
            Ok(r) => out.push(r),
            Err(_) if i == 0 => continue, // header
            Err(e) => bail!("frequency row {}: {e}", i + 1),
        }
    }
    Ok(out)
}

fn fourier(measure: Option<&Path>, sphere: Option<usize>, resolution: Option<f64>, frequencies: &Path, out: &Path) -> Result<()> {
    let xi = load_frequencies(frequencies)?;
    let max_coord = xi.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let mu = match (measure, sphere) {
        (Some(p), _) => load_measure(p, resolution, max_coord)?,
        (None, Some(d)) => {
            let res = resolution.unwrap_or_else(|| SurfaceMeasure::Sphere { dimension: d, radius: 1.0 }.default_resolution(max_coord));
            sphere_quadrature(d, 1.0, res)?
        }
        (None, None) => bail!("give --measure or --sphere"),
    };
    let d = mu.dimension();
    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    let mut header: Vec<String> = (1..=d).map(|i| format!("xi_{i}")).collect();
    header.extend(["re".to_string(), "im".to_string()]);
    w.write_record(&header)?;
    let mut warned = false;
    for x in &xi {
        if x.len() != d {
            bail!("frequency {x:?} has dimension {}, measure has {d}", x.len());
        }
        let (v, warning) = fourier_transform_checked(&mu, x);
        if let (Some(wn), false) = (warning, warned) {
            eprintln!("warning: {wn:?}");
            warned = true;
        }
        let mut row: Vec<String> = x.iter().map(|c| format!("{c:?}")).collect();
        row.push(format!("{:?}", v.re));
        row.push(format!("{:?}", v.im));
        w.write_record(&row)?;
    }
    w.flush()?;
    eprintln!("{} values written to {}", xi.len(), out.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Parseval(a) => recipe("parseval", &a),
        Command::TriangleFrame(a) => recipe("triangle-frame", &a),
        Command::SquareFrame(a) => recipe("square-frame", &a),
        Command::Herz(a) => recipe("herz", &a),
        Command::Dichotomy(a) => recipe("dichotomy", &a),
        Command::Eigenbasis { config: Some(config), out, .. } => recipe("eigenbasis", &RecipeArgs { config, out }),
        Command::Eigenbasis { config: None, group, lmax, out } => {
            let group = IsometryGroup::parse(group.as_deref().unwrap_or("dihedral:3"))?;
            let basis = ProjectedEigenbasis::build(&group, lmax.unwrap_or(12))?;
            let out = out.unwrap_or_else(|| PathBuf::from("basis.json"));
            write(&out, &(serde_json::to_string_pretty(&basis)? + "\n"))?;
            let dims: Vec<usize> = basis.degrees.iter().map(|d| d.dimension).collect();
            println!("{}: fixed dimensions {:?} (total {})", basis.group, dims, basis.total_dimension());
            Ok(())
        }
        Command::Sweep { config, param, values, out, workers } => {
            let config = ExperimentConfig::load(&config)?;
            let (rows, path) = run_sweep(&config, &param, &values, out.as_deref(), workers)?;
            let failed = rows.iter().filter(|r| r.status != "ok").count();
            println!("{} rows ({failed} failed) written to {}", rows.len(), path.display());
            Ok(())
        }
        Command::BuildFrame { polytope, n, delta, window, seed, out } => {
            let facets = PolytopeDocument::from_json(&read(&polytope)?)?.to_facets()?;
            let c = build_frame_spectrum(&facets, &BuildOptions { n, delta, window, seed, ..BuildOptions::default() })?;
            let audit = separation_audit(&c);
            write(&out, &(c.spectrum.to_json()? + "\n"))?;
            println!(
                "{} frequencies, {} classes, audit {}, certificate value {:.6} (threshold N = {})",
                c.spectrum.len(),
                c.classification.m(),
                if audit.passed { "passed" } else { "FAILED" },
                c.certificate.value,
                c.certificate.min_n
            );
            Ok(())
        }
        Command::Frame { polytope, spectrum, band, resolution, out } => {
            let facets = PolytopeDocument::from_json(&read(&polytope)?)?.to_facets()?;
            let spectrum = Spectrum::from_json(&read(&spectrum)?)?;
            let opts = FrameOptions { resolution, ..FrameOptions::default() };
            let report = frame_bounds(&SurfaceMeasure::Facets(facets), &spectrum, band, &opts)?;
            write(&out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            println!("a_est {:.6} b_est {:.6} drift {:.2e}", report.a_est, report.b_est, report.drift);
            Ok(())
        }
        Command::Obstruction { body, spectrum, gamma, r, bessel_bound, out } => {
            let body = match body.as_str() {
                "circle" => ConvexBody::unit_ball(2)?,
                "sphere" => ConvexBody::unit_ball(3)?,
                other => bail!("unknown body {other:?} (circle or sphere)"),
            };
            let spectrum = Spectrum::from_json(&read(&spectrum)?)?;
            let report = dichotomy_report(&body, &spectrum, gamma, r, bessel_bound)?;
            write(&out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            println!("{}", report.verdict);
            Ok(())
        }
        Command::Fourier { measure, sphere, resolution, frequencies, out } => {
            fourier(measure.as_deref(), sphere, resolution, &frequencies, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<surfframe::Error>().map(|e| e.exit_code()).unwrap_or(1);
            ExitCode::from(code as u8)
        }
    }
}

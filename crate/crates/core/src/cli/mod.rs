//! Command-line front end: config ingestion, subcommand dispatch and file output.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::approximations::{
    error_sweep, gong_ratio, simplified_ratio, three_point_ratio, Approximation,
};
use crate::error::Error;
use crate::perturbation::{delta_k, delta_k_multi, Classification};
use crate::region_map::fmt_f64;
use crate::region_map::{export_map, extract_boundary_with, ExportPaths, MapEvaluator, Resolution};
use crate::unperturbed::sif_total;
use crate::validation::run_invariant_suite;

pub use config::{
    BoxConfig, CompareConfig, DefectConfig, ForceConfig, LoadConfig, MapConfig, MapDefectConfig,
    MaterialConfig, OutputConfig, RangeConfig, RunConfig, TractionsConfig,
};

/// Failure of a CLI run, mapped onto the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error in {field}: {message}")]
    Config { field: String, message: String },
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Numeric(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { field, reason } => CliError::Config {
                field: field.to_string(),
                message: reason,
            },
            Error::UnsupportedTractions => CliError::Config {
                field: "tractions".into(),
                message: e.to_string(),
            },
            Error::Defect { index, source } => match CliError::from(*source) {
                CliError::Config { field, message } => CliError::Config {
                    field: format!("defects[{index}].{field}"),
                    message,
                },
                CliError::Numeric(m) => CliError::Numeric(format!("defect {index}: {m}")),
                io => io,
            },
            Error::Io { .. } => CliError::Io(e.to_string()),
            Error::Quadrature { .. } | Error::ZeroSif => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "crack-dipole", version, about = "Interfacial crack SIF and small-defect perturbations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Read defect angles in degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Unperturbed stress intensity factor with a per-force table.
    Sif(Common),
    /// Exact defect perturbation alongside the applicable approximations.
    DeltaK(Common),
    /// Sweep the load distance and compare exact and approximate ratios.
    Compare(Common),
    /// Shielding/amplification map over (phi, alpha).
    Map {
        #[command(flatten)]
        common: Common,
        /// Grid size as NxM (phi x alpha).
        #[arg(long, value_name = "NxM")]
        resolution: Option<Resolution>,
        #[arg(long, overrides_with = "no_svg")]
        svg: bool,
        #[arg(long = "no-svg", overrides_with = "svg")]
        no_svg: bool,
    },
    /// Run the built-in invariant checks.
    Validate,
}

/// Result of one subcommand: JSON summary and human-readable lines.
struct Report {
    summary: Value,
    human: String,
}

/// Parses `args`, runs the subcommand and returns the process exit status.
pub fn run<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(report) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report.summary).expect("json"));
            let _ = write!(err, "{}", report.human);
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn effective_config(common: &Common) -> Result<RunConfig, CliError> {
    let path = common.config.as_ref().ok_or_else(|| CliError::Config {
        field: "--config".into(),
        message: "a configuration file is required".into(),
    })?;
    let mut config = RunConfig::load(path)?;
    if let Some(dir) = &common.out {
        config.output.dir = dir.clone();
    }
    if common.degrees {
        config.degrees = true;
    }
    Ok(config)
}

fn dispatch(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Sif(common) => sif(&effective_config(&common)?),
        Command::DeltaK(common) => delta_k_cmd(&effective_config(&common)?),
        Command::Compare(common) => compare(&effective_config(&common)?),
        Command::Map {
            common,
            resolution,
            svg,
            no_svg,
        } => {
            let mut config = effective_config(&common)?;
            if let Some(map) = config.map.as_mut() {
                if let Some(r) = resolution {
                    map.resolution = r;
                }
            }
            if svg {
                config.output.svg = true;
            } else if no_svg {
                config.output.svg = false;
            }
            map_cmd(&config)
        }
        Command::Validate => validate(),
    }
}

/// Six significant digits for the human summary.
fn short(x: f64) -> String {
    format!("{x:.5e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn write_file(path: &Path, contents: &str) -> Result<PathBuf, CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::from(Error::io(parent, e)))?;
    }
    fs::write(path, contents).map_err(|e| CliError::from(Error::io(path, e)))?;
    Ok(path.to_path_buf())
}

fn manifest(files: &[PathBuf]) -> Value {
    files.iter().map(|p| Value::from(p.display().to_string())).collect()
}

fn sif(config: &RunConfig) -> Result<Report, CliError> {
    let material = config.material()?;
    let loads = config.loads()?;
    let k0 = sif_total(&material, &loads)?;

    let mut csv = String::from("item,face,offset,magnitude,k0\n");
    for (i, (f, k)) in loads.forces().iter().zip(&k0.per_force).enumerate() {
        let _ = writeln!(
            csv,
            "{i},{},{},{},{}",
            f.face().as_str(),
            fmt_f64(f.offset()),
            fmt_f64(f.magnitude()),
            fmt_f64(*k)
        );
    }
    if loads.tractions().is_some() {
        let _ = writeln!(csv, "tractions,,,,{}", fmt_f64(k0.traction_part));
    }
    let _ = writeln!(csv, "total,,,,{}", fmt_f64(k0.total));
    let files = vec![write_file(&config.output.dir.join("sif.csv"), &csv)?];

    Ok(Report {
        summary: json!({
            "command": "sif",
            "config": config.to_json(),
            "eta": material.eta(),
            "k0": k0.total,
            "per_force": k0.per_force,
            "traction_part": k0.traction_part,
            "files": manifest(&files),
        }),
        human: format!(
            "eta = {}\nK0 = {} ({} forces)\n",
            short(material.eta()),
            short(k0.total),
            loads.forces().len()
        ),
    })
}

fn delta_k_cmd(config: &RunConfig) -> Result<Report, CliError> {
    let material = config.material()?;
    let loads = config.point_loads()?;
    if config.tractions.is_some() {
        return Err(CliError::from(Error::UnsupportedTractions));
    }
    let defects = config.defects()?;
    let total = delta_k_multi(&material, &loads, &defects)?;

    let mut csv = String::from(
        "index,kind,d,phi,l,alpha,epsilon,delta_k,exact_ratio,gong_ratio,simplified_ratio,three_point_ratio,classification\n",
    );
    let mut rows = Vec::new();
    for (i, defect) in defects.iter().enumerate() {
        let single = delta_k(&material, &loads, defect).map_err(|e| Error::Defect {
            index: i,
            source: Box::new(e),
        })?;
        let gong = (Approximation::for_case(&material, defect) == Approximation::Gong)
            .then(|| gong_ratio(defect.epsilon(), defect.phi(), defect.alpha()));
        let simplified = simplified_ratio(&material, defect);
        let three_point = match config.spread() {
            Some((a, b)) => Some(three_point_ratio(&material, defect, a, b)?.ratio),
            None => None,
        };
        let _ = writeln!(
            csv,
            "{i},{},{},{},{},{},{},{},{},{},{},{},{}",
            defect.kind().as_str(),
            fmt_f64(defect.d()),
            fmt_f64(defect.phi()),
            fmt_f64(defect.half_length()),
            fmt_f64(defect.alpha()),
            fmt_f64(defect.epsilon()),
            fmt_f64(single.delta_k),
            opt(single.ratio),
            opt(gong),
            fmt_f64(simplified),
            opt(three_point),
            single.classification.as_str()
        );
        rows.push(json!({
            "delta_k": single.delta_k,
            "exact_ratio": single.ratio,
            "gong_ratio": gong,
            "simplified_ratio": simplified,
            "three_point_ratio": three_point,
            "classification": single.classification.as_str(),
            "asymptotically_valid": defect.is_asymptotically_valid(),
        }));
    }
    let files = vec![write_file(&config.output.dir.join("delta_k.csv"), &csv)?];

    Ok(Report {
        summary: json!({
            "command": "delta-k",
            "config": config.to_json(),
            "k0": total.k0,
            "delta_k": total.delta_k,
            "ratio": total.ratio,
            "classification": total.classification.as_str(),
            "defects": rows,
            "files": manifest(&files),
        }),
        human: format!(
            "K0 = {}\ndelta K = {} over {} defects ({})\n",
            short(total.k0),
            short(total.delta_k),
            defects.len(),
            total.classification.as_str()
        ),
    })
}

fn compare(config: &RunConfig) -> Result<Report, CliError> {
    let material = config.material()?;
    let defects = config.defects()?;
    let a_values = config.sweep_values()?;
    if config.spread().is_none() {
        return Err(CliError::Config {
            field: "load.kind".into(),
            message: "compare needs a two_point or three_point load".into(),
        });
    }

    let mut csv = String::from("defect,a_over_d,exact_ratio,approx_ratio,relative_error,chi,approximation\n");
    let mut worst = Vec::new();
    for (i, defect) in defects.iter().enumerate() {
        let rows = error_sweep(&material, defect, |a| config.load_at(a), &a_values).map_err(|e| {
            Error::Defect {
                index: i,
                source: Box::new(e),
            }
        })?;
        for r in &rows {
            let _ = writeln!(
                csv,
                "{i},{},{},{},{},{},{}",
                fmt_f64(r.a_over_d),
                fmt_f64(r.exact_ratio),
                fmt_f64(r.approx_ratio),
                opt(r.relative_error),
                fmt_f64(r.chi),
                r.approximation.as_str()
            );
        }
        let max_err = rows.iter().filter_map(|r| r.relative_error).fold(0.0, f64::max);
        let approximation = rows.first().map(|r| r.approximation.as_str());
        worst.push(json!({"approximation": approximation, "max_relative_error": max_err}));
    }
    let files = vec![write_file(&config.output.dir.join("compare.csv"), &csv)?];

    let mut human = format!("{} load distances, {} defects\n", a_values.len(), defects.len());
    for (i, w) in worst.iter().enumerate() {
        let e = w["max_relative_error"].as_f64().unwrap_or(0.0);
        let _ = writeln!(human, "defect {i}: max relative error {}", short(e));
    }
    Ok(Report {
        summary: json!({
            "command": "compare",
            "config": config.to_json(),
            "a_values": a_values,
            "defects": worst,
            "files": manifest(&files),
        }),
        human,
    })
}

fn map_cmd(config: &RunConfig) -> Result<Report, CliError> {
    let material = config.material()?;
    let loads = config.point_loads()?;
    if config.tractions.is_some() {
        return Err(CliError::from(Error::UnsupportedTractions));
    }
    let (template, resolution) = config.map_template()?;
    let evaluator = MapEvaluator::new(&material, &loads, &template)?;
    let grid = evaluator.grid(resolution)?;
    let curves = extract_boundary_with(&grid, |i, j| {
        let phi = 0.5 * (grid.phi_axis()[i] + grid.phi_axis()[i + 1]);
        let alpha = 0.5 * (grid.alpha_axis()[j] + grid.alpha_axis()[j + 1]);
        evaluator.ratio(phi, alpha).unwrap_or_else(|_| {
            0.25 * (grid.value(i, j) + grid.value(i + 1, j) + grid.value(i + 1, j + 1) + grid.value(i, j + 1))
        })
    });
    let paths = ExportPaths::in_dir(&config.output.dir, config.output.svg);
    let files = export_map(&grid, &curves, &paths)?;

    let count = |c: Classification| grid.signs().iter().filter(|&&s| s == c).count();
    let (shielding, amplification) = (count(Classification::Shielding), count(Classification::Amplification));
    let k0 = sif_total(&material, &loads)?.total;
    Ok(Report {
        summary: json!({
            "command": "map",
            "config": config.to_json(),
            "k0": k0,
            "resolution": resolution.to_string(),
            "max_abs_ratio": grid.max_abs(),
            "shielding_nodes": shielding,
            "amplification_nodes": amplification,
            "boundary_curves": curves.len(),
            "files": manifest(&files),
        }),
        human: format!(
            "{} grid, max |dK/K0| = {}\nshielding {} / amplification {} nodes, {} boundary curves\n",
            resolution,
            short(grid.max_abs()),
            shielding,
            amplification,
            curves.len()
        ),
    })
}

fn validate() -> Result<Report, CliError> {
    let checks = run_invariant_suite()?;
    let passed = checks.iter().all(|c| c.passed);
    let mut human = String::new();
    for c in &checks {
        let _ = writeln!(
            human,
            "{} {} (deviation {}, tolerance {})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            short(c.deviation),
            short(c.tolerance)
        );
    }
    let summary = json!({"command": "validate", "passed": passed, "checks": checks});
    if !passed {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        return Err(CliError::Numeric(format!("invariant checks failed: {}", failed.join(", "))));
    }
    Ok(Report { summary, human })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DefectKind;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("crack-dipole").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn help_and_bad_usage() {
        assert_eq!(run_args(&["--help"]).0, 0);
        assert_eq!(run_args(&["frobnicate"]).0, 1);
    }

    #[test]
    fn missing_config_is_a_config_error() {
        let (code, _, err) = run_args(&["sif"]);
        assert_eq!(code, 1);
        assert!(err.contains("--config"), "{err}");
    }

    #[test]
    fn unreadable_config_is_io() {
        let (code, _, _) = run_args(&["sif", "--config", "/nonexistent/run.json"]);
        assert_eq!(code, 3);
    }

    #[test]
    fn error_mapping() {
        assert_eq!(CliError::from(Error::ZeroSif).exit_code(), 2);
        let nested = Error::Defect {
            index: 3,
            source: Box::new(Error::Domain {
                field: "phi",
                reason: "zero".into(),
            }),
        };
        match CliError::from(nested) {
            CliError::Config { field, .. } => assert_eq!(field, "defects[3].phi"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kind_strings_match_serde() {
        let v = serde_json::to_value(DefectKind::RigidInclusion).unwrap();
        assert_eq!(v, DefectKind::RigidInclusion.as_str());
    }
}

//! Command-line front end for the contact3 engine.
//!
//! Exit codes: `0` — all checks passed; `1` — at least one check failed
//! (including a classification verdict that contradicts the classification
//! theorems); `2` — input error (bad manifest, unreadable file, bad
//! arguments).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use contact3::classify::PresetChoice;
use contact3::curvature::{Coefficients, Condition, PresetName};
use contact3::error::Error;
use contact3::manifest::ManifoldManifest;
use contact3::model::DEFAULT_SEED;
use contact3::report::Report;
use contact3::runner::{run_check, run_classify, run_gallery, run_model, RunOptions, DEFAULT_DRAWS, DEFAULT_POINTS};

#[derive(Parser)]
#[command(
    name = "contact3",
    version,
    about = "Certify, reconstruct, and classify 3-dimensional contact metric structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Number of sample points.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Deterministic seed for sampling and probe vectors.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full certification and identity suite on a manifold.
    Check {
        /// Path to a manifold manifest (TOML).
        manifest: PathBuf,
        #[command(flatten)]
        sample: SampleArgs,
        /// Override every tolerance in the run with this value.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify a manifold against one derivation condition.
    Classify {
        /// Path to a manifold manifest (TOML).
        manifest: PathBuf,
        /// Operator preset name (riemann, conharmonic, conformal, concircular,
        /// projective, m_projective, w1, w2, w4).
        #[arg(long, conflicts_with = "abc")]
        preset: Option<String>,
        /// Explicit operator coefficients "alpha,beta,gamma".
        #[arg(long)]
        abc: Option<String>,
        /// Derivation condition: wr, wh, or ws.
        #[arg(long)]
        condition: String,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run checks and the full classification matrix over the built-in gallery.
    Gallery {
        /// Only run entries whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the manifold-free algebraic model suite.
    Model {
        /// Number of random parameter draws.
        #[arg(long, default_value_t = DEFAULT_DRAWS)]
        draws: usize,
        /// Deterministic seed for the draws.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-render a saved JSON report.
    Report {
        /// Path to a report previously saved with `--format json`.
        saved: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn load_manifest(path: &Path) -> Result<ManifoldManifest, Error> {
    ManifoldManifest::load(path)
}

fn parse_condition(token: &str) -> Result<Condition, Error> {
    token.parse()
}

fn parse_choice(preset: Option<&str>, abc: Option<&str>) -> Result<PresetChoice, Error> {
    match (preset, abc) {
        (Some(name), None) => Ok(PresetChoice::Named(name.parse::<PresetName>()?)),
        (None, Some(triple)) => {
            let parts: Vec<&str> = triple.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Preset(format!(
                    "--abc expects three comma-separated numbers, got `{triple}`"
                )));
            }
            let mut vals = [0.0f64; 3];
            for (slot, part) in parts.iter().enumerate() {
                vals[slot] = part.trim().parse::<f64>().map_err(|_| {
                    Error::Preset(format!("--abc component `{part}` is not a number"))
                })?;
                if !vals[slot].is_finite() {
                    return Err(Error::Preset(format!(
                        "--abc component `{part}` must be finite"
                    )));
                }
            }
            Ok(PresetChoice::Explicit(Coefficients {
                alpha: vals[0],
                beta: vals[1],
                gamma: vals[2],
            }))
        }
        (None, None) => Err(Error::Preset(
            "classify requires either --preset or --abc".to_string(),
        )),
        (Some(_), Some(_)) => Err(Error::Preset(
            "--preset and --abc are mutually exclusive".to_string(),
        )),
    }
}

fn emit(report: &Report, output: &OutputArgs) -> Result<(), Error> {
    let rendered = match output.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json()?,
    };
    match &output.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Check {
            manifest,
            sample,
            tol,
            output,
        } => {
            if let Some(t) = tol {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::Manifest(format!(
                        "--tol must be a positive finite number, got {t}"
                    )));
                }
            }
            let man = load_manifest(&manifest)?;
            let opts = RunOptions {
                points: sample.points,
                seed: sample.seed,
                tol_override: tol,
                ..RunOptions::default()
            };
            let report = run_check(&man, &opts)?;
            emit(&report, &output)?;
            Ok(report.pass)
        }
        Command::Classify {
            manifest,
            preset,
            abc,
            condition,
            sample,
            output,
        } => {
            let man = load_manifest(&manifest)?;
            let choice = parse_choice(preset.as_deref(), abc.as_deref())?;
            let condition = parse_condition(&condition)?;
            let opts = RunOptions {
                points: sample.points,
                seed: sample.seed,
                ..RunOptions::default()
            };
            let (report, _) = run_classify(&man, &opts, &choice, condition)?;
            emit(&report, &output)?;
            Ok(report.pass)
        }
        Command::Gallery {
            filter,
            sample,
            output,
        } => {
            let opts = RunOptions {
                points: sample.points,
                seed: sample.seed,
                ..RunOptions::default()
            };
            let outcome = run_gallery(filter.as_deref(), &opts)?;
            emit(&outcome.report, &output)?;
            Ok(outcome.report.pass)
        }
        Command::Model {
            draws,
            seed,
            output,
        } => {
            if draws == 0 {
                return Err(Error::Manifest(
                    "--draws must be at least 1".to_string(),
                ));
            }
            let report = run_model(draws, seed)?;
            emit(&report, &output)?;
            Ok(report.pass)
        }
        Command::Report { saved, output } => {
            let text = std::fs::read_to_string(&saved)?;
            let report = Report::from_json(&text)?;
            emit(&report, &output)?;
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

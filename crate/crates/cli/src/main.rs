//! `su11` — command-line surface of the interferometer simulator:
//! single-point sensitivity reports, parameter sweeps, baseline tables and
//! the cross-validation harness.

mod files;
mod output;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use su11_core::fock::DEFAULT_LEAKAGE_THRESHOLD;
use su11_core::interferometer::{lcc_rp1, BaselineConvention, InterferometerConfig};
use su11_core::sensitivity::{delta_phi_with, limits};
use su11_core::validate::{fast_validation, oracle_validation};

use crate::files::{LoadedConfig, SweepFile, PRESETS};
use crate::sweep::Scale;

#[derive(Parser)]
#[command(
    name = "su11",
    version,
    about = "Phase-sensitivity simulator for a two-pulse hybrid light-atom interferometer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one operating point and print its sensitivity report.
    Run(IoArgs),
    /// Sweep one parameter axis and emit a table of requested outputs.
    Sweep(SweepArgs),
    /// Cross-check the moment engine against the closed forms (fast) and the
    /// number-basis oracle (full).
    Validate(ValidateArgs),
    /// Tabulate the shot-noise and 1/n baselines over a probe-number range.
    Limits(LimitsArgs),
    /// List the built-in sweep presets.
    PresetList(PresetListArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct IoArgs {
    /// Schema-tagged config file (.toml or .json).
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset name (see `su11 preset-list`).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format; `run` defaults to json, `sweep` to csv.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Worker threads for point evaluation (0 = one per core). The emitted
    /// table is byte-identical for any worker count.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Regime {
    /// Moment engine vs closed forms, 1000 random configurations.
    Fast,
    /// Fast checks plus the number-basis oracle, 200 configurations.
    Full,
}

#[derive(Args)]
struct ValidateArgs {
    /// Which checks to run.
    #[arg(value_enum)]
    regime: Regime,
    /// Seed for the randomized configuration draws.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format (default: human-readable text).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct LimitsArgs {
    /// Smallest probe number.
    #[arg(long, default_value_t = 1.0)]
    start: f64,
    /// Largest probe number.
    #[arg(long, default_value_t = 1e4)]
    stop: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// Grid spacing.
    #[arg(long, value_enum, default_value_t = CliScale::Log)]
    scale: CliScale,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format (default: csv).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliScale {
    Linear,
    Log,
}

#[derive(Args)]
struct PresetListArgs {
    /// Output format (default: human-readable text).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Validate(args) => cmd_validate(&args),
        Command::Limits(args) => cmd_limits(&args),
        Command::PresetList(args) => cmd_preset_list(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", output::error_record(&err));
            ExitCode::FAILURE
        }
    }
}

fn write_out(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Resolves --config/--preset for `run`: a preset contributes its base
/// config, evaluated as a single point.
fn resolve_run_input(
    args: &IoArgs,
) -> Result<(String, BaselineConvention, InterferometerConfig)> {
    match (&args.config, &args.preset) {
        (Some(path), None) => match files::load(path)? {
            LoadedConfig::Run {
                preset,
                baseline,
                config,
            } => Ok((
                preset.unwrap_or_else(|| "custom".to_string()),
                baseline,
                config,
            )),
            LoadedConfig::Sweep(_) => bail!(
                "{} holds a sweep spec; use `su11 sweep --config {}`",
                path.display(),
                path.display()
            ),
        },
        (None, Some(name)) => {
            let file = files::preset(name)?;
            Ok((name.clone(), file.baseline, file.base))
        }
        (None, None) => bail!("provide --config PATH or --preset NAME"),
        (Some(_), Some(_)) => unreachable!("clap rejects --config with --preset"),
    }
}

fn cmd_run(args: &IoArgs) -> Result<()> {
    let (preset, baseline, config) = resolve_run_input(args)?;
    let report = delta_phi_with(&config, baseline)?;
    let lcc = lcc_rp1(&config)?;
    let text = match args.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => output::run_json(&preset, baseline, &config, &report, lcc),
        OutputFormat::Csv => output::run_csv(&preset, baseline, &report, lcc),
    };
    write_out(args.out.as_deref(), &text)
}

fn resolve_sweep_input(args: &IoArgs) -> Result<(String, SweepFile)> {
    match (&args.config, &args.preset) {
        (Some(path), None) => match files::load(path)? {
            LoadedConfig::Sweep(file) => Ok(("custom".to_string(), file)),
            LoadedConfig::Run { .. } => bail!(
                "{} holds a single-point config; use `su11 run --config {}`",
                path.display(),
                path.display()
            ),
        },
        (None, Some(name)) => Ok((name.clone(), files::preset(name)?)),
        (None, None) => bail!("provide --config PATH or --preset NAME"),
        (Some(_), Some(_)) => unreachable!("clap rejects --config with --preset"),
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let (preset, file) = resolve_sweep_input(&args.io)?;
    let outputs = sweep::effective_outputs(&file)?;
    let rows = sweep::run_sweep(&file, args.workers)?;

    let text = match args.io.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            output::sweep_csv(&preset, file.baseline, file.axis, &outputs, &rows)
        }
        OutputFormat::Json => {
            output::sweep_json(&preset, file.baseline, file.axis, &outputs, &rows)
        }
    };
    write_out(args.io.out.as_deref(), &text)?;

    // Failed points leave empty cells in the table; the reasons go to a
    // sidecar log next to the output (or to the diagnostic stream).
    let error_log = output::sweep_error_log(file.axis, &rows);
    if !error_log.is_empty() {
        match &args.io.out {
            Some(path) => {
                let mut sidecar = path.as_os_str().to_owned();
                sidecar.push(".errors");
                std::fs::write(&sidecar, &error_log).with_context(|| {
                    format!("writing sidecar {}", PathBuf::from(&sidecar).display())
                })?;
            }
            None => eprint!("{error_log}"),
        }
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<()> {
    let (regime, samples) = match args.regime {
        Regime::Fast => ("fast", 1000),
        Regime::Full => ("full", 1000),
    };
    let fast = fast_validation(samples, args.seed)?;
    let oracle = match args.regime {
        Regime::Fast => None,
        Regime::Full => Some(oracle_validation(
            200,
            30,
            args.seed,
            DEFAULT_LEAKAGE_THRESHOLD,
        )?),
    };
    let passed = fast.passed && oracle.as_ref().map_or(true, |o| o.passed);

    let text = match args.format.unwrap_or(OutputFormat::Csv) {
        // Text is the natural default here; csv has no meaning for a
        // pass/fail report.
        OutputFormat::Csv => {
            output::validate_text(regime, args.seed, passed, &fast, oracle.as_ref())
        }
        OutputFormat::Json => {
            output::validate_json(regime, args.seed, passed, &fast, oracle.as_ref())
        }
    };
    write_out(args.out.as_deref(), &text)?;

    if !passed {
        bail!("validation failed: at least one cross-path check is out of tolerance");
    }
    Ok(())
}

fn cmd_limits(args: &LimitsArgs) -> Result<()> {
    let range = sweep::RangeSpec {
        start: args.start,
        stop: args.stop,
        points: args.points,
        scale: match args.scale {
            CliScale::Linear => Scale::Linear,
            CliScale::Log => Scale::Log,
        },
    };
    range.validate()?;
    let mut rows = Vec::with_capacity(args.points);
    for n_ph in range.values() {
        let l = limits(n_ph)?;
        rows.push((n_ph, l.sql, l.hl));
    }
    let text = match args.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => output::limits_csv(&rows),
        OutputFormat::Json => output::limits_json(&rows),
    };
    write_out(args.out.as_deref(), &text)
}

fn cmd_preset_list(args: &PresetListArgs) -> Result<()> {
    match args.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => {
            #[derive(serde::Serialize)]
            struct PresetJson {
                name: &'static str,
                description: &'static str,
                axis: &'static str,
                points: usize,
            }
            let list: Vec<PresetJson> = PRESETS
                .iter()
                .map(|p| {
                    let file = files::preset(p.name).expect("built-in preset parses");
                    PresetJson {
                        name: p.name,
                        description: p.description,
                        axis: file.axis.name(),
                        points: file.range.points,
                    }
                })
                .collect();
            let mut text =
                serde_json::to_string_pretty(&list).expect("preset list serialization");
            text.push('\n');
            print!("{text}");
        }
        OutputFormat::Csv => {
            for p in &PRESETS {
                println!("{:<8} {}", p.name, p.description);
            }
        }
    }
    Ok(())
}

//! Schema-tagged config files (TOML or JSON) and the built-in presets.
//!
//! Every file carries a `schema` tag; the loader dispatches on it, so a
//! report emitted by `run --format json` feeds straight back in as a config.
//! Unknown fields are hard errors everywhere — typos never pass silently.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use su11_core::interferometer::{BaselineConvention, InterferometerConfig};
use su11_core::sensitivity::SensitivityReport;

use crate::sweep::{Axis, OutputColumn, RangeSpec};

pub const CONFIG_SCHEMA: &str = "su11-config/1";
pub const REPORT_SCHEMA: &str = "su11-report/1";
pub const SWEEP_SCHEMA: &str = "su11-sweep/1";

/// Single-point input file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub schema: String,
    #[serde(default)]
    pub baseline: BaselineConvention,
    pub config: InterferometerConfig,
}

/// Emitted by `run --format json`; also accepted back as a run input.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub schema: String,
    pub preset: String,
    pub baseline: BaselineConvention,
    /// Arm correlation right after the first pulse.
    pub lcc: f64,
    pub config: InterferometerConfig,
    pub report: SensitivityReport,
}

/// Sweep input file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub schema: String,
    pub axis: Axis,
    #[serde(default = "OutputColumn::default_set")]
    pub outputs: Vec<OutputColumn>,
    #[serde(default)]
    pub baseline: BaselineConvention,
    pub range: RangeSpec,
    pub base: InterferometerConfig,
}

/// What a config file turned out to hold, after schema dispatch.
pub enum LoadedConfig {
    Run {
        /// Preset label carried by a replayed report file, if any.
        preset: Option<String>,
        baseline: BaselineConvention,
        config: InterferometerConfig,
    },
    Sweep(SweepFile),
}

enum Format {
    Toml,
    Json,
}

fn detect_format(path: &Path) -> Result<Format> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("toml") => Ok(Format::Toml),
        Some("json") => Ok(Format::Json),
        _ => bail!(
            "config file must end in .toml or .json: {}",
            path.display()
        ),
    }
}

fn schema_tag(format: &Format, text: &str) -> Result<String> {
    let tag = match format {
        Format::Toml => toml::from_str::<toml::Value>(text)?
            .get("schema")
            .and_then(|v| v.as_str())
            .map(str::to_owned),
        Format::Json => serde_json::from_str::<serde_json::Value>(text)?
            .get("schema")
            .and_then(|v| v.as_str())
            .map(str::to_owned),
    };
    tag.ok_or_else(|| anyhow::anyhow!("config file has no string `schema` tag"))
}

fn parse<T: DeserializeOwned>(format: &Format, text: &str) -> Result<T> {
    Ok(match format {
        Format::Toml => toml::from_str(text)?,
        Format::Json => serde_json::from_str(text)?,
    })
}

/// Loads a config file, dispatching on its schema tag.
pub fn load(path: &Path) -> Result<LoadedConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let format = detect_format(path)?;
    let in_file = || format!("in {}", path.display());
    let schema = schema_tag(&format, &text).with_context(in_file)?;
    match schema.as_str() {
        CONFIG_SCHEMA => {
            let file: RunFile = parse(&format, &text).with_context(in_file)?;
            Ok(LoadedConfig::Run {
                preset: None,
                baseline: file.baseline,
                config: file.config,
            })
        }
        REPORT_SCHEMA => {
            let file: ReportFile = parse(&format, &text).with_context(in_file)?;
            Ok(LoadedConfig::Run {
                preset: Some(file.preset),
                baseline: file.baseline,
                config: file.config,
            })
        }
        SWEEP_SCHEMA => {
            let file: SweepFile = parse(&format, &text).with_context(in_file)?;
            Ok(LoadedConfig::Sweep(file))
        }
        other => bail!(
            "unknown schema tag '{other}' in {}; expected {CONFIG_SCHEMA}, \
             {REPORT_SCHEMA} or {SWEEP_SCHEMA}",
            path.display()
        ),
    }
}

/// A built-in sweep shipped with the binary.
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    toml: &'static str,
}

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "fig3a",
        description: "coherent drive, g = 1: sensitivity vs probe number \
                      (200 → 3000, 61 log points)",
        toml: include_str!("../presets/fig3a.toml"),
    },
    Preset {
        name: "fig3b",
        description: "squeezed-coherent drive, r = 2.5, g = 1: sensitivity vs \
                      probe number (200 → 3000, 61 log points)",
        toml: include_str!("../presets/fig3b.toml"),
    },
    Preset {
        name: "fig4a",
        description: "squeezed-coherent drive, r = 2.5, N_α = e⁵/4, g = 2: \
                      sensitivity vs transmission (0 → 1, 101 points)",
        toml: include_str!("../presets/fig4a.toml"),
    },
    Preset {
        name: "fig4b",
        description: "squeezed-coherent drive, r = 2.5, N_α = e⁵/4, g = 2: \
                      sensitivity vs collisional dephasing (0 → 1, 101 points)",
        toml: include_str!("../presets/fig4b.toml"),
    },
];

/// Resolves a preset name to its sweep spec.
pub fn preset(name: &str) -> Result<SweepFile> {
    for p in &PRESETS {
        if p.name == name {
            return toml::from_str(p.toml)
                .with_context(|| format!("in built-in preset '{name}'"));
        }
    }
    let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
    bail!("unknown preset '{name}'; available: {}", names.join(", "));
}

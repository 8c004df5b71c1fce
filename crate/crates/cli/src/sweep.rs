//! Sweep evaluation: axis definitions, per-point config construction and the
//! parallel map that turns a sweep spec into ordered rows.

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use su11_core::gaussian::InputKind;
use su11_core::interferometer::{lcc_rp1, BaselineConvention, InterferometerConfig};
use su11_core::sensitivity::{delta_phi_with, SensitivityReport};

use crate::files::SweepFile;

/// The parameter a sweep varies. `g` drives both pulse gains together;
/// `n_ph_target` is derived and back-solves the optical drive strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    G,
    Phi,
    #[serde(rename = "T")]
    T,
    GammaTau,
    R,
    AlphaMag,
    NPhTarget,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::G => "g",
            Axis::Phi => "phi",
            Axis::T => "T",
            Axis::GammaTau => "gamma_tau",
            Axis::R => "r",
            Axis::AlphaMag => "alpha_mag",
            Axis::NPhTarget => "n_ph_target",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

fn default_scale() -> Scale {
    Scale::Linear
}

/// Axis grid: `points` values from `start` to `stop`, inclusive.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "default_scale")]
    pub scale: Scale,
}

impl RangeSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            bail!("range bounds must be finite");
        }
        if self.points == 0 {
            bail!("range needs at least one point");
        }
        if self.scale == Scale::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            bail!("log scale requires strictly positive range bounds");
        }
        Ok(())
    }

    /// Grid values in ascending index order; a single point sits at `start`.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let f = i as f64 / n;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * f,
                    Scale::Log => self.start * (self.stop / self.start).powf(f),
                }
            })
            .collect()
    }
}

/// A column a sweep can emit. `lcc` is the arm correlation right after the
/// first pulse; the rest come from the sensitivity report at the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputColumn {
    #[serde(rename = "delta_phi")]
    DeltaPhi,
    #[serde(rename = "sql")]
    Sql,
    #[serde(rename = "hl")]
    Hl,
    #[serde(rename = "lcc")]
    Lcc,
    #[serde(rename = "n_ph")]
    NPh,
    #[serde(rename = "var_X")]
    VarX,
    #[serde(rename = "slope")]
    Slope,
}

impl OutputColumn {
    pub fn name(self) -> &'static str {
        match self {
            OutputColumn::DeltaPhi => "delta_phi",
            OutputColumn::Sql => "sql",
            OutputColumn::Hl => "hl",
            OutputColumn::Lcc => "lcc",
            OutputColumn::NPh => "n_ph",
            OutputColumn::VarX => "var_X",
            OutputColumn::Slope => "slope",
        }
    }

    pub fn default_set() -> Vec<OutputColumn> {
        vec![
            OutputColumn::DeltaPhi,
            OutputColumn::Sql,
            OutputColumn::Hl,
            OutputColumn::Lcc,
            OutputColumn::NPh,
            OutputColumn::VarX,
            OutputColumn::Slope,
        ]
    }
}

/// One evaluated sweep point. Failed cells stay `None`; the messages go to
/// the sidecar error log.
#[derive(Debug, Clone)]
pub struct Row {
    pub index: usize,
    pub value: f64,
    pub cells: Vec<Option<f64>>,
    pub errors: Vec<String>,
}

/// Builds the config for one axis point on top of the base config.
pub fn apply_axis(
    base: &InterferometerConfig,
    axis: Axis,
    value: f64,
) -> std::result::Result<InterferometerConfig, String> {
    let mut cfg = *base;
    match axis {
        Axis::G => {
            cfg.g1 = value;
            cfg.g2 = value;
        }
        Axis::Phi => cfg.phi = value,
        Axis::T => cfg.transmission = value,
        Axis::GammaTau => cfg.gamma_tau = value,
        Axis::R => {
            if cfg.input_a.kind != InputKind::SqueezedCoherent {
                return Err("axis 'r' requires a squeezed_coherent optical input".into());
            }
            cfg.input_a.r = value;
        }
        Axis::AlphaMag => {
            if cfg.input_a.kind == InputKind::Vacuum {
                return Err(
                    "axis 'alpha_mag' requires a driven (coherent or squeezed_coherent) \
                     optical input"
                        .into(),
                );
            }
            cfg.input_a.alpha_mag = value;
        }
        Axis::NPhTarget => {
            if cfg.input_a.kind == InputKind::Vacuum {
                return Err(
                    "axis 'n_ph_target' requires a driven (coherent or squeezed_coherent) \
                     optical input"
                        .into(),
                );
            }
            if cfg.input_b.kind != InputKind::Vacuum {
                return Err(
                    "axis 'n_ph_target' back-solves the optical drive and needs a vacuum \
                     atomic input"
                        .into(),
                );
            }
            // Probe number after the first pulse, vacuum atomic input:
            // n_ph = (N_α + sinh²r)(1 + G) + G with G = 2 sinh²g1, so the
            // drive that realizes a target follows by inversion.
            let big_g = 2.0 * cfg.g1.sinh().powi(2);
            let n_alpha = (value - big_g) / (1.0 + big_g) - cfg.input_a.r.sinh().powi(2);
            if !(n_alpha >= 0.0) {
                return Err(format!(
                    "probe-number target {value} is below the floor set by the pulse gain \
                     and the squeezing strength"
                ));
            }
            cfg.input_a.alpha_mag = n_alpha.sqrt();
        }
    }
    Ok(cfg)
}

fn evaluate_row(
    base: &InterferometerConfig,
    axis: Axis,
    baseline: BaselineConvention,
    outputs: &[OutputColumn],
    index: usize,
    value: f64,
) -> Row {
    let mut cells: Vec<Option<f64>> = vec![None; outputs.len()];
    let mut errors = Vec::new();

    let cfg = match apply_axis(base, axis, value) {
        Ok(cfg) => cfg,
        Err(message) => {
            errors.push(message);
            return Row {
                index,
                value,
                cells,
                errors,
            };
        }
    };

    let needs_report = outputs.iter().any(|c| *c != OutputColumn::Lcc);
    let report: Option<SensitivityReport> = if needs_report {
        match delta_phi_with(&cfg, baseline) {
            Ok(report) => Some(report),
            Err(err) => {
                errors.push(err.to_string());
                None
            }
        }
    } else {
        None
    };
    let lcc: Option<f64> = if outputs.contains(&OutputColumn::Lcc) {
        match lcc_rp1(&cfg) {
            Ok(v) => Some(v),
            Err(err) => {
                errors.push(err.to_string());
                None
            }
        }
    } else {
        None
    };

    for (slot, column) in cells.iter_mut().zip(outputs) {
        *slot = match column {
            OutputColumn::DeltaPhi => report.map(|r| r.delta_phi),
            OutputColumn::Sql => report.map(|r| r.sql),
            OutputColumn::Hl => report.map(|r| r.hl),
            OutputColumn::NPh => report.map(|r| r.n_ph),
            OutputColumn::VarX => report.map(|r| r.var_x),
            OutputColumn::Slope => report.map(|r| r.slope),
            OutputColumn::Lcc => lcc,
        };
    }
    Row {
        index,
        value,
        cells,
        errors,
    }
}

/// Requested columns with duplicates dropped, order preserved.
pub fn effective_outputs(file: &SweepFile) -> Result<Vec<OutputColumn>> {
    let mut outputs: Vec<OutputColumn> = Vec::new();
    for &column in &file.outputs {
        if !outputs.contains(&column) {
            outputs.push(column);
        }
    }
    if outputs.is_empty() {
        bail!("sweep requests no output columns");
    }
    Ok(outputs)
}

/// Evaluates every axis point. Rows come back in axis order whatever the
/// worker count, so emitted tables are byte-identical for any `workers`.
pub fn run_sweep(file: &SweepFile, workers: usize) -> Result<Vec<Row>> {
    file.range.validate()?;
    file.base.validate()?;
    let outputs = effective_outputs(file)?;
    let values = file.range.values();

    let eval = |i: usize| evaluate_row(&file.base, file.axis, file.baseline, &outputs, i, values[i]);
    let rows: Vec<Row> = if workers == 0 {
        (0..values.len()).into_par_iter().map(eval).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()?;
        pool.install(|| (0..values.len()).into_par_iter().map(eval).collect())
    };
    Ok(rows)
}

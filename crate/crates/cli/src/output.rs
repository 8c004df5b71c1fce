//! Emission: CSV tables with '#' metadata headers, JSON documents and
//! machine-readable error records. All floats print at 17 significant
//! digits so emitted tables are exact and diffable.

use serde::Serialize;

use su11_core::interferometer::{BaselineConvention, InterferometerConfig};
use su11_core::sensitivity::SensitivityReport;
use su11_core::validate::ValidationSummary;

use crate::files::ReportFile;
use crate::sweep::{Axis, OutputColumn, Row};

pub const RUN_CSV_SCHEMA: &str = "su11-run-csv/1";
pub const SWEEP_CSV_SCHEMA: &str = "su11-sweep-csv/1";
pub const SWEEP_JSON_SCHEMA: &str = "su11-sweep-report/1";
pub const LIMITS_CSV_SCHEMA: &str = "su11-limits-csv/1";
pub const LIMITS_JSON_SCHEMA: &str = "su11-limits/1";
pub const VALIDATE_JSON_SCHEMA: &str = "su11-validate/1";
pub const ERROR_SCHEMA: &str = "su11-error/1";

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_cell(cell: Option<f64>) -> String {
    cell.map(fmt_float).unwrap_or_default()
}

#[derive(Serialize)]
struct ErrorRecord {
    schema: &'static str,
    error: String,
}

/// One-line JSON error record for the diagnostic stream.
pub fn error_record(err: &anyhow::Error) -> String {
    serde_json::to_string(&ErrorRecord {
        schema: ERROR_SCHEMA,
        error: format!("{err:#}"),
    })
    .expect("error record serialization cannot fail")
}

#[derive(Serialize)]
struct RowErrorRecord<'a> {
    schema: &'static str,
    row: usize,
    axis: &'static str,
    value: f64,
    error: &'a str,
}

/// Sidecar log for failed sweep points: one JSON record per line, in row
/// order. Empty when every point succeeded.
pub fn sweep_error_log(axis: Axis, rows: &[Row]) -> String {
    let mut log = String::new();
    for row in rows {
        for error in &row.errors {
            let record = RowErrorRecord {
                schema: ERROR_SCHEMA,
                row: row.index,
                axis: axis.name(),
                value: row.value,
                error,
            };
            log.push_str(&serde_json::to_string(&record).expect("row error serialization"));
            log.push('\n');
        }
    }
    log
}

/// Report document for `run` (JSON): feeding it back through `--config`
/// reproduces the same report.
pub fn run_json(
    preset: &str,
    baseline: BaselineConvention,
    config: &InterferometerConfig,
    report: &SensitivityReport,
    lcc: f64,
) -> String {
    let file = ReportFile {
        schema: crate::files::REPORT_SCHEMA.to_string(),
        preset: preset.to_string(),
        baseline,
        lcc,
        config: *config,
        report: *report,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("report serialization");
    text.push('\n');
    text
}

/// Single-row CSV for `run`.
pub fn run_csv(preset: &str, baseline: BaselineConvention, report: &SensitivityReport, lcc: f64) -> String {
    let mut s = String::new();
    s.push_str(&format!("# schema: {RUN_CSV_SCHEMA}\n"));
    s.push_str(&format!("# preset: {preset}\n"));
    s.push_str(&format!("# baseline: {baseline}\n"));
    s.push_str("phi,mean_x,slope,var_X,delta_phi,n_ph,sql,hl,lcc,path_disagreement\n");
    let cells = [
        report.phi,
        report.mean_x,
        report.slope,
        report.var_x,
        report.delta_phi,
        report.n_ph,
        report.sql,
        report.hl,
        lcc,
        report.path_disagreement,
    ];
    let row: Vec<String> = cells.iter().map(|&v| fmt_float(v)).collect();
    s.push_str(&row.join(","));
    s.push('\n');
    s
}

/// Sweep CSV: '#' metadata, a header row, one row per axis point. Cells of
/// failed points stay empty; see the sidecar log for the reasons.
pub fn sweep_csv(
    preset: &str,
    baseline: BaselineConvention,
    axis: Axis,
    outputs: &[OutputColumn],
    rows: &[Row],
) -> String {
    let mut s = String::new();
    s.push_str(&format!("# schema: {SWEEP_CSV_SCHEMA}\n"));
    s.push_str(&format!("# preset: {preset}\n"));
    s.push_str(&format!("# baseline: {baseline}\n"));
    s.push_str(&format!("# axis: {}\n", axis.name()));
    if axis == Axis::NPhTarget {
        s.push_str(
            "# note: each probe-number target is realized by back-solving alpha_mag \
             at fixed gain and squeezing\n",
        );
    }
    s.push_str(axis.name());
    for column in outputs {
        s.push(',');
        s.push_str(column.name());
    }
    s.push('\n');
    for row in rows {
        s.push_str(&fmt_float(row.value));
        for &cell in &row.cells {
            s.push(',');
            s.push_str(&fmt_cell(cell));
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct SweepRowJson<'a> {
    value: f64,
    cells: &'a [Option<f64>],
    errors: &'a [String],
}

#[derive(Serialize)]
struct SweepJson<'a> {
    schema: &'static str,
    preset: &'a str,
    baseline: BaselineConvention,
    axis: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<SweepRowJson<'a>>,
}

/// Sweep result as one JSON document (errors inline, not in a sidecar).
pub fn sweep_json(
    preset: &str,
    baseline: BaselineConvention,
    axis: Axis,
    outputs: &[OutputColumn],
    rows: &[Row],
) -> String {
    let doc = SweepJson {
        schema: SWEEP_JSON_SCHEMA,
        preset,
        baseline,
        axis: axis.name(),
        columns: outputs.iter().map(|c| c.name()).collect(),
        rows: rows
            .iter()
            .map(|r| SweepRowJson {
                value: r.value,
                cells: &r.cells,
                errors: &r.errors,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("sweep serialization");
    text.push('\n');
    text
}

/// Baseline table rows: (n_ph, sql, hl).
pub fn limits_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut s = String::new();
    s.push_str(&format!("# schema: {LIMITS_CSV_SCHEMA}\n"));
    s.push_str("n_ph,sql,hl\n");
    for &(n_ph, sql, hl) in rows {
        s.push_str(&format!(
            "{},{},{}\n",
            fmt_float(n_ph),
            fmt_float(sql),
            fmt_float(hl)
        ));
    }
    s
}

#[derive(Serialize)]
struct LimitsRowJson {
    n_ph: f64,
    sql: f64,
    hl: f64,
}

#[derive(Serialize)]
struct LimitsJson {
    schema: &'static str,
    rows: Vec<LimitsRowJson>,
}

pub fn limits_json(rows: &[(f64, f64, f64)]) -> String {
    let doc = LimitsJson {
        schema: LIMITS_JSON_SCHEMA,
        rows: rows
            .iter()
            .map(|&(n_ph, sql, hl)| LimitsRowJson { n_ph, sql, hl })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("limits serialization");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct ValidateJson<'a> {
    schema: &'static str,
    regime: &'a str,
    seed: u64,
    passed: bool,
    fast: &'a ValidationSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<&'a ValidationSummary>,
}

pub fn validate_json(
    regime: &str,
    seed: u64,
    passed: bool,
    fast: &ValidationSummary,
    oracle: Option<&ValidationSummary>,
) -> String {
    let doc = ValidateJson {
        schema: VALIDATE_JSON_SCHEMA,
        regime,
        seed,
        passed,
        fast,
        oracle,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("validation serialization");
    text.push('\n');
    text
}

fn summary_lines(label: &str, summary: &ValidationSummary, out: &mut String) {
    for check in &summary.checks {
        out.push_str(&format!(
            "[validate] {label}: {:<40} worst {:>10.3e}  tol {:>7.1e}  n={:<5} inconclusive={:<4} {}\n",
            check.name,
            check.worst_gap,
            check.tolerance,
            check.count,
            check.inconclusive,
            if check.passed { "PASS" } else { "FAIL" }
        ));
    }
}

/// Human-readable validation report.
pub fn validate_text(
    regime: &str,
    seed: u64,
    passed: bool,
    fast: &ValidationSummary,
    oracle: Option<&ValidationSummary>,
) -> String {
    let mut s = String::new();
    summary_lines("fast", fast, &mut s);
    if let Some(oracle) = oracle {
        summary_lines("oracle", oracle, &mut s);
    }
    s.push_str(&format!(
        "[validate] overall: {} (regime {regime}, seed {seed})\n",
        if passed { "PASS" } else { "FAIL" }
    ));
    s
}

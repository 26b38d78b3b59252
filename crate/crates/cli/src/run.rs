use std::fs;
use std::io::{self, Write};

use serde::Serialize;
use spinorbit_core::chsh::{s_parameter, settings_scan, write_scan_csv, NoisePoint};
use spinorbit_core::mode_space::{sample_polarization_grid, write_grid_csv};
use spinorbit_core::table::fmt_sig;
use spinorbit_core::verification::{run_suite, CheckOutcome};
use spinorbit_core::{ChshResult, ChshSettings, ScanGrid, StateSpec};

use crate::config::{Format, Mode, PatternConfig, RunConfig};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Rendered output plus whether every verification check passed (always true
/// outside `verify`).
#[derive(Debug)]
pub struct Rendered {
    pub bytes: Vec<u8>,
    pub passed: bool,
}

#[derive(Serialize)]
struct ChshReport<'a> {
    schema_version: u32,
    mode: &'static str,
    state: &'a StateSpec,
    #[serde(flatten)]
    result: &'a ChshResult,
}

#[derive(Serialize)]
struct ScanReport<'a> {
    schema_version: u32,
    mode: &'static str,
    state: &'a StateSpec,
    grid: &'a ScanGrid,
    points: Vec<ScanRow>,
}

#[derive(Serialize)]
struct ScanRow {
    alpha: f64,
    beta: f64,
    mean_m: f64,
    var_m: f64,
    itot: f64,
    mean_ratio: f64,
    var_ratio: f64,
}

impl From<&NoisePoint> for ScanRow {
    fn from(p: &NoisePoint) -> Self {
        let [alpha, beta, mean_m, var_m, itot, mean_ratio, var_ratio] = p.as_row();
        Self {
            alpha,
            beta,
            mean_m,
            var_m,
            itot,
            mean_ratio,
            var_ratio,
        }
    }
}

#[derive(Serialize)]
struct PatternReport<'a> {
    schema_version: u32,
    mode: &'static str,
    pattern: &'a PatternConfig,
    samples: Vec<[f64; 6]>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema_version: u32,
    mode: &'static str,
    passed: bool,
    checks: &'a [CheckOutcome],
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
    bytes.push(b'\n');
    bytes
}

fn chsh_csv(result: &ChshResult, cs: &ChshSettings) -> Vec<u8> {
    let mut out = String::from("s_value,itot,alpha,alpha_prime,beta,beta_prime\n");
    let row = [
        result.s_value,
        result.itot,
        cs.alpha,
        cs.alpha_prime,
        cs.beta,
        cs.beta_prime,
    ];
    out.push_str(
        &row.iter()
            .map(|v| fmt_sig(*v, 12))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    out.into_bytes()
}

fn verify_csv(checks: &[CheckOutcome]) -> Vec<u8> {
    let mut out = String::from("name,passed,error,tolerance\n");
    for c in checks {
        out.push_str(&format!(
            "\"{}\",{},{},{}\n",
            c.name,
            c.passed,
            fmt_sig(c.error, 3),
            fmt_sig(c.tolerance, 3)
        ));
    }
    out.into_bytes()
}

/// Executes a configuration and renders its output in memory.
pub fn render(config: &RunConfig) -> Result<Rendered, CliError> {
    let mode = config.mode.name();
    let bytes = match config.mode {
        Mode::Chsh => {
            let spec = config.require_state()?;
            let result = s_parameter(&spec.prepare()?, config.chsh_settings)?;
            match config.format {
                Format::Json => json(&ChshReport {
                    schema_version: SCHEMA_VERSION,
                    mode,
                    state: &spec,
                    result: &result,
                }),
                Format::Csv => chsh_csv(&result, &config.chsh_settings),
            }
        }
        Mode::NoiseScan => {
            let spec = config.require_state()?;
            let points = settings_scan(&spec.prepare()?, &config.scan_grid)?;
            match config.format {
                Format::Json => json(&ScanReport {
                    schema_version: SCHEMA_VERSION,
                    mode,
                    state: &spec,
                    grid: &config.scan_grid,
                    points: points.iter().map(ScanRow::from).collect(),
                }),
                Format::Csv => {
                    let mut out = Vec::new();
                    write_scan_csv(&mut out, &points).expect("writing to memory");
                    out
                }
            }
        }
        Mode::ModePattern => {
            let samples = sample_polarization_grid(config.pattern.label, config.pattern.grid)?;
            match config.format {
                Format::Json => json(&PatternReport {
                    schema_version: SCHEMA_VERSION,
                    mode,
                    pattern: &config.pattern,
                    samples: samples.iter().map(|s| s.as_row()).collect(),
                }),
                Format::Csv => {
                    let mut out = Vec::new();
                    write_grid_csv(&mut out, &samples).expect("writing to memory");
                    out
                }
            }
        }
        Mode::Verify => {
            let checks = run_suite();
            let passed = checks.iter().all(|c| c.passed);
            let bytes = match config.format {
                Format::Json => json(&VerifyReport {
                    schema_version: SCHEMA_VERSION,
                    mode,
                    passed,
                    checks: &checks,
                }),
                Format::Csv => verify_csv(&checks),
            };
            return Ok(Rendered { bytes, passed });
        }
    };
    Ok(Rendered {
        bytes,
        passed: true,
    })
}

/// Renders and writes to the configured output, or stdout when there is none.
pub fn run(config: &RunConfig) -> Result<bool, CliError> {
    let rendered = render(config)?;
    match &config.output {
        Some(path) => fs::write(path, &rendered.bytes).map_err(|e| CliError::io(path, e))?,
        None => io::stdout()
            .write_all(&rendered.bytes)
            .map_err(|e| CliError::io("<stdout>", e))?,
    }
    Ok(rendered.passed)
}

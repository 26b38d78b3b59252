//! TOML run configuration. Unknown keys are rejected everywhere so that a typo in
//! a physics parameter fails loudly instead of silently taking a default.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};
use spinorbit_core::catalog::DEFAULT_PHASE_POINTS;
use spinorbit_core::fock::DEFAULT_EPSILON;
use spinorbit_core::mode_space::GridSpec;
use spinorbit_core::{
    BellModeLabel, ChshSettings, Error as CoreError, Family, ScanAxis, ScanGrid, StateSpec, C64,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Chsh,
    NoiseScan,
    ModePattern,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Chsh => "chsh",
            Mode::NoiseScan => "noise-scan",
            Mode::ModePattern => "mode-pattern",
            Mode::Verify => "verify",
        }
    }

    fn default_format(self) -> Format {
        match self {
            Mode::Chsh | Mode::Verify => Format::Json,
            Mode::NoiseScan | Mode::ModePattern => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternConfig {
    pub label: BellModeLabel,
    pub grid: GridSpec,
}

impl Default for PatternConfig {
    fn default() -> Self {
        Self {
            label: BellModeLabel::PsiPlus,
            grid: GridSpec {
                extent: 3.0,
                resolution: 65,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub state: Option<StateSpec>,
    pub chsh_settings: ChshSettings,
    pub scan_grid: ScanGrid,
    pub pattern: PatternConfig,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// The prepared state is mandatory for the analysis modes.
    pub fn require_state(&self) -> Result<StateSpec, CliError> {
        self.state.ok_or_else(|| {
            CliError::config(
                "state",
                format!("a [state] table is required in {} mode", self.mode.name()),
            )
        })
    }
}

pub fn default_scan_grid() -> ScanGrid {
    ScanGrid {
        alpha: ScanAxis::new(0.0, PI, 17),
        beta: ScanAxis::new(0.0, PI, 17),
    }
}

/// Radians, either as a number or as a `pi` literal such as `pi/8`, `3pi/8`,
/// `-pi/4` or `0.5*pi`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Angle(pub f64);

pub fn parse_angle(text: &str) -> Option<f64> {
    let t: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    let Some((head, tail)) = t.split_once("pi") else {
        return t.parse().ok().filter(|v: &f64| v.is_finite());
    };
    let head = head.strip_suffix('*').unwrap_or(head);
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().ok()?,
    };
    let denominator = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')?
            .parse::<f64>()
            .ok()
            .filter(|d| *d != 0.0)?,
    };
    Some(coefficient * PI / denominator).filter(|v| v.is_finite())
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct AngleVisitor;
        impl Visitor<'_> for AngleVisitor {
            type Value = Angle;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an angle in radians or a literal like \"pi/8\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Angle, E> {
                parse_angle(v)
                    .map(Angle)
                    .ok_or_else(|| E::custom(format!("cannot read `{v}` as an angle")))
            }
        }
        d.deserialize_any(AngleVisitor)
    }
}

/// A complex amplitude: a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude(pub C64);

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct AmplitudeVisitor;
        impl<'de> Visitor<'de> for AmplitudeVisitor {
            type Value = Amplitude;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a real number or a [re, im] pair")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Amplitude, E> {
                Ok(Amplitude(C64::new(v, 0.0)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Amplitude, E> {
                Ok(Amplitude(C64::new(v as f64, 0.0)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Amplitude, E> {
                Ok(Amplitude(C64::new(v as f64, 0.0)))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Amplitude, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Amplitude(C64::new(re, im)))
            }
        }
        d.deserialize_any(AmplitudeVisitor)
    }
}

fn default_phase_points() -> usize {
    DEFAULT_PHASE_POINTS
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
enum RawState {
    EntangledFock {
        n: usize,
    },
    MixedFock {
        n: usize,
    },
    WernerFock {
        n: usize,
        p: f64,
    },
    PureCoherent {
        u: Amplitude,
    },
    MixedCoherent {
        u: Amplitude,
        #[serde(default)]
        r: f64,
        #[serde(default)]
        phi: Angle,
        #[serde(default = "default_phase_points")]
        k: usize,
    },
    TwoModeSqueezedVacuum {
        zeta: Amplitude,
    },
}

impl From<RawState> for Family {
    fn from(raw: RawState) -> Self {
        match raw {
            RawState::EntangledFock { n } => Family::EntangledFock { n },
            RawState::MixedFock { n } => Family::MixedFock { n },
            RawState::WernerFock { n, p } => Family::WernerFock { n, p },
            RawState::PureCoherent { u } => Family::PureCoherent { u: u.0 },
            RawState::MixedCoherent { u, r, phi, k } => Family::MixedCoherent {
                u: u.0,
                r,
                phi: phi.0,
                k,
            },
            RawState::TwoModeSqueezedVacuum { zeta } => {
                Family::TwoModeSqueezedVacuum { zeta: zeta.0 }
            }
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChsh {
    alpha: Option<Angle>,
    alpha_prime: Option<Angle>,
    beta: Option<Angle>,
    beta_prime: Option<Angle>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    start: Angle,
    stop: Angle,
    points: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    alpha: Option<RawAxis>,
    beta: Option<RawAxis>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPattern {
    label: Option<BellModeLabel>,
    extent: Option<f64>,
    resolution: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<Mode>,
    output: Option<PathBuf>,
    format: Option<Format>,
    epsilon: Option<f64>,
    state: Option<RawState>,
    chsh: Option<RawChsh>,
    scan: Option<RawScan>,
    pattern: Option<RawPattern>,
}

fn axis(raw: Option<RawAxis>, fallback: ScanAxis, field: &str) -> Result<ScanAxis, CliError> {
    let Some(raw) = raw else { return Ok(fallback) };
    if raw.points == 0 {
        return Err(CliError::config(
            format!("{field}.points"),
            "an axis needs at least one point",
        ));
    }
    Ok(ScanAxis::new(raw.start.0, raw.stop.0, raw.points))
}

fn state_field(e: CoreError) -> CliError {
    match e {
        CoreError::InvalidParameter {
            name: "epsilon",
            reason,
        } => CliError::config("epsilon", reason),
        CoreError::InvalidParameter { name, reason } => {
            CliError::config(format!("state.{name}"), reason)
        }
        other => CliError::Core(other),
    }
}

/// Parses a configuration document that names its own `mode`.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    parse(text, None)
}

/// Parses a configuration for a mode chosen on the command line; a `mode` key in
/// the document, if present, must agree.
pub fn parse_config_for(mode: Mode, text: &str) -> Result<RunConfig, CliError> {
    parse(text, Some(mode))
}

fn parse(text: &str, requested: Option<Mode>) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Parse(Box::new(e)))?;
    let mode = match (requested, raw.mode) {
        (Some(r), Some(m)) if r != m => {
            return Err(CliError::config(
                "mode",
                format!(
                    "document says `{}` but `{}` was requested",
                    m.name(),
                    r.name()
                ),
            ))
        }
        (Some(m), _) | (None, Some(m)) => m,
        (None, None) => return Err(CliError::config("mode", "missing")),
    };

    let epsilon = raw.epsilon.unwrap_or(DEFAULT_EPSILON);
    let state = raw
        .state
        .map(|s| {
            let spec = StateSpec::new(s.into()).with_epsilon(epsilon);
            spec.validate().map_err(state_field).map(|()| spec)
        })
        .transpose()?;
    if state.is_none() && raw.epsilon.is_some() && !(epsilon > 0.0 && epsilon <= 1e-3) {
        return Err(CliError::config(
            "epsilon",
            format!("must lie in (0, 1e-3], got {epsilon}"),
        ));
    }

    let defaults = ChshSettings::default();
    let chsh = raw.chsh.unwrap_or_default();
    let pick = |a: Option<Angle>, d: f64| a.map_or(d, |a| a.0);
    let chsh_settings = ChshSettings {
        alpha: pick(chsh.alpha, defaults.alpha),
        alpha_prime: pick(chsh.alpha_prime, defaults.alpha_prime),
        beta: pick(chsh.beta, defaults.beta),
        beta_prime: pick(chsh.beta_prime, defaults.beta_prime),
    };

    let scan = raw.scan.unwrap_or_default();
    let fallback = default_scan_grid();
    let scan_grid = ScanGrid {
        alpha: axis(scan.alpha, fallback.alpha, "scan.alpha")?,
        beta: axis(scan.beta, fallback.beta, "scan.beta")?,
    };

    let pattern_raw = raw.pattern.unwrap_or_default();
    let default_pattern = PatternConfig::default();
    let pattern = PatternConfig {
        label: pattern_raw.label.unwrap_or(default_pattern.label),
        grid: GridSpec {
            extent: pattern_raw.extent.unwrap_or(default_pattern.grid.extent),
            resolution: pattern_raw
                .resolution
                .unwrap_or(default_pattern.grid.resolution),
        },
    };
    if !(pattern.grid.extent.is_finite() && pattern.grid.extent > 0.0) {
        return Err(CliError::config(
            "pattern.extent",
            "must be positive and finite",
        ));
    }
    if pattern.grid.resolution == 0 {
        return Err(CliError::config("pattern.resolution", "must be at least 1"));
    }

    Ok(RunConfig {
        mode,
        state,
        chsh_settings,
        scan_grid,
        pattern,
        output: raw.output,
        format: raw.format.unwrap_or(mode.default_format()),
    })
}

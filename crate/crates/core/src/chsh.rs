//! Intensity averages, intensity-difference noise and the CHSH parameter.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apparatus::{itot_operator, m_operator, ChshSettings, Settings};
use crate::catalog::{entangled_fock, mixed_fock, werner_fock, Family, StateSpec};
use crate::error::{Error, Result};
use crate::fock::{expect_one_body, moments_one_body, StateEnsemble};
use crate::table;

/// Header of the settings-scan CSV.
pub const SCAN_CSV_HEADER: &str = "alpha,beta,mean_m,var_m,itot,mean_ratio,var_ratio";

/// `<M>`, `Delta M^2` and `<I_tot>` at one setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisePoint {
    pub settings: Settings,
    pub mean_m: f64,
    pub var_m: f64,
    pub itot: f64,
    /// `var_m / itot`: 1 at shot noise, below 1 for intensity-difference squeezing.
    pub squeezing_ratio: f64,
}

impl NoisePoint {
    pub fn mean_ratio(&self) -> f64 {
        self.mean_m / self.itot
    }

    pub fn as_row(&self) -> [f64; 7] {
        [
            self.settings.alpha,
            self.settings.beta,
            self.mean_m,
            self.var_m,
            self.itot,
            self.mean_ratio(),
            self.squeezing_ratio,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshResult {
    pub settings: ChshSettings,
    pub s_value: f64,
    pub itot: f64,
    /// Ordered as [`ChshSettings::terms`].
    pub points: [NoisePoint; 4],
}

fn total_intensity(e: &StateEnsemble) -> Result<f64> {
    expect_one_body(e, &itot_operator())
}

fn point_with_itot(e: &StateEnsemble, s: Settings, itot: f64) -> Result<NoisePoint> {
    let (mean_m, second) = moments_one_body(e, &m_operator(s))?;
    let var_m = second - mean_m * mean_m;
    if var_m < -1e-9 {
        return Err(Error::NegativeVariance { value: var_m });
    }
    Ok(NoisePoint {
        settings: s,
        mean_m,
        var_m,
        itot,
        squeezing_ratio: var_m / itot,
    })
}

pub fn noise_point(e: &StateEnsemble, s: Settings) -> Result<NoisePoint> {
    point_with_itot(e, s, total_intensity(e)?)
}

/// `S = <M(a,b) + M(a,b') - M(a',b) + M(a',b')> / <I_tot>`.
pub fn s_parameter(e: &StateEnsemble, cs: ChshSettings) -> Result<ChshResult> {
    let itot = total_intensity(e)?;
    if itot.abs() < 1e-12 {
        return Err(Error::ZeroIntensity);
    }
    let terms = cs.terms();
    let mut points = Vec::with_capacity(4);
    for (s, _) in terms {
        points.push(point_with_itot(e, s, itot)?);
    }
    let numerator: f64 = terms
        .iter()
        .zip(&points)
        .map(|((_, sign), p)| sign * p.mean_m)
        .sum();
    Ok(ChshResult {
        settings: cs,
        s_value: numerator / itot,
        itot,
        points: points.try_into().expect("four settings"),
    })
}

/// Evenly spaced samples of one setting angle, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanAxis {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl ScanAxis {
    pub fn new(start: f64, stop: f64, points: usize) -> Self {
        Self {
            start,
            stop,
            points,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanGrid {
    pub alpha: ScanAxis,
    pub beta: ScanAxis,
}

impl ScanGrid {
    /// Lattice vertices, `alpha` outer and `beta` inner.
    pub fn settings(&self) -> Vec<Settings> {
        let betas = self.beta.values();
        self.alpha
            .values()
            .into_iter()
            .flat_map(|a| betas.iter().map(move |b| Settings::new(a, *b)))
            .collect()
    }
}

/// Noise points over a settings lattice. Vertices are evaluated in parallel;
/// the output order is the lattice order of [`ScanGrid::settings`].
pub fn settings_scan(e: &StateEnsemble, grid: &ScanGrid) -> Result<Vec<NoisePoint>> {
    let vertices = grid.settings();
    if vertices.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "scan grid has no vertices".into(),
        });
    }
    let itot = total_intensity(e)?;
    vertices
        .into_par_iter()
        .map(|s| point_with_itot(e, s, itot))
        .collect()
}

pub fn write_scan_csv<W: Write>(out: W, points: &[NoisePoint]) -> io::Result<()> {
    table::write_rows(
        out,
        SCAN_CSV_HEADER,
        points.iter().map(NoisePoint::as_row),
        12,
    )
}

/// Closed-form `(<M>/<I_tot>, Delta M^2/<I_tot>)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub mean_ratio: f64,
    /// `None` where no closed expression is available (mixed coherent state with `r > 0`).
    pub var_ratio: Option<f64>,
}

/// Closed-form `<I_tot>` of a catalog state.
pub fn closed_form_itot(spec: &StateSpec) -> f64 {
    match spec.family {
        Family::EntangledFock { n } | Family::MixedFock { n } | Family::WernerFock { n, .. } => {
            n as f64
        }
        Family::PureCoherent { u } => u.norm_sqr(),
        Family::MixedCoherent { u, .. } => 2.0 * u.norm_sqr(),
        Family::TwoModeSqueezedVacuum { zeta } => 2.0 * (zeta.norm() / 2.0).sinh().powi(2),
    }
}

/// Printed closed-form results for each family, independent of the Fock-space path.
pub fn closed_form(spec: &StateSpec, s: Settings) -> ClosedForm {
    let (a2, b2) = (2.0 * s.alpha, 2.0 * s.beta);
    let correlated = (b2 - a2).cos();
    let dephased = a2.cos() * b2.cos();
    let sa2 = a2.sin().powi(2);
    let sb2 = b2.sin().powi(2);
    let itot = closed_form_itot(spec);

    let entangled_var = (b2 - a2).sin().powi(2);
    let mixed_var = |n: usize| sa2 + sb2 + (n as f64 - 3.0) / 2.0 * sa2 * sb2;

    let (mean_ratio, var_ratio) = match spec.family {
        Family::EntangledFock { .. } => (correlated, Some(entangled_var)),
        Family::MixedFock { n } => (dephased, Some(mixed_var(n))),
        Family::WernerFock { n, p } => {
            let mean = p * correlated + (1.0 - p) * dephased;
            // <DM^2>_W = p <DM^2>_pure + (1-p) <DM^2>_mix + p(1-p)(<M>_pure - <M>_mix)^2
            let var = p * entangled_var
                + (1.0 - p) * mixed_var(n)
                + p * (1.0 - p) * n as f64 * (correlated - dephased).powi(2);
            (mean, Some(var))
        }
        Family::PureCoherent { .. } => (correlated, Some(1.0)),
        Family::MixedCoherent { r, phi, .. } => {
            let mean = dephased + r.sqrt() * phi.cos() * a2.sin() * b2.sin();
            let var = (r == 0.0).then(|| 1.0 + itot / 2.0 * sa2 * sb2);
            (mean, var)
        }
        Family::TwoModeSqueezedVacuum { .. } => {
            let var = 1.0 + (itot + 1.0) * (1.0 + (2.0 * a2).cos() * (2.0 * b2).cos()) / 2.0;
            (dephased, Some(var))
        }
    };
    ClosedForm {
        mean_ratio,
        var_ratio,
    }
}

/// `S` assembled from the closed-form mean ratios.
pub fn closed_form_s(spec: &StateSpec, cs: ChshSettings) -> f64 {
    cs.terms()
        .iter()
        .map(|(s, sign)| sign * closed_form(spec, *s).mean_ratio)
        .sum()
}

/// Residual of the Werner-mixture variance decomposition evaluated on simulated
/// pure, dephased and Werner states.
pub fn werner_decomposition_check(n: usize, p: f64, s: Settings) -> Result<f64> {
    let basis = StateSpec::new(Family::WernerFock { n, p }).default_basis()?;
    let op = m_operator(s);
    let stats = |e: &StateEnsemble| -> Result<(f64, f64)> {
        let (mean, second) = moments_one_body(e, &op)?;
        Ok((mean, second - mean * mean))
    };
    let (m_pure, v_pure) = stats(&entangled_fock(n, &basis)?)?;
    let (m_mix, v_mix) = stats(&mixed_fock(n, &basis)?)?;
    let (_, v_w) = stats(&werner_fock(n, p, &basis)?)?;
    Ok((v_w - (p * v_pure + (1.0 - p) * v_mix + p * (1.0 - p) * (m_pure - m_mix).powi(2))).abs())
}

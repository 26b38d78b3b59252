//! Self-check suite: closed-form oracles against the Fock-space path, plus the
//! structural invariants of each module. Used by the command-line `verify` mode.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::apparatus::{
    eight_mode_intensities, m_operator, setting_unitary, ChshSettings, Settings,
};
use crate::catalog::{Family, StateSpec};
use crate::chsh::{
    closed_form, closed_form_itot, noise_point, s_parameter, settings_scan,
    werner_decomposition_check, ScanAxis, ScanGrid,
};
use crate::error::Result;
use crate::fock::{moments_one_body, BasisConfig, StateEnsemble};
use crate::mode_space::BellModeLabel;
use crate::partitions::{
    bell_partition_matrix, coherent_by_generator_series, coherent_on_bell_mode,
    verify_partition_identity,
};

/// Dense brute-force Fock space over an arbitrary number of modes with a common
/// cutoff. Independent of the four-mode engine.
pub mod brute_force {
    use nalgebra::DMatrix;
    use num_complex::Complex64 as C64;

    #[derive(Debug, Clone, Copy)]
    pub struct Space {
        pub modes: usize,
        pub cutoff: usize,
    }

    impl Space {
        pub fn dim(&self) -> usize {
            (self.cutoff + 1).pow(self.modes as u32)
        }

        pub fn occupation(&self, mut index: usize) -> Vec<usize> {
            let mut occ = vec![0; self.modes];
            for m in (0..self.modes).rev() {
                occ[m] = index % (self.cutoff + 1);
                index /= self.cutoff + 1;
            }
            occ
        }

        pub fn index(&self, occ: &[usize]) -> Option<usize> {
            occ.iter().try_fold(0, |acc, &n| {
                (n <= self.cutoff).then_some(acc * (self.cutoff + 1) + n)
            })
        }

        /// `sum_j c_j a_j^dagger |vac>`.
        pub fn single_photon(&self, coefficients: &[C64]) -> Vec<C64> {
            let mut psi = vec![C64::new(0.0, 0.0); self.dim()];
            for (j, c) in coefficients.iter().enumerate() {
                let mut occ = vec![0; self.modes];
                occ[j] = 1;
                psi[self.index(&occ).unwrap()] += c;
            }
            psi
        }

        /// `sum_jk B_jk a_j^dagger a_k psi`; panics if the cutoff is exceeded.
        pub fn apply(&self, op: &DMatrix<f64>, psi: &[C64]) -> Vec<C64> {
            let mut out = vec![C64::new(0.0, 0.0); self.dim()];
            for (i, z) in psi.iter().enumerate() {
                if z.norm() == 0.0 {
                    continue;
                }
                let occ = self.occupation(i);
                for j in 0..self.modes {
                    for k in 0..self.modes {
                        let b = op[(j, k)];
                        if b == 0.0 || occ[k] == 0 {
                            continue;
                        }
                        let mut t = occ.clone();
                        let mut amp = (t[k] as f64).sqrt();
                        t[k] -= 1;
                        amp *= ((t[j] + 1) as f64).sqrt();
                        t[j] += 1;
                        let target = self.index(&t).expect("brute-force cutoff exceeded");
                        out[target] += z * b * amp;
                    }
                }
            }
            out
        }

        /// `(<B>, <B^2>)` for a normalized pure state.
        pub fn moments(&self, op: &DMatrix<f64>, psi: &[C64]) -> (f64, f64) {
            let once = self.apply(op, psi);
            let twice = self.apply(op, &once);
            let inner = |a: &[C64], b: &[C64]| -> f64 {
                a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
            };
            (inner(psi, &once), inner(psi, &twice))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Largest deviation observed, or `NaN` when the check errored.
    pub error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn outcome(name: &str, tolerance: f64, result: Result<f64>) -> CheckOutcome {
    match result {
        Ok(error) => CheckOutcome {
            name: name.to_string(),
            passed: error <= tolerance,
            error,
            tolerance,
            detail: None,
        },
        Err(e) => CheckOutcome {
            name: name.to_string(),
            passed: false,
            error: f64::NAN,
            tolerance,
            detail: Some(e.to_string()),
        },
    }
}

fn grid(points: usize) -> ScanGrid {
    ScanGrid {
        alpha: ScanAxis::new(0.0, PI, points),
        beta: ScanAxis::new(0.0, PI, points),
    }
}

/// Largest deviation of simulated mean and variance ratios from the closed form
/// over a settings lattice.
pub fn closed_form_deviation(
    spec: &StateSpec,
    lattice: &ScanGrid,
    check_variance: bool,
) -> Result<f64> {
    let e = spec.prepare()?;
    let mut worst: f64 = 0.0;
    for p in settings_scan(&e, lattice)? {
        let cf = closed_form(spec, p.settings);
        worst = worst.max((p.mean_ratio() - cf.mean_ratio).abs());
        if check_variance {
            if let Some(v) = cf.var_ratio {
                worst = worst.max((p.squeezing_ratio - v).abs());
            }
        }
    }
    Ok(worst)
}

fn s_deviation(spec: &StateSpec, expected: f64) -> Result<f64> {
    let r = s_parameter(&spec.prepare()?, ChshSettings::default())?;
    Ok((r.s_value - expected).abs())
}

/// 8-mode (port 2 in vacuum) vs 4-mode moments of `M` for the single-photon
/// entangled state.
pub fn port_two_contribution(s: Settings) -> Result<f64> {
    let space = brute_force::Space {
        modes: 8,
        cutoff: 2,
    };
    let amp = C64::new(1.0 / SQRT_2, 0.0);
    let zero = C64::new(0.0, 0.0);
    let psi = space.single_photon(&[amp, zero, zero, amp, zero, zero, zero, zero]);
    let (i1, i2) = eight_mode_intensities(s);
    let (mean8, second8) = space.moments(&(i1 - i2), &psi);
    let e = StateSpec::new(Family::EntangledFock { n: 1 }).prepare()?;
    let (mean4, second4) = moments_one_body(&e, &m_operator(s))?;
    Ok((mean8 - mean4).abs().max((second8 - second4).abs()))
}

fn itot_setting_dependence(spec: &StateSpec) -> Result<f64> {
    let e = spec.prepare()?;
    let points = settings_scan(&e, &grid(5))?;
    let reference = closed_form_itot(spec);
    // itot is taken from the identity operator; compare with the sum of port
    // intensities reconstructed as mean(I_1 + I_2) through the 8-mode matrices.
    let mut worst: f64 = 0.0;
    for p in points {
        let (i1, i2) = eight_mode_intensities(p.settings);
        let total = (i1 + i2).fixed_view::<4, 4>(0, 0).into_owned();
        let op = crate::fock::OneBodyOperator::from_real(Matrix4::from_fn(|i, j| total[(i, j)]))?;
        let (mean, _) = moments_one_body(&e, &op)?;
        worst = worst.max((mean - reference).abs());
    }
    Ok(worst)
}

fn quadrature_exactness() -> Result<f64> {
    let u = C64::new(1.5, 0.5);
    let spec = |k| {
        StateSpec::new(Family::MixedCoherent {
            u,
            r: 0.4,
            phi: 0.7,
            k,
        })
    };
    let coarse = spec(5).prepare()?;
    let fine = spec(16).prepare()?;
    let mut worst: f64 = 0.0;
    for s in grid(4).settings() {
        let a = noise_point(&coarse, s)?;
        let b = noise_point(&fine, s)?;
        worst = worst
            .max((a.mean_m - b.mean_m).abs())
            .max((a.var_m - b.var_m).abs());
    }
    Ok(worst)
}

fn mixture_convexity() -> Result<f64> {
    // law of total variance: the mixture variance is never below the mean member variance
    let specs = [
        StateSpec::new(Family::MixedFock { n: 3 }),
        StateSpec::new(Family::WernerFock { n: 2, p: 0.4 }),
        StateSpec::new(Family::MixedCoherent {
            u: C64::new(1.0, 0.0),
            r: 0.5,
            phi: 0.3,
            k: 8,
        }),
    ];
    let mut worst_violation: f64 = 0.0;
    for spec in specs {
        let e = spec.prepare()?;
        for s in grid(4).settings() {
            let op = m_operator(s);
            let (mean, second) = moments_one_body(&e, &op)?;
            let mut within = 0.0;
            for (w, member) in e.members() {
                let (m, q) = moments_one_body(&StateEnsemble::pure(member.clone()), &op)?;
                within += w * (q - m * m);
            }
            worst_violation = worst_violation.max(within - (second - mean * mean));
        }
    }
    Ok(worst_violation.max(0.0))
}

fn orthogonality() -> Result<f64> {
    let p = bell_partition_matrix().0;
    let mut worst = (p * p.transpose() - Matrix4::identity()).norm();
    for s in grid(7).settings() {
        let u = setting_unitary(s);
        worst = worst.max((u.transpose() * u - Matrix4::identity()).norm());
    }
    Ok(worst)
}

fn m_spectrum() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in grid(7).settings() {
        let m = m_operator(s).matrix().map(|z| z.re);
        let mut eig: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        for (e, want) in eig.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            worst = worst.max((e - want).abs());
        }
    }
    Ok(worst)
}

fn coherent_factorization() -> Result<f64> {
    let basis = BasisConfig::new([30, 0, 0, 30])?;
    let mut worst: f64 = 0.0;
    for u in [C64::new(2.0, 0.0), C64::new(-1.0, 1.4), C64::new(0.0, 0.5)] {
        let factored = coherent_on_bell_mode(u, BellModeLabel::PsiPlus, &basis)?;
        let direct = coherent_by_generator_series(u, BellModeLabel::PsiPlus, &basis)?;
        worst = worst.max(factored.distance(&direct)?);
    }
    Ok(worst)
}

/// Runs every check; each outcome carries its own tolerance.
pub fn run_suite() -> Vec<CheckOutcome> {
    let cs = ChshSettings::default();
    let mut out = Vec::new();
    let lattice = grid(9);

    out.push(outcome(
        "entangled-fock N=1: S = 2 sqrt2",
        1e-10,
        s_deviation(
            &StateSpec::new(Family::EntangledFock { n: 1 }),
            2.0 * SQRT_2,
        ),
    ));
    for n in [1, 2, 5] {
        out.push(outcome(
            &format!("entangled-fock N={n}: mean and noise ratios vs closed form"),
            1e-9,
            closed_form_deviation(&StateSpec::new(Family::EntangledFock { n }), &lattice, true),
        ));
    }
    out.push(outcome(
        "entangled-fock N=3: 50% squeezing at CHSH settings",
        1e-9,
        {
            StateSpec::new(Family::EntangledFock { n: 3 })
                .prepare()
                .and_then(|e| {
                    let r = s_parameter(&e, cs)?;
                    let mut worst = r
                        .points
                        .iter()
                        .map(|p| (p.squeezing_ratio - 0.5).abs())
                        .fold(0.0, f64::max);
                    worst = worst.max(
                        noise_point(&e, Settings::new(0.3, 0.3 + FRAC_PI_2))?
                            .squeezing_ratio
                            .abs(),
                    );
                    Ok(worst)
                })
        },
    ));
    out.push(outcome(
        "mixed-fock N=2: S = sqrt2",
        1e-10,
        s_deviation(&StateSpec::new(Family::MixedFock { n: 2 }), SQRT_2),
    ));
    for n in [1, 2, 5] {
        out.push(outcome(
            &format!("mixed-fock N={n}: mean and noise ratios vs closed form"),
            1e-9,
            closed_form_deviation(&StateSpec::new(Family::MixedFock { n }), &lattice, true),
        ));
    }
    for p in [0.0, 0.2, SQRT_2 - 1.0, 0.8, 1.0] {
        out.push(outcome(
            &format!("werner-fock p={p:.4}: S = (1+p) sqrt2"),
            1e-10,
            s_deviation(
                &StateSpec::new(Family::WernerFock { n: 2, p }),
                (1.0 + p) * SQRT_2,
            ),
        ));
    }
    out.push(outcome(
        "werner-fock: variance decomposition residual",
        1e-10,
        {
            let cases = [(1, 0.3, 0.2, 1.1), (2, 0.7, -0.4, 0.9), (3, 0.5, 1.3, 0.1)];
            cases.iter().try_fold(0.0f64, |acc, &(n, p, a, b)| {
                Ok(acc.max(werner_decomposition_check(n, p, Settings::new(a, b))?))
            })
        },
    ));
    for u in [1.0, 2.0] {
        let spec = StateSpec::new(Family::PureCoherent {
            u: C64::new(u, 0.0),
        });
        out.push(outcome(
            &format!("pure-coherent u={u}: S = 2 sqrt2"),
            5e-10,
            s_deviation(&spec, 2.0 * SQRT_2),
        ));
        out.push(outcome(
            &format!("pure-coherent u={u}: shot-noise-limited at every setting"),
            1e-6,
            closed_form_deviation(&spec, &lattice, true),
        ));
    }
    for (r, phi) in [(0.0, 0.0), (0.25, 0.0), (1.0, 0.0), (0.5, PI / 3.0)] {
        let spec = StateSpec::new(Family::MixedCoherent {
            u: C64::new(2.0, 0.0),
            r,
            phi,
            k: 8,
        });
        out.push(outcome(
            &format!("mixed-coherent R={r} phi={phi:.4}: S = (1 + sqrt R cos phi) sqrt2"),
            1e-8,
            s_deviation(&spec, (1.0 + r.sqrt() * phi.cos()) * SQRT_2),
        ));
        out.push(outcome(
            &format!("mixed-coherent R={r} phi={phi:.4}: ratios vs closed form"),
            1e-8,
            closed_form_deviation(&spec, &lattice, true),
        ));
    }
    for zeta in [0.5, 1.0, 2.0] {
        let spec = StateSpec::new(Family::TwoModeSqueezedVacuum {
            zeta: C64::new(zeta, 0.0),
        });
        out.push(outcome(
            &format!("squeezed-vacuum zeta={zeta}: S = sqrt2"),
            1e-8,
            s_deviation(&spec, SQRT_2),
        ));
        out.push(outcome(
            &format!("squeezed-vacuum zeta={zeta}: ratios vs closed form"),
            1e-8,
            closed_form_deviation(&spec, &lattice, true),
        ));
    }
    out.push(outcome("partition identity N<=5", 1e-12, {
        BasisConfig::new([5, 5, 5, 5]).and_then(|b| {
            (0..=5).try_fold(0.0f64, |acc, n| {
                Ok(acc.max(verify_partition_identity(n, &b)?))
            })
        })
    }));
    out.push(outcome(
        "coherent Bell-mode factorization",
        1e-9,
        coherent_factorization(),
    ));
    out.push(outcome("port-2 vacuum modes contribute nothing", 1e-12, {
        [
            (0.1, 0.2),
            (FRAC_PI_2 / 4.0, 0.0),
            (1.3, -0.7),
            (2.2, 0.4),
            (-0.5, 3.0),
        ]
        .iter()
        .try_fold(0.0f64, |acc, &(a, b)| {
            Ok(acc.max(port_two_contribution(Settings::new(a, b))?))
        })
    }));
    out.push(outcome(
        "setting unitary and partition matrix orthogonal",
        1e-13,
        orthogonality(),
    ));
    out.push(outcome(
        "spectrum of M is {-1,-1,+1,+1}",
        1e-12,
        m_spectrum(),
    ));
    out.push(outcome("<I_tot> independent of settings", 1e-8, {
        let specs = [
            StateSpec::new(Family::EntangledFock { n: 2 }),
            StateSpec::new(Family::MixedCoherent {
                u: C64::new(1.0, 0.0),
                r: 0.5,
                phi: 0.2,
                k: 8,
            }),
            StateSpec::new(Family::TwoModeSqueezedVacuum {
                zeta: C64::new(1.0, 0.0),
            }),
        ];
        specs
            .iter()
            .try_fold(0.0f64, |acc, s| Ok(acc.max(itot_setting_dependence(s)?)))
    }));
    out.push(outcome(
        "mixture variance convexity",
        1e-12,
        mixture_convexity(),
    ));
    out.push(outcome(
        "phase quadrature K=5 vs K=16",
        1e-10,
        quadrature_exactness(),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_indexing() {
        let s = brute_force::Space {
            modes: 3,
            cutoff: 2,
        };
        assert_eq!(s.dim(), 27);
        for i in 0..s.dim() {
            assert_eq!(s.index(&s.occupation(i)), Some(i));
        }
        assert_eq!(s.index(&[0, 3, 0]), None);
    }

    #[test]
    fn port_two_is_inert() {
        assert!(port_two_contribution(Settings::new(0.4, 1.7)).unwrap() < 1e-12);
    }
}

#[cfg(test)]
mod suite {
    #[test]
    fn every_check_passes() {
        let failures: Vec<_> = super::run_suite()
            .into_iter()
            .filter(|c| !c.passed)
            .collect();
        assert!(failures.is_empty(), "{failures:#?}");
    }
}

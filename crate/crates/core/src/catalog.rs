//! Input-state families fed into the measurement apparatus.
//!
//! Every family excites only `Hh` and `Vv`. Default bases give `Hv` and `Vh`
//! room for the two one-body applications needed by second moments, and give
//! displaced or squeezed modes two levels of headroom above the tail cutoff.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    pair_cutoff, poisson_cutoff, BasisConfig, ModeIndex, PureState, StateEnsemble, DEFAULT_EPSILON,
};
use crate::mode_space::BellModeLabel;
use crate::partitions::{binomial_weight, fock_on_bell_mode};

/// Default number of phase points for the mixed coherent state.
pub const DEFAULT_PHASE_POINTS: usize = 8;
/// Smallest admissible number of phase points.
pub const MIN_PHASE_POINTS: usize = 5;

const HEADROOM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// `|N>` on the `Psi+` mode.
    EntangledFock { n: usize },
    /// `|N>` on `Psi+` with the inter-mode phases randomized.
    MixedFock { n: usize },
    /// `p |N><N|_Psi+ + (1-p) rho_N`.
    WernerFock { n: usize, p: f64 },
    /// Coherent amplitude `u` on `Psi+`.
    PureCoherent { u: C64 },
    /// `|u>_Hh` with `Vv` fed by a coupler of reflectivity `r` and reflection
    /// phase `phi`, mixed over `k` equally spaced relative phases.
    MixedCoherent { u: C64, r: f64, phi: f64, k: usize },
    /// Two-mode squeezed vacuum on `(Hh, Vv)`.
    TwoModeSqueezedVacuum { zeta: C64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    #[serde(flatten)]
    pub family: Family,
    pub epsilon: f64,
}

impl StateSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1e-3) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must lie in (0, 1e-3], got {}", self.epsilon),
            });
        }
        match self.family {
            Family::WernerFock { p, .. } => check_unit(p, "p"),
            Family::MixedCoherent { u, r, phi, k } => {
                check_finite(u.re, "u")?;
                check_finite(u.im, "u")?;
                check_unit(r, "r")?;
                check_finite(phi, "phi")?;
                check_phase_points(k)
            }
            Family::PureCoherent { u } => {
                check_finite(u.re, "u")?;
                check_finite(u.im, "u")
            }
            Family::TwoModeSqueezedVacuum { zeta } => {
                check_finite(zeta.re, "zeta")?;
                check_finite(zeta.im, "zeta")
            }
            Family::EntangledFock { .. } | Family::MixedFock { .. } => Ok(()),
        }
    }

    /// Smallest basis adequate for first and second moments of one-body observables.
    pub fn default_basis(&self) -> Result<BasisConfig> {
        self.validate()?;
        let eps = self.epsilon;
        let cutoffs = match self.family {
            Family::EntangledFock { n }
            | Family::MixedFock { n }
            | Family::WernerFock { n, .. } => {
                let spill = n.min(HEADROOM);
                [n, spill, spill, n]
            }
            Family::PureCoherent { u } => {
                let c = poisson_cutoff(u.norm_sqr() / 2.0, eps) + HEADROOM;
                [c, HEADROOM, HEADROOM, c]
            }
            Family::MixedCoherent { u, r, .. } => {
                let reach = (r.sqrt() + (1.0 - r).sqrt()).powi(2);
                [
                    poisson_cutoff(u.norm_sqr(), eps) + HEADROOM,
                    HEADROOM,
                    HEADROOM,
                    poisson_cutoff(u.norm_sqr() * reach, eps) + HEADROOM,
                ]
            }
            Family::TwoModeSqueezedVacuum { zeta } => {
                let c = pair_cutoff(zeta.norm() / 2.0, eps) + HEADROOM;
                [c, HEADROOM, HEADROOM, c]
            }
        };
        BasisConfig::new(cutoffs)?.with_epsilon(eps)
    }

    /// Builds the ensemble on [`StateSpec::default_basis`].
    pub fn prepare(&self) -> Result<StateEnsemble> {
        let basis = self.default_basis()?;
        self.prepare_on(&basis)
    }

    pub fn prepare_on(&self, basis: &BasisConfig) -> Result<StateEnsemble> {
        self.validate()?;
        match self.family {
            Family::EntangledFock { n } => entangled_fock(n, basis),
            Family::MixedFock { n } => mixed_fock(n, basis),
            Family::WernerFock { n, p } => werner_fock(n, p, basis),
            Family::PureCoherent { u } => pure_coherent(u, basis),
            Family::MixedCoherent { u, r, phi, k } => mixed_coherent(u, r, phi, k, basis),
            Family::TwoModeSqueezedVacuum { zeta } => two_mode_squeezed(zeta, basis),
        }
    }
}

fn check_finite(x: f64, name: &'static str) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite, got {x}"),
        });
    }
    Ok(())
}

fn check_unit(x: f64, name: &'static str) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must lie in [0, 1], got {x}"),
        });
    }
    Ok(())
}

fn check_phase_points(k: usize) -> Result<()> {
    if k < MIN_PHASE_POINTS {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("at least {MIN_PHASE_POINTS} phase points required, got {k}"),
        });
    }
    Ok(())
}

pub fn entangled_fock(n: usize, basis: &BasisConfig) -> Result<StateEnsemble> {
    Ok(StateEnsemble::pure(fock_on_bell_mode(
        n,
        BellModeLabel::PsiPlus,
        basis,
    )?))
}

/// Binomially weighted mixture of `|n>_Hh |N-n>_Vv`.
pub fn mixed_fock(n: usize, basis: &BasisConfig) -> Result<StateEnsemble> {
    basis.require_cutoff(ModeIndex::Hh, n)?;
    basis.require_cutoff(ModeIndex::Vv, n)?;
    let members = (0..=n)
        .map(|k| {
            Ok((
                binomial_weight(n, k),
                PureState::fock(basis, [k, 0, 0, n - k])?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::new(members)
}

pub fn werner_fock(n: usize, p: f64, basis: &BasisConfig) -> Result<StateEnsemble> {
    check_unit(p, "p")?;
    entangled_fock(n, basis)?.mix(p, &mixed_fock(n, basis)?)
}

/// `|u/sqrt2>_Hh |u/sqrt2>_Vv`.
pub fn pure_coherent(u: C64, basis: &BasisConfig) -> Result<StateEnsemble> {
    let half = u / SQRT_2;
    let state = PureState::vacuum(basis)
        .displace(ModeIndex::Hh, half)?
        .displace(ModeIndex::Vv, half)?;
    Ok(StateEnsemble::pure(state))
}

/// Amplitude reaching `Vv` for relative phase `theta`.
pub fn contaminated_amplitude(u: C64, r: f64, phi: f64, theta: f64) -> C64 {
    u * (C64::from_polar(r.sqrt(), phi) + C64::from_polar((1.0 - r).sqrt(), theta))
}

/// `|u>_Hh` times the phase average of `|u'(theta)>_Vv`, sampled at
/// `theta_j = 2 pi j / k`. The sampled average is exact for every moment whose
/// phase dependence has trigonometric degree below `k`.
pub fn mixed_coherent(
    u: C64,
    r: f64,
    phi: f64,
    k: usize,
    basis: &BasisConfig,
) -> Result<StateEnsemble> {
    check_unit(r, "r")?;
    check_phase_points(k)?;
    let carrier = PureState::vacuum(basis).displace(ModeIndex::Hh, u)?;
    let weight = 1.0 / k as f64;
    let members = (0..k)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / k as f64;
            let state =
                carrier.displace(ModeIndex::Vv, contaminated_amplitude(u, r, phi, theta))?;
            Ok((weight, state))
        })
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::new(members)
}

pub fn two_mode_squeezed(zeta: C64, basis: &BasisConfig) -> Result<StateEnsemble> {
    let state = PureState::vacuum(basis).two_mode_squeeze(ModeIndex::Hh, ModeIndex::Vv, zeta)?;
    Ok(StateEnsemble::pure(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expect_one_body, OneBodyOperator};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn itot(e: &StateEnsemble) -> f64 {
        expect_one_body(e, &OneBodyOperator::identity()).unwrap()
    }

    fn assert_normalized(e: &StateEnsemble) {
        let w: f64 = e.members().iter().map(|(w, _)| w).sum();
        assert!((w - 1.0).abs() < 1e-12);
        for (_, s) in e.members() {
            assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fock_families() {
        let spec = StateSpec::new(Family::EntangledFock { n: 3 });
        let e = spec.prepare().unwrap();
        assert_eq!(e.basis().cutoffs(), [3, 2, 2, 3]);
        assert_eq!(e.members().len(), 1);
        let s = &e.members()[0].1;
        assert_eq!(s.amplitudes().iter().filter(|z| z.norm() > 0.0).count(), 4);
        assert_normalized(&e);

        let zero = StateSpec::new(Family::EntangledFock { n: 0 })
            .prepare()
            .unwrap();
        assert_eq!(zero.members()[0].1.amplitude([0, 0, 0, 0]), c(1.0, 0.0));

        let mixed = StateSpec::new(Family::MixedFock { n: 2 })
            .prepare()
            .unwrap();
        let weights: Vec<f64> = mixed.members().iter().map(|(w, _)| *w).collect();
        for (w, want) in weights.iter().zip([0.25, 0.5, 0.25]) {
            assert!((w - want).abs() < 1e-15);
        }
        let one = StateSpec::new(Family::MixedFock { n: 1 })
            .prepare()
            .unwrap();
        assert_eq!(one.members()[0].1.amplitude([0, 0, 0, 1]), c(1.0, 0.0));
        assert_eq!(one.members()[1].1.amplitude([1, 0, 0, 0]), c(1.0, 0.0));
        assert!((one.members()[0].0 - 0.5).abs() < 1e-15);
        let ten = StateSpec::new(Family::MixedFock { n: 10 })
            .prepare()
            .unwrap();
        assert_normalized(&ten);
    }

    #[test]
    fn werner_family() {
        let b = BasisConfig::new([1, 1, 1, 1]).unwrap();
        assert_eq!(
            werner_fock(1, 1.0, &b).unwrap(),
            entangled_fock(1, &b).unwrap()
        );
        assert_eq!(werner_fock(1, 0.0, &b).unwrap(), mixed_fock(1, &b).unwrap());
        let half = werner_fock(1, 0.5, &b).unwrap();
        let w: Vec<f64> = half.members().iter().map(|(w, _)| *w).collect();
        assert_eq!(w, vec![0.5, 0.25, 0.25]);
        let err = StateSpec::new(Family::WernerFock { n: 1, p: 1.5 })
            .prepare()
            .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "p", .. }));
    }

    #[test]
    fn pure_coherent_family() {
        let zero = StateSpec::new(Family::PureCoherent { u: c(0.0, 0.0) })
            .prepare()
            .unwrap();
        assert_eq!(zero.members()[0].1.amplitude([0, 0, 0, 0]), c(1.0, 0.0));
        let e = StateSpec::new(Family::PureCoherent { u: c(2.0, 0.0) })
            .prepare()
            .unwrap();
        assert!((itot(&e) - 4.0).abs() < 1e-9);
        assert_normalized(&e);
        // total number is Poisson(|u|^2)
        let dist = e.members()[0].1.total_number_distribution();
        let mut pmf = (-4.0f64).exp();
        for (n, p) in dist.iter().enumerate().take(25) {
            if n > 0 {
                pmf *= 4.0 / n as f64;
            }
            assert!((p - pmf).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn mixed_coherent_family() {
        let u = c(2.0, 0.0);
        let e = StateSpec::new(Family::MixedCoherent {
            u,
            r: 0.0,
            phi: 0.0,
            k: 8,
        })
        .prepare()
        .unwrap();
        assert_eq!(e.members().len(), 8);
        assert!((itot(&e) - 8.0).abs() < 1e-9);
        assert_normalized(&e);

        let e = StateSpec::new(Family::MixedCoherent {
            u,
            r: 1.0,
            phi: 0.0,
            k: 5,
        })
        .prepare()
        .unwrap();
        let first = &e.members()[0].1;
        for (_, s) in e.members() {
            assert!(s.distance(first).unwrap() < 1e-14);
        }
        assert!((first.mean_occupation(ModeIndex::Vv) - 4.0).abs() < 1e-9);

        let err = StateSpec::new(Family::MixedCoherent {
            u,
            r: 0.5,
            phi: 0.0,
            k: 4,
        })
        .prepare()
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "k", .. }));
        let err = StateSpec::new(Family::MixedCoherent {
            u,
            r: -0.1,
            phi: 0.0,
            k: 8,
        })
        .prepare()
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "r", .. }));
    }

    #[test]
    fn squeezed_family() {
        let zero = StateSpec::new(Family::TwoModeSqueezedVacuum { zeta: c(0.0, 0.0) })
            .prepare()
            .unwrap();
        assert_eq!(zero.members()[0].1.amplitude([0, 0, 0, 0]), c(1.0, 0.0));
        let e = StateSpec::new(Family::TwoModeSqueezedVacuum { zeta: c(2.0, 0.0) })
            .prepare()
            .unwrap();
        assert!((itot(&e) - 2.762196).abs() < 1e-6);
        assert!((itot(&e) - 2.0 * 1f64.sinh().powi(2)).abs() < 1e-10);
        let s = &e.members()[0].1;
        for (i, z) in s.amplitudes().iter().enumerate() {
            let occ = s.basis().occupation(i);
            if occ[0] != occ[3] {
                assert_eq!(*z, c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn epsilon_range_enforced() {
        let spec = StateSpec::new(Family::EntangledFock { n: 1 }).with_epsilon(0.1);
        assert!(matches!(
            spec.prepare(),
            Err(Error::InvalidParameter {
                name: "epsilon",
                ..
            })
        ));
    }

    #[test]
    fn spec_serializes_flat() {
        let spec = StateSpec::new(Family::WernerFock { n: 2, p: 0.5 });
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"family":"werner-fock","n":2,"p":0.5,"epsilon":1e-10}"#
        );
        assert_eq!(serde_json::from_str::<StateSpec>(&json).unwrap(), spec);
        let typo = r#"{"family":"werner-fock","n":2,"q":0.5,"epsilon":1e-10}"#;
        assert!(serde_json::from_str::<StateSpec>(typo).is_err());
    }
}

//! Separable vs. Bell-mode partitions of the four-mode field.
//!
//! The Bell-mode annihilators are `a_Psi(+/-) = (a_Hh +/- a_Vv)/sqrt2` and
//! `a_Phi(+/-) = (a_Hv +/- a_Vh)/sqrt2`. States on Bell modes are always
//! materialized in the separable Fock basis. Note the `Phi-` sign here follows
//! the operator relations, the opposite global sign to
//! [`VectorModeCoefficients::bell`](crate::mode_space::VectorModeCoefficients::bell).

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::fock::{BasisConfig, LadderKind, ModeIndex, PureState};
use crate::mode_space::BellModeLabel;

/// Orthogonal matrix whose rows `(Psi+, Psi-, Phi+, Phi-)` express Bell-mode
/// annihilators over the columns `(Hh, Hv, Vh, Vv)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionMatrix(pub Matrix4<f64>);

impl PartitionMatrix {
    pub fn row(&self, label: BellModeLabel) -> [f64; 4] {
        let r = self.0.row(row_index(label));
        [r[0], r[1], r[2], r[3]]
    }
}

fn row_index(label: BellModeLabel) -> usize {
    match label {
        BellModeLabel::PsiPlus => 0,
        BellModeLabel::PsiMinus => 1,
        BellModeLabel::PhiPlus => 2,
        BellModeLabel::PhiMinus => 3,
    }
}

pub fn bell_partition_matrix() -> PartitionMatrix {
    let s = FRAC_1_SQRT_2;
    PartitionMatrix(Matrix4::new(
        s, 0.0, 0.0, s, //
        s, 0.0, 0.0, -s, //
        0.0, s, s, 0.0, //
        0.0, s, -s, 0.0,
    ))
}

/// The two separable modes a Bell mode is built from, and whether the second
/// one enters with a minus sign.
pub fn constituents(label: BellModeLabel) -> (ModeIndex, ModeIndex, bool) {
    match label {
        BellModeLabel::PsiPlus => (ModeIndex::Hh, ModeIndex::Vv, false),
        BellModeLabel::PsiMinus => (ModeIndex::Hh, ModeIndex::Vv, true),
        BellModeLabel::PhiPlus => (ModeIndex::Hv, ModeIndex::Vh, false),
        BellModeLabel::PhiMinus => (ModeIndex::Hv, ModeIndex::Vh, true),
    }
}

/// `sqrt(N! / (2^N n! (N-n)!))`.
pub(crate) fn binomial_amplitude(total: usize, n: usize) -> f64 {
    binomial_weight(total, n).sqrt()
}

/// `N! / (2^N n! (N-n)!)`.
pub(crate) fn binomial_weight(total: usize, n: usize) -> f64 {
    let ln_fact = |k: usize| (1..=k).map(|j| (j as f64).ln()).sum::<f64>();
    (ln_fact(total) - ln_fact(n) - ln_fact(total - n) - total as f64 * std::f64::consts::LN_2).exp()
}

/// `N`-photon Fock state on a Bell mode, expanded over its two constituents.
pub fn fock_on_bell_mode(
    total: usize,
    label: BellModeLabel,
    basis: &BasisConfig,
) -> Result<PureState> {
    let (first, second, minus) = constituents(label);
    basis.require_cutoff(first, total)?;
    basis.require_cutoff(second, total)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); basis.dim()];
    for n in 0..=total {
        let mut occ = [0; 4];
        occ[first.index()] = n;
        occ[second.index()] = total - n;
        let sign = if minus && (total - n) % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        let i = basis.index_of(&occ).expect("cutoffs checked");
        amplitudes[i] = C64::new(sign * binomial_amplitude(total, n), 0.0);
    }
    PureState::from_amplitudes(basis, amplitudes)
}

/// Applies the Bell-mode creation operator `sum_j row_j a_j^dagger`.
fn create_in_mode(state: &PureState, row: [f64; 4]) -> Result<PureState> {
    let mut out = state.scaled(C64::new(0.0, 0.0));
    for m in ModeIndex::ALL {
        let c = row[m.index()];
        if c != 0.0 {
            out = out.added(
                &state
                    .apply_ladder(m, LadderKind::Create)
                    .scaled(C64::new(c, 0.0)),
            )?;
        }
    }
    Ok(out)
}

/// Builds `(a_label^dagger)^N / sqrt(N!) |vac>` with the partition matrix and
/// returns its distance from [`fock_on_bell_mode`].
pub fn partition_identity_residual(
    total: usize,
    label: BellModeLabel,
    basis: &BasisConfig,
) -> Result<f64> {
    let expanded = fock_on_bell_mode(total, label, basis)?;
    let row = bell_partition_matrix().row(label);
    let mut state = PureState::vacuum(basis);
    for k in 1..=total {
        state = create_in_mode(&state, row)?.scaled(C64::new(1.0 / (k as f64).sqrt(), 0.0));
    }
    state.distance(&expanded)
}

pub fn verify_partition_identity(total: usize, basis: &BasisConfig) -> Result<f64> {
    partition_identity_residual(total, BellModeLabel::PsiPlus, basis)
}

/// Coherent state on a Bell mode: the product of displacements by `row_j u` on
/// each separable mode.
pub fn coherent_on_bell_mode(
    u: C64,
    label: BellModeLabel,
    basis: &BasisConfig,
) -> Result<PureState> {
    let row = bell_partition_matrix().row(label);
    let mut state = PureState::vacuum(basis);
    for m in ModeIndex::ALL {
        let c = row[m.index()];
        if c != 0.0 {
            state = state.displace(m, u * c)?;
        }
    }
    Ok(state)
}

/// Coherent state on a Bell mode from the unfactorized generator
/// `u a_label^dagger - u* a_label`, exponentiated by a plain Taylor series on
/// the state vector. Slow; serves as an independent route to
/// [`coherent_on_bell_mode`].
pub fn coherent_by_generator_series(
    u: C64,
    label: BellModeLabel,
    basis: &BasisConfig,
) -> Result<PureState> {
    let row = bell_partition_matrix().row(label);
    let generator = |s: &PureState| -> Result<PureState> {
        let mut out = s.scaled(C64::new(0.0, 0.0));
        for m in ModeIndex::ALL {
            let c = row[m.index()];
            if c == 0.0 {
                continue;
            }
            let up = s.apply_ladder(m, LadderKind::Create).scaled(u * c);
            let down = s
                .apply_ladder(m, LadderKind::Annihilate)
                .scaled(-u.conj() * c);
            out = out.added(&up)?.added(&down)?;
        }
        Ok(out)
    };
    let mut term = PureState::vacuum(basis);
    let mut sum = term.clone();
    for k in 1..400 {
        term = generator(&term)?.scaled(C64::new(1.0 / k as f64, 0.0));
        sum = sum.added(&term)?;
        if term.norm_sqr() < 1e-40 {
            break;
        }
    }
    // amplitude pushed past the cutoff by the series is not part of the state
    PureState::from_amplitudes(basis, sum.amplitudes().to_vec())
}

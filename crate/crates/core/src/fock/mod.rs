//! Truncated four-mode bosonic Fock space.
//!
//! Basis vectors are occupation tuples `(n_Hh, n_Hv, n_Vh, n_Vv)` with per-mode
//! cutoffs. The linear index runs with `n_Hh` slowest and `n_Vv` fastest.
//! Operations never silently discard amplitude pushed above a cutoff: the
//! squared norm of anything dropped is added to the state's leakage.

mod ensemble;
mod expm;
mod state;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ensemble::{
    expect_one_body, moments_one_body, variance_one_body, OneBodyOperator, StateEnsemble,
};
pub use state::{LadderKind, PureState, StateDump};

/// Default truncation tolerance on leaked probability mass.
pub const DEFAULT_EPSILON: f64 = 1e-10;
/// Default upper bound on the number of basis states.
pub const DEFAULT_MAX_DIM: usize = 1 << 22;

/// Separable spin-orbit mode at input port 1 (polarization then orientation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeIndex {
    Hh = 0,
    Hv = 1,
    Vh = 2,
    Vv = 3,
}

impl ModeIndex {
    pub const ALL: [ModeIndex; 4] = [ModeIndex::Hh, ModeIndex::Hv, ModeIndex::Vh, ModeIndex::Vv];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModeIndex::Hh => "Hh",
            ModeIndex::Hv => "Hv",
            ModeIndex::Vh => "Vh",
            ModeIndex::Vv => "Vv",
        };
        f.write_str(s)
    }
}

/// Occupation tuple indexed by [`ModeIndex`].
pub type Occupation = [usize; 4];

/// Per-mode cutoffs plus the truncation tolerance shared by every state on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisConfig {
    cutoffs: [usize; 4],
    strides: [usize; 4],
    dim: usize,
    epsilon: f64,
}

impl BasisConfig {
    pub fn new(cutoffs: [usize; 4]) -> Result<Self> {
        Self::with_guard(cutoffs, DEFAULT_MAX_DIM)
    }

    pub fn with_guard(cutoffs: [usize; 4], max_dim: usize) -> Result<Self> {
        let mut dim: usize = 1;
        for c in cutoffs {
            dim =
                dim.checked_mul(c + 1)
                    .filter(|d| *d <= max_dim)
                    .ok_or(Error::DimensionGuard {
                        dim: cutoffs
                            .iter()
                            .map(|c| c + 1)
                            .fold(1usize, |a, b| a.saturating_mul(b)),
                        max_dim,
                    })?;
        }
        let mut strides = [1usize; 4];
        for m in (0..3).rev() {
            strides[m] = strides[m + 1] * (cutoffs[m + 1] + 1);
        }
        Ok(Self {
            cutoffs,
            strides,
            dim,
            epsilon: DEFAULT_EPSILON,
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must lie in (0, 1), got {epsilon}"),
            });
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoffs(&self) -> [usize; 4] {
        self.cutoffs
    }

    pub fn cutoff(&self, m: ModeIndex) -> usize {
        self.cutoffs[m.index()]
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub(crate) fn stride(&self, m: usize) -> usize {
        self.strides[m]
    }

    /// Bases are interchangeable when their cutoffs agree.
    pub fn same_space(&self, other: &BasisConfig) -> bool {
        self.cutoffs == other.cutoffs
    }

    pub fn contains(&self, occ: &Occupation) -> bool {
        occ.iter().zip(self.cutoffs).all(|(n, c)| *n <= c)
    }

    pub fn index_of(&self, occ: &Occupation) -> Option<usize> {
        self.contains(occ)
            .then(|| occ.iter().zip(self.strides).map(|(n, s)| n * s).sum())
    }

    pub fn occupation(&self, index: usize) -> Occupation {
        std::array::from_fn(|m| (index / self.strides[m]) % (self.cutoffs[m] + 1))
    }

    pub(crate) fn require_cutoff(&self, m: ModeIndex, required: usize) -> Result<()> {
        let cutoff = self.cutoff(m);
        if cutoff < required {
            return Err(Error::CutoffTooSmall {
                mode: m,
                cutoff,
                required,
            });
        }
        Ok(())
    }
}

/// Smallest `n` such that the tail `sum_{k>n} p_k (k+1)^2` is below `epsilon`,
/// where `p` is the supplied distribution. The moment weight keeps second
/// moments, not just the norm, accurate to `epsilon`.
fn weighted_tail_cutoff(epsilon: f64, mut pmf: impl FnMut(usize) -> f64, limit: usize) -> usize {
    // Sum the tail from above, stopping where it first exceeds epsilon.
    let probs: Vec<f64> = (0..=limit).map(&mut pmf).collect();
    let mut tail = 0.0;
    for n in (0..limit).rev() {
        let k = n + 1;
        tail += probs[k] * ((k + 1) as f64).powi(2);
        if tail >= epsilon {
            return k;
        }
    }
    0
}

/// Cutoff for a coherent amplitude with mean photon number `mean`.
pub fn poisson_cutoff(mean: f64, epsilon: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let limit = (mean + 40.0 * mean.sqrt() + 60.0).ceil() as usize;
    let log_mean = mean.ln();
    // called for k = 0, 1, 2, ... in order, so ln k! accumulates
    let mut log_fact = 0.0;
    weighted_tail_cutoff(
        epsilon,
        |k| {
            if k > 0 {
                log_fact += (k as f64).ln();
            }
            (-mean + k as f64 * log_mean - log_fact).exp()
        },
        limit,
    )
}

/// Per-mode cutoff for a two-mode squeezed vacuum with squeezing `r = |zeta|/2`.
pub fn pair_cutoff(r: f64, epsilon: f64) -> usize {
    if r <= 0.0 {
        return 0;
    }
    let t2 = r.tanh().powi(2);
    let c2 = r.cosh().powi(-2);
    // tail geometric in t2: the probability drops below 1e-40 well before this
    let limit = ((-100.0 / t2.ln()).ceil() as usize).max(8) + 8;
    weighted_tail_cutoff(epsilon, |k| c2 * t2.powi(k as i32), limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_ordering_vv_fastest() {
        let b = BasisConfig::new([2, 1, 1, 3]).unwrap();
        assert_eq!(b.dim(), 3 * 2 * 2 * 4);
        assert_eq!(b.index_of(&[0, 0, 0, 1]), Some(1));
        assert_eq!(b.index_of(&[0, 0, 1, 0]), Some(4));
        assert_eq!(b.index_of(&[1, 0, 0, 0]), Some(16));
        assert_eq!(b.index_of(&[3, 0, 0, 0]), None);
        for i in 0..b.dim() {
            assert_eq!(b.index_of(&b.occupation(i)), Some(i));
        }
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            BasisConfig::with_guard([9, 9, 9, 9], 1000),
            Err(Error::DimensionGuard {
                dim: 10000,
                max_dim: 1000
            })
        ));
        assert!(BasisConfig::with_guard([9, 9, 9, 0], 1000).is_ok());
    }

    #[test]
    fn epsilon_range() {
        let b = BasisConfig::new([1; 4]).unwrap();
        assert!(b.clone().with_epsilon(0.0).is_err());
        assert_eq!(b.with_epsilon(1e-6).unwrap().epsilon(), 1e-6);
    }

    #[test]
    fn cutoff_tails() {
        let eps = 1e-10;
        let c = poisson_cutoff(4.0, eps);
        let tail = |n: usize| -> f64 {
            (n + 1..200)
                .map(|k| {
                    let lf: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
                    (-4.0 + k as f64 * 4f64.ln() - lf).exp() * ((k + 1) as f64).powi(2)
                })
                .sum()
        };
        assert!(tail(c) < eps);
        assert!(tail(c - 1) >= eps);
        assert_eq!(poisson_cutoff(0.0, eps), 0);

        let r = 1.0f64;
        let c = pair_cutoff(r, eps);
        let t2 = r.tanh().powi(2);
        let ptail = |n: usize| -> f64 {
            (n + 1..2000)
                .map(|k| t2.powi(k as i32) / r.cosh().powi(2) * ((k + 1) as f64).powi(2))
                .sum()
        };
        assert!(ptail(c) < eps && ptail(c - 1) >= eps);
    }
}

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use super::{BasisConfig, ModeIndex, PureState};
use crate::error::{Error, Result};

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const WEIGHT_TOLERANCE: f64 = 1e-12;
const IMAGINARY_TOLERANCE: f64 = 1e-9;
const NEGATIVE_VARIANCE_TOLERANCE: f64 = 1e-9;

/// Hermitian single-particle matrix `B`, second quantized as `sum_jk B_jk a_j^dagger a_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneBodyOperator {
    matrix: Matrix4<C64>,
}

impl OneBodyOperator {
    pub fn new(matrix: Matrix4<C64>) -> Result<Self> {
        let deviation = (matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn from_real(matrix: Matrix4<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| C64::new(x, 0.0)))
    }

    /// Total photon number.
    pub fn identity() -> Self {
        Self {
            matrix: Matrix4::identity(),
        }
    }

    pub fn number(m: ModeIndex) -> Self {
        let mut matrix = Matrix4::zeros();
        matrix[(m.index(), m.index())] = C64::new(1.0, 0.0);
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    /// Nonzero entries as `(j, k, B_jk)`.
    pub(crate) fn terms(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::with_capacity(16);
        for j in 0..4 {
            for k in 0..4 {
                let b = self.matrix[(j, k)];
                if b != C64::new(0.0, 0.0) {
                    out.push((j, k, b));
                }
            }
        }
        out
    }
}

/// Finite convex mixture of pure states on one basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateEnsemble {
    members: Vec<(f64, PureState)>,
}

impl StateEnsemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let first = members.first().ok_or(Error::WeightSum { sum: 0.0 })?;
        let basis = first.1.basis().clone();
        let mut sum = 0.0;
        for (w, s) in &members {
            if !(*w > 0.0 && *w <= 1.0 + WEIGHT_TOLERANCE) {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    reason: format!("ensemble weights must lie in (0, 1], got {w}"),
                });
            }
            if !s.basis().same_space(&basis) {
                return Err(Error::BasisMismatch);
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::WeightSum { sum });
        }
        Ok(Self { members })
    }

    pub fn pure(state: PureState) -> Self {
        Self {
            members: vec![(1.0, state)],
        }
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn basis(&self) -> &BasisConfig {
        self.members[0].1.basis()
    }

    /// Largest member leakage.
    pub fn leakage(&self) -> f64 {
        self.members
            .iter()
            .map(|(_, s)| s.leakage())
            .fold(0.0, f64::max)
    }

    /// Mixture `p self + (1-p) other`, dropping members whose weight vanishes.
    pub fn mix(&self, p: f64, other: &StateEnsemble) -> Result<Self> {
        let members = self
            .members
            .iter()
            .map(|(w, s)| (p * w, s.clone()))
            .chain(
                other
                    .members
                    .iter()
                    .map(|(w, s)| ((1.0 - p) * w, s.clone())),
            )
            .filter(|(w, _)| *w > 0.0)
            .collect();
        Self::new(members)
    }
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAGINARY_TOLERANCE * z.re.abs().max(1.0) {
        return Err(Error::ComplexExpectation { imag: z.im });
    }
    Ok(z.re)
}

/// Mixture-level `(<B>, <B^2>)`, with `<B^2>` evaluated as `|B psi|^2` on each member.
pub fn moments_one_body(e: &StateEnsemble, op: &OneBodyOperator) -> Result<(f64, f64)> {
    let mut first = 0.0;
    let mut second = 0.0;
    for (w, psi) in e.members() {
        let applied = psi.apply_one_body(op)?;
        first += w * real_part(psi.inner(&applied)?)?;
        second += w * applied.norm_sqr();
    }
    Ok((first, second))
}

pub fn expect_one_body(e: &StateEnsemble, op: &OneBodyOperator) -> Result<f64> {
    moments_one_body(e, op).map(|(mean, _)| mean)
}

/// `<B^2> - <B>^2` over the whole mixture (not the average of member variances).
pub fn variance_one_body(e: &StateEnsemble, op: &OneBodyOperator) -> Result<f64> {
    let (mean, second) = moments_one_body(e, op)?;
    let value = second - mean * mean;
    if value < -NEGATIVE_VARIANCE_TOLERANCE {
        return Err(Error::NegativeVariance { value });
    }
    Ok(value)
}

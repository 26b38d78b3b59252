use thiserror::Error;

use crate::fock::ModeIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("basis dimension {dim} exceeds the configured guard of {max_dim}")]
    DimensionGuard { dim: usize, max_dim: usize },

    /// Probability mass pushed beyond a cutoff exceeded the truncation tolerance.
    #[error(
        "truncation violated on mode {mode}: leaked mass {leakage:.3e} > epsilon {epsilon:.1e}{}",
        .required_cutoff.map(|c| format!(" (cutoff >= {c} required)")).unwrap_or_default()
    )]
    Truncation {
        mode: ModeIndex,
        leakage: f64,
        epsilon: f64,
        required_cutoff: Option<usize>,
    },

    #[error("cutoff {cutoff} on mode {mode} is below the required {required}")]
    CutoffTooSmall {
        mode: ModeIndex,
        cutoff: usize,
        required: usize,
    },

    #[error("vector-mode coefficients not normalized: sum |A|^2 = {norm_sqr}")]
    Unnormalized { norm_sqr: f64 },

    #[error("operator is not Hermitian (max |B - B^dagger| = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("states do not share a common basis")]
    BasisMismatch,

    #[error("ensemble weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("negative variance {value:.3e}")]
    NegativeVariance { value: f64 },

    #[error("expectation value has imaginary part {imag:.3e}")]
    ComplexExpectation { imag: f64 },

    #[error("mean total intensity is zero; S is undefined for the vacuum")]
    ZeroIntensity,
}

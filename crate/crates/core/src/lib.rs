//! Simulation of intensity-based spin-orbit Bell measurements on a truncated
//! four-mode Fock space.
//!
//! The field at input port 1 is decomposed over the separable spin-orbit modes
//! `Hh, Hv, Vh, Vv` (polarization `H/V` times first-order Hermite-Gaussian
//! orientation `h/v`). The measurement apparatus (half-wave plate, Dove prism and
//! a parity-sorting Mach-Zehnder interferometer) reduces to a one-body observable
//! `M(alpha, beta)` on those four modes, and everything else is computed from
//! exact quantum expectation values of that observable:
//!
//! * [`mode_space`]: classical vector modes, concurrence and polarization patterns.
//! * [`fock`]: the truncated Fock-space engine.
//! * [`partitions`]: separable vs. Bell-mode partitions of the field.
//! * [`apparatus`]: wave-plate/prism reflections, interferometer routing, `M` and `I_tot`.
//! * [`catalog`]: the input-state families.
//! * [`chsh`]: intensity averages, intensity-difference noise and the CHSH parameter.
//! * [`verification`]: the self-check suite used by the command-line `verify` mode.

pub mod apparatus;
pub mod catalog;
pub mod chsh;
mod error;
pub mod fock;
pub mod mode_space;
pub mod partitions;
pub mod table;
pub mod verification;

pub use apparatus::{ChshSettings, Settings};
pub use catalog::{Family, StateSpec};
pub use chsh::{ChshResult, NoisePoint, ScanAxis, ScanGrid};
pub use error::{Error, Result};
pub use fock::{BasisConfig, ModeIndex, OneBodyOperator, PureState, StateEnsemble};
pub use mode_space::{BellModeLabel, SpatialPoint, VectorModeCoefficients};

pub use num_complex::Complex64 as C64;

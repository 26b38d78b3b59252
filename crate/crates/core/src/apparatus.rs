//! Measurement apparatus: a half-wave plate at `alpha/2` and a Dove prism at
//! `beta/2` acting on input port 1, followed by a parity-sorting Mach-Zehnder
//! interferometer (MZIM) whose second input is in vacuum.
//!
//! Both optical elements act as reflections `T(theta)` on their two-dimensional
//! degree of freedom, so the setting unitary is `T(alpha) (x) T(beta)` over the
//! column order `(Hh, Hv, Vh, Vv)`. The port-2 modes are empty, hence every
//! normally ordered intensity moment reduces to the four port-1 modes and the
//! intensity difference becomes the one-body operator `U^T diag(1,-1,-1,1) U`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::fock::{ModeIndex, OneBodyOperator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// Twice the half-wave plate angle, in radians.
    pub alpha: f64,
    /// Twice the Dove prism angle, in radians.
    pub beta: f64,
}

impl Settings {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }
}

/// The four setting angles of a CHSH combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub beta: f64,
    pub beta_prime: f64,
}

impl Default for ChshSettings {
    fn default() -> Self {
        Self {
            alpha: PI / 8.0,
            alpha_prime: 3.0 * PI / 8.0,
            beta: 0.0,
            beta_prime: PI / 4.0,
        }
    }
}

impl ChshSettings {
    /// Setting pairs with their sign in `S`, ordered
    /// `(a,b), (a,b'), (a',b), (a',b')`.
    pub fn terms(&self) -> [(Settings, f64); 4] {
        [
            (Settings::new(self.alpha, self.beta), 1.0),
            (Settings::new(self.alpha, self.beta_prime), 1.0),
            (Settings::new(self.alpha_prime, self.beta), -1.0),
            (Settings::new(self.alpha_prime, self.beta_prime), 1.0),
        ]
    }

    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            alpha: self.alpha + delta,
            alpha_prime: self.alpha_prime + delta,
            beta: self.beta + delta,
            beta_prime: self.beta_prime + delta,
        }
    }
}

/// Reflection `[[cos t, sin t], [sin t, -cos t]]`.
pub fn reflection_matrix(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, s, -c)
}

/// `T(alpha) (x) T(beta)`, polarization factor first.
pub fn setting_unitary(s: Settings) -> Matrix4<f64> {
    let k = reflection_matrix(s.alpha).kronecker(&reflection_matrix(s.beta));
    Matrix4::from_fn(|i, j| k[(i, j)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Port {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub input: Port,
    pub mode: ModeIndex,
    pub output: Port,
}

/// Input-output routing of a balanced MZIM: even modes (`Hh`, `Vv`) of the
/// transformed port-1 field and odd modes (`Hv`, `Vh`) of port 2 exit at
/// output 1; the complementary combination exits at output 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PortMap {
    routes: Vec<Route>,
}

impl PortMap {
    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn output(&self, input: Port, mode: ModeIndex) -> Port {
        self.routes
            .iter()
            .find(|r| r.input == input && r.mode == mode)
            .map(|r| r.output)
            .expect("every (port, mode) is routed")
    }
}

pub fn is_even(mode: ModeIndex) -> bool {
    matches!(mode, ModeIndex::Hh | ModeIndex::Vv)
}

pub fn mzim_sort() -> PortMap {
    let mut routes = Vec::with_capacity(8);
    for input in [Port::One, Port::Two] {
        for mode in ModeIndex::ALL {
            let output = match (input, is_even(mode)) {
                (Port::One, true) | (Port::Two, false) => Port::One,
                _ => Port::Two,
            };
            routes.push(Route {
                input,
                mode,
                output,
            });
        }
    }
    PortMap { routes }
}

/// Detected intensities `I_1`, `I_2` as 8x8 one-body matrices over the input
/// modes `(a^1_Hh..a^1_Vv, a^2_Hh..a^2_Vv)`, built from the routing table.
pub fn eight_mode_intensities(s: Settings) -> (DMatrix<f64>, DMatrix<f64>) {
    let u = setting_unitary(s);
    let map = mzim_sort();
    let mut i1 = DMatrix::zeros(8, 8);
    let mut i2 = DMatrix::zeros(8, 8);
    for route in map.routes() {
        // b^{out}_{mode} as a row over the eight input annihilators
        let mut row = DMatrix::<f64>::zeros(1, 8);
        let m = route.mode.index();
        match route.input {
            Port::One => {
                for k in 0..4 {
                    row[(0, k)] = u[(m, k)];
                }
            }
            Port::Two => row[(0, 4 + m)] = 1.0,
        }
        let contribution = row.transpose() * &row;
        match route.output {
            Port::One => i1 += contribution,
            Port::Two => i2 += contribution,
        }
    }
    (i1, i2)
}

/// Intensity difference `M(alpha, beta) = I_1 - I_2` on the port-1 modes.
pub fn m_operator(s: Settings) -> OneBodyOperator {
    let u = setting_unitary(s);
    let parity = Matrix4::from_diagonal(&[1.0, -1.0, -1.0, 1.0].into());
    let m = u.transpose() * parity * u;
    OneBodyOperator::from_real((m + m.transpose()) * 0.5).expect("symmetric by construction")
}

/// Total detected intensity, the photon number of the port-1 modes.
pub fn itot_operator() -> OneBodyOperator {
    OneBodyOperator::identity()
}

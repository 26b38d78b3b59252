//! Classical first-order vector modes.
//!
//! A first-order spin-orbit mode is `E(x, y) = sum A_{mu nu} psi_nu(x, y) e_mu`
//! with polarizations `mu in {H, V}` and Hermite-Gaussian orientations
//! `nu in {h, v}`. Everything is evaluated at the beam waist with a flat phase
//! front, in units of the waist radius.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::{self, Write};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table;

/// Tolerance on `sum |A|^2 = 1` accepted by [`eval_vector_mode`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Header of the polarization-grid CSV.
pub const GRID_CSV_HEADER: &str = "x,y,EH_re,EH_im,EV_re,EV_im";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialPoint {
    pub x: f64,
    pub y: f64,
}

impl SpatialPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Transverse orientation of a first-order Hermite-Gaussian mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    H,
    V,
}

/// Amplitudes `A_Hh, A_Hv, A_Vh, A_Vv` of a general first-order vector mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorModeCoefficients {
    pub a_hh: C64,
    pub a_hv: C64,
    pub a_vh: C64,
    pub a_vv: C64,
}

impl VectorModeCoefficients {
    pub fn new(a_hh: C64, a_hv: C64, a_vh: C64, a_vv: C64) -> Self {
        Self {
            a_hh,
            a_hv,
            a_vh,
            a_vv,
        }
    }

    pub fn from_real(a: [f64; 4]) -> Self {
        Self::new(a[0].into(), a[1].into(), a[2].into(), a[3].into())
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.a_hh, self.a_hv, self.a_vh, self.a_vv]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }

    /// Coefficients of the maximally non-separable mode `label`.
    ///
    /// `Psi(+/-) = (Hh +/- Vv)/sqrt2` and `Phi(+/-) = (Vh +/- Hv)/sqrt2`, so that
    /// `Psi+` is the radially and `Phi-` the azimuthally polarized vortex.
    pub fn bell(label: BellModeLabel) -> Self {
        let s = FRAC_1_SQRT_2;
        match label {
            BellModeLabel::PsiPlus => Self::from_real([s, 0.0, 0.0, s]),
            BellModeLabel::PsiMinus => Self::from_real([s, 0.0, 0.0, -s]),
            BellModeLabel::PhiPlus => Self::from_real([0.0, s, s, 0.0]),
            BellModeLabel::PhiMinus => Self::from_real([0.0, -s, s, 0.0]),
        }
    }

    /// Product mode `(p_H e_H + p_V e_V) (o_h psi_h + o_v psi_v)`.
    pub fn product(polarization: [C64; 2], orbital: [C64; 2]) -> Self {
        Self::new(
            polarization[0] * orbital[0],
            polarization[0] * orbital[1],
            polarization[1] * orbital[0],
            polarization[1] * orbital[1],
        )
    }
}

/// The four maximally non-separable first-order modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellModeLabel {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellModeLabel {
    pub const ALL: [BellModeLabel; 4] = [
        BellModeLabel::PsiPlus,
        BellModeLabel::PsiMinus,
        BellModeLabel::PhiPlus,
        BellModeLabel::PhiMinus,
    ];
}

/// Normalization of `x exp(-(x^2+y^2)/2)` over the plane.
fn hg_normalization() -> f64 {
    (2.0 / PI).sqrt()
}

/// First-order Hermite-Gaussian amplitude at the waist (`w = 1`, flat phase).
pub fn eval_hg_mode(orientation: Orientation, p: SpatialPoint) -> C64 {
    let envelope = (-(p.x * p.x + p.y * p.y) / 2.0).exp();
    let linear = match orientation {
        Orientation::H => p.x,
        Orientation::V => p.y,
    };
    C64::new(hg_normalization() * linear * envelope, 0.0)
}

/// Transverse field `(E_H, E_V)` of the vector mode `c` at `p`.
pub fn eval_vector_mode(c: &VectorModeCoefficients, p: SpatialPoint) -> Result<[C64; 2]> {
    if !c.is_normalized() {
        return Err(Error::Unnormalized {
            norm_sqr: c.norm_sqr(),
        });
    }
    Ok(field_unchecked(c, p))
}

fn field_unchecked(c: &VectorModeCoefficients, p: SpatialPoint) -> [C64; 2] {
    let h = eval_hg_mode(Orientation::H, p);
    let v = eval_hg_mode(Orientation::V, p);
    [c.a_hh * h + c.a_hv * v, c.a_vh * h + c.a_vv * v]
}

/// Spin-orbit concurrence `2 |A_Hh A_Vv - A_Hv A_Vh|`.
pub fn concurrence(c: &VectorModeCoefficients) -> f64 {
    2.0 * (c.a_hh * c.a_vv - c.a_hv * c.a_vh).norm()
}

/// Square sampling window `[-extent, extent]^2` with `resolution` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub extent: f64,
    pub resolution: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub point: SpatialPoint,
    pub e_h: C64,
    pub e_v: C64,
}

impl FieldSample {
    pub fn as_row(&self) -> [f64; 6] {
        [
            self.point.x,
            self.point.y,
            self.e_h.re,
            self.e_h.im,
            self.e_v.re,
            self.e_v.im,
        ]
    }
}

fn axis_value(extent: f64, resolution: usize, i: usize) -> f64 {
    if resolution == 1 {
        0.0
    } else {
        -extent + 2.0 * extent * i as f64 / (resolution - 1) as f64
    }
}

/// Samples the polarization pattern of a Bell mode, `x` varying fastest.
pub fn sample_polarization_grid(label: BellModeLabel, grid: GridSpec) -> Result<Vec<FieldSample>> {
    if grid.resolution == 0 {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: "grid needs at least one point per axis".into(),
        });
    }
    if !(grid.extent.is_finite() && grid.extent > 0.0) {
        return Err(Error::InvalidParameter {
            name: "extent",
            reason: format!("must be positive and finite, got {}", grid.extent),
        });
    }
    let c = VectorModeCoefficients::bell(label);
    let n = grid.resolution;
    let mut rows = Vec::with_capacity(n * n);
    for j in 0..n {
        let y = axis_value(grid.extent, n, j);
        for i in 0..n {
            let point = SpatialPoint::new(axis_value(grid.extent, n, i), y);
            let [e_h, e_v] = field_unchecked(&c, point);
            rows.push(FieldSample { point, e_h, e_v });
        }
    }
    Ok(rows)
}

/// Writes samples as CSV with nine significant digits.
pub fn write_grid_csv<W: Write>(out: W, samples: &[FieldSample]) -> io::Result<()> {
    table::write_rows(
        out,
        GRID_CSV_HEADER,
        samples.iter().map(FieldSample::as_row),
        9,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real_field(label: BellModeLabel, p: SpatialPoint) -> (f64, f64) {
        let [eh, ev] = eval_vector_mode(&VectorModeCoefficients::bell(label), p).unwrap();
        assert!(eh.im.abs() < 1e-15 && ev.im.abs() < 1e-15);
        (eh.re, ev.re)
    }

    #[test]
    fn hg_vanishes_on_axis_and_is_symmetric() {
        assert_eq!(
            eval_hg_mode(Orientation::H, SpatialPoint::new(0.0, 0.0)).norm(),
            0.0
        );
        for &(x, y) in &[(0.3, -1.2), (2.0, 0.5), (-0.7, -0.1)] {
            let h = eval_hg_mode(Orientation::H, SpatialPoint::new(x, y));
            let v = eval_hg_mode(Orientation::V, SpatialPoint::new(y, x));
            assert_eq!(h, v);
        }
    }

    #[test]
    fn hg_power_is_unity_by_quadrature() {
        // 2-D trapezoid rule over [-6, 6]^2.
        let n = 1201;
        let h = 12.0 / (n - 1) as f64;
        let mut total = 0.0;
        for j in 0..n {
            let y = -6.0 + j as f64 * h;
            let wy = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            for i in 0..n {
                let x = -6.0 + i as f64 * h;
                let wx = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                total += wx * wy * eval_hg_mode(Orientation::H, SpatialPoint::new(x, y)).norm_sqr();
            }
        }
        assert!(
            (total * h * h - 1.0).abs() < 1e-6,
            "power {}",
            total * h * h
        );
    }

    #[test]
    fn radial_and_azimuthal_patterns_on_x_axis() {
        let p = SpatialPoint::new(1.0, 0.0);
        let (eh, ev) = real_field(BellModeLabel::PsiPlus, p);
        assert!(eh > 0.0 && ev.abs() < 1e-15);
        let (eh, ev) = real_field(BellModeLabel::PhiMinus, p);
        assert!(eh.abs() < 1e-15 && ev > 0.0);
    }

    #[test]
    fn product_mode_has_no_vertical_component() {
        let c = VectorModeCoefficients::from_real([1.0, 0.0, 0.0, 0.0]);
        for &(x, y) in &[(0.4, 0.9), (-1.5, 0.2)] {
            let [_, ev] = eval_vector_mode(&c, SpatialPoint::new(x, y)).unwrap();
            assert_eq!(ev.norm(), 0.0);
        }
    }

    #[test]
    fn unnormalized_coefficients_rejected() {
        let c = VectorModeCoefficients::from_real([1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            eval_vector_mode(&c, SpatialPoint::new(0.0, 0.0)),
            Err(Error::Unnormalized { .. })
        ));
    }

    #[test]
    fn concurrence_examples() {
        let s = FRAC_1_SQRT_2;
        assert!(
            (concurrence(&VectorModeCoefficients::from_real([s, 0.0, 0.0, s])) - 1.0).abs() < 1e-15
        );
        assert_eq!(
            concurrence(&VectorModeCoefficients::from_real([1.0, 0.0, 0.0, 0.0])),
            0.0
        );
        assert!(
            (concurrence(&VectorModeCoefficients::from_real([0.8, 0.0, 0.0, 0.6])) - 0.96).abs()
                < 1e-15
        );
        for label in BellModeLabel::ALL {
            assert!((concurrence(&VectorModeCoefficients::bell(label)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_patterns() {
        let grid = GridSpec {
            extent: 2.0,
            resolution: 5,
        };
        let radial = sample_polarization_grid(BellModeLabel::PsiPlus, grid).unwrap();
        assert_eq!(radial.len(), 25);
        // x varies fastest
        assert_eq!(radial[1].point, SpatialPoint::new(-1.0, -2.0));
        for s in &radial {
            let (x, y) = (s.point.x, s.point.y);
            // E parallel to (x, y): cross product vanishes, dot product nonnegative
            assert!((s.e_h.re * y - s.e_v.re * x).abs() < 1e-14);
            assert!(s.e_h.re * x + s.e_v.re * y >= 0.0);
        }
        let azimuthal = sample_polarization_grid(BellModeLabel::PhiMinus, grid).unwrap();
        for s in &azimuthal {
            assert!((s.e_h.re * s.point.x + s.e_v.re * s.point.y).abs() < 1e-14);
        }
        for label in BellModeLabel::ALL {
            let rows = sample_polarization_grid(label, grid).unwrap();
            let centre = rows
                .iter()
                .find(|s| s.point == SpatialPoint::new(0.0, 0.0))
                .unwrap();
            assert_eq!(centre.e_h.norm() + centre.e_v.norm(), 0.0);
        }
    }

    #[test]
    fn zero_resolution_rejected() {
        let err = sample_polarization_grid(
            BellModeLabel::PsiPlus,
            GridSpec {
                extent: 1.0,
                resolution: 0,
            },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidParameter {
                name: "resolution",
                ..
            }
        ));
    }

    #[test]
    fn csv_layout() {
        let rows = sample_polarization_grid(
            BellModeLabel::PsiPlus,
            GridSpec {
                extent: 1.0,
                resolution: 2,
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], GRID_CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("-1.00000000e0,-1.00000000e0,"));
    }

    fn normalized() -> impl Strategy<Value = VectorModeCoefficients> {
        prop::array::uniform8(-1.0f64..1.0)
            .prop_filter("nonzero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|a| {
                let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                VectorModeCoefficients::new(
                    C64::new(a[0], a[1]) / n,
                    C64::new(a[2], a[3]) / n,
                    C64::new(a[4], a[5]) / n,
                    C64::new(a[6], a[7]) / n,
                )
            })
    }

    proptest! {
        #[test]
        fn concurrence_bounded_and_phase_invariant(c in normalized(), phase in 0.0..(2.0 * PI)) {
            let value = concurrence(&c);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&value));
            let g = C64::from_polar(1.0, phase);
            let rotated = VectorModeCoefficients::new(c.a_hh * g, c.a_hv * g, c.a_vh * g, c.a_vv * g);
            prop_assert!((concurrence(&rotated) - value).abs() < 1e-12);
        }

        #[test]
        fn product_modes_are_separable(p in prop::array::uniform4(-1.0f64..1.0), o in prop::array::uniform4(-1.0f64..1.0)) {
            let pn = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            let on = o.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assume!(pn > 1e-3 && on > 1e-3);
            let c = VectorModeCoefficients::product(
                [C64::new(p[0], p[1]) / pn, C64::new(p[2], p[3]) / pn],
                [C64::new(o[0], o[1]) / on, C64::new(o[2], o[3]) / on],
            );
            prop_assert!(concurrence(&c) < 1e-12);
        }

        #[test]
        fn field_is_linear_in_coefficients(c1 in normalized(), c2 in normalized(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
            let p = SpatialPoint::new(x, y);
            let s = FRAC_1_SQRT_2;
            let raw: Vec<C64> = c1.as_array().iter().zip(c2.as_array()).map(|(a, b)| (a + b) * s).collect();
            let sum = VectorModeCoefficients::new(raw[0], raw[1], raw[2], raw[3]);
            let f1 = field_unchecked(&c1, p);
            let f2 = field_unchecked(&c2, p);
            let fs = field_unchecked(&sum, p);
            for k in 0..2 {
                prop_assert!((fs[k] - (f1[k] + f2[k]) * s).norm() < 1e-14);
            }
        }
    }
}

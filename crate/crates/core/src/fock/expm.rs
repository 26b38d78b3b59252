//! Dense complex matrix exponential by scaling and squaring.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

fn norm_1(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` via a Taylor series on `a / 2^s` followed by `s` squarings, with `s`
/// chosen so the scaled 1-norm is at most 1/2.
pub(crate) fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let norm = norm_1(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / C64::new(2f64.powi(squarings as i32), 0.0);

    let mut result = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        result += &term;
        if norm_1(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_generator() {
        let theta = 2.7;
        let g = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(-theta, 0.0),
                C64::new(theta, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        let e = expm(&g);
        assert!((e[(0, 0)].re - theta.cos()).abs() < 1e-14);
        assert!((e[(1, 0)].re - theta.sin()).abs() < 1e-14);
        assert!((e[(0, 1)].re + theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn diagonal_and_zero() {
        let z = DMatrix::<C64>::zeros(3, 3);
        assert_eq!(expm(&z), DMatrix::identity(3, 3));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.0, 1.0),
            C64::new(-3.0, 0.0),
            C64::new(5.0, 0.0),
        ]));
        let e = expm(&d);
        assert!((e[(0, 0)] - C64::new(1f64.cos(), 1f64.sin())).norm() < 1e-14);
        assert!((e[(1, 1)].re - (-3f64).exp()).abs() < 1e-15);
        assert!((e[(2, 2)].re / 5f64.exp() - 1.0).abs() < 1e-13);
    }
}

#![allow(dead_code)]

use maryland_core::{Complex64, LaurentOperator, SiteWindow};
use nalgebra::DMatrix;

/// Dense Toeplitz truncation `M_{nm} = c_{n-m}` on `window`.
pub fn dense(op: &LaurentOperator, window: SiteWindow) -> DMatrix<Complex64> {
    let d = window.len();
    DMatrix::from_fn(d, d, |r, c| op.coeff(r as i64 - c as i64))
}

/// `exp(-i s M)` by scaling and squaring a Taylor series. Deliberately
/// shares nothing with the eigendecomposition or Bessel paths.
pub fn expm_taylor(m: &DMatrix<Complex64>, s: f64) -> DMatrix<Complex64> {
    let a = m * Complex64::new(0.0, -s);
    let norm: f64 = a
        .row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let n = m.nrows();
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        result += &term;
        if term.iter().all(|z| z.norm() < 1e-18) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

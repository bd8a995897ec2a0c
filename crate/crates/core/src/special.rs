//! Integer-order Bessel functions of the first kind.
//!
//! Orders are evaluated together by Miller's downward recurrence, normalized
//! with the sum rule `J_0 + 2 Σ J_{2k} = 1`. Small arguments (`|z| < 2`) use
//! the power series instead. Negative orders and arguments are folded onto
//! `n, z ≥ 0` through `J_{-n}(z) = (-1)^n J_n(z)` and `J_n(-z) = (-1)^n J_n(z)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Arguments with `|z|` at or above this are rejected.
pub const WORKING_RANGE: f64 = 1e4;

/// An order past which `|J_n(x)|` is negligible (well below `1e-20` across
/// the working range): `|x|`, plus a fixed pad, plus a multiple of the
/// `|x|^{1/3}` width of the turning-point region.
pub fn bessel_reach(x: f64) -> usize {
    let x = x.abs();
    x.ceil() as usize + 40 + (10.0 * x.cbrt()).ceil() as usize
}

const SERIES_CUTOFF: f64 = 2.0;
const RESCALE_LIMIT: f64 = 1e250;
const J0_ZERO_MAX_INDEX: usize = 20;

fn check_argument(z: f64) -> Result<()> {
    if !z.is_finite() || z.abs() >= WORKING_RANGE {
        return Err(Error::ArgumentOutOfRange(z));
    }
    Ok(())
}

#[inline]
fn parity_sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || k > 200 {
            break;
        }
    }
    sum
}

fn miller(max_order: usize, x: f64) -> Vec<f64> {
    let top = max_order.max(x.ceil() as usize);
    let mut start = top + 60 + (40.0 * top as f64).sqrt().ceil() as usize;
    start += start % 2;

    let mut out = vec![0.0; max_order + 1];
    let two_over_x = 2.0 / x;
    let mut above = 0.0;
    let mut current = 1e-30;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let below = k as f64 * two_over_x * current - above;
        above = current;
        current = below;
        let order = k - 1;
        if order <= max_order {
            out[order] = current;
        }
        if order % 2 == 0 {
            norm += if order == 0 { current } else { 2.0 * current };
        }
        if current.abs() > RESCALE_LIMIT {
            let s = 1.0 / RESCALE_LIMIT;
            current *= s;
            above *= s;
            norm *= s;
            for v in out.iter_mut().skip(order) {
                *v *= s;
            }
        }
    }
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// `J_n(z)` for `n = 0..=max_order`.
pub fn bessel_j_orders(max_order: usize, z: f64) -> Result<Vec<f64>> {
    check_argument(z)?;
    let x = z.abs();
    let mut values = if x == 0.0 {
        let mut v = vec![0.0; max_order + 1];
        v[0] = 1.0;
        v
    } else if x < SERIES_CUTOFF {
        (0..=max_order).map(|n| series(n, x)).collect()
    } else {
        miller(max_order, x)
    };
    if z < 0.0 {
        for (n, v) in values.iter_mut().enumerate() {
            *v *= parity_sign(n);
        }
    }
    Ok(values)
}

/// Bessel function of the first kind `J_n(z)` for any integer order.
pub fn bessel_j(n: i64, z: f64) -> Result<f64> {
    let order = n.unsigned_abs() as usize;
    let value = bessel_j_orders(order, z)?[order];
    Ok(if n < 0 { parity_sign(order) * value } else { value })
}

/// The `k`-th positive zero of `J_0` (`k = 1..=20`).
pub fn bessel_j0_zero(k: usize) -> Result<f64> {
    if k == 0 || k > J0_ZERO_MAX_INDEX {
        return Err(Error::IndexOutOfRange {
            index: k,
            min: 1,
            max: J0_ZERO_MAX_INDEX,
        });
    }
    // McMahon expansion as the starting point, then Newton with J_0' = -J_1.
    let beta = (k as f64 - 0.25) * std::f64::consts::PI;
    let b8 = 8.0 * beta;
    let mut x = beta + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3));
    for _ in 0..50 {
        let j = bessel_j_orders(1, x)?;
        let step = j[0] / j[1];
        x += step;
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    Ok(x)
}

/// Coefficients `J_n(z) i^n` for `n = -max_order..=max_order`, so that
/// `Σ_n c_n e^{inθ} = e^{iz cos θ}`. Index `n + max_order` holds order `n`.
pub fn jacobi_anger_coeffs(z: f64, max_order: usize) -> Result<Vec<Complex64>> {
    let j = bessel_j_orders(max_order, z)?;
    let i_pow = |n: i64| match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let m = max_order as i64;
    Ok((-m..=m)
        .map(|n| {
            let order = n.unsigned_abs() as usize;
            let jn = if n < 0 { parity_sign(order) * j[order] } else { j[order] };
            i_pow(n) * jn
        })
        .collect())
}

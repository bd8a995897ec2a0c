//! Doubly infinite Toeplitz (Laurent) operators.
//!
//! An operator is stored by its band of diagonal coefficients: `c_k` sits on
//! the diagonal where `n - m = k`, so `(A ψ)_n = Σ_k c_k ψ_{n-k}`.
//!
//! The symbol is the multiplication operator the matrix becomes in the
//! rotator basis `|n⟩ = e^{inθ}/√(2π)`:
//!
//! ```text
//! A(θ) = Σ_k c_k e^{ikθ}
//! ```
//!
//! so the bidiagonal operator with `c_{+1} = γe^{iδ}`, `c_{-1} = γe^{-iδ}`
//! has symbol `2γ cos(θ + δ)`. This one convention is used throughout the
//! crate.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::special::{bessel_j_orders, bessel_reach};

/// Relative tolerance (against the largest coefficient) for hermiticity.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Budget for coefficients dropped from an exponential, as `Σ |c_k|` over
/// the dropped offsets. This also bounds the squared-modulus tail and the
/// operator-norm error of the truncation.
pub const TAIL_MASS: f64 = 1e-14;


const ZERO: Complex64 = Complex64::new(0.0, 0.0);
// per-coefficient FFT noise, relative to the largest phase in the exponent
const ROUNDOFF_FLOOR: f64 = 1e-15;
const MAX_EXP_GRID: usize = 1 << 24;
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentOperator {
    bandwidth: usize,
    // coeffs[k + bandwidth] = c_k
    coeffs: Vec<Complex64>,
}

impl LaurentOperator {
    pub fn zero() -> Self {
        Self {
            bandwidth: 0,
            coeffs: vec![ZERO],
        }
    }

    pub fn identity() -> Self {
        Self {
            bandwidth: 0,
            coeffs: vec![ONE],
        }
    }

    /// The shift `ψ_n ↦ ψ_{n-k}`, i.e. the single coefficient `c_k = 1`.
    pub fn shift(k: i64) -> Self {
        Self::from_pairs([(k, ONE)])
    }

    /// Nearest-neighbor operator with `c_{+1} = γe^{iδ}` and `c_{-1} = γe^{-iδ}`.
    pub fn bidiagonal(gamma: f64, delta: f64) -> Self {
        Self::from_pairs([
            (1, Complex64::from_polar(gamma, delta)),
            (-1, Complex64::from_polar(gamma, -delta)),
        ])
    }

    /// Symmetric hopping `c_{±1} = t`.
    pub fn hopping(t: f64) -> Self {
        Self::bidiagonal(t, 0.0)
    }

    /// Build from a dense band `c_{-B}..=c_{B}`.
    ///
    /// # Panics
    /// If `band.len()` is even.
    pub fn from_band(band: Vec<Complex64>) -> Self {
        assert!(band.len() % 2 == 1, "band must have odd length 2B+1");
        Self {
            bandwidth: band.len() / 2,
            coeffs: band,
        }
    }

    /// Build from `(offset, coefficient)` pairs. Repeated offsets add.
    pub fn from_pairs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let bandwidth = pairs.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![ZERO; 2 * bandwidth + 1];
        for (k, c) in pairs {
            coeffs[(k + bandwidth as i64) as usize] += c;
        }
        Self { bandwidth, coeffs }
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Coefficient on diagonal `k`; zero outside the band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.bandwidth {
            ZERO
        } else {
            self.coeffs[(k + self.bandwidth as i64) as usize]
        }
    }

    /// Coefficients `c_{-B}..=c_{B}`.
    pub fn band(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn offsets(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let b = self.bandwidth as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - b, *c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Σ_k |c_k|`, an upper bound on `max_θ |A(θ)|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `max_k |c_{-k} - conj(c_k)|`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let b = self.bandwidth as i64;
        (0..=b)
            .map(|k| (self.coeff(-k) - self.coeff(k).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_asymmetry() <= HERMITIAN_TOLERANCE * self.max_abs().max(f64::MIN_POSITIVE)
    }

    pub(crate) fn ensure_hermitian(&self) -> Result<()> {
        let asymmetry = self.hermitian_asymmetry();
        let tolerance = HERMITIAN_TOLERANCE * self.max_abs();
        if asymmetry > tolerance {
            return Err(Error::NonHermitian { asymmetry, tolerance });
        }
        Ok(())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            bandwidth: self.bandwidth,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let b = self.bandwidth.max(other.bandwidth) as i64;
        Self::from_band((-b..=b).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-ONE))
    }

    /// Drop the outermost diagonals while `Σ |c_k|` over the dropped ones
    /// stays below `tail_mass`.
    pub fn trimmed(&self, tail_mass: f64) -> Self {
        let mut b = self.bandwidth;
        let mut dropped = 0.0;
        while b > 0 {
            let edge = self.coeff(b as i64).norm() + self.coeff(-(b as i64)).norm();
            if dropped + edge >= tail_mass {
                break;
            }
            dropped += edge;
            b -= 1;
        }
        let shift = self.bandwidth - b;
        Self {
            bandwidth: b,
            coeffs: self.coeffs[shift..shift + 2 * b + 1].to_vec(),
        }
    }

    /// `Σ_{|k| > d} |c_k|²`.
    pub fn tail_mass_beyond(&self, d: usize) -> f64 {
        self.offsets()
            .filter(|(k, _)| k.unsigned_abs() as usize > d)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }

    /// `Σ_{|k| > d} |c_k|`.
    pub fn tail_l1_beyond(&self, d: usize) -> f64 {
        self.offsets()
            .filter(|(k, _)| k.unsigned_abs() as usize > d)
            .map(|(_, c)| c.norm())
            .sum()
    }
}

/// Samples `A(θ_j)` on the uniform grid `θ_j = 2πj/L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFunction {
    values: Vec<Complex64>,
}

impl SymbolFunction {
    pub fn from_values(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    /// Sample a function of `θ` on an `L`-point grid.
    pub fn sample<F: Fn(f64) -> Complex64>(grid: usize, f: F) -> Self {
        let h = 2.0 * PI / grid as f64;
        Self {
            values: (0..grid).map(|j| f(h * j as f64)).collect(),
        }
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.values.len() as f64
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            values: self.values.iter().map(|v| f(*v)).collect(),
        }
    }
}

/// Sample the symbol of `op` on an `L`-point circle grid.
pub fn coeffs_to_symbol(op: &LaurentOperator, grid: usize) -> Result<SymbolFunction> {
    let b = op.bandwidth();
    if grid < 2 * b + 1 {
        return Err(Error::GridTooSmall { grid, bandwidth: b });
    }
    let mut buf = vec![ZERO; grid];
    for (k, c) in op.offsets() {
        buf[k.rem_euclid(grid as i64) as usize] += c;
    }
    // unnormalized inverse transform: Σ_k a_k e^{+2πijk/L}
    FftPlanner::new().plan_fft_inverse(grid).process(&mut buf);
    Ok(SymbolFunction { values: buf })
}

/// Recover `c_k` for `|k| ≤ bandwidth` from symbol samples.
pub fn symbol_to_coeffs(sym: &SymbolFunction, bandwidth: usize) -> Result<LaurentOperator> {
    let grid = sym.grid_size();
    if grid < 2 * bandwidth + 1 {
        return Err(Error::GridTooSmall { grid, bandwidth });
    }
    let mut buf = sym.values.clone();
    FftPlanner::new().plan_fft_forward(grid).process(&mut buf);
    let scale = 1.0 / grid as f64;
    let b = bandwidth as i64;
    Ok(LaurentOperator::from_band(
        (-b..=b)
            .map(|k| buf[k.rem_euclid(grid as i64) as usize] * scale)
            .collect(),
    ))
}

/// Product `AB`; the coefficients are the convolution of the two bands.
pub fn laurent_product(a: &LaurentOperator, b: &LaurentOperator) -> LaurentOperator {
    let ba = a.bandwidth();
    let bb = b.bandwidth();
    let mut out = vec![ZERO; 2 * (ba + bb) + 1];
    for (i, x) in a.band().iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        for (j, y) in b.band().iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    LaurentOperator::from_band(out)
}

/// Largest coefficient magnitude of `AB - BA`.
pub fn commutator_norm(a: &LaurentOperator, b: &LaurentOperator) -> f64 {
    laurent_product(a, b).sub(&laurent_product(b, a)).max_abs()
}

fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Coefficients of `e^{-iM}` for the bidiagonal `M` with `M_{n+1,n} = γe^{iδ}`,
/// `M_{n,n+1} = γe^{-iδ}`:
///
/// ```text
/// c_k = e^{ikδ} i^{-k} J_k(2γ)
/// ```
///
/// The band is cut where the dropped tail mass falls below [`TAIL_MASS`].
pub fn exp_bidiagonal(gamma: f64, delta: f64) -> Result<LaurentOperator> {
    let b = bessel_reach(2.0 * gamma);
    let j = bessel_j_orders(b, 2.0 * gamma)?;
    let bi = b as i64;
    let band = (-bi..=bi)
        .map(|k| {
            let order = k.unsigned_abs() as usize;
            let jk = if k < 0 && order % 2 == 1 { -j[order] } else { j[order] };
            Complex64::from_polar(jk, k as f64 * delta) * i_pow(-k)
        })
        .collect();
    Ok(LaurentOperator::from_band(band).trimmed(TAIL_MASS))
}

/// Coefficients of `exp(-i·scale·M)` for hermitian `M`, by exponentiating the
/// symbol pointwise and transforming back.
pub fn exp_symbol(m: &LaurentOperator, scale: f64) -> Result<LaurentOperator> {
    m.ensure_hermitian()?;
    // the symbol is bounded by the l1 norm; each power of M widens the band by B
    let mut band = m.bandwidth().max(1) * bessel_reach(scale * m.l1_norm());
    loop {
        let grid = (4 * band).next_power_of_two();
        if grid > MAX_EXP_GRID {
            return Err(Error::GridTooSmall { grid: MAX_EXP_GRID, bandwidth: band });
        }
        let sym = coeffs_to_symbol(m, grid)?;
        let phase = sym.map(|a| Complex64::from_polar(1.0, -scale * a.re));
        let full = symbol_to_coeffs(&phase, grid / 2 - 1)?;
        // coefficients at the FFT round-off floor are noise, not tail
        let floor = ROUNDOFF_FLOOR * (1.0 + scale.abs() * m.l1_norm());
        let tail: f64 = full
            .offsets()
            .filter(|(k, c)| k.unsigned_abs() as usize > band && c.norm() > floor)
            .map(|(_, c)| c.norm())
            .sum();
        if tail <= TAIL_MASS {
            let b = band as i64;
            let op = LaurentOperator::from_band((-b..=b).map(|k| full.coeff(k)).collect());
            return Ok(op.trimmed(TAIL_MASS));
        }
        band *= 2;
    }
}

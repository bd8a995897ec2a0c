//! Tight-binding lattice in the field `E(t) = -E sin t`:
//!
//! ```text
//! H(t) = T Σ_m (|m⟩⟨m+1| + |m+1⟩⟨m|) + E(t) Σ_m m |m⟩⟨m|
//! ```
//!
//! Over `N` full periods the accumulated hopping is `2πNT J_0(E) e^{∓iE}`
//! and the phase `Φ(2πN)` closes, so both pictures share the propagator
//! `U_{nm} = e^{i(m-n)E} i^{m-n} J_{n-m}(4πNT J_0(E))`. Spreading stops
//! exactly at the zeros of `J_0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Picture, PropagatorBlock, SiteWindow};
use crate::laurent::{exp_bidiagonal, exp_symbol, LaurentOperator};
use crate::solver::DriveSpec;
use crate::special::{bessel_j, bessel_j_orders, bessel_reach};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DunlapParams {
    /// Nearest-neighbor coupling `T`.
    pub hopping: f64,
    /// Field amplitude `E ≥ 0`.
    pub field: f64,
}

impl DunlapParams {
    pub fn new(hopping: f64, field: f64) -> Result<Self> {
        if !hopping.is_finite() {
            return Err(Error::InvalidParameter(format!("hopping must be finite, got {hopping}")));
        }
        if !(field >= 0.0 && field.is_finite()) {
            return Err(Error::InvalidParameter(format!("field amplitude must be ≥ 0, got {field}")));
        }
        Ok(Self { hopping, field })
    }

    pub fn drive(&self) -> DriveSpec {
        DriveSpec::sinusoidal(self.field, LaurentOperator::hopping(self.hopping))
    }
}

fn check_periods(periods: u64) -> Result<()> {
    if periods == 0 {
        return Err(Error::InvalidParameter("period count must be at least 1".into()));
    }
    Ok(())
}

/// `a = 4πNT J_0(E)`, the Bessel argument of the stroboscopic propagator.
pub fn dunlap_argument(params: &DunlapParams, periods: u64) -> Result<f64> {
    check_periods(periods)?;
    Ok(4.0 * PI * periods as f64 * params.hopping * bessel_j(0, params.field)?)
}

/// Propagator at `t = 2πN`. Both pictures give the same block.
pub fn dunlap_propagator(
    params: &DunlapParams,
    periods: u64,
    window: SiteWindow,
    picture: Picture,
) -> Result<PropagatorBlock> {
    let a = dunlap_argument(params, periods)?;
    let u = exp_bidiagonal(0.5 * a, -params.field)?;
    Ok(PropagatorBlock::from_laurent(&u, window, picture))
}

/// Accumulated interaction after `N` periods for arbitrary time-independent
/// hopping `T_n`: `g_n = 2πN T_n J_0(nE) e^{-inE}`.
pub fn accumulated_hopping(coupling: &LaurentOperator, field: f64, periods: u64) -> Result<LaurentOperator> {
    check_periods(periods)?;
    let scale = 2.0 * PI * periods as f64;
    let pairs = coupling
        .offsets()
        .map(|(n, t)| {
            let j0 = bessel_j(0, n as f64 * field)?;
            Ok((n, t * Complex64::from_polar(scale * j0, -(n as f64) * field)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentOperator::from_pairs(pairs))
}

/// Stroboscopic propagator coefficients for general hopping `T_n`.
pub fn general_propagator(coupling: &LaurentOperator, field: f64, periods: u64) -> Result<LaurentOperator> {
    exp_symbol(&accumulated_hopping(coupling, field, periods)?, 1.0)
}

/// Mean-square displacement `⟨n²⟩` of a state started on one site, from the
/// Bessel sum `Σ_d d² J_d(a)²`, truncated where the terms are negligible.
pub fn msd(params: &DunlapParams, periods: u64) -> Result<f64> {
    let a = dunlap_argument(params, periods)?;
    let top = bessel_reach(a);
    let j = bessel_j_orders(top, a)?;
    Ok(2.0 * j.iter().enumerate().map(|(d, v)| (d * d) as f64 * v * v).sum::<f64>())
}

/// `8π²N²T²J_0(E)²`.
pub fn msd_closed_form(params: &DunlapParams, periods: u64) -> Result<f64> {
    let a = dunlap_argument(params, periods)?;
    Ok(0.5 * a * a)
}

/// Field amplitudes in `[lo, hi]` where `|J_0(E)| < tolerance`.
///
/// Sign changes of `J_0` are bracketed on a fine grid and polished by
/// bisection; each root is reported once if it passes the tolerance.
pub fn localization_scan(lo: f64, hi: f64, tolerance: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::EmptyRange { lo, hi });
    }
    let j0 = |e: f64| bessel_j(0, e);
    // zeros of J_0 are ~π apart; 0.05 spacing cannot skip a pair
    let cells = ((hi - lo) / 0.05).ceil() as usize;
    let h = (hi - lo) / cells as f64;
    let mut roots = Vec::new();
    let mut left = lo;
    let mut f_left = j0(left)?;
    for i in 1..=cells {
        let right = if i == cells { hi } else { lo + h * i as f64 };
        let f_right = j0(right)?;
        let root = if f_left == 0.0 {
            Some(left)
        } else if f_left * f_right < 0.0 {
            Some(bisect(&j0, left, right, f_left)?)
        } else {
            None
        };
        if let Some(r) = root {
            if j0(r)?.abs() < tolerance && roots.last().is_none_or(|&last: &f64| (r - last).abs() > 1e-9) {
                roots.push(r);
            }
        }
        left = right;
        f_left = f_right;
    }
    if f_left == 0.0 && tolerance > 0.0 && roots.last().is_none_or(|&last: &f64| (hi - last).abs() > 1e-9) {
        roots.push(hi);
    }
    Ok(roots)
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

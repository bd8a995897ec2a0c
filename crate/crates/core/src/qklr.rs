//! The kicked linear rotator: `H = p + k cos θ Σ_n δ(t - nτ)` with `ħ = 1`.
//!
//! In the site basis the kick is nearest-neighbor hopping `k/2`. After `N`
//! kicks the accumulated interaction is bidiagonal with
//!
//! ```text
//! γ = (k/2) sin(Nτ/2) / sin(τ/2),    δ = (N+1)τ/2
//! ```
//!
//! so the propagator is a Bessel matrix whose width is bounded by
//! `k / sin(τ/2)` unless `τ` is a multiple of 2π.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Picture, PropagatorBlock, SiteWindow, WaveState};
use crate::laurent::{exp_bidiagonal, LaurentOperator};
use crate::solver::{evolve_state, DriveSpec};
use crate::special::{bessel_j_orders, bessel_reach};

/// `|sin(τ/2)|` below this is treated as resonance.
pub const RESONANCE_THRESHOLD: f64 = 1e-9;

/// Default samples per sub-interval `[0, 2π/q)` for eigenstate grids.
pub const DEFAULT_SECTOR_SAMPLES: usize = 256;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QklrParams {
    pub k: f64,
    pub tau: f64,
    /// `(p, q)` with `τ/2π = p/q` in lowest terms, when declared rational.
    pub rational: Option<(u64, u64)>,
}

impl QklrParams {
    pub fn new(k: f64, tau: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("kick strength must be positive, got {k}")));
        }
        if !(tau > 0.0 && tau <= 2.0 * PI * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter(format!("kick period must lie in (0, 2π], got {tau}")));
        }
        Ok(Self { k, tau, rational: None })
    }

    /// `τ = 2πp/q`.
    pub fn rational(k: f64, p: u64, q: u64) -> Result<Self> {
        check_coprime(p, q)?;
        if p > q {
            return Err(Error::InvalidParameter(format!("need p ≤ q so that τ ≤ 2π, got {p}/{q}")));
        }
        let mut params = Self::new(k, 2.0 * PI * p as f64 / q as f64)?;
        params.rational = Some((p, q));
        Ok(params)
    }

    pub fn is_resonant(&self) -> bool {
        (0.5 * self.tau).sin().abs() < RESONANCE_THRESHOLD
    }

    /// `k / sin(τ/2)`, the largest `2|γ|` over all kick counts.
    pub fn max_argument(&self) -> f64 {
        self.k / (0.5 * self.tau).sin().abs()
    }

    /// Kicked drive for the general solver (`ω = 1`).
    pub fn drive(&self) -> DriveSpec {
        DriveSpec::Kicked {
            coupling: LaurentOperator::hopping(0.5 * self.k),
            tau: self.tau,
            omega: 1.0,
        }
    }
}

fn check_coprime(p: u64, q: u64) -> Result<()> {
    if q == 0 || p == 0 || gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(())
}

/// `(γ, δ)` of the accumulated interaction after `n_kicks` kicks.
///
/// At resonance the sine ratio is replaced by its limit `(-1)^{(N-1)m} N`
/// for `τ = 2πm`, which keeps `γ e^{iδ} = Nk/2`.
pub fn gamma_delta(params: &QklrParams, n_kicks: u64) -> Result<(f64, f64)> {
    if n_kicks == 0 {
        return Err(Error::InvalidParameter("kick count must be at least 1".into()));
    }
    let n = n_kicks as f64;
    let half = 0.5 * params.tau;
    let delta = (n + 1.0) * half;
    let ratio = if half.sin().abs() < RESONANCE_THRESHOLD {
        let m = (params.tau / (2.0 * PI)).round() as i64;
        let sign = if ((n_kicks as i64 - 1) * m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sign * n
    } else {
        (n * half).sin() / half.sin()
    };
    Ok((0.5 * params.k * ratio, delta))
}

/// Stroboscopic propagator `U(Nτ, 0)` on `window`.
///
/// Interaction picture: `U_{nm} = e^{-i(m-n)δ} i^{m-n} J_{n-m}(2γ)`.
/// Schrödinger picture adds the row phase `e^{-inNτ}`.
pub fn qklr_propagator(
    params: &QklrParams,
    n_kicks: u64,
    window: SiteWindow,
    picture: Picture,
) -> Result<PropagatorBlock> {
    let (gamma, delta) = gamma_delta(params, n_kicks)?;
    let u = exp_bidiagonal(gamma, delta)?;
    let block = PropagatorBlock::from_laurent(&u, window, Picture::Interaction);
    match picture {
        Picture::Interaction => Ok(block),
        Picture::Schrodinger => crate::solver::to_schrodinger(&block, n_kicks as f64 * params.tau),
    }
}

/// `Σ_{|d| > offset} J_d(2γ)²`: the probability a delta state leaves the
/// band `|n| ≤ offset` after `n_kicks` kicks.
pub fn tail_mass(params: &QklrParams, n_kicks: u64, offset: usize) -> Result<f64> {
    let (gamma, _) = gamma_delta(params, n_kicks)?;
    let a = 2.0 * gamma;
    let top = offset.max(a.abs().ceil() as usize) + 200;
    let j = bessel_j_orders(top, a)?;
    Ok(2.0 * j[offset + 1..].iter().map(|v| v * v).sum::<f64>())
}

/// `⟨p²⟩` of an initial delta state after `n_kicks` kicks, as the Bessel
/// sum `Σ_d d² J_d(2γ)²`.
pub fn energy(params: &QklrParams, n_kicks: u64) -> Result<f64> {
    let (gamma, _) = gamma_delta(params, n_kicks)?;
    let a = 2.0 * gamma;
    let top = bessel_reach(a);
    let j = bessel_j_orders(top, a)?;
    Ok(2.0 * j.iter().enumerate().map(|(d, v)| (d * d) as f64 * v * v).sum::<f64>())
}

/// The `q` distinct Floquet eigenvalues for `τ/2π = p/q`; each is
/// infinitely degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetSpectrum {
    pub p: u64,
    pub q: u64,
    pub eigenvalues: Vec<Complex64>,
}

impl FloquetSpectrum {
    /// `max |λ^q - 1|`.
    pub fn closure_defect(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| (l.powu(self.q as u32) - 1.0).norm())
            .fold(0.0, f64::max)
    }
}

/// The `q`-th roots of unity `e^{2πij/q}`, `j = 0..q`.
pub fn floquet_eigenvalues(p: u64, q: u64) -> Result<FloquetSpectrum> {
    check_coprime(p, q)?;
    let eigenvalues = (0..q)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64))
        .collect();
    Ok(FloquetSpectrum { p, q, eigenvalues })
}

/// `max_θ |Σ_{n=0}^{q-1} k cos(θ - nτ)|` over `thetas`, with `τ = 2πp/q`.
pub fn kick_sum_residual(k: f64, p: u64, q: u64, thetas: &[f64]) -> Result<f64> {
    check_coprime(p, q)?;
    if q < 2 {
        return Err(Error::InvalidParameter(
            "the kick sum only cancels for q ≥ 2 (q = 1 gives k cos θ)".into(),
        ));
    }
    let tau = 2.0 * PI * p as f64 / q as f64;
    Ok(thetas
        .iter()
        .map(|theta| (0..q).map(|n| k * (theta - n as f64 * tau).cos()).sum::<f64>().abs())
        .fold(0.0, f64::max))
}

/// A Floquet eigenfunction sampled on the uniform grid `θ_j = 2πj/(qG)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetEigenstate {
    pub k: f64,
    pub p: u64,
    pub q: u64,
    pub eigenvalue: Complex64,
    pub samples: Vec<Complex64>,
}

impl FloquetEigenstate {
    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.samples.len() as f64
    }

    /// `max_θ |e^{-iV(θ)} φ(θ - τ) - λ φ(θ)| / max|φ|` on the grid.
    pub fn residual(&self) -> f64 {
        let len = self.samples.len();
        let shift = len / self.q as usize * self.p as usize;
        let scale = self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
        (0..len)
            .map(|j| {
                let back = self.samples[(j + len - shift) % len];
                let lhs = Complex64::from_polar(1.0, -self.k * self.theta(j).cos()) * back;
                (lhs - self.eigenvalue * self.samples[j]).norm()
            })
            .fold(0.0, f64::max)
            / scale
    }

    /// Site-basis amplitudes `φ_n = (1/M) Σ_j φ(θ_j) e^{-inθ_j}`, for
    /// `n = -M/2..M/2`, normalized to unit norm.
    pub fn site_amplitudes(&self) -> WaveState {
        let len = self.samples.len();
        let half = (len / 2) as i64;
        let amps: Vec<Complex64> = (-half..half)
            .map(|n| {
                self.samples
                    .iter()
                    .enumerate()
                    .map(|(j, s)| s * Complex64::from_polar(1.0, -(n as f64) * self.theta(j)))
                    .sum::<Complex64>()
                    / len as f64
            })
            .collect();
        WaveState::from_amplitudes(-half, amps).expect("eigenstate is nonzero")
    }
}

/// Extend `seed` (samples on `[0, 2π/q)`) to an eigenfunction of
/// `F = e^{-iV(θ)} e^{-ipτ}` with eigenvalue `e^{2πi·index/q}` by
/// `φ(θ - τ) = λ e^{iV(θ)} φ(θ)`.
///
/// The grid has `q·seed.len()` points, so a shift by `τ = 2πp/q` is an
/// exact shift by `p·seed.len()` samples.
pub fn build_eigenstate(
    seed: &[Complex64],
    eigenvalue_index: usize,
    k: f64,
    p: u64,
    q: u64,
) -> Result<FloquetEigenstate> {
    let spectrum = floquet_eigenvalues(p, q)?;
    if seed.is_empty() || seed.iter().all(|s| s.norm() == 0.0) {
        return Err(Error::EmptySeed);
    }
    let lambda = *spectrum.eigenvalues.get(eigenvalue_index).ok_or(Error::IndexOutOfRange {
        index: eigenvalue_index,
        min: 0,
        max: q as usize - 1,
    })?;
    let g = seed.len();
    let len = g * q as usize;
    let shift = g * p as usize;
    let theta = |j: usize| 2.0 * PI * j as f64 / len as f64;

    let mut samples = vec![Complex64::new(0.0, 0.0); len];
    samples[..g].copy_from_slice(seed);
    // march sector by sector: θ -> θ - τ
    for step in 1..q as usize {
        for i in 0..g {
            let from = (i + len - ((step - 1) * shift) % len) % len;
            let to = (from + len - shift) % len;
            samples[to] = lambda * Complex64::from_polar(1.0, k * theta(from).cos()) * samples[from];
        }
    }
    Ok(FloquetEigenstate {
        k,
        p,
        q,
        eigenvalue: lambda,
        samples,
    })
}

/// `|⟨ψ₀|ψ(qτ)⟩|` after `q` kicks, via the exact solver.
pub fn period_check(p: u64, q: u64, k: f64, psi0: &WaveState) -> Result<f64> {
    let params = QklrParams::rational(k, p, q)?;
    let psi = evolve_state(&params.drive(), psi0, q as f64 * params.tau)?;
    Ok(psi0.fidelity(&psi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_delta_examples() {
        let p = QklrParams::new(1.0, PI).unwrap();
        let (g, d) = gamma_delta(&p, 2).unwrap();
        assert!(g.abs() < 1e-15);
        assert!((d - 1.5 * PI).abs() < 1e-15);

        let p = QklrParams::new(2.0, PI / 2.0).unwrap();
        let (g, d) = gamma_delta(&p, 1).unwrap();
        assert!((g - 1.0).abs() < 1e-15);
        assert!((d - PI / 2.0).abs() < 1e-15);

        let p = QklrParams::new(1.0, 2.0 * PI).unwrap();
        assert!(p.is_resonant());
        let (g, _) = gamma_delta(&p, 5).unwrap();
        assert!((g - 2.5).abs() < 1e-15);

        assert!(gamma_delta(&p, 0).is_err());
    }

    #[test]
    fn resonant_limit_matches_nearby_tau() {
        for n in 1..=8u64 {
            let exact = QklrParams::new(1.3, 2.0 * PI).unwrap();
            let near = QklrParams::new(1.3, 2.0 * PI - 1e-6).unwrap();
            let (g0, d0) = gamma_delta(&exact, n).unwrap();
            let (g1, d1) = gamma_delta(&near, n).unwrap();
            let z0 = Complex64::from_polar(g0, d0);
            let z1 = Complex64::from_polar(g1, d1);
            assert!((z0 - z1).norm() < 1e-4, "n={n}");
            assert!((z0 - Complex64::new(n as f64 * 0.65, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(QklrParams::new(0.0, 1.0).is_err());
        assert!(QklrParams::new(1.0, 0.0).is_err());
        assert!(QklrParams::new(1.0, 7.0).is_err());
        assert!(matches!(QklrParams::rational(1.0, 2, 4), Err(Error::NotCoprime { .. })));
        assert!(QklrParams::rational(1.0, 3, 2).is_err());
    }

    #[test]
    fn vanishing_gamma_gives_identity() {
        let p = QklrParams::new(1.0, PI).unwrap();
        let u = qklr_propagator(&p, 2, SiteWindow::centered(5), Picture::Interaction).unwrap();
        assert!(u.identity_defect() < 1e-15);
    }

    #[test]
    fn schrodinger_row_phase() {
        let p = QklrParams::new(0.9, 1.1).unwrap();
        let w = SiteWindow::centered(6);
        let ui = qklr_propagator(&p, 4, w, Picture::Interaction).unwrap();
        let us = qklr_propagator(&p, 4, w, Picture::Schrodinger).unwrap();
        for n in w.sites() {
            for m in w.sites() {
                let phase = Complex64::from_polar(1.0, -(n as f64) * 4.0 * 1.1);
                assert!((us.get(n, m).unwrap() - phase * ui.get(n, m).unwrap()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn closed_form_matches_solver() {
        let p = QklrParams::new(1.0, 1.0).unwrap();
        let psi0 = WaveState::delta(0);
        let psi = evolve_state(&p.drive(), &psi0, 3.0).unwrap();
        let block = qklr_propagator(&p, 3, SiteWindow::centered(30), Picture::Schrodinger).unwrap();
        for n in -20..=20 {
            assert!((psi.amplitude(n) - block.get(n, 0).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn resonance_energy_is_quadratic() {
        let p = QklrParams::new(0.8, 2.0 * PI).unwrap();
        for n in [1u64, 2, 7, 30] {
            let e = energy(&p, n).unwrap();
            let expected = (n as f64 * 0.8).powi(2) / 2.0;
            assert!((e - expected).abs() / expected < 1e-8);
        }
    }

    #[test]
    fn floquet_spectra() {
        let s = floquet_eigenvalues(1, 1).unwrap();
        assert_eq!(s.eigenvalues, vec![Complex64::new(1.0, 0.0)]);
        let s = floquet_eigenvalues(1, 2).unwrap();
        assert!((s.eigenvalues[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let s = floquet_eigenvalues(1, 3).unwrap();
        assert!((s.eigenvalues[2] - Complex64::from_polar(1.0, 4.0 * PI / 3.0)).norm() < 1e-15);
        assert!(s.closure_defect() < 1e-12);
        assert!(matches!(floquet_eigenvalues(2, 4), Err(Error::NotCoprime { p: 2, q: 4 })));
    }

    #[test]
    fn kick_sums_cancel() {
        let thetas: Vec<f64> = (0..100).map(|j| 0.0628 * j as f64).collect();
        assert!(kick_sum_residual(1.0, 1, 2, &thetas).unwrap() < 1e-12);
        assert!(kick_sum_residual(2.5, 2, 5, &thetas).unwrap() < 1e-12);
        assert!(kick_sum_residual(1.0, 1, 1, &thetas).is_err());
    }

    #[test]
    fn eigenstate_from_constant_seed() {
        let seed = vec![Complex64::new(1.0, 0.0); 256];
        let state = build_eigenstate(&seed, 0, 1.0, 1, 2).unwrap();
        assert_eq!(state.grid_size(), 512);
        assert!(state.residual() < 1e-10);
    }

    #[test]
    fn eigenstate_rejects_bad_input() {
        let zero = vec![Complex64::new(0.0, 0.0); 8];
        assert_eq!(build_eigenstate(&zero, 0, 1.0, 1, 2), Err(Error::EmptySeed));
        assert_eq!(build_eigenstate(&[], 0, 1.0, 1, 2), Err(Error::EmptySeed));
        let seed = vec![Complex64::new(1.0, 0.0); 8];
        assert!(matches!(
            build_eigenstate(&seed, 5, 1.0, 1, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn period_returns_delta_state() {
        let f = period_check(1, 2, 1.0, &WaveState::delta(0)).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn off_resonance_tail_stays_small() {
        let p = QklrParams::new(1.0, 1.0).unwrap();
        let offset = p.max_argument().ceil() as usize + 40;
        for n in [1u64, 10, 100, 1000] {
            assert!(tail_mass(&p, n, offset).unwrap() < 1e-12);
        }
    }
}

//! Exact propagation for `H(t) = ω(t)·N + V(t)` with `N = diag(n)` and `V`
//! a Laurent operator.
//!
//! In the interaction picture the entries of `H_I(t)` are
//! `V_{n-m} e^{i(n-m)Φ(t)}` with `Φ(t) = ∫_0^t ω`. These operators all commute,
//! so the time-ordered exponential collapses to `exp(-i G(t))` with
//! `G(t) = ∫_0^t H_I`, accumulated here one diagonal at a time. The
//! Schrödinger-picture propagator is `e^{-iΦ(t) N} exp(-i G(t))`.


use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{apply_operator, Picture, PropagatorBlock, SiteWindow, WaveState};
use crate::laurent::{exp_bidiagonal, exp_symbol, LaurentOperator};
use crate::quadrature::adaptive_simpson;

/// Absolute quadrature tolerance per accumulated coefficient.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// Slack when deciding whether a kick falls on the horizon.
const KICK_SLACK: f64 = 1e-9;

/// Piecewise-linear `ω(t)` (and optional coupling envelope `f(t)`, so that
/// `V(t) = f(t)·V`) sampled at strictly increasing times starting at 0.
/// Beyond the last sample both are held constant.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDrive {
    times: Vec<f64>,
    omegas: Vec<f64>,
    envelope: Option<Vec<f64>>,
    coupling: LaurentOperator,
    // Φ at each sample time
    phase: Vec<f64>,
}

impl TabulatedDrive {
    pub fn new(times: Vec<f64>, omegas: Vec<f64>, coupling: LaurentOperator) -> Result<Self> {
        if times.len() < 2 || times.len() != omegas.len() {
            return Err(Error::InvalidParameter(
                "tabulated drive needs at least two (time, omega) samples of equal length".into(),
            ));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidParameter("tabulated drive must start at t = 0".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("tabulated times must be strictly increasing".into()));
        }
        if times.iter().chain(&omegas).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("tabulated drive has non-finite samples".into()));
        }
        let mut phase = vec![0.0; times.len()];
        for i in 1..times.len() {
            phase[i] = phase[i - 1] + 0.5 * (omegas[i] + omegas[i - 1]) * (times[i] - times[i - 1]);
        }
        Ok(Self {
            times,
            omegas,
            envelope: None,
            coupling,
            phase,
        })
    }

    pub fn with_envelope(mut self, envelope: Vec<f64>) -> Result<Self> {
        if envelope.len() != self.times.len() || envelope.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("envelope must match the time samples".into()));
        }
        self.envelope = Some(envelope);
        Ok(self)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    fn segment(&self, t: f64) -> usize {
        match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            i => (i - 1).min(self.times.len() - 2),
        }
    }

    fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        let last = self.times.len() - 1;
        if t >= self.times[last] {
            return values[last];
        }
        let i = self.segment(t);
        let w = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        values[i] + w * (values[i + 1] - values[i])
    }

    pub fn omega_at(&self, t: f64) -> f64 {
        self.interpolate(&self.omegas, t)
    }

    pub fn envelope_at(&self, t: f64) -> f64 {
        match &self.envelope {
            Some(e) => self.interpolate(e, t),
            None => 1.0,
        }
    }

    fn phase_at(&self, t: f64) -> f64 {
        let last = self.times.len() - 1;
        if t >= self.times[last] {
            return self.phase[last] + self.omegas[last] * (t - self.times[last]);
        }
        let i = self.segment(t);
        let dt = t - self.times[i];
        let slope = (self.omegas[i + 1] - self.omegas[i]) / (self.times[i + 1] - self.times[i]);
        self.phase[i] + self.omegas[i] * dt + 0.5 * slope * dt * dt
    }

    fn max_rate(&self) -> f64 {
        self.omegas.iter().fold(0.0f64, |m, w| m.max(w.abs()))
    }
}

/// The drive: how `ω(t)` and the interaction vary in time.
#[derive(Debug, Clone, PartialEq)]
pub enum DriveSpec {
    /// Time-independent `ω` and `V`.
    ConstantOmega { omega: f64, coupling: LaurentOperator },
    /// `V` applied as delta kicks at `t = τ, 2τ, …` on top of constant `ω`.
    Kicked {
        coupling: LaurentOperator,
        tau: f64,
        omega: f64,
    },
    /// `ω(t) = -E sin t` (period 2π) with constant coupling.
    Sinusoidal { amplitude: f64, coupling: LaurentOperator },
    Tabulated(TabulatedDrive),
}

impl DriveSpec {
    pub fn constant(omega: f64, coupling: LaurentOperator) -> Self {
        DriveSpec::ConstantOmega { omega, coupling }
    }

    pub fn kicked(coupling: LaurentOperator, tau: f64, omega: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("kick period must be positive, got {tau}")));
        }
        Ok(DriveSpec::Kicked { coupling, tau, omega })
    }

    pub fn sinusoidal(amplitude: f64, coupling: LaurentOperator) -> Self {
        DriveSpec::Sinusoidal { amplitude, coupling }
    }

    pub fn coupling(&self) -> &LaurentOperator {
        match self {
            DriveSpec::ConstantOmega { coupling, .. }
            | DriveSpec::Kicked { coupling, .. }
            | DriveSpec::Sinusoidal { coupling, .. } => coupling,
            DriveSpec::Tabulated(tab) => &tab.coupling,
        }
    }

    /// Instantaneous `ω(t)`.
    pub fn omega_at(&self, t: f64) -> f64 {
        match self {
            DriveSpec::ConstantOmega { omega, .. } | DriveSpec::Kicked { omega, .. } => *omega,
            DriveSpec::Sinusoidal { amplitude, .. } => -amplitude * t.sin(),
            DriveSpec::Tabulated(tab) => tab.omega_at(t),
        }
    }

    /// Scalar weight of the continuous coupling at time `t`.
    pub fn coupling_weight(&self, t: f64) -> f64 {
        match self {
            DriveSpec::Tabulated(tab) => tab.envelope_at(t),
            _ => 1.0,
        }
    }

    /// Kick instants in `(0, t]`; empty for continuous drives.
    pub fn kick_times(&self, t: f64) -> Vec<f64> {
        match self {
            DriveSpec::Kicked { tau, .. } => {
                let count = (t / tau + KICK_SLACK).floor().max(0.0) as u64;
                (1..=count).map(|j| j as f64 * tau).collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn is_kicked(&self) -> bool {
        matches!(self, DriveSpec::Kicked { .. })
    }

    /// Upper bound on `|ω(t)|`, used to size quadrature panels.
    fn max_rate(&self) -> f64 {
        match self {
            DriveSpec::ConstantOmega { omega, .. } | DriveSpec::Kicked { omega, .. } => omega.abs(),
            DriveSpec::Sinusoidal { amplitude, .. } => amplitude.abs(),
            DriveSpec::Tabulated(tab) => tab.max_rate(),
        }
    }
}

/// `Φ(t) = ∫_0^t ω(t') dt'`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseIntegral<'a> {
    drive: &'a DriveSpec,
}

impl PhaseIntegral<'_> {
    pub fn at(&self, t: f64) -> f64 {
        match self.drive {
            DriveSpec::ConstantOmega { omega, .. } | DriveSpec::Kicked { omega, .. } => omega * t,
            DriveSpec::Sinusoidal { amplitude, .. } => amplitude * (t.cos() - 1.0),
            DriveSpec::Tabulated(tab) => tab.phase_at(t),
        }
    }
}

pub fn phase_integral(drive: &DriveSpec) -> PhaseIntegral<'_> {
    PhaseIntegral { drive }
}

/// `G(t) = ∫_0^t H_I(t') dt'` as a Laurent operator.
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatedInteraction {
    pub g: LaurentOperator,
    pub horizon: f64,
}

impl AccumulatedInteraction {
    pub fn is_hermitian(&self) -> bool {
        self.g.is_hermitian()
    }
}

/// Accumulate `g_k(t) = ∫_0^t V_k(t') e^{ikΦ(t')} dt'` for every diagonal.
///
/// Kicks are summed exactly, including a kick that lands on the horizon.
/// Continuous drives use adaptive Simpson to [`QUADRATURE_TOLERANCE`].
pub fn accumulate_interaction(drive: &DriveSpec, t: f64) -> Result<AccumulatedInteraction> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let coupling = drive.coupling();
    let b = coupling.bandwidth() as i64;
    let phase = phase_integral(drive);

    // weights[k] = ∫ f(t') e^{ikΦ(t')} dt' for k ≥ 0; negative k by conjugation
    let mut weights = Vec::with_capacity(b as usize + 1);
    for k in 0..=b {
        let kf = k as f64;
        let w = match drive {
            DriveSpec::Kicked { .. } => drive
                .kick_times(t)
                .into_iter()
                .map(|s| Complex64::from_polar(1.0, kf * phase.at(s)))
                .sum(),
            DriveSpec::ConstantOmega { omega, .. } => {
                let rate = kf * omega;
                if rate == 0.0 {
                    Complex64::new(t, 0.0)
                } else {
                    (Complex64::from_polar(1.0, rate * t) - 1.0) / Complex64::new(0.0, rate)
                }
            }
            DriveSpec::Sinusoidal { .. } => {
                let f = |s: f64| Complex64::from_polar(1.0, kf * phase.at(s));
                let pieces = panel_count(t, kf * drive.max_rate());
                adaptive_simpson(&f, 0.0, t, QUADRATURE_TOLERANCE, pieces)?
            }
            DriveSpec::Tabulated(tab) => {
                let f = |s: f64| Complex64::from_polar(tab.envelope_at(s), kf * phase.at(s));
                let mut nodes: Vec<f64> = tab.times.iter().copied().filter(|&s| s < t).collect();
                nodes.push(t);
                let segments = nodes.len() - 1;
                let mut acc = Complex64::new(0.0, 0.0);
                for pair in nodes.windows(2) {
                    let pieces = panel_count(pair[1] - pair[0], kf * drive.max_rate());
                    acc += adaptive_simpson(
                        &f,
                        pair[0],
                        pair[1],
                        QUADRATURE_TOLERANCE / segments.max(1) as f64,
                        pieces,
                    )?;
                }
                acc
            }
        };
        weights.push(w);
    }
    let g = LaurentOperator::from_band(
        (-b..=b)
            .map(|k| {
                let w = if k < 0 { weights[(-k) as usize].conj() } else { weights[k as usize] };
                coupling.coeff(k) * w
            })
            .collect(),
    );
    Ok(AccumulatedInteraction { g, horizon: t })
}

fn panel_count(length: f64, rate: f64) -> usize {
    // roughly two panels per radian of accumulated phase
    ((length * (1.0 + rate.abs()) * 2.0).ceil() as usize).max(1)
}

/// Laurent coefficients of `U_I = exp(-iG)`.
pub fn interaction_coefficients(acc: &AccumulatedInteraction) -> Result<LaurentOperator> {
    let g = &acc.g;
    g.ensure_hermitian()?;
    if g.bandwidth() <= 1 {
        let c1 = g.coeff(1);
        let u = exp_bidiagonal(c1.norm(), c1.arg())?;
        let diagonal = g.coeff(0).re;
        if diagonal == 0.0 {
            return Ok(u);
        }
        return Ok(u.scaled(Complex64::from_polar(1.0, -diagonal)));
    }
    exp_symbol(g, 1.0)
}

/// Interaction-picture propagator block on `window`.
pub fn propagator_interaction(acc: &AccumulatedInteraction, window: SiteWindow) -> Result<PropagatorBlock> {
    let u = interaction_coefficients(acc)?;
    Ok(PropagatorBlock::from_laurent(&u, window, Picture::Interaction))
}

/// Multiply row `n` by `e^{-inΦ(t)}`.
pub fn to_schrodinger(u: &PropagatorBlock, phi_t: f64) -> Result<PropagatorBlock> {
    if u.picture != Picture::Interaction {
        return Err(Error::WrongPicture {
            expected: Picture::Interaction.name(),
        });
    }
    let mut out = u.clone();
    for (r, n) in u.window.sites().enumerate() {
        let phase = Complex64::from_polar(1.0, -(n as f64) * phi_t);
        for c in 0..out.entries.ncols() {
            out.entries[(r, c)] *= phase;
        }
    }
    out.picture = Picture::Schrodinger;
    Ok(out)
}

/// Schrödinger-picture propagator `U(t, 0)` on `window`.
pub fn schrodinger_propagator(drive: &DriveSpec, t: f64, window: SiteWindow) -> Result<PropagatorBlock> {
    let acc = accumulate_interaction(drive, t)?;
    to_schrodinger(&propagator_interaction(&acc, window)?, phase_integral(drive).at(t))
}

/// `ψ(t) = U(t, 0) ψ(0)`.
pub fn evolve_state(drive: &DriveSpec, psi0: &WaveState, t: f64) -> Result<WaveState> {
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "initial state must be normalized (norm {})",
            psi0.norm()
        )));
    }
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let acc = accumulate_interaction(drive, t)?;
    let u = interaction_coefficients(&acc)?;
    let mut psi = apply_operator(&u, psi0);
    psi.apply_site_phase(phase_integral(drive).at(t));
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::laurent::commutator_norm;
    use crate::special::bessel_j;

    fn qklr_drive(k: f64, tau: f64) -> DriveSpec {
        DriveSpec::kicked(LaurentOperator::hopping(k / 2.0), tau, 1.0).unwrap()
    }

    #[test]
    fn phase_integrals() {
        let d = DriveSpec::constant(1.0, LaurentOperator::zero());
        assert!((phase_integral(&d).at(PI) - PI).abs() < 1e-15);

        let d = DriveSpec::sinusoidal(2.0, LaurentOperator::hopping(1.0));
        assert!(phase_integral(&d).at(2.0 * PI).abs() < 1e-14);
        assert_eq!(phase_integral(&d).at(0.0), 0.0);

        let times: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let tab = TabulatedDrive::new(times.clone(), times, LaurentOperator::zero()).unwrap();
        let d = DriveSpec::Tabulated(tab);
        assert!((phase_integral(&d).at(1.0) - 0.5).abs() < 1e-14);
        assert!((phase_integral(&d).at(0.55) - 0.55 * 0.55 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn phase_is_additive_for_constant_omega() {
        let d = DriveSpec::constant(0.7, LaurentOperator::zero());
        let p = phase_integral(&d);
        assert!((p.at(1.3 + 2.1) - p.at(1.3) - p.at(2.1)).abs() < 1e-14);
    }

    #[test]
    fn tabulated_validation() {
        let c = LaurentOperator::zero();
        assert!(TabulatedDrive::new(vec![0.0, 1.0, 1.0], vec![0.0; 3], c.clone()).is_err());
        assert!(TabulatedDrive::new(vec![0.5, 1.0], vec![0.0; 2], c.clone()).is_err());
        assert!(TabulatedDrive::new(vec![0.0], vec![0.0], c.clone()).is_err());
        let tab = TabulatedDrive::new(vec![0.0, 1.0], vec![0.0; 2], c).unwrap();
        assert!(tab.clone().with_envelope(vec![1.0]).is_err());
        assert!(tab.with_envelope(vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn negative_time_is_rejected() {
        let d = qklr_drive(1.0, 1.0);
        assert_eq!(accumulate_interaction(&d, -1.0), Err(Error::NegativeTime(-1.0)));
    }

    #[test]
    fn kicked_geometric_sum_vanishes_at_full_period() {
        let acc = accumulate_interaction(&qklr_drive(1.0, PI), 2.0 * PI).unwrap();
        assert!(acc.g.coeff(1).norm() < 1e-15);
    }

    #[test]
    fn kicked_accumulation_matches_gamma_delta() {
        let (k, tau, n) = (1.3, 0.9, 7u32);
        let acc = accumulate_interaction(&qklr_drive(k, tau), n as f64 * tau).unwrap();
        let gamma = 0.5 * k * (n as f64 * tau / 2.0).sin() / (tau / 2.0).sin();
        let delta = (n as f64 + 1.0) * tau / 2.0;
        assert!((acc.g.coeff(1) - Complex64::from_polar(gamma, delta)).norm() < 1e-13);
        assert!((acc.g.coeff(-1) - Complex64::from_polar(gamma, -delta)).norm() < 1e-13);
        assert!(acc.is_hermitian());
    }

    #[test]
    fn sinusoidal_accumulation_matches_bessel_closed_form() {
        let (t_hop, e, periods) = (0.8, 1.7, 3u32);
        let d = DriveSpec::sinusoidal(e, LaurentOperator::hopping(t_hop));
        let acc = accumulate_interaction(&d, 2.0 * PI * periods as f64).unwrap();
        let expected = Complex64::from_polar(
            2.0 * PI * periods as f64 * t_hop * bessel_j(0, e).unwrap(),
            -e,
        );
        assert!((acc.g.coeff(1) - expected).norm() < 1e-9);
    }

    #[test]
    fn constant_omega_accumulation_matches_quadrature() {
        let coupling = LaurentOperator::from_pairs([
            (1, Complex64::new(0.3, 0.1)),
            (-1, Complex64::new(0.3, -0.1)),
            (2, Complex64::new(0.0, 0.2)),
            (-2, Complex64::new(0.0, -0.2)),
        ]);
        let t = 3.7;
        let exact = accumulate_interaction(&DriveSpec::constant(0.6, coupling.clone()), t).unwrap();
        let tab = TabulatedDrive::new(vec![0.0, t], vec![0.6, 0.6], coupling).unwrap();
        let quad = accumulate_interaction(&DriveSpec::Tabulated(tab), t).unwrap();
        assert!(exact.g.sub(&quad.g).max_abs() < 1e-10);
    }

    #[test]
    fn interaction_hamiltonians_commute() {
        let d = DriveSpec::sinusoidal(1.1, LaurentOperator::hopping(0.5));
        let p = phase_integral(&d);
        let h_at = |t: f64| {
            LaurentOperator::from_pairs(
                d.coupling()
                    .offsets()
                    .map(|(k, c)| (k, c * Complex64::from_polar(1.0, k as f64 * p.at(t)))),
            )
        };
        assert!(commutator_norm(&h_at(0.4), &h_at(2.9)) < 1e-13);
    }

    #[test]
    fn zero_accumulation_gives_identity() {
        let acc = AccumulatedInteraction {
            g: LaurentOperator::zero(),
            horizon: 0.0,
        };
        let block = propagator_interaction(&acc, SiteWindow::centered(3)).unwrap();
        assert!(block.identity_defect() < 1e-15);
    }

    #[test]
    fn picture_conversion() {
        let acc = accumulate_interaction(&qklr_drive(1.0, 1.0), 3.0).unwrap();
        let ui = propagator_interaction(&acc, SiteWindow::centered(10)).unwrap();
        let same = to_schrodinger(&ui, 0.0).unwrap();
        assert_eq!(same.entries, ui.entries);
        assert_eq!(same.picture, Picture::Schrodinger);
        assert!(matches!(to_schrodinger(&same, 0.1), Err(Error::WrongPicture { .. })));

        let us = to_schrodinger(&ui, 3.0).unwrap();
        for n in -3..=3i64 {
            for m in -3..=3i64 {
                let expected = Complex64::from_polar(1.0, -(n as f64) * 3.0) * ui.get(n, m).unwrap();
                assert!((us.get(n, m).unwrap() - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn non_hermitian_accumulation_is_rejected() {
        let acc = AccumulatedInteraction {
            g: LaurentOperator::from_pairs([(1, Complex64::new(1.0, 0.0))]),
            horizon: 1.0,
        };
        assert!(matches!(
            propagator_interaction(&acc, SiteWindow::centered(2)),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn evolution_preserves_norm_and_composes() {
        let d = DriveSpec::sinusoidal(1.3, LaurentOperator::hopping(0.7));
        let psi0 = WaveState::delta(0);
        assert_eq!(evolve_state(&d, &psi0, 0.0).unwrap(), psi0);
        let psi = evolve_state(&d, &psi0, 5.3).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10);

        // exponents add: U_I(t2,0) = U_I(t2,t1) U_I(t1,0)
        let g1 = accumulate_interaction(&d, 2.0).unwrap().g;
        let g2 = accumulate_interaction(&d, 5.0).unwrap().g;
        let part = g2.sub(&g1);
        let u1 = exp_symbol(&g1, 1.0).unwrap();
        let u21 = exp_symbol(&part, 1.0).unwrap();
        let u2 = exp_symbol(&g2, 1.0).unwrap();
        let composed = crate::laurent::laurent_product(&u21, &u1);
        assert!(composed.sub(&u2).max_abs() < 1e-9);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let d = qklr_drive(1.0, 1.0);
        let psi = WaveState::from_raw(0, vec![Complex64::new(2.0, 0.0)]);
        assert!(matches!(evolve_state(&d, &psi, 1.0), Err(Error::InvalidParameter(_))));
    }
}

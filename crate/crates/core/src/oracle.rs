//! Brute-force reference propagator on a truncated lattice.
//!
//! The Schrödinger equation is integrated directly in the site basis, keeping
//! the time ordering: kicks are applied as exact unitaries `exp(-iV)` built
//! from a dense hermitian eigendecomposition, and continuous drives are
//! advanced by a fourth-order Suzuki composition of symmetric split steps in
//! which the diagonal part `ω(t)·N` is integrated exactly.
//!
//! Nothing here uses Laurent algebra, symbols or Bessel functions, so it can
//! check every closed form in the crate.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Picture, PropagatorBlock, SiteWindow, WaveState};
use crate::laurent::LaurentOperator;
use crate::solver::{phase_integral, DriveSpec, PhaseIntegral};

pub const DEFAULT_DIM: usize = 256;
pub const DEFAULT_MARGIN: usize = 60;
pub const MIN_DIM: usize = 16;
pub const EDGE_THRESHOLD: f64 = 1e-12;
/// Rows on each side of the lattice counted as "edge".
pub const EDGE_ROWS: usize = 2;
/// Entries of a dense step unitary below this magnitude are dropped.
const SPARSE_DROP: f64 = 1e-18;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense truncation of the Hamiltonian on the sites `[-D/2, D/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedHamiltonian {
    pub lattice: SiteWindow,
    pub matrix: DMatrix<Complex64>,
}

impl TruncatedHamiltonian {
    /// `V_{nm} = c_{n-m}` restricted to the lattice.
    pub fn coupling(coupling: &LaurentOperator, dim: usize) -> Self {
        let lattice = SiteWindow::lattice(dim);
        let matrix = DMatrix::from_fn(dim, dim, |r, c| coupling.coeff(r as i64 - c as i64));
        Self { lattice, matrix }
    }

    /// The continuous part `ω(t)·N + f(t)·V` at time `t`. Kicks are not
    /// included; see [`TruncatedHamiltonian::coupling`].
    pub fn at(drive: &DriveSpec, t: f64, dim: usize) -> Self {
        let mut h = Self::coupling(drive.coupling(), dim);
        let weight = if drive.is_kicked() { 0.0 } else { drive.coupling_weight(t) };
        h.matrix *= Complex64::new(weight, 0.0);
        let omega = drive.omega_at(t);
        for (i, n) in h.lattice.sites().enumerate() {
            h.matrix[(i, i)] += omega * n as f64;
        }
        h
    }

    pub fn hermitian_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a hermitian matrix, reusable for `exp(-isH)` at
/// any `s`.
#[derive(Debug, Clone)]
pub struct HermitianExp {
    vectors: DMatrix<Complex64>,
    values: Vec<f64>,
}

impl HermitianExp {
    pub fn new(h: &DMatrix<Complex64>) -> Self {
        let eig = h.clone().symmetric_eigen();
        Self {
            vectors: eig.eigenvectors,
            values: eig.eigenvalues.iter().copied().collect(),
        }
    }

    /// Dense `exp(-i s H)`.
    pub fn unitary(&self, s: f64) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (j, lambda) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -s * lambda);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(-i s H) Ψ` without forming the unitary.
    pub fn apply(&self, s: f64, psi: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut coeffs = self.vectors.adjoint() * psi;
        for (j, lambda) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -s * lambda);
            coeffs.row_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        &self.vectors * coeffs
    }
}

/// `exp(-i s H)` for a dense hermitian `H`, via unitary diagonalization.
pub fn dense_hermitian_exp(h: &DMatrix<Complex64>, s: f64) -> DMatrix<Complex64> {
    HermitianExp::new(h).unitary(s)
}

/// Row-compressed copy of a dense unitary with negligible entries dropped.
#[derive(Debug, Clone)]
struct SparseRows {
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseRows {
    fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let rows = (0..m.nrows())
            .map(|r| {
                (0..m.ncols())
                    .filter_map(|c| {
                        let v = m[(r, c)];
                        (v.norm() > SPARSE_DROP).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    fn apply(&self, psi: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(psi.nrows(), psi.ncols(), ZERO);
        for col in 0..psi.ncols() {
            let src = psi.column(col);
            let mut dst = out.column_mut(col);
            for (r, row) in self.rows.iter().enumerate() {
                dst[r] = row.iter().map(|(c, v)| v * src[*c]).sum();
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Lattice dimension `D`; sites `[-D/2, D/2)`.
    pub dim: usize,
    /// Number of fourth-order macro steps over the horizon (continuous drives).
    pub steps: usize,
    /// Columns (initial sites) to propagate. Defaults to the lattice shrunk
    /// by `min(60, D/4)`.
    pub columns: Option<SiteWindow>,
    pub edge_threshold: f64,
}

impl OracleConfig {
    pub fn new(dim: usize, steps: usize) -> Self {
        Self {
            dim,
            steps,
            columns: None,
            edge_threshold: EDGE_THRESHOLD,
        }
    }

    pub fn with_columns(mut self, columns: SiteWindow) -> Self {
        self.columns = Some(columns);
        self
    }

    pub fn lattice(&self) -> SiteWindow {
        SiteWindow::lattice(self.dim)
    }

    fn resolved_columns(&self) -> Result<SiteWindow> {
        let lattice = self.lattice();
        let cols = match self.columns {
            Some(c) => c,
            None => lattice
                .shrink(DEFAULT_MARGIN.min(self.dim / 4))
                .ok_or_else(|| Error::InvalidParameter("lattice too small".into()))?,
        };
        if !lattice.contains_window(&cols) {
            return Err(Error::InvalidParameter(format!(
                "columns [{}, {}] outside lattice [{}, {}]",
                cols.min, cols.max, lattice.min, lattice.max
            )));
        }
        Ok(cols)
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self::new(DEFAULT_DIM, 256)
    }
}

/// Columns `U(t,0) e_m` of the truncated-lattice propagator, for `m` in
/// `columns`, with all `D` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub lattice: SiteWindow,
    pub columns: SiteWindow,
    pub propagator: DMatrix<Complex64>,
    /// Split steps (continuous drives) or kicks applied.
    pub steps: usize,
    /// Step-doubling estimate of the time-discretization error; zero for
    /// purely kicked drives.
    pub error_estimate: f64,
}

impl OracleResult {
    pub fn get(&self, n: i64, m: i64) -> Option<Complex64> {
        (self.lattice.contains(n) && self.columns.contains(m))
            .then(|| self.propagator[(self.lattice.index(n), self.columns.index(m))])
    }

    /// `max |(U†U - I)|` over the propagated columns.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.propagator.adjoint() * &self.propagator;
        let mut worst = 0.0f64;
        for r in 0..gram.nrows() {
            for c in 0..gram.ncols() {
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram[(r, c)] - expected).norm());
            }
        }
        worst
    }

    /// The evolved delta state started at site `m`.
    pub fn column_state(&self, m: i64) -> Option<WaveState> {
        self.columns.contains(m).then(|| {
            let col = self.propagator.column(self.columns.index(m));
            WaveState::from_raw(self.lattice.min, col.iter().copied().collect())
        })
    }

    /// `U ψ` for a state supported on the propagated columns.
    pub fn apply(&self, psi: &WaveState) -> Result<WaveState> {
        if !self.columns.contains_window(&psi.window()) {
            return Err(Error::InsufficientMargin("state extends beyond the propagated columns".into()));
        }
        let mut amps = vec![ZERO; self.lattice.len()];
        for m in psi.window().sites() {
            let a = psi.amplitude(m);
            let col = self.propagator.column(self.columns.index(m));
            for (out, u) in amps.iter_mut().zip(col.iter()) {
                *out += u * a;
            }
        }
        Ok(WaveState::from_raw(self.lattice.min, amps))
    }

    /// Largest probability any propagated column has in the outermost
    /// lattice rows.
    pub fn edge_mass(&self) -> f64 {
        edge_mass(&self.propagator)
    }
}

fn edge_mass(psi: &DMatrix<Complex64>) -> f64 {
    let rows = psi.nrows();
    let mut worst = 0.0f64;
    for col in psi.column_iter() {
        let mass: f64 = (0..EDGE_ROWS.min(rows))
            .map(|i| col[i].norm_sqr() + col[rows - 1 - i].norm_sqr())
            .sum();
        worst = worst.max(mass);
    }
    worst
}

/// Propagate to time `t`. For continuous drives `config.steps` fourth-order
/// macro steps are used; kicked drives are exact up to truncation.
pub fn trotter_evolve(drive: &DriveSpec, t: f64, config: &OracleConfig) -> Result<OracleResult> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    if config.dim < MIN_DIM {
        return Err(Error::InvalidParameter(format!(
            "lattice dimension must be at least {MIN_DIM}, got {}",
            config.dim
        )));
    }
    if config.steps == 0 && !drive.is_kicked() {
        return Err(Error::InvalidParameter("at least one step is required".into()));
    }
    drive.coupling().ensure_hermitian()?;
    let lattice = config.lattice();
    let columns = config.resolved_columns()?;
    let mut psi = DMatrix::from_element(lattice.len(), columns.len(), ZERO);
    for (c, m) in columns.sites().enumerate() {
        psi[(lattice.index(m), c)] = Complex64::new(1.0, 0.0);
    }
    let mut stepper = Stepper::new(drive, config, lattice);
    let steps = if drive.is_kicked() {
        stepper.run_kicked(&mut psi, t)?
    } else {
        stepper.run_continuous(&mut psi, t, config.steps)?
    };
    Ok(OracleResult {
        lattice,
        columns,
        propagator: psi,
        steps,
        error_estimate: 0.0,
    })
}

/// Double the step count, starting from `config.steps`, until successive
/// fourth-order results agree to `tolerance` (after Richardson scaling) or
/// `max_steps` is exceeded. Kicked drives return after one exact pass.
pub fn trotter_converged(
    drive: &DriveSpec,
    t: f64,
    config: &OracleConfig,
    tolerance: f64,
    max_steps: usize,
) -> Result<OracleResult> {
    let mut coarse = trotter_evolve(drive, t, config)?;
    if drive.is_kicked() {
        return Ok(coarse);
    }
    let mut cfg = *config;
    loop {
        cfg.steps *= 2;
        let mut fine = trotter_evolve(drive, t, &cfg)?;
        let diff = (&fine.propagator - &coarse.propagator)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        fine.error_estimate = diff / 15.0;
        if fine.error_estimate < tolerance || cfg.steps * 2 > max_steps {
            return Ok(fine);
        }
        coarse = fine;
    }
}

enum CouplingStep {
    /// Nearest-neighbor coupling, advanced bond by bond (even bonds, then odd).
    Bonds { diagonal: f64, hop: Complex64 },
    /// General band: dense eigendecomposition of the truncated coupling.
    Dense {
        exp: HermitianExp,
        cache: HashMap<u64, SparseRows>,
        cacheable: bool,
    },
}

struct Stepper<'a> {
    drive: &'a DriveSpec,
    phase: PhaseIntegral<'a>,
    sites: Vec<f64>,
    coupling: CouplingStep,
    dim: usize,
    threshold: f64,
}

// fourth-order Suzuki weights
fn suzuki_weights() -> [f64; 5] {
    let p = 1.0 / (4.0 - 4f64.powf(1.0 / 3.0));
    [p, p, 1.0 - 4.0 * p, p, p]
}

impl<'a> Stepper<'a> {
    fn new(drive: &'a DriveSpec, config: &OracleConfig, lattice: SiteWindow) -> Self {
        let coupling = drive.coupling();
        let cacheable = !matches!(drive, DriveSpec::Tabulated(_));
        let step = if coupling.bandwidth() == 1 && !drive.is_kicked() {
            CouplingStep::Bonds {
                diagonal: coupling.coeff(0).re,
                hop: coupling.coeff(1),
            }
        } else {
            let h = TruncatedHamiltonian::coupling(coupling, config.dim);
            CouplingStep::Dense {
                exp: HermitianExp::new(&h.matrix),
                cache: HashMap::new(),
                cacheable,
            }
        };
        Self {
            drive,
            phase: phase_integral(drive),
            sites: lattice.sites().map(|n| n as f64).collect(),
            coupling: step,
            dim: config.dim,
            threshold: config.edge_threshold,
        }
    }

    fn check_edges(&self, psi: &DMatrix<Complex64>) -> Result<()> {
        let mass = edge_mass(psi);
        if mass > self.threshold {
            return Err(Error::DimensionTooSmall {
                dim: self.dim,
                mass,
                threshold: self.threshold,
            });
        }
        Ok(())
    }

    /// `exp(-i N (Φ(t1) - Φ(t0)))`.
    fn free(&self, psi: &mut DMatrix<Complex64>, t0: f64, t1: f64) {
        let dphi = self.phase.at(t1) - self.phase.at(t0);
        if dphi == 0.0 {
            return;
        }
        let phases: Vec<Complex64> = self
            .sites
            .iter()
            .map(|n| Complex64::from_polar(1.0, -n * dphi))
            .collect();
        for mut col in psi.column_iter_mut() {
            for (z, ph) in col.iter_mut().zip(&phases) {
                *z *= ph;
            }
        }
    }

    /// `exp(-i s V)`.
    fn couple(&mut self, psi: &mut DMatrix<Complex64>, s: f64) {
        if s == 0.0 {
            return;
        }
        match &mut self.coupling {
            CouplingStep::Bonds { diagonal, hop } => {
                let (diagonal, hop) = (*diagonal, *hop);
                let r = hop.norm();
                let rows = psi.nrows();
                if r > 0.0 {
                    let (sin, cos) = (s * r).sin_cos();
                    let up = Complex64::new(0.0, -sin / r) * hop.conj();
                    let down = Complex64::new(0.0, -sin / r) * hop;
                    // V_even/2, V_odd, V_even/2 keeps the composition symmetric
                    for (parity, frac) in [(0usize, 0.5), (1, 1.0), (0, 0.5)] {
                        let (sin_f, cos_f) = if frac == 1.0 {
                            (sin, cos)
                        } else {
                            (s * r * frac).sin_cos()
                        };
                        let (up_f, down_f) = if frac == 1.0 {
                            (up, down)
                        } else {
                            (
                                Complex64::new(0.0, -sin_f / r) * hop.conj(),
                                Complex64::new(0.0, -sin_f / r) * hop,
                            )
                        };
                        for mut col in psi.column_iter_mut() {
                            let mut i = parity;
                            while i + 1 < rows {
                                let a = col[i];
                                let b = col[i + 1];
                                col[i] = a * cos_f + up_f * b;
                                col[i + 1] = b * cos_f + down_f * a;
                                i += 2;
                            }
                        }
                    }
                }
                if diagonal != 0.0 {
                    *psi *= Complex64::from_polar(1.0, -s * diagonal);
                }
            }
            CouplingStep::Dense { exp, cache, cacheable } => {
                if *cacheable {
                    let op = cache
                        .entry(s.to_bits())
                        .or_insert_with(|| SparseRows::from_dense(&exp.unitary(s)));
                    *psi = op.apply(psi);
                } else {
                    *psi = exp.apply(s, psi);
                }
            }
        }
    }

    /// Symmetric second-order step over `[t0, t1]` (which may run backward).
    fn split_step(&mut self, psi: &mut DMatrix<Complex64>, t0: f64, t1: f64) {
        let h = t1 - t0;
        self.couple(psi, 0.5 * h * self.drive.coupling_weight(t0));
        self.free(psi, t0, t1);
        self.couple(psi, 0.5 * h * self.drive.coupling_weight(t1));
    }

    fn run_continuous(&mut self, psi: &mut DMatrix<Complex64>, t: f64, steps: usize) -> Result<usize> {
        let weights = suzuki_weights();
        let h = t / steps as f64;
        let mut count = 0;
        for j in 0..steps {
            let mut t0 = j as f64 * h;
            for w in weights {
                let t1 = t0 + w * h;
                self.split_step(psi, t0, t1);
                t0 = t1;
                count += 1;
            }
            self.check_edges(psi)?;
        }
        Ok(count)
    }

    fn run_kicked(&mut self, psi: &mut DMatrix<Complex64>, t: f64) -> Result<usize> {
        let kicks = self.drive.kick_times(t);
        let mut now = 0.0;
        for &s in &kicks {
            self.free(psi, now, s);
            self.couple(psi, 1.0);
            self.check_edges(psi)?;
            now = s;
        }
        self.free(psi, now, t);
        Ok(kicks.len())
    }
}

/// Largest `|exact - oracle|` over the sub-block of `exact.window` shrunk by
/// `margin` on each side (restricted to the oracle's propagated columns).
/// The oracle lattice must extend at least `margin` sites past that block.
pub fn compare_center_block(exact: &PropagatorBlock, oracle: &OracleResult, margin: usize) -> Result<f64> {
    if exact.picture != Picture::Schrodinger {
        return Err(Error::WrongPicture {
            expected: Picture::Schrodinger.name(),
        });
    }
    let interior = exact
        .window
        .shrink(margin)
        .ok_or_else(|| Error::InsufficientMargin(format!("margin {margin} consumes the exact window")))?;
    let guard = oracle
        .lattice
        .shrink(margin)
        .ok_or_else(|| Error::InsufficientMargin(format!("margin {margin} consumes the oracle lattice")))?;
    if !guard.contains_window(&interior) {
        return Err(Error::InsufficientMargin(format!(
            "block [{}, {}] is within {margin} sites of the oracle edge",
            interior.min, interior.max
        )));
    }
    let cols = interior
        .intersect(&oracle.columns)
        .ok_or_else(|| Error::InsufficientMargin("no propagated oracle column inside the block".into()))?;
    let mut worst = 0.0f64;
    for m in cols.sites() {
        for n in interior.sites() {
            let d = exact.get(n, m).unwrap() - oracle.get(n, m).unwrap();
            worst = worst.max(d.norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_evolution_is_diagonal_phase() {
        let drive = DriveSpec::sinusoidal(1.7, LaurentOperator::zero());
        let cfg = OracleConfig::new(32, 8).with_columns(SiteWindow::centered(4));
        let r = trotter_evolve(&drive, 2.3, &cfg).unwrap();
        let phi = phase_integral(&drive).at(2.3);
        for m in -4..=4i64 {
            for n in r.lattice.sites() {
                let expected = if n == m {
                    Complex64::from_polar(1.0, -(m as f64) * phi)
                } else {
                    ZERO
                };
                assert!((r.get(n, m).unwrap() - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn truncated_hamiltonian_layout() {
        let drive = DriveSpec::kicked(LaurentOperator::hopping(0.5), 1.0, 1.0).unwrap();
        let h = TruncatedHamiltonian::at(&drive, 0.3, 16);
        assert!(h.hermitian_defect() == 0.0);
        assert_eq!(h.matrix[(0, 0)], Complex64::new(-8.0, 0.0));
        assert_eq!(h.matrix[(0, 1)], ZERO);
        let v = TruncatedHamiltonian::coupling(drive.coupling(), 16);
        assert_eq!(v.matrix[(1, 0)], Complex64::new(0.5, 0.0));
    }

    #[test]
    fn dense_exp_is_unitary() {
        let v = TruncatedHamiltonian::coupling(&LaurentOperator::bidiagonal(0.8, 0.3), 40);
        let u = dense_hermitian_exp(&v.matrix, 1.7);
        let gram = u.adjoint() * &u;
        for r in 0..40 {
            for c in 0..40 {
                let e = if r == c { 1.0 } else { 0.0 };
                assert!((gram[(r, c)] - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_small_lattices_and_negative_time() {
        let drive = DriveSpec::sinusoidal(1.0, LaurentOperator::hopping(1.0));
        assert!(trotter_evolve(&drive, 1.0, &OracleConfig::new(8, 4)).is_err());
        assert!(matches!(
            trotter_evolve(&drive, -1.0, &OracleConfig::new(32, 4)),
            Err(Error::NegativeTime(_))
        ));
    }

    #[test]
    fn edge_contact_is_reported() {
        let drive = DriveSpec::kicked(LaurentOperator::hopping(4.0), 2.0 * PI, 1.0).unwrap();
        let cfg = OracleConfig::new(16, 1).with_columns(SiteWindow::centered(1));
        let err = trotter_evolve(&drive, 10.0 * 2.0 * PI, &cfg);
        assert!(matches!(err, Err(Error::DimensionTooSmall { dim: 16, .. })));
    }

    #[test]
    fn bond_and_dense_paths_agree() {
        // the same nearest-neighbor coupling, once as a band-1 operator and
        // once padded to band 2 (forcing the dense path)
        let hop = LaurentOperator::bidiagonal(0.6, 0.4);
        let padded = hop.add(&LaurentOperator::from_pairs([(2, ZERO), (-2, ZERO)]));
        assert_eq!(padded.bandwidth(), 2);
        let cfg = OracleConfig::new(64, 64).with_columns(SiteWindow::centered(3));
        let a = trotter_evolve(&DriveSpec::sinusoidal(1.2, hop), 3.0, &cfg).unwrap();
        let b = trotter_evolve(&DriveSpec::sinusoidal(1.2, padded), 3.0, &cfg).unwrap();
        let diff = (&a.propagator - &b.propagator).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-6, "{diff}");
        assert!(a.unitarity_defect() < 1e-10);
        assert!(b.unitarity_defect() < 1e-10);
    }

    #[test]
    fn fourth_order_convergence() {
        let drive = DriveSpec::sinusoidal(2.0, LaurentOperator::hopping(0.8));
        let cfg = |steps| OracleConfig::new(64, steps).with_columns(SiteWindow::centered(2));
        let t = 2.0 * PI;
        let u1 = trotter_evolve(&drive, t, &cfg(16)).unwrap();
        let u2 = trotter_evolve(&drive, t, &cfg(32)).unwrap();
        let u3 = trotter_evolve(&drive, t, &cfg(64)).unwrap();
        let d = |a: &OracleResult, b: &OracleResult| {
            (&a.propagator - &b.propagator).iter().map(|z| z.norm()).fold(0.0, f64::max)
        };
        let ratio = d(&u1, &u2) / d(&u2, &u3);
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn compare_requires_margin_and_picture() {
        let drive = DriveSpec::kicked(LaurentOperator::hopping(0.5), 1.0, 1.0).unwrap();
        let r = trotter_evolve(&drive, 2.0, &OracleConfig::new(64, 1)).unwrap();
        let block = PropagatorBlock::from_laurent(&LaurentOperator::identity(), r.lattice, Picture::Schrodinger);
        assert!(compare_center_block(&block, &r, 16).is_ok());
        assert!(matches!(compare_center_block(&block, &r, 40), Err(Error::InsufficientMargin(_))));
        let wrong = PropagatorBlock { picture: Picture::Interaction, ..block };
        assert!(matches!(compare_center_block(&wrong, &r, 16), Err(Error::WrongPicture { .. })));
    }
}

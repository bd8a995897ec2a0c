//! Finite views of the infinite site lattice: windows, states and
//! propagator blocks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentOperator;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Inclusive site range `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteWindow {
    pub min: i64,
    pub max: i64,
}

impl SiteWindow {
    pub fn new(min: i64, max: i64) -> Self {
        assert!(min <= max, "empty site window [{min}, {max}]");
        Self { min, max }
    }

    /// `[-half, half]`.
    pub fn centered(half: i64) -> Self {
        Self::new(-half, half)
    }

    /// The `dim` sites `[-dim/2, dim/2)`.
    pub fn lattice(dim: usize) -> Self {
        let lo = -((dim / 2) as i64);
        Self::new(lo, lo + dim as i64 - 1)
    }

    pub fn len(&self) -> usize {
        (self.max - self.min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: i64) -> bool {
        self.min <= n && n <= self.max
    }

    pub fn contains_window(&self, other: &SiteWindow) -> bool {
        self.min <= other.min && other.max <= self.max
    }

    /// Shrink by `margin` on both sides; `None` if nothing is left.
    pub fn shrink(&self, margin: usize) -> Option<SiteWindow> {
        let m = margin as i64;
        (self.min + m <= self.max - m).then(|| SiteWindow::new(self.min + m, self.max - m))
    }

    pub fn grow(&self, margin: usize) -> SiteWindow {
        let m = margin as i64;
        SiteWindow::new(self.min - m, self.max + m)
    }

    pub fn intersect(&self, other: &SiteWindow) -> Option<SiteWindow> {
        let lo = self.min.max(other.min);
        let hi = self.max.min(other.max);
        (lo <= hi).then(|| SiteWindow::new(lo, hi))
    }

    pub fn index(&self, n: i64) -> usize {
        (n - self.min) as usize
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }
}

/// Amplitudes on a contiguous run of sites starting at `offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    offset: i64,
    amps: Vec<Complex64>,
}

impl WaveState {
    /// Normalizes the amplitudes.
    pub fn from_amplitudes(offset: i64, amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("state has zero or non-finite norm".into()));
        }
        Ok(Self {
            offset,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Amplitudes taken as given, without normalizing.
    pub fn from_raw(offset: i64, amps: Vec<Complex64>) -> Self {
        Self { offset, amps }
    }

    pub fn delta(site: i64) -> Self {
        Self {
            offset: site,
            amps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Real gaussian `exp(-(n - center)² / (2 width²))` sampled on `window`.
    pub fn gaussian(center: f64, width: f64, window: SiteWindow) -> Result<Self> {
        let amps = window
            .sites()
            .map(|n| {
                let x = (n as f64 - center) / width;
                Complex64::new((-0.5 * x * x).exp(), 0.0)
            })
            .collect();
        Self::from_amplitudes(window.min, amps)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn window(&self) -> SiteWindow {
        SiteWindow::new(self.offset, self.offset + self.amps.len() as i64 - 1)
    }

    pub fn amplitude(&self, n: i64) -> Complex64 {
        let i = n - self.offset;
        if i < 0 || i as usize >= self.amps.len() {
            ZERO
        } else {
            self.amps[i as usize]
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &WaveState) -> Complex64 {
        let Some(common) = self.window().intersect(&other.window()) else {
            return ZERO;
        };
        common
            .sites()
            .map(|n| self.amplitude(n).conj() * other.amplitude(n))
            .sum()
    }

    /// `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &WaveState) -> f64 {
        self.overlap(other).norm()
    }

    pub fn mean_site(&self) -> f64 {
        self.sites_with_prob().map(|(n, p)| n as f64 * p).sum()
    }

    /// `Σ n² |ψ_n|²`.
    pub fn second_moment(&self) -> f64 {
        self.sites_with_prob().map(|(n, p)| (n * n) as f64 * p).sum()
    }

    /// Probability outside `[center - d, center + d]`.
    pub fn mass_outside(&self, center: i64, d: usize) -> f64 {
        self.sites_with_prob()
            .filter(|(n, _)| (n - center).unsigned_abs() as usize > d)
            .fold(0.0, |acc, (_, p)| acc + p)
    }

    fn sites_with_prob(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, a)| (self.offset + i as i64, a.norm_sqr()))
    }

    /// Restrict to `window`, failing if more than `threshold` probability
    /// would be discarded.
    pub fn confine(&self, window: SiteWindow, threshold: f64) -> Result<WaveState> {
        let total = self.norm().powi(2);
        let amps: Vec<Complex64> = window.sites().map(|n| self.amplitude(n)).collect();
        let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let mass = (total - kept).max(0.0);
        if mass > threshold {
            return Err(Error::WindowOverflow { mass, threshold });
        }
        Ok(WaveState::from_raw(window.min, amps))
    }

    /// Multiply amplitude `n` by `e^{-i n phi}`.
    pub fn apply_site_phase(&mut self, phi: f64) {
        let offset = self.offset;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, -((offset + i as i64) as f64) * phi);
        }
    }
}

/// `(Aψ)_n = Σ_k c_k ψ_{n-k}`. The result covers the input window grown by
/// the operator bandwidth, so nothing is truncated.
pub fn apply_operator(op: &LaurentOperator, psi: &WaveState) -> WaveState {
    let b = op.bandwidth();
    let len = psi.amps.len() + 2 * b;
    let mut out = vec![ZERO; len];
    for (i, a) in psi.amps.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        // input index i -> output index i + b + k
        for (j, c) in op.band().iter().enumerate() {
            out[i + j] += c * a;
        }
    }
    WaveState::from_raw(psi.offset - b as i64, out)
}

/// [`apply_operator`] followed by [`WaveState::confine`].
pub fn apply_operator_within(
    op: &LaurentOperator,
    psi: &WaveState,
    window: SiteWindow,
    threshold: f64,
) -> Result<WaveState> {
    apply_operator(op, psi).confine(window, threshold)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    Interaction,
    Schrodinger,
}

impl Picture {
    pub fn name(self) -> &'static str {
        match self {
            Picture::Interaction => "interaction",
            Picture::Schrodinger => "schrodinger",
        }
    }
}

/// Square block of a propagator on a site window.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorBlock {
    pub window: SiteWindow,
    pub entries: DMatrix<Complex64>,
    pub picture: Picture,
}

impl PropagatorBlock {
    /// The block `U_{nm} = c_{n-m}` of a Laurent operator.
    pub fn from_laurent(op: &LaurentOperator, window: SiteWindow, picture: Picture) -> Self {
        let len = window.len();
        let entries = DMatrix::from_fn(len, len, |r, c| op.coeff(r as i64 - c as i64));
        Self {
            window,
            entries,
            picture,
        }
    }

    pub fn get(&self, n: i64, m: i64) -> Option<Complex64> {
        (self.window.contains(n) && self.window.contains(m))
            .then(|| self.entries[(self.window.index(n), self.window.index(m))])
    }

    /// `max |(U†U - I)_{mm'}|` over columns at least `margin` sites from the
    /// window edges, summing over every row of the block.
    pub fn unitarity_defect(&self, margin: usize) -> Option<f64> {
        let interior = self.window.shrink(margin)?;
        let cols: Vec<usize> = interior.sites().map(|m| self.window.index(m)).collect();
        let mut worst = 0.0f64;
        for (a, &ca) in cols.iter().enumerate() {
            for &cb in &cols[a..] {
                let dot: Complex64 = self
                    .entries
                    .column(ca)
                    .iter()
                    .zip(self.entries.column(cb).iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let expected = if ca == cb { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).norm());
            }
        }
        Some(worst)
    }

    /// Largest entrywise deviation from the identity.
    pub fn identity_defect(&self) -> f64 {
        let n = self.entries.nrows();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((self.entries[(r, c)] - expected).norm());
            }
        }
        worst
    }

    /// Squared-modulus mass of column `m` beyond `|n - m| > d`.
    pub fn column_tail_mass(&self, m: i64, d: usize) -> f64 {
        let c = self.window.index(m);
        self.window
            .sites()
            .filter(|n| (n - m).unsigned_abs() as usize > d)
            .map(|n| self.entries[(self.window.index(n), c)].norm_sqr())
            .sum()
    }

    /// `U ψ` restricted to the block window.
    pub fn apply(&self, psi: &WaveState) -> WaveState {
        let amps = self
            .window
            .sites()
            .map(|n| {
                let r = self.window.index(n);
                self.window
                    .sites()
                    .map(|m| self.entries[(r, self.window.index(m))] * psi.amplitude(m))
                    .sum()
            })
            .collect();
        WaveState::from_raw(self.window.min, amps)
    }
}

/// Largest entrywise difference over the interior (window shrunk by
/// `margin`) of two blocks on the same window.
pub fn compare_blocks(a: &PropagatorBlock, b: &PropagatorBlock, margin: usize) -> Result<f64> {
    if a.window != b.window {
        return Err(Error::InsufficientMargin("blocks cover different windows".into()));
    }
    let interior = a
        .window
        .shrink(margin)
        .ok_or_else(|| Error::InsufficientMargin(format!("margin {margin} consumes the window")))?;
    let mut worst = 0.0f64;
    for n in interior.sites() {
        for m in interior.sites() {
            let d = a.get(n, m).unwrap() - b.get(n, m).unwrap();
            worst = worst.max(d.norm());
        }
    }
    Ok(worst)
}

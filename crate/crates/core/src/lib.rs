//! Exact propagators for tight-binding lattices with a linear on-site
//! potential and a translation-invariant (Toeplitz) coupling:
//!
//! ```text
//! H(t) = ω(t) N + f(t) V,    N|n⟩ = n|n⟩,    V_{nm} = c_{n-m}
//! ```
//!
//! In the interaction picture `H_I(t)` commutes with itself at all times, so
//! the time-ordered exponential collapses to `exp(-i ∫ H_I)`. That integral
//! is again a Laurent operator whose coefficients are scalar integrals, and
//! its exponential follows from the symbol on the circle.
//!
//! The [`oracle`] module integrates the same problems by brute force on a
//! truncated lattice and is used to check every closed form.

pub mod bloch;
pub mod error;
pub mod lattice;
pub mod laurent;
pub mod oracle;
pub mod qklr;
pub mod quadrature;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use lattice::{compare_blocks, Picture, PropagatorBlock, SiteWindow, WaveState};
pub use laurent::{exp_bidiagonal, exp_symbol, LaurentOperator, SymbolFunction};
pub use num_complex::Complex64;
pub use oracle::{compare_center_block, trotter_converged, trotter_evolve, OracleConfig, OracleResult};
pub use qklr::QklrParams;
pub use bloch::DunlapParams;
pub use solver::{accumulate_interaction, evolve_state, schrodinger_propagator, DriveSpec, TabulatedDrive};

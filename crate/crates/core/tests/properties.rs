mod common;

use maryland_core::lattice::apply_operator;
use maryland_core::laurent::{coeffs_to_symbol, commutator_norm, symbol_to_coeffs};
use maryland_core::{exp_bidiagonal, exp_symbol, Complex64, LaurentOperator, SiteWindow, WaveState};
use proptest::prelude::*;

fn hermitian(band: Vec<(f64, f64)>, diag: f64) -> LaurentOperator {
    let mut pairs = vec![(0, Complex64::new(diag, 0.0))];
    for (k, (re, im)) in band.into_iter().enumerate() {
        let c = Complex64::new(re, im);
        pairs.push((k as i64 + 1, c));
        pairs.push((-(k as i64) - 1, c.conj()));
    }
    LaurentOperator::from_pairs(pairs)
}

fn arb_hermitian(max_band: usize) -> impl Strategy<Value = LaurentOperator> {
    (prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 0..=max_band), -1.0..1.0f64)
        .prop_map(|(band, diag)| hermitian(band, diag))
}

fn arb_general(max_band: i64) -> impl Strategy<Value = LaurentOperator> {
    (0..=max_band).prop_flat_map(|b| {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), (2 * b + 1) as usize)
            .prop_map(|v| LaurentOperator::from_band(v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn laurent_operators_commute(a in arb_general(5), b in arb_general(5)) {
        prop_assert!(commutator_norm(&a, &b) < 1e-13);
    }

    #[test]
    fn symbol_round_trip(a in arb_general(6), extra in 0usize..3) {
        let grid = (4 * (2 * a.bandwidth() + 1)).next_power_of_two() << extra;
        let back = symbol_to_coeffs(&coeffs_to_symbol(&a, grid).unwrap(), a.bandwidth()).unwrap();
        prop_assert!(back.sub(&a).max_abs() < 1e-12);
    }

    #[test]
    fn hermitian_symbols_are_real(a in arb_hermitian(4)) {
        let sym = coeffs_to_symbol(&a, 64).unwrap();
        prop_assert!(sym.max_imag() < 1e-12);
    }

    #[test]
    fn bessel_exponential_matches_symbol_exponential(gamma in 0.0..20.0f64, delta in 0.0..std::f64::consts::TAU) {
        let closed = exp_bidiagonal(gamma, delta).unwrap();
        let spectral = exp_symbol(&LaurentOperator::bidiagonal(gamma, delta), 1.0).unwrap();
        prop_assert!(closed.sub(&spectral).max_abs() < 1e-10);
    }

    #[test]
    fn gamma_negation_flips_odd_offsets(gamma in 0.0..15.0f64, delta in -3.0..3.0f64) {
        let pos = exp_bidiagonal(gamma, delta).unwrap();
        let neg = exp_bidiagonal(-gamma, delta).unwrap();
        for (k, c) in pos.offsets() {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            prop_assert!((neg.coeff(k) - c * sign).norm() < 1e-14);
        }
    }

    #[test]
    fn exponentials_are_unitary(m in arb_hermitian(3), scale in -4.0..4.0f64) {
        let u = exp_symbol(&m, scale).unwrap();
        let sym = coeffs_to_symbol(&u, (4 * (2 * u.bandwidth() + 1)).next_power_of_two()).unwrap();
        for v in sym.values() {
            prop_assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unitary_action_conserves_norm(
        m in arb_hermitian(3),
        center in -5.0..5.0f64,
        width in 0.5..6.0f64,
    ) {
        let u = exp_symbol(&m, 1.3).unwrap();
        let psi = WaveState::gaussian(center, width, SiteWindow::centered(40)).unwrap();
        let out = apply_operator(&u, &psi);
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn exponential_matches_dense_taylor_reference() {
    let m = hermitian(vec![(0.4, -0.3), (0.2, 0.1), (0.0, -0.15)], 0.25);
    let u = exp_symbol(&m, 1.7).unwrap();
    let window = SiteWindow::lattice(160);
    let reference = common::expm_taylor(&common::dense(&m, window), 1.7);
    let inner = SiteWindow::centered(30);
    for n in inner.sites() {
        for k in inner.sites() {
            let r = reference[(window.index(n), window.index(k))];
            assert!((r - u.coeff(n - k)).norm() < 1e-12, "({n}, {k})");
        }
    }
}

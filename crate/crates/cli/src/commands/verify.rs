//! Closed forms against the brute-force oracle, plus the invariant suite.
//! Every check is deterministic for a given config (random cases come from
//! a seeded generator), so reports can be diffed byte for byte.

use std::f64::consts::PI;

use anyhow::Result;
use maryland_core::bloch::{dunlap_propagator, localization_scan, msd, msd_closed_form};
use maryland_core::laurent::{coeffs_to_symbol, commutator_norm, symbol_to_coeffs};
use maryland_core::oracle::{dense_hermitian_exp, trotter_converged, TruncatedHamiltonian};
use maryland_core::qklr::{
    build_eigenstate, floquet_eigenvalues, kick_sum_residual, period_check, qklr_propagator, tail_mass,
};
use maryland_core::solver::{evolve_state, schrodinger_propagator};
use maryland_core::special::bessel_j0_zero;
use maryland_core::{
    compare_center_block, exp_bidiagonal, exp_symbol, trotter_evolve, Complex64, DriveSpec, DunlapParams,
    LaurentOperator, OracleConfig, Picture, QklrParams, SiteWindow, WaveState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{invalid, output_dir, Outcome};
use crate::config::{Model, RunConfig, UsageError};
use crate::output::Table;

const DEFAULT_K: f64 = 1.0;
const DEFAULT_TAU: f64 = 1.0;
const DEFAULT_KICKS: u64 = 3;
const DEFAULT_P: u64 = 2;
const DEFAULT_Q: u64 = 5;
const DEFAULT_HOPPING: f64 = 0.5;
const DEFAULT_FIELD: f64 = 1.0;
const DEFAULT_PERIODS: u64 = 3;
const DEFAULT_DIM: usize = maryland_core::oracle::DEFAULT_DIM;
const DEFAULT_MARGIN: usize = maryland_core::oracle::DEFAULT_MARGIN;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_OMEGA: f64 = 1.0;
const DEFAULT_TIME: f64 = 3.0;

const RANDOM_CASES: usize = 50;
const EIGENSTATE_GRID: usize = 1024;
const BOUND_KICKS: u64 = 1000;
const RESONANT_KICKS: u64 = 100;
const ORACLE_MAX_STEPS: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub error: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    config: RunConfig,
    passed: bool,
    failed: Vec<&'static str>,
    checks: Vec<Check>,
}

/// Resolved verify settings.
struct Ctx {
    qklr: QklrParams,
    kicks: u64,
    p: u64,
    q: u64,
    dunlap: DunlapParams,
    periods: u64,
    dim: usize,
    margin: usize,
    seed: u64,
    scan: (f64, f64, f64),
    custom: Option<(LaurentOperator, f64, f64)>,
}

fn resolve(mut cfg: RunConfig) -> Result<(RunConfig, Ctx)> {
    let k = cfg.k.unwrap_or(DEFAULT_K);
    let tau = cfg.tau.unwrap_or(DEFAULT_TAU);
    let qklr = QklrParams::new(k, tau).map_err(invalid)?;
    let (p, q) = (cfg.p.unwrap_or(DEFAULT_P), cfg.q.unwrap_or(DEFAULT_Q));
    QklrParams::rational(k, p, q).map_err(invalid)?;
    let dunlap = DunlapParams::new(
        cfg.hopping.unwrap_or(DEFAULT_HOPPING),
        cfg.field.unwrap_or(DEFAULT_FIELD),
    )
    .map_err(invalid)?;
    let dim = cfg.dim.unwrap_or(DEFAULT_DIM);
    let margin = cfg.margin.unwrap_or(DEFAULT_MARGIN.min(dim / 4));
    let kicks = cfg.kicks.unwrap_or(DEFAULT_KICKS);
    let periods = cfg.periods.unwrap_or(DEFAULT_PERIODS);
    if kicks == 0 || periods == 0 {
        return Err(UsageError("kicks and periods must be at least 1".into()).into());
    }
    if let Some(t) = cfg.tolerance {
        if t.is_nan() || t <= 0.0 {
            return Err(UsageError("tolerance must be positive".into()).into());
        }
    }
    let range = super::scan::resolve_range(&mut cfg)?;
    let custom = match cfg.model {
        Some(Model::Custom) => {
            let coupling = cfg
                .coupling_operator()?
                .ok_or_else(|| UsageError("model = custom needs a `coupling`".into()))?;
            let omega = cfg.omega.unwrap_or(DEFAULT_OMEGA);
            let time = cfg.time.unwrap_or(DEFAULT_TIME);
            if time.is_nan() || time < 0.0 {
                return Err(UsageError("time must be ≥ 0".into()).into());
            }
            cfg.omega = Some(omega);
            cfg.time = Some(time);
            Some((coupling, omega, time))
        }
        _ => None,
    };
    cfg.k = Some(k);
    cfg.tau = Some(tau);
    cfg.p = Some(p);
    cfg.q = Some(q);
    cfg.hopping = Some(dunlap.hopping);
    cfg.field = Some(dunlap.field);
    cfg.kicks = Some(kicks);
    cfg.periods = Some(periods);
    cfg.dim = Some(dim);
    cfg.margin = Some(margin);
    cfg.seed = Some(cfg.seed.unwrap_or(DEFAULT_SEED));
    cfg.format = Some(cfg.format());
    let ctx = Ctx {
        qklr,
        kicks,
        p,
        q,
        dunlap,
        periods,
        dim,
        margin,
        seed: cfg.seed.unwrap(),
        scan: (range.lo, range.hi, range.tolerance),
        custom,
    };
    Ok((cfg, ctx))
}

fn check(name: &'static str, tolerance: f64, error: maryland_core::Result<f64>) -> Check {
    match error {
        Ok(e) => Check {
            name,
            error: Some(e),
            tolerance,
            passed: e < tolerance,
            detail: None,
        },
        Err(err) => Check {
            name,
            error: None,
            tolerance,
            passed: false,
            detail: Some(format!("{}: {err}", err.kind())),
        },
    }
}

/// Relative difference, falling back to absolute when `reference < 1`
/// (the localized case has `reference = 0`).
fn relative(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

fn random_operator(rng: &mut ChaCha8Rng, hermitian: bool) -> LaurentOperator {
    let band = rng.gen_range(0..=4i64);
    let mut pairs = Vec::new();
    for k in -band..=band {
        if hermitian && k < 0 {
            continue;
        }
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if hermitian {
            if k == 0 {
                pairs.push((0, Complex64::new(c.re, 0.0)));
            } else {
                pairs.push((k, c));
                pairs.push((-k, c.conj()));
            }
        } else {
            pairs.push((k, c));
        }
    }
    LaurentOperator::from_pairs(pairs)
}

fn laurent_checks(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut commutator = 0.0f64;
    let mut round_trip = 0.0f64;
    for _ in 0..RANDOM_CASES {
        let a = random_operator(&mut rng, true);
        let b = random_operator(&mut rng, true);
        commutator = commutator.max(commutator_norm(&a, &b));
        let g = random_operator(&mut rng, false);
        let grid = (4 * (2 * g.bandwidth() + 1)).next_power_of_two();
        let back = coeffs_to_symbol(&g, grid).and_then(|s| symbol_to_coeffs(&s, g.bandwidth()));
        round_trip = round_trip.max(back.map_or(f64::INFINITY, |c| c.sub(&g).max_abs()));
    }
    vec![
        check("laurent_commutativity", 1e-13, Ok(commutator)),
        check("symbol_round_trip", 1e-12, Ok(round_trip)),
    ]
}

fn exponential_checks(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(1));
    let cases: Vec<(f64, f64)> = (0..RANDOM_CASES)
        .map(|_| (rng.gen_range(0.0..20.0), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let symbol = cases.iter().try_fold(0.0f64, |worst, &(g, d)| {
        let closed = exp_bidiagonal(g, d)?;
        let spectral = exp_symbol(&LaurentOperator::bidiagonal(g, d), 1.0)?;
        Ok(worst.max(closed.sub(&spectral).max_abs()))
    });
    // dense truncated exponentials are costlier; a few cases suffice here
    let lattice = SiteWindow::lattice(ctx.dim);
    let dense = lattice
        .shrink(ctx.margin)
        .ok_or_else(|| {
            maryland_core::Error::InsufficientMargin(format!("margin {} consumes dimension {}", ctx.margin, ctx.dim))
        })
        .and_then(|interior| {
            cases.iter().take(3).try_fold(0.0f64, |worst, &(g, d)| {
                let op = LaurentOperator::bidiagonal(g, d);
                let u = dense_hermitian_exp(&TruncatedHamiltonian::coupling(&op, ctx.dim).matrix, 1.0);
                let closed = exp_bidiagonal(g, d)?;
                let mut w = worst;
                for n in interior.sites() {
                    for m in interior.sites() {
                        w = w.max((u[(lattice.index(n), lattice.index(m))] - closed.coeff(n - m)).norm());
                    }
                }
                Ok(w)
            })
        });
    vec![
        check("bessel_vs_symbol_exponential", 1e-10, symbol),
        check("bessel_vs_dense_exponential", 1e-8, dense),
    ]
}

fn qklr_oracle_checks(ctx: &Ctx) -> Vec<Check> {
    let run = (|| -> maryland_core::Result<(f64, f64)> {
        let lattice = SiteWindow::lattice(ctx.dim);
        // propagate before checking the margin so truncation failures surface
        // as such; the comparison below enforces the margin
        let columns = lattice.shrink(ctx.margin.min(ctx.dim / 4)).unwrap();
        let cfg = OracleConfig::new(ctx.dim, 1).with_columns(columns);
        let t = ctx.kicks as f64 * ctx.qklr.tau;
        let oracle = trotter_evolve(&ctx.qklr.drive(), t, &cfg)?;
        let exact = qklr_propagator(&ctx.qklr, ctx.kicks, lattice, Picture::Schrodinger)?;
        Ok((compare_center_block(&exact, &oracle, ctx.margin)?, oracle.unitarity_defect()))
    })();
    let (err, unitarity) = match run {
        Ok((e, u)) => (Ok(e), Ok(u)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    vec![
        check("qklr_vs_oracle", 1e-6, err),
        check("qklr_oracle_unitarity", 1e-10, unitarity),
    ]
}

fn qklr_period_checks(ctx: &Ctx) -> Vec<Check> {
    let (p, q, k) = (ctx.p, ctx.q, ctx.qklr.k);
    let period = (|| {
        let delta = period_check(p, q, k, &WaveState::delta(0))?;
        let gauss = period_check(p, q, k, &WaveState::gaussian(1.5, 3.0, SiteWindow::centered(20))?)?;
        Ok(1.0 - delta.min(gauss))
    })();
    let closure = floquet_eigenvalues(p, q).map(|s| s.closure_defect());
    let thetas: Vec<f64> = (0..256).map(|j| 2.0 * PI * j as f64 / 256.0).collect();
    let kick_sum = kick_sum_residual(k, p, q, &thetas);
    let residual = (|| {
        let sector = EIGENSTATE_GRID.div_ceil(q as usize);
        let h = 2.0 * PI / (q as f64 * sector as f64);
        let width = PI / (4.0 * q as f64);
        let localized: Vec<Complex64> = (0..sector)
            .map(|j| {
                let x = (j as f64 * h - PI / q as f64) / width;
                Complex64::new((-x * x).exp(), 0.0)
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(2));
        let extended: Vec<Complex64> = (0..sector)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut worst = 0.0f64;
        for seed in [&localized, &extended] {
            for index in 0..q as usize {
                worst = worst.max(build_eigenstate(seed, index, k, p, q)?.residual());
            }
        }
        Ok(worst)
    })();
    vec![
        check("qklr_period", 1e-9, period),
        check("floquet_closure", 1e-12, closure),
        check("kick_sum_residual", 1e-12, kick_sum),
        check("eigenstate_residual", 1e-10, residual),
    ]
}

fn qklr_growth_checks(ctx: &Ctx) -> Vec<Check> {
    let k = ctx.qklr.k;
    let bound = (|| {
        if ctx.qklr.is_resonant() {
            return Err(maryland_core::Error::InvalidParameter(
                "localization bound needs a non-resonant tau".into(),
            ));
        }
        let offset = (ctx.qklr.max_argument() + 40.0).ceil() as usize;
        (1..=BOUND_KICKS).try_fold(0.0f64, |w, n| Ok(w.max(tail_mass(&ctx.qklr, n, offset)?)))
    })();
    let growth = (|| {
        let resonant = QklrParams::new(k, 2.0 * PI)?;
        (1..=RESONANT_KICKS).try_fold(0.0f64, |w, n| {
            let expected = 0.5 * (n as f64 * k).powi(2);
            let e = maryland_core::qklr::energy(&resonant, n)?;
            Ok(w.max((e - expected).abs() / expected))
        })
    })();
    vec![
        check("localization_bound", 1e-12, bound),
        check("resonance_growth", 1e-8, growth),
    ]
}

fn dunlap_oracle_checks(ctx: &Ctx) -> Vec<Check> {
    let run = (|| -> maryland_core::Result<(f64, f64, f64)> {
        let lattice = SiteWindow::lattice(ctx.dim);
        let columns = SiteWindow::centered(3).intersect(&lattice).unwrap();
        let cfg = OracleConfig::new(ctx.dim, 32 * ctx.periods as usize).with_columns(columns);
        let t = 2.0 * PI * ctx.periods as f64;
        let oracle = trotter_converged(&ctx.dunlap.drive(), t, &cfg, 1e-8, ORACLE_MAX_STEPS)?;
        let exact = dunlap_propagator(&ctx.dunlap, ctx.periods, lattice, Picture::Schrodinger)?;
        let err = compare_center_block(&exact, &oracle, ctx.margin)?;
        let closed = msd_closed_form(&ctx.dunlap, ctx.periods)?;
        let spread = oracle.column_state(0).map_or(f64::INFINITY, |s| s.second_moment());
        let msd_err = relative(spread, closed);
        Ok((err, oracle.unitarity_defect(), msd_err))
    })();
    let (err, unitarity, msd_err) = match run {
        Ok((a, b, c)) => (Ok(a), Ok(b), Ok(c)),
        Err(e) => (Err(e.clone()), Err(e.clone()), Err(e)),
    };
    let msd_closed = (1..=ctx.periods).try_fold(0.0f64, |w, n| {
        Ok(w.max(relative(msd(&ctx.dunlap, n)?, msd_closed_form(&ctx.dunlap, n)?)))
    });
    vec![
        check("dunlap_vs_oracle", 1e-5, err),
        check("dunlap_oracle_unitarity", 1e-10, unitarity),
        check("dunlap_oracle_msd", 1e-5, msd_err),
        check("dunlap_msd_closed_form", 1e-5, msd_closed),
    ]
}

fn localization_checks(ctx: &Ctx) -> Vec<Check> {
    let (lo, hi, tol) = ctx.scan;
    let roots = localization_scan(lo, hi, tol);
    let agreement = roots.clone().and_then(|roots| {
        roots.iter().try_fold(0.0f64, |w, r| {
            // nearest tabulated zero
            let nearest = (1..=20)
                .map(bessel_j0_zero)
                .collect::<maryland_core::Result<Vec<_>>>()?
                .into_iter()
                .map(|z| (z - r).abs())
                .fold(f64::INFINITY, f64::min);
            Ok(w.max(nearest))
        })
    });
    let fidelity = roots.and_then(|roots| {
        let mut worst = 0.0f64;
        for e in roots.iter().take(3) {
            let params = DunlapParams::new(ctx.dunlap.hopping, *e)?;
            let psi0 = WaveState::delta(0);
            for n in 1..=ctx.periods {
                let psi = evolve_state(&params.drive(), &psi0, 2.0 * PI * n as f64)?;
                worst = worst.max(1.0 - psi0.fidelity(&psi));
            }
        }
        Ok(worst)
    });
    vec![
        check("localization_roots", 1e-10, agreement),
        check("dynamic_localization", 1e-9, fidelity),
    ]
}

fn custom_checks(ctx: &Ctx) -> Vec<Check> {
    let Some((coupling, omega, time)) = &ctx.custom else { return Vec::new() };
    let run = (|| {
        let drive = DriveSpec::constant(*omega, coupling.clone());
        let lattice = SiteWindow::lattice(ctx.dim);
        let columns = SiteWindow::centered(3).intersect(&lattice).unwrap();
        let cfg = OracleConfig::new(ctx.dim, 64).with_columns(columns);
        let oracle = trotter_converged(&drive, *time, &cfg, 1e-10, ORACLE_MAX_STEPS)?;
        let exact = schrodinger_propagator(&drive, *time, lattice)?;
        compare_center_block(&exact, &oracle, ctx.margin)
    })();
    vec![check("custom_vs_oracle", 1e-7, run)]
}

type Suite = fn(&Ctx) -> Vec<Check>;

const SUITES: [Suite; 8] = [
    laurent_checks,
    exponential_checks,
    qklr_oracle_checks,
    qklr_period_checks,
    qklr_growth_checks,
    dunlap_oracle_checks,
    localization_checks,
    custom_checks,
];

fn run_checks(ctx: &Ctx, tolerance: Option<f64>) -> Vec<Check> {
    let mut checks: Vec<Check> = SUITES.par_iter().map(|suite| suite(ctx)).flatten().collect();
    if let Some(t) = tolerance {
        for c in &mut checks {
            c.tolerance = t;
            c.passed = c.error.is_some_and(|e| e < t);
        }
    }
    checks
}

pub fn run(cfg: RunConfig) -> Result<Outcome> {
    let (cfg, ctx) = resolve(cfg)?;
    let out = output_dir(&cfg)?;
    let checks = run_checks(&ctx, cfg.tolerance);
    let failed: Vec<&'static str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();

    let mut table = Table::new("verify", &["check", "error [1]", "tolerance [1]", "passed", "detail"]);
    for c in &checks {
        table.push(vec![
            c.name.into(),
            c.error.map_or(f64::NAN, |e| e).into(),
            c.tolerance.into(),
            (if c.passed { "true" } else { "false" }).into(),
            c.detail.as_deref().unwrap_or("").into(),
        ]);
    }
    out.table(&table)?;
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        match (&c.error, &c.detail) {
            (Some(e), _) => println!("{status} {:<30} {e:.3e} (tol {:.0e})", c.name, c.tolerance),
            (None, Some(d)) => println!("{status} {:<30} {d}", c.name),
            (None, None) => println!("{status} {}", c.name),
        }
    }
    let report = Report {
        command: "verify",
        passed: failed.is_empty(),
        failed: failed.clone(),
        checks,
        config: cfg,
    };
    let path = out.json("verify_report.json", &report)?;
    println!("wrote {}", path.display());
    if failed.is_empty() {
        Ok(Outcome::Success)
    } else {
        eprintln!("failing checks: {}", failed.join(", "));
        Ok(Outcome::ChecksFailed)
    }
}

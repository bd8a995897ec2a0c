use std::f64::consts::PI;

use anyhow::Result;
use maryland_core::qklr::{energy, floquet_eigenvalues, gamma_delta, period_check, qklr_propagator, tail_mass};
use maryland_core::solver::evolve_state;
use maryland_core::{Picture, QklrParams, SiteWindow, WaveState};
use serde::Serialize;

use super::{file_names, invalid, output_dir, propagator_table, require, Outcome};
use crate::config::{Model, RunConfig, UsageError};
use crate::output::Table;

const DEFAULT_KICKS: u64 = 10;
const DEFAULT_WINDOW: i64 = 20;
/// Offsets past `k / sin(τ/2)` at which the tail mass is reported.
const TAIL_PAD: f64 = 40.0;

#[derive(Serialize)]
struct KickRow {
    kicks: u64,
    gamma: f64,
    delta: f64,
    p2_mean: f64,
    tail_mass: f64,
}

#[derive(Serialize)]
struct Periodicity {
    p: u64,
    q: u64,
    fidelity_after_q_kicks: f64,
    eigenvalues: Vec<[f64; 2]>,
    closure_defect: f64,
}

#[derive(Serialize)]
struct Summary {
    command: &'static str,
    config: RunConfig,
    resonant: bool,
    max_argument: Option<f64>,
    tail_offset: usize,
    final_fidelity: f64,
    per_kick: Vec<KickRow>,
    periodicity: Option<Periodicity>,
    files: Vec<String>,
}

pub fn resolve(mut cfg: RunConfig) -> Result<(RunConfig, QklrParams)> {
    cfg.require_model(Model::Qklr)?;
    let k = require(cfg.k, "k")?;
    let params = match (cfg.p, cfg.q) {
        (Some(p), Some(q)) => {
            let params = QklrParams::rational(k, p, q).map_err(invalid)?;
            if let Some(tau) = cfg.tau {
                if (tau - params.tau).abs() > 1e-12 {
                    return Err(UsageError(format!("tau = {tau} contradicts p/q = {p}/{q}")).into());
                }
            }
            params
        }
        (None, None) => QklrParams::new(k, require(cfg.tau, "tau (or p and q)")?).map_err(invalid)?,
        _ => return Err(UsageError("p and q must be given together".into()).into()),
    };
    cfg.model = Some(Model::Qklr);
    cfg.tau = Some(params.tau);
    cfg.kicks = Some(cfg.kicks.unwrap_or(match params.rational {
        Some((_, q)) => q,
        None => DEFAULT_KICKS,
    }));
    cfg.window = Some(cfg.window.unwrap_or(DEFAULT_WINDOW));
    if cfg.kicks == Some(0) {
        return Err(UsageError("kicks must be at least 1".into()).into());
    }
    if cfg.window < Some(0) {
        return Err(UsageError("window must be ≥ 0".into()).into());
    }
    cfg.format = Some(cfg.format());
    Ok((cfg, params))
}

pub fn run(cfg: RunConfig) -> Result<Outcome> {
    let (cfg, params) = resolve(cfg)?;
    let kicks = cfg.kicks.unwrap();
    let window = SiteWindow::centered(cfg.window.unwrap());
    let out = output_dir(&cfg)?;
    let drive = params.drive();

    let tail_offset = if params.is_resonant() {
        window.max as usize
    } else {
        (params.max_argument() + TAIL_PAD).ceil() as usize
    };

    let psi0 = WaveState::delta(0);
    let mut trajectory = Table::new(
        "trajectory",
        &["kick [count]", "n [site]", "re [amplitude]", "im [amplitude]", "prob [1]"],
    );
    let mut energies = Table::new("energy", &["kick [count]", "p2_state [hbar^2]", "p2_bessel [hbar^2]"]);
    let mut tails = Table::new("tail_mass", &["kick [count]", "offset [sites]", "tail_mass [probability]"]);
    let mut per_kick = Vec::new();
    let mut last = psi0.clone();
    for n in 0..=kicks {
        let psi = if n == 0 {
            psi0.clone()
        } else {
            evolve_state(&drive, &psi0, n as f64 * params.tau)?
        };
        for site in window.sites() {
            let a = psi.amplitude(site);
            trajectory.push(vec![n.into(), site.into(), a.re.into(), a.im.into(), a.norm_sqr().into()]);
        }
        if n > 0 {
            let (gamma, delta) = gamma_delta(&params, n)?;
            let p2 = energy(&params, n)?;
            let tail = tail_mass(&params, n, tail_offset)?;
            energies.push(vec![n.into(), psi.second_moment().into(), p2.into()]);
            tails.push(vec![n.into(), (tail_offset as u64).into(), tail.into()]);
            per_kick.push(KickRow {
                kicks: n,
                gamma,
                delta,
                p2_mean: p2,
                tail_mass: tail,
            });
        }
        last = psi;
    }

    let block = qklr_propagator(&params, kicks, window, Picture::Schrodinger)?;
    let periodicity = match params.rational {
        Some((p, q)) => {
            let spectrum = floquet_eigenvalues(p, q)?;
            Some(Periodicity {
                p,
                q,
                fidelity_after_q_kicks: period_check(p, q, params.k, &psi0)?,
                eigenvalues: spectrum.eigenvalues.iter().map(|l| [l.re, l.im]).collect(),
                closure_defect: spectrum.closure_defect(),
            })
        }
        None => None,
    };

    let files = vec![
        out.table(&propagator_table(&block))?,
        out.table(&trajectory)?,
        out.table(&energies)?,
        out.table(&tails)?,
    ];
    let summary = Summary {
        command: "qklr",
        resonant: params.is_resonant(),
        max_argument: (!params.is_resonant()).then(|| params.max_argument()),
        tail_offset,
        final_fidelity: psi0.fidelity(&last),
        per_kick,
        periodicity,
        files: file_names(&files),
        config: cfg,
    };
    let path = out.json("summary.json", &summary)?;
    println!(
        "qklr: k = {}, tau = {:.6} ({:.6}·2π), {} kicks; fidelity {:.12}",
        params.k,
        params.tau,
        params.tau / (2.0 * PI),
        kicks,
        summary.final_fidelity
    );
    println!("wrote {}", path.display());
    Ok(Outcome::Success)
}

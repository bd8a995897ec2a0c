use anyhow::Result;
use maryland_core::bloch::{dunlap_argument, dunlap_propagator, localization_scan, msd, msd_closed_form};
use maryland_core::special::bessel_j;
use maryland_core::{DunlapParams, Picture, SiteWindow};
use serde::Serialize;

use super::scan::{resolve_range, ScanRange};
use super::{file_names, invalid, output_dir, propagator_table, require, Outcome};
use crate::config::{Model, RunConfig, UsageError};
use crate::output::Table;

const DEFAULT_PERIODS: u64 = 10;
const DEFAULT_WINDOW: i64 = 20;

#[derive(Serialize)]
struct PeriodRow {
    periods: u64,
    argument: f64,
    msd: f64,
}

#[derive(Serialize)]
struct Summary {
    command: &'static str,
    config: RunConfig,
    j0_of_field: f64,
    localized: bool,
    per_period: Vec<PeriodRow>,
    localization_roots: Vec<f64>,
    files: Vec<String>,
}

pub fn resolve(mut cfg: RunConfig) -> Result<(RunConfig, DunlapParams, ScanRange)> {
    cfg.require_model(Model::Dunlap)?;
    let params = DunlapParams::new(require(cfg.hopping, "T")?, require(cfg.field, "E")?).map_err(invalid)?;
    cfg.model = Some(Model::Dunlap);
    cfg.periods = Some(cfg.periods.unwrap_or(DEFAULT_PERIODS));
    cfg.window = Some(cfg.window.unwrap_or(DEFAULT_WINDOW));
    if cfg.periods == Some(0) {
        return Err(UsageError("periods must be at least 1".into()).into());
    }
    if cfg.window < Some(0) {
        return Err(UsageError("window must be ≥ 0".into()).into());
    }
    let range = resolve_range(&mut cfg)?;
    cfg.format = Some(cfg.format());
    Ok((cfg, params, range))
}

pub fn run(cfg: RunConfig) -> Result<Outcome> {
    let (cfg, params, range) = resolve(cfg)?;
    let periods = cfg.periods.unwrap();
    let window = SiteWindow::centered(cfg.window.unwrap());
    let out = output_dir(&cfg)?;

    let mut msd_table = Table::new(
        "msd",
        &["period [count]", "argument [1]", "msd_bessel [sites^2]", "msd_closed_form [sites^2]"],
    );
    let mut per_period = Vec::new();
    for n in 1..=periods {
        let a = dunlap_argument(&params, n)?;
        let m = msd(&params, n)?;
        msd_table.push(vec![n.into(), a.into(), m.into(), msd_closed_form(&params, n)?.into()]);
        per_period.push(PeriodRow {
            periods: n,
            argument: a,
            msd: m,
        });
    }

    let mut scan = Table::new("scan", &["E [field amplitude]", "J0(E) [1]"]);
    for e in range.points() {
        scan.push(vec![e.into(), bessel_j(0, e)?.into()]);
    }
    let roots = localization_scan(range.lo, range.hi, range.tolerance)?;
    let block = dunlap_propagator(&params, periods, window, Picture::Schrodinger)?;

    let files = vec![
        out.table(&msd_table)?,
        out.table(&scan)?,
        out.table(&propagator_table(&block))?,
    ];
    let j0 = bessel_j(0, params.field)?;
    let summary = Summary {
        command: "dunlap",
        j0_of_field: j0,
        localized: j0.abs() < range.tolerance,
        per_period,
        localization_roots: roots,
        files: file_names(&files),
        config: cfg,
    };
    let path = out.json("summary.json", &summary)?;
    println!(
        "dunlap: T = {}, E = {}, {} periods; J0(E) = {:.6e}, msd {:.6e}",
        params.hopping,
        params.field,
        periods,
        j0,
        summary.per_period.last().map_or(0.0, |r| r.msd)
    );
    println!("wrote {}", path.display());
    Ok(Outcome::Success)
}

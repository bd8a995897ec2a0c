use anyhow::Result;
use maryland_core::bloch::{dunlap_argument, localization_scan, msd};
use maryland_core::special::bessel_j;
use maryland_core::DunlapParams;
use rayon::prelude::*;
use serde::Serialize;

use super::{file_names, invalid, output_dir, Outcome};
use crate::config::{Model, RunConfig, UsageError};
use crate::output::Table;

const DEFAULT_LO: f64 = 0.0;
const DEFAULT_HI: f64 = 10.0;
const DEFAULT_POINTS: usize = 201;
const DEFAULT_TOL: f64 = 1e-8;
const DEFAULT_HOPPING: f64 = 1.0;
const DEFAULT_PERIODS: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub tolerance: f64,
}

impl ScanRange {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.hi - self.lo) / (self.points - 1) as f64;
        (0..self.points).map(move |i| if i + 1 == self.points { self.hi } else { self.lo + step * i as f64 })
    }
}

pub fn resolve_range(cfg: &mut RunConfig) -> Result<ScanRange> {
    let range = ScanRange {
        lo: cfg.scan_lo.unwrap_or(DEFAULT_LO),
        hi: cfg.scan_hi.unwrap_or(DEFAULT_HI),
        points: cfg.scan_points.unwrap_or(DEFAULT_POINTS),
        tolerance: cfg.scan_tol.unwrap_or(DEFAULT_TOL),
    };
    if !(range.lo >= 0.0 && range.hi > range.lo && range.hi.is_finite()) {
        return Err(UsageError(format!("scan range [{}, {}] must satisfy 0 ≤ lo < hi", range.lo, range.hi)).into());
    }
    if range.points < 2 {
        return Err(UsageError("scan_points must be at least 2".into()).into());
    }
    if range.tolerance.is_nan() || range.tolerance <= 0.0 {
        return Err(UsageError("scan_tol must be positive".into()).into());
    }
    cfg.scan_lo = Some(range.lo);
    cfg.scan_hi = Some(range.hi);
    cfg.scan_points = Some(range.points);
    cfg.scan_tol = Some(range.tolerance);
    Ok(range)
}

#[derive(Serialize)]
struct Summary {
    command: &'static str,
    config: RunConfig,
    roots: Vec<f64>,
    files: Vec<String>,
}

pub fn run(mut cfg: RunConfig) -> Result<Outcome> {
    cfg.require_model(Model::Dunlap)?;
    let range = resolve_range(&mut cfg)?;
    let hopping = cfg.hopping.unwrap_or(DEFAULT_HOPPING);
    let periods = cfg.periods.unwrap_or(DEFAULT_PERIODS);
    if periods == 0 {
        return Err(UsageError("periods must be at least 1".into()).into());
    }
    DunlapParams::new(hopping, range.lo).map_err(invalid)?;
    cfg.model = Some(Model::Dunlap);
    cfg.hopping = Some(hopping);
    cfg.periods = Some(periods);
    cfg.format = Some(cfg.format());
    let out = output_dir(&cfg)?;

    let fields: Vec<f64> = range.points().collect();
    let rows = fields
        .par_iter()
        .map(|&e| {
            let params = DunlapParams::new(hopping, e)?;
            Ok((e, bessel_j(0, e)?, dunlap_argument(&params, periods)?, msd(&params, periods)?))
        })
        .collect::<maryland_core::Result<Vec<_>>>()?;
    let mut scan = Table::new(
        "scan",
        &["E [field amplitude]", "J0(E) [1]", "argument [1]", "msd [sites^2]"],
    );
    for (e, j0, a, m) in rows {
        scan.push(vec![e.into(), j0.into(), a.into(), m.into()]);
    }

    let found = localization_scan(range.lo, range.hi, range.tolerance)?;
    let mut roots = Table::new("roots", &["index [1]", "E [field amplitude]", "J0(E) [1]"]);
    for (i, r) in found.iter().enumerate() {
        roots.push(vec![(i as u64 + 1).into(), (*r).into(), bessel_j(0, *r)?.into()]);
    }

    let files = vec![out.table(&scan)?, out.table(&roots)?];
    let summary = Summary {
        command: "scan",
        roots: found,
        files: file_names(&files),
        config: cfg,
    };
    let path = out.json("summary.json", &summary)?;
    println!("scan: {} localization points in [{}, {}]", summary.roots.len(), range.lo, range.hi);
    println!("wrote {}", path.display());
    Ok(Outcome::Success)
}

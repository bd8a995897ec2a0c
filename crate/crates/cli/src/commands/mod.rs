pub mod dunlap;
pub mod qklr;
pub mod scan;
pub mod verify;

use std::path::PathBuf;

use anyhow::Result;
use maryland_core::PropagatorBlock;

use crate::config::{RunConfig, UsageError};
use crate::output::{OutputDir, Table};

pub const DEFAULT_OUT: &str = "maryland-lab-out";

/// How a command ended when it did not hit an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

pub fn output_dir(cfg: &RunConfig) -> Result<OutputDir> {
    let root = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    OutputDir::create(&root, cfg.format())
}

/// Parameter validation failures from the core are configuration errors.
pub fn invalid(e: maryland_core::Error) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

pub fn require<T>(value: Option<T>, key: &str) -> std::result::Result<T, UsageError> {
    value.ok_or_else(|| UsageError(format!("missing required parameter `{key}`")))
}

pub fn propagator_table(block: &PropagatorBlock) -> Table {
    let mut t = Table::new(
        "propagator",
        &["n [site]", "m [site]", "re [amplitude]", "im [amplitude]", "abs [amplitude]"],
    );
    for n in block.window.sites() {
        for m in block.window.sites() {
            let u = block.get(n, m).unwrap();
            t.push(vec![n.into(), m.into(), u.re.into(), u.im.into(), u.norm().into()]);
        }
    }
    t
}

pub fn file_names(paths: &[PathBuf]) -> Vec<String> {
    paths
        .iter()
        .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
        .collect()
}


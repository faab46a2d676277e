//! Benchmark harness: dataset tree I/O, batch runs, cross-checks and
//! summaries.

mod compare;
mod format;
mod run;
mod sdd;
mod summary;

pub use compare::{compare_results, ConsistencyReport, SolutionSet};
pub use format::{fmt_box, fmt_endpoint, parse_box, FormatError, OutputFile, SolutionFile};
pub use run::{
    config_fingerprint, read_records_csv, run_benchmark, run_instances, solve_instance, write_records_csv,
    InstanceRun, RunRecord, SOLVER_ID,
};
pub use sdd::{
    load_sdd, write_instance, write_sdd, Category, FamilyEntry, SddInstance, SddTree, Skipped, NON_PARAMETRIC as NON_PARAMETRIC_DIR,
    PARAMETRIC as PARAMETRIC_DIR,
};
pub use summary::{summarize, Summary, BIN_LABELS};

use std::path::PathBuf;
use std::time::Duration;

use serde::Deserialize;

use crate::solver::SolverConfig;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("dataset root {0} does not exist")]
    MissingRoot(PathBuf),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Other(String),
}

/// Solver options as read from a TOML file. Every key is optional and
/// string-valued options use the CLI spellings.
///
/// ```toml
/// eps = 1e-6
/// timeout = 1000
/// bisector = "smearrel"
/// node_select = "dfs"
/// pipeline = "hc4,bc3,3b,hs"
/// number = "all"
/// certifier = "hs"
/// probe = false
/// ```
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub eps: Option<f64>,
    pub timeout: Option<f64>,
    pub bisector: Option<String>,
    pub node_select: Option<String>,
    pub pipeline: Option<String>,
    pub tau: Option<f64>,
    pub number: Option<String>,
    pub certifier: Option<String>,
    pub dedup_tol: Option<f64>,
    pub probe: Option<bool>,
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<ConfigFile, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn to_solver_config(&self) -> Result<SolverConfig, BenchError> {
        let mut cfg = SolverConfig::default();
        let bad = BenchError::Config;
        if let Some(e) = self.eps {
            cfg.eps = e;
        }
        if let Some(t) = self.timeout {
            cfg.timeout = Duration::try_from_secs_f64(t).map_err(|e| bad(format!("timeout: {e}")))?;
        }
        if let Some(b) = &self.bisector {
            cfg.bisector = b.parse().map_err(bad)?;
        }
        if let Some(n) = &self.node_select {
            cfg.node_selection = n.parse().map_err(bad)?;
        }
        if let Some(p) = &self.pipeline {
            cfg.pipeline = p.parse().map_err(bad)?;
        }
        if let Some(t) = self.tau {
            cfg.pipeline.tau = t;
        }
        if let Some(n) = &self.number {
            cfg.target = n.parse().map_err(bad)?;
        }
        if let Some(c) = &self.certifier {
            cfg.certifier = c.parse().map_err(bad)?;
        }
        cfg.dedup_tol = self.dedup_tol;
        cfg.probe = self.probe.unwrap_or(false);
        Ok(cfg)
    }
}

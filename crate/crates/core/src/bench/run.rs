//! Batch solving with per-instance records.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::format::{OutputFile, SolutionFile};
use super::sdd::{write_instance, SddInstance};
use super::BenchError;
use crate::solver::{solve, SolveReport, SolverConfig};

pub const SOLVER_ID: &str = concat!("boxsolve ", env!("CARGO_PKG_VERSION"));

/// First 16 hex digits of the SHA-256 of the config description.
pub fn config_fingerprint(cfg: &SolverConfig) -> String {
    let digest = Sha256::digest(cfg.describe().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// One row of `records.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub config: String,
    /// `complete`, `timeout`, `target-reached` or `error`.
    pub status: String,
    pub wall_time: f64,
    pub parse_time: f64,
    pub certified: usize,
    pub unknown: usize,
    pub cells: u64,
    #[serde(default)]
    pub message: String,
}

impl RunRecord {
    pub fn is_error(&self) -> bool {
        self.status == "error"
    }
}

#[derive(Debug, Clone)]
pub struct InstanceRun {
    pub record: RunRecord,
    pub output: OutputFile,
    pub solution: Option<SolutionFile>,
    pub report: Option<SolveReport>,
}

fn error_run(inst: &SddInstance, fp: &str, parse_time: f64, msg: String) -> InstanceRun {
    let record = RunRecord {
        instance: inst.id.clone(),
        config: fp.to_string(),
        status: "error".into(),
        wall_time: 0.0,
        parse_time,
        certified: 0,
        unknown: 0,
        cells: 0,
        message: msg,
    };
    let output = OutputFile {
        solver: SOLVER_ID.into(),
        config: fp.to_string(),
        status: "error".into(),
        wall_time: 0.0,
        parse_time,
        certified: 0,
        unknown: 0,
        cells: 0,
        extra: vec![("error".into(), record.message.replace('\n', " "))],
    };
    InstanceRun { record, output, solution: None, report: None }
}

/// Parses and solves one instance. Parse failures, solver errors and panics
/// all become `error` records.
pub fn solve_instance(inst: &SddInstance, cfg: &SolverConfig) -> InstanceRun {
    let fp = config_fingerprint(cfg);
    let t0 = Instant::now();
    let sys = match inst.system() {
        Ok(s) => s,
        Err(e) => return error_run(inst, &fp, t0.elapsed().as_secs_f64(), format!("parse: {e}")),
    };
    let parse_time = t0.elapsed().as_secs_f64();
    let report = match catch_unwind(AssertUnwindSafe(|| solve(&sys, cfg))) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => return error_run(inst, &fp, parse_time, e.to_string()),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            return error_run(inst, &fp, parse_time, format!("panic: {msg}"));
        }
    };
    let wall = report.stats.wall_time.as_secs_f64();
    let record = RunRecord {
        instance: inst.id.clone(),
        config: fp.clone(),
        status: report.status.to_string(),
        wall_time: wall,
        parse_time,
        certified: report.certified.len(),
        unknown: report.unknown.len(),
        cells: report.stats.cells,
        message: String::new(),
    };
    let output = OutputFile {
        solver: SOLVER_ID.into(),
        config: fp.clone(),
        status: record.status.clone(),
        wall_time: wall,
        parse_time,
        certified: record.certified,
        unknown: record.unknown,
        cells: record.cells,
        extra: Vec::new(),
    };
    let solution = SolutionFile {
        solver: SOLVER_ID.into(),
        config: fp,
        variables: sys.variables().to_vec(),
        certified: report.certified.clone(),
        unknown: report.unknown.clone(),
    };
    InstanceRun { record, output, solution: Some(solution), report: Some(report) }
}

/// Solves all instances on `jobs` threads; results keep the input order.
/// Parallelism is across instances only.
pub fn run_instances(instances: &[SddInstance], cfg: &SolverConfig, jobs: usize) -> Result<Vec<InstanceRun>, BenchError> {
    if jobs == 0 {
        return Err(BenchError::Other("jobs must be at least 1".into()));
    }
    if jobs == 1 {
        return Ok(instances.iter().map(|i| solve_instance(i, cfg)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| BenchError::Other(e.to_string()))?;
    Ok(pool.install(|| instances.par_iter().map(|i| solve_instance(i, cfg)).collect()))
}

/// Solves every instance and writes its `output.txt` and `solution.txt`
/// under `root`.
pub fn run_benchmark(
    root: &Path,
    instances: &[SddInstance],
    cfg: &SolverConfig,
    jobs: usize,
) -> Result<Vec<RunRecord>, BenchError> {
    let runs = run_instances(instances, cfg, jobs)?;
    let mut records = Vec::with_capacity(runs.len());
    for (inst, run) in instances.iter().zip(runs) {
        let mut updated = inst.clone();
        updated.output = Some(run.output);
        updated.solution = run.solution;
        if updated.solution.is_none() {
            let stale = updated.dir(root).join("solution.txt");
            if stale.exists() {
                std::fs::remove_file(stale)?;
            }
        }
        write_instance(&updated, root)?;
        records.push(run.record);
    }
    Ok(records)
}

pub fn write_records_csv(path: &Path, records: &[RunRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

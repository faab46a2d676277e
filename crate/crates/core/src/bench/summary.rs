//! Timing bins, cumulative runtime curve and root-count distribution.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::run::RunRecord;
use super::BenchError;

pub const BIN_LABELS: [&str; 6] = ["<=1", "1-10", "10-100", "100-1000", "timeout", "error"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    /// Counts per `BIN_LABELS` entry. Runs slower than 1000 s count as
    /// timeouts.
    pub bins: [usize; 6],
    /// `(k, sum of the k smallest times)` over runs that finished.
    pub cumulative: Vec<(usize, f64)>,
    /// Certified-root count → number of complete runs.
    pub root_counts: BTreeMap<usize, usize>,
}

fn bin_of(r: &RunRecord) -> usize {
    match r.status.as_str() {
        "error" => 5,
        "timeout" => 4,
        _ if r.wall_time <= 1.0 => 0,
        _ if r.wall_time <= 10.0 => 1,
        _ if r.wall_time <= 100.0 => 2,
        _ if r.wall_time <= 1000.0 => 3,
        _ => 4,
    }
}

pub fn summarize(records: &[RunRecord]) -> Summary {
    let mut s = Summary::default();
    let mut times = Vec::new();
    for r in records {
        let b = bin_of(r);
        s.bins[b] += 1;
        if b < 4 {
            times.push(r.wall_time);
        }
        if r.status == "complete" {
            *s.root_counts.entry(r.certified).or_default() += 1;
        }
    }
    times.sort_by(f64::total_cmp);
    let mut acc = 0.0;
    for (k, t) in times.into_iter().enumerate() {
        acc += t;
        s.cumulative.push((k + 1, acc));
    }
    s
}

impl Summary {
    pub fn bins_csv(&self) -> String {
        let mut out = String::from("bin,count\n");
        for (l, c) in BIN_LABELS.iter().zip(self.bins) {
            let _ = writeln!(out, "{l},{c}");
        }
        out
    }

    pub fn cumulative_csv(&self) -> String {
        let mut out = String::from("solved,cumulative_time\n");
        for (k, t) in &self.cumulative {
            let _ = writeln!(out, "{k},{t}");
        }
        out
    }

    pub fn root_counts_csv(&self) -> String {
        let mut out = String::from("roots,instances\n");
        for (r, n) in &self.root_counts {
            let _ = writeln!(out, "{r},{n}");
        }
        out
    }

    pub fn report(&self) -> String {
        let total: usize = self.bins.iter().sum();
        let mut out = format!("runs: {total}\n\ntiming (s)\n");
        for (l, c) in BIN_LABELS.iter().zip(self.bins) {
            let _ = writeln!(out, "  {l:>9}  {c}");
        }
        if let Some((k, t)) = self.cumulative.last() {
            let _ = writeln!(out, "\nfinished: {k}, total time {t:.3} s");
        }
        if !self.root_counts.is_empty() {
            out.push_str("\ncertified roots (complete runs)\n");
            for (r, n) in &self.root_counts {
                let _ = writeln!(out, "  {r:>5}  {n}");
            }
        }
        out
    }

    /// Writes `bins.csv`, `cumulative.csv`, `root_counts.csv` and
    /// `report.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), BenchError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("bins.csv"), self.bins_csv())?;
        std::fs::write(dir.join("cumulative.csv"), self.cumulative_csv())?;
        std::fs::write(dir.join("root_counts.csv"), self.root_counts_csv())?;
        std::fs::write(dir.join("report.txt"), self.report())?;
        Ok(())
    }
}

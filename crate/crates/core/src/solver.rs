//! Branch-and-prune search for all roots of a square system in a box.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;

use crate::certify::{dedup_solutions, inflate_and_certify, CertificationResult, Certifier};
use crate::contract::{
    hansen_sengupta, propagate, Benhamou, CallCounts, ContractionOutcome, Contractor, HansenSengupta, Hc4, Krawczyk, Pipeline,
    Shave3B,
};
use crate::expr::System;
use crate::interval::{Interval, IntervalBox};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeSelection {
    /// Last in, first out.
    Dfs,
    /// First in, first out.
    Bfs,
    /// Box with the smallest `Σ|fⱼ(mid)|`.
    MinMidResidual,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bisector {
    RoundRobin,
    LargestFirst,
    MaxSmear,
    SumSmear,
    SmearRel,
    /// Branch on the gap of the last contraction when there is one,
    /// otherwise use the fallback.
    GapFirst(Box<Bisector>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetCount {
    All,
    AtLeast(usize),
}

/// One stage of a contractor pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Hc4,
    Bc3,
    Shave3B,
    HansenSengupta,
    Krawczyk,
}

/// Buildable description of a [`Pipeline`].
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineSpec {
    pub stages: Vec<Stage>,
    pub tau: f64,
    pub fixed_point: bool,
    pub shave_slices: usize,
}

impl Default for PipelineSpec {
    fn default() -> Self {
        PipelineSpec {
            stages: vec![Stage::Hc4, Stage::Bc3, Stage::Shave3B, Stage::HansenSengupta],
            tau: 0.1,
            fixed_point: false,
            shave_slices: 10,
        }
    }
}

impl PipelineSpec {
    pub fn build(&self, eps: f64) -> Pipeline {
        let stages: Vec<Box<dyn Contractor>> = self
            .stages
            .iter()
            .map(|s| -> Box<dyn Contractor> {
                match s {
                    Stage::Hc4 => Box::new(Hc4 { tau: self.tau }),
                    Stage::Bc3 => Box::new(Benhamou { tau: self.tau, eps, max_rounds: 4 }),
                    Stage::Shave3B => Box::new(Shave3B { tau: self.tau, slices: self.shave_slices, min_width: eps }),
                    Stage::HansenSengupta => Box::new(HansenSengupta),
                    Stage::Krawczyk => Box::new(Krawczyk),
                }
            })
            .collect();
        let p = Pipeline::new(stages);
        if self.fixed_point {
            p.with_fixed_point(self.tau)
        } else {
            p
        }
    }
}

impl FromStr for PipelineSpec {
    type Err = String;

    /// Comma-separated stages: `hc4`, `bc3`, `3b`, `hs`, `krawczyk`; a
    /// trailing `+fp` enables fixed-point iteration.
    fn from_str(s: &str) -> Result<Self, String> {
        let (list, fp) = match s.strip_suffix("+fp") {
            Some(l) => (l, true),
            None => (s, false),
        };
        let stages = list
            .split(',')
            .map(|t| match t.trim() {
                "hc4" => Ok(Stage::Hc4),
                "bc3" | "hc4+bc3" => Ok(Stage::Bc3),
                "3b" => Ok(Stage::Shave3B),
                "hs" | "hansen-sengupta" => Ok(Stage::HansenSengupta),
                "krawczyk" | "k" => Ok(Stage::Krawczyk),
                other => Err(format!("unknown pipeline stage '{other}'")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PipelineSpec { stages, fixed_point: fp, ..PipelineSpec::default() })
    }
}

impl FromStr for Bisector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(rest) = s.strip_prefix("gap:") {
            return Ok(Bisector::GapFirst(Box::new(rest.parse()?)));
        }
        Ok(match s {
            "rr" | "round-robin" => Bisector::RoundRobin,
            "lf" | "largest-first" => Bisector::LargestFirst,
            "maxsmear" | "max-smear" => Bisector::MaxSmear,
            "sumsmear" | "sum-smear" => Bisector::SumSmear,
            "smearrel" | "smear-rel" => Bisector::SmearRel,
            "gap" => Bisector::GapFirst(Box::new(Bisector::SmearRel)),
            other => return Err(format!("unknown bisector '{other}'")),
        })
    }
}

impl FromStr for NodeSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "dfs" => NodeSelection::Dfs,
            "bfs" => NodeSelection::Bfs,
            "mmr" | "min-mid-residual" => NodeSelection::MinMidResidual,
            other => return Err(format!("unknown node selection '{other}'")),
        })
    }
}

impl FromStr for TargetCount {
    type Err = String;

    /// `all` (also `+oo`) or a positive count.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" | "+oo" | "oo" => Ok(TargetCount::All),
            _ => match s.parse::<usize>() {
                Ok(k) if k > 0 => Ok(TargetCount::AtLeast(k)),
                _ => Err(format!("expected 'all' or a positive count, got '{s}'")),
            },
        }
    }
}

/// Inflation applied to boxes that reach the tolerance uncertified.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InflationParams {
    pub factor: f64,
    pub max_rounds: usize,
}

impl Default for InflationParams {
    fn default() -> Self {
        InflationParams { factor: 1.1, max_rounds: 5 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Boxes narrower than this that are not certified are output as unknown.
    pub eps: f64,
    pub timeout: Duration,
    pub target: TargetCount,
    pub node_selection: NodeSelection,
    pub bisector: Bisector,
    pub pipeline: PipelineSpec,
    pub certifier: Certifier,
    pub inflation: InflationParams,
    /// Defaults to `10·eps`.
    pub dedup_tol: Option<f64>,
    /// Newton probing from cell midpoints; off by default.
    pub probe: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps: 1e-6,
            timeout: Duration::from_secs(1000),
            target: TargetCount::All,
            node_selection: NodeSelection::Dfs,
            bisector: Bisector::SmearRel,
            pipeline: PipelineSpec::default(),
            certifier: Certifier::HansenSengupta,
            inflation: InflationParams::default(),
            dedup_tol: None,
            probe: false,
        }
    }
}

impl SolverConfig {
    pub fn dedup_tol(&self) -> f64 {
        self.dedup_tol.unwrap_or(10.0 * self.eps)
    }

    /// Stable one-line description, used for fingerprints.
    pub fn describe(&self) -> String {
        format!(
            "eps={:e} timeout={} target={:?} select={:?} bisector={:?} pipeline={:?} tau={} fp={} slices={} certifier={:?} inflate={}x{} dedup={:e}{}",
            self.eps,
            self.timeout.as_secs_f64(),
            self.target,
            self.node_selection,
            self.bisector,
            self.pipeline.stages,
            self.pipeline.tau,
            self.pipeline.fixed_point,
            self.pipeline.shave_slices,
            self.certifier,
            self.inflation.factor,
            self.inflation.max_rounds,
            self.dedup_tol(),
            if self.probe { " probe" } else { "" }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Complete,
    Timeout,
    TargetReached,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Complete => "complete",
            SolveStatus::Timeout => "timeout",
            SolveStatus::TargetReached => "target-reached",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub cells: u64,
    pub bisections: u64,
    pub contractor_calls: CallCounts,
    pub certification_attempts: u64,
    /// Newton probes that ended in a certified root.
    pub probe_hits: u64,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    /// Boxes each holding exactly one root, deduplicated.
    pub certified: Vec<IntervalBox>,
    /// Boxes below tolerance that could be neither discarded nor certified.
    pub unknown: Vec<IntervalBox>,
    pub stats: SolveStats,
    pub status: SolveStatus,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("system is not square ({equations} equations, {variables} variables)")]
    NotSquare { equations: usize, variables: usize },
    #[error("variable '{0}' is unbounded after the first contraction; bound its domain")]
    Unbounded(String),
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// `smear[(j, i)] = mag(∂fⱼ/∂xᵢ over b)·wid(bᵢ)`.
pub fn smear_values(sys: &System, b: &IntervalBox) -> DMatrix<f64> {
    let jac = sys.jacobian(b);
    DMatrix::from_fn(jac.nrows(), jac.ncols(), |j, i| {
        let w = b[i].wid();
        if w == 0.0 {
            0.0
        } else {
            jac[(j, i)].mag() * w
        }
    })
}

/// Mutable state carried by stateful bisectors.
#[derive(Clone, Debug, Default)]
pub struct BisectState {
    pub next_rr: usize,
}

fn argmax(scores: &[(usize, f64)]) -> usize {
    let mut best = scores[0];
    for &(i, s) in &scores[1..] {
        if s > best.1 {
            best = (i, s);
        }
    }
    best.0
}

/// Picks the dimension to split among those at least `eps` wide.
///
/// Panics when no dimension is that wide.
pub fn choose_bisection_var(sys: &System, b: &IntervalBox, policy: &Bisector, state: &mut BisectState, eps: f64) -> usize {
    let n = b.dim();
    let open: Vec<usize> = (0..n).filter(|&i| b[i].wid() >= eps).collect();
    assert!(!open.is_empty(), "every dimension is below the bisection tolerance");
    if let Some(&i) = open.iter().find(|&&i| !b[i].is_bounded()) {
        return i;
    }
    match policy {
        Bisector::RoundRobin => {
            let i = (0..n).map(|k| (state.next_rr + k) % n).find(|i| open.contains(i)).expect("nonempty");
            state.next_rr = (i + 1) % n;
            i
        }
        Bisector::LargestFirst => argmax(&open.iter().map(|&i| (i, b[i].wid())).collect::<Vec<_>>()),
        Bisector::MaxSmear | Bisector::SumSmear | Bisector::SmearRel => {
            let s = smear_values(sys, b);
            let m = s.nrows();
            let scores: Vec<(usize, f64)> = open
                .iter()
                .map(|&i| {
                    let v = match policy {
                        Bisector::MaxSmear => (0..m).map(|j| s[(j, i)]).fold(0.0, f64::max),
                        Bisector::SumSmear => (0..m).map(|j| s[(j, i)]).sum(),
                        _ => (0..m)
                            .map(|j| {
                                let row: f64 = (0..n).map(|k| s[(j, k)]).sum();
                                if row > 0.0 {
                                    s[(j, i)] / row
                                } else {
                                    0.0
                                }
                            })
                            .sum(),
                    };
                    (i, if v.is_nan() { f64::INFINITY } else { v })
                })
                .collect();
            argmax(&scores)
        }
        Bisector::GapFirst(fallback) => choose_bisection_var(sys, b, fallback, state, eps),
    }
}

fn split_point(iv: Interval) -> f64 {
    match (iv.lo().is_finite(), iv.hi().is_finite()) {
        (true, true) => iv.mid(),
        (true, false) => {
            if iv.lo() < 0.0 {
                0.0
            } else {
                2.0 * iv.lo() + 1.0
            }
        }
        (false, true) => {
            if iv.hi() > 0.0 {
                0.0
            } else {
                2.0 * iv.hi() - 1.0
            }
        }
        (false, false) => 0.0,
    }
}

struct Cell {
    b: IntervalBox,
    residual: f64,
}

fn mid_residual(sys: &System, b: &IntervalBox) -> f64 {
    match b.checked_mid() {
        Ok(m) => {
            let r: f64 = sys.residual(&m).iter().map(|v| v.abs()).sum();
            if r.is_nan() {
                f64::INFINITY
            } else {
                r
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Takes the next cell according to `policy`.
fn select_node(worklist: &mut VecDeque<Cell>, policy: NodeSelection) -> Option<Cell> {
    match policy {
        NodeSelection::Dfs => worklist.pop_back(),
        NodeSelection::Bfs => worklist.pop_front(),
        NodeSelection::MinMidResidual => {
            let mut best: Option<(usize, f64)> = None;
            for (k, c) in worklist.iter().enumerate() {
                if best.is_none_or(|(_, r)| c.residual < r) {
                    best = Some((k, c.residual));
                }
            }
            best.and_then(|(k, _)| worklist.remove(k))
        }
    }
}

/// Iterates Hansen–Sengupta on a box already known to hold a unique root.
fn tighten(sys: &System, mut k: IntervalBox, eps: f64) -> IntervalBox {
    for _ in 0..30 {
        if k.max_width() <= 0.01 * eps {
            break;
        }
        match hansen_sengupta(sys, &k, None, None) {
            ContractionOutcome::Contracted(n) => {
                if n.max_width() >= 0.9 * k.max_width() {
                    k = n;
                    break;
                }
                k = n;
            }
            _ => break,
        }
    }
    k
}

enum Verdict {
    Certified(IntervalBox),
    Unknown(IntervalBox),
    Discard,
}

/// True when every slab of `k` lying strictly outside `init` contracts to
/// nothing, so a root known to be in `k` is in `init`.
fn outside_is_infeasible(sys: &System, k: &IntervalBox, init: &IntervalBox) -> bool {
    for i in 0..k.dim() {
        let (ki, di) = (k[i], init[i]);
        let mut slabs = Vec::new();
        if ki.lo() < di.lo() {
            slabs.push(Interval::new(ki.lo(), di.lo().next_down()));
        }
        if ki.hi() > di.hi() {
            slabs.push(Interval::new(di.hi().next_up(), ki.hi()));
        }
        for s in slabs {
            if !propagate(sys, &k.with(i, s), 0.0).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Places a certified box relative to the search domain and side inequalities.
fn classify_certified(sys: &System, k: IntervalBox, eps: f64) -> Verdict {
    let init = sys.initial_box();
    let mut k = tighten(sys, k, eps);
    if !k.subset_of(init) {
        let inside = k.intersect(init);
        if inside.is_empty() {
            return Verdict::Discard;
        }
        if !outside_is_infeasible(sys, &k, init) {
            return Verdict::Unknown(inside);
        }
        // the unique root of k lies in the closed domain
        k = inside;
    }
    let mut undecided = false;
    for c in sys.inequalities() {
        match c.relation().decide(c.expr().eval(&k)) {
            Some(true) => {}
            Some(false) => return Verdict::Discard,
            None => undecided = true,
        }
    }
    if undecided {
        Verdict::Unknown(k)
    } else {
        Verdict::Certified(k)
    }
}

/// Floating-point Newton from `x`; returns the limit when the residual
/// falls below `1e-12·(1 + ‖x‖∞)` within a few steps.
fn newton_point(sys: &System, mut x: Vec<f64>) -> Option<Vec<f64>> {
    let n = x.len();
    for _ in 0..12 {
        let f = sys.residual(&x);
        let nf = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !nf.is_finite() {
            return None;
        }
        let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if nf <= 1e-12 * scale {
            return Some(x);
        }
        let j = sys.jacobian_point(&x);
        let rhs = nalgebra::DVector::from_iterator(n, f.iter().map(|v| -v));
        let step = j.lu().solve(&rhs)?;
        for (xi, si) in x.iter_mut().zip(step.iter()) {
            *xi += si;
        }
    }
    None
}

/// Tries to prove a unique root in a small box around `x`, largest radius
/// first. Returns the tested box and the certified enclosure.
fn certify_near(sys: &System, x: &[f64], certifier: Certifier) -> Option<(IntervalBox, IntervalBox)> {
    for rel in [1e-3, 1e-5, 1e-7] {
        let b = IntervalBox::new(x.iter().map(|&v| Interval::around(v).inflate_abs(rel * v.abs().max(1.0))).collect());
        if let CertificationResult::UniqueRoot(k) = certifier.test(sys, &b) {
            return Some((b, k));
        }
    }
    None
}

/// Runs branch and prune on `sys` over its initial box.
pub fn solve(sys: &System, cfg: &SolverConfig) -> Result<SolveReport, SolveError> {
    if !sys.is_square() {
        return Err(SolveError::NotSquare { equations: sys.equations().len(), variables: sys.dim() });
    }
    if !(cfg.eps > 0.0) {
        return Err(SolveError::BadTolerance);
    }
    let start = Instant::now();
    let pipeline = cfg.pipeline.build(cfg.eps);
    let mut stats = SolveStats::default();
    let mut certified: Vec<IntervalBox> = Vec::new();
    let mut unknown: Vec<IntervalBox> = Vec::new();
    let mut worklist: VecDeque<Cell> = VecDeque::new();
    let mut state = BisectState::default();
    let gap_first = matches!(cfg.bisector, Bisector::GapFirst(_));
    let mut status = SolveStatus::Complete;

    let init = sys.initial_box().clone();
    if !init.is_bounded() {
        let mut x = init.clone();
        // a few propagation rounds must bound every variable
        for _ in 0..3 {
            match pipeline.contract_counted(sys, &x, &mut stats.contractor_calls) {
                ContractionOutcome::Contracted(y) => x = y,
                other => match other.hull() {
                    Some(h) => x = h,
                    None => {
                        stats.wall_time = start.elapsed();
                        return Ok(SolveReport { certified, unknown, stats, status });
                    }
                },
            }
        }
        if let Some(i) = (0..x.dim()).find(|&i| !x[i].is_bounded()) {
            return Err(SolveError::Unbounded(sys.variables()[i].clone()));
        }
        worklist.push_back(Cell { residual: mid_residual(sys, &x), b: x });
    } else {
        worklist.push_back(Cell { residual: mid_residual(sys, &init), b: init });
    }

    // boxes proven to hold exactly one root that is already accounted for
    let mut excluded: Vec<IntervalBox> = Vec::new();

    while let Some(cell) = select_node(&mut worklist, cfg.node_selection) {
        if start.elapsed() >= cfg.timeout {
            worklist.push_back(cell);
            status = SolveStatus::Timeout;
            break;
        }
        if excluded.iter().any(|x| cell.b.subset_of(x)) {
            continue;
        }
        stats.cells += 1;
        let mut b = match pipeline.contract_counted(sys, &cell.b, &mut stats.contractor_calls) {
            ContractionOutcome::Empty => continue,
            ContractionOutcome::Contracted(y) => y,
            ContractionOutcome::Gap(l, r, d) => {
                if gap_first && l[d].wid() > 0.0 && r[d].wid() >= 0.0 {
                    stats.bisections += 1;
                    for half in [r, l] {
                        worklist.push_back(Cell { residual: mid_residual(sys, &half), b: half });
                    }
                    continue;
                }
                l.hull(&r)
            }
        };
        if sys.inequalities().iter().any(|c| c.relation().decide(c.expr().eval(&b)) == Some(false)) {
            continue;
        }

        if excluded.iter().any(|x| b.subset_of(x)) {
            continue;
        }
        if cfg.probe && b.max_width() >= cfg.eps {
            if let Some(x) = b.checked_mid().ok().and_then(|m| newton_point(sys, m)) {
                let known = excluded.iter().any(|e| e.contains_point(&x));
                if !known && sys.initial_box().contains_point(&x) {
                    stats.certification_attempts += 1;
                    if let Some((tested, k)) = certify_near(sys, &x, cfg.certifier) {
                        match classify_certified(sys, k, cfg.eps) {
                            Verdict::Certified(k) => {
                                stats.probe_hits += 1;
                                certified.push(k);
                                excluded.push(tested);
                            }
                            Verdict::Discard => excluded.push(tested),
                            Verdict::Unknown(_) => {}
                        }
                        if excluded.iter().any(|x| b.subset_of(x)) {
                            continue;
                        }
                    }
                }
            }
        }

        stats.certification_attempts += 1;
        let verdict = match cfg.certifier.test(sys, &b) {
            CertificationResult::UniqueRoot(k) => Some(classify_certified(sys, k, cfg.eps)),
            _ if b.max_width() < cfg.eps => {
                stats.certification_attempts += 1;
                match inflate_and_certify(sys, &b, cfg.inflation.factor, cfg.inflation.max_rounds, cfg.certifier) {
                    Ok(CertificationResult::UniqueRoot(k)) => Some(classify_certified(sys, k, cfg.eps)),
                    _ => Some(Verdict::Unknown(b.clone())),
                }
            }
            _ => None,
        };
        match verdict {
            Some(Verdict::Certified(k)) => {
                certified.push(k);
                if let TargetCount::AtLeast(n) = cfg.target {
                    if certified.len() >= n && dedup_solutions(&certified, cfg.dedup_tol()).len() >= n {
                        status = SolveStatus::TargetReached;
                        break;
                    }
                }
                continue;
            }
            Some(Verdict::Unknown(u)) => {
                unknown.push(u);
                continue;
            }
            Some(Verdict::Discard) => continue,
            None => {}
        }

        let dim = choose_bisection_var(sys, &b, &cfg.bisector, &mut state, cfg.eps);
        let at = split_point(b[dim]);
        let (l, r) = b.bisect(dim, Some(at));
        stats.bisections += 1;
        b = r;
        // DFS explores the left child first
        worklist.push_back(Cell { residual: mid_residual(sys, &b), b });
        worklist.push_back(Cell { residual: mid_residual(sys, &l), b: l });
    }

    let certified = dedup_solutions(&certified, cfg.dedup_tol());
    stats.wall_time = start.elapsed();
    Ok(SolveReport { certified, unknown, stats, status })
}

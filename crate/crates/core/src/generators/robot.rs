//! Serial robot arms with absolute joint angles.
//!
//! Planar link j ends at (x_j, y_j) = Σ_{i≤j} ℓ_i (cos θ_i, sin θ_i). The
//! spatial arm uses an elevation θ_i and an azimuth φ_i per link. The end
//! point and a subset of intermediate coordinates are fixed to the values of
//! a sampled configuration, so that configuration is always a root.

use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::Rng;

use super::{num, rng, GenError, Instance, SysText, RNG_ALGORITHM};

pub const MAX_SELECTION_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RobotMode {
    PlanarTrig,
    PlanarPoly,
    SpatialTrig,
    SpatialPoly,
}

impl RobotMode {
    pub fn is_spatial(self) -> bool {
        matches!(self, RobotMode::SpatialTrig | RobotMode::SpatialPoly)
    }

    pub fn is_poly(self) -> bool {
        matches!(self, RobotMode::PlanarPoly | RobotMode::SpatialPoly)
    }

    pub fn name(self) -> &'static str {
        match self {
            RobotMode::PlanarTrig => "planar-trig",
            RobotMode::PlanarPoly => "planar-poly",
            RobotMode::SpatialTrig => "spatial-trig",
            RobotMode::SpatialPoly => "spatial-poly",
        }
    }

    fn dims(self) -> usize {
        if self.is_spatial() {
            3
        } else {
            2
        }
    }
}

impl std::str::FromStr for RobotMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [RobotMode::PlanarTrig, RobotMode::PlanarPoly, RobotMode::SpatialTrig, RobotMode::SpatialPoly]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown robot mode '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        self as usize
    }

    fn letter(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }

    const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Coordinate `axis` of the end of link `link` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub link: usize,
    pub axis: Axis,
}

impl Coord {
    pub fn new(link: usize, axis: Axis) -> Coord {
        Coord { link, axis }
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.axis.letter(), self.link)
    }

    fn order(&self, dims: usize) -> usize {
        (self.link - 1) * dims + self.axis.index()
    }
}

impl std::fmt::Display for Coord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

impl std::str::FromStr for Coord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut chars = s.chars();
        let axis = match chars.next() {
            Some('x') => Axis::X,
            Some('y') => Axis::Y,
            Some('z') => Axis::Z,
            _ => return Err(format!("bad coordinate '{s}'")),
        };
        let link: usize = chars.as_str().parse().map_err(|_| format!("bad coordinate '{s}'"))?;
        if link == 0 {
            return Err(format!("bad coordinate '{s}'"));
        }
        Ok(Coord { link, axis })
    }
}

fn check_selection(m: usize, dims: usize, chosen: &[Coord]) -> bool {
    if m < 2 || chosen.len() != (dims - 1) * m - dims {
        return false;
    }
    let mut seen = std::collections::BTreeSet::new();
    for c in chosen {
        if c.link == 0 || c.link >= m || c.axis.index() >= dims || !seen.insert(*c) {
            return false;
        }
    }
    for j in 1..m {
        let full = Axis::ALL[..dims].iter().all(|&a| seen.contains(&Coord::new(j, a)));
        if !full {
            continue;
        }
        let first = Coord::new(j, Axis::X).order(dims);
        let before = seen.iter().filter(|c| c.order(dims) < first).count() as isize;
        if before != (dims as isize - 1) * j as isize - dims as isize {
            return false;
        }
    }
    true
}

/// Planar acceptance rule: every link end whose two coordinates are both
/// fixed must be preceded (in the order x₁ < y₁ < x₂ < …) by exactly j−2
/// fixed coordinates, so the prefix subsystem is square.
pub fn check_square_selection(m: usize, chosen: &[Coord]) -> bool {
    check_selection(m, 2, chosen)
}

/// Spatial analogue: 2m−3 coordinates, and 2j−3 fixed coordinates before x_j
/// whenever x_j, y_j, z_j are all fixed.
pub fn check_spatial_selection(m: usize, chosen: &[Coord]) -> bool {
    check_selection(m, 3, chosen)
}

#[derive(Debug, Clone)]
pub struct RobotParams {
    pub m: usize,
    pub mode: RobotMode,
    /// Link lengths; sampled as integers in [1, 10] when absent.
    pub lengths: Option<Vec<f64>>,
    /// θ₁..θ_m (planar) or θ₁..θ_m, φ₁..φ_m (spatial); sampled uniformly in
    /// [−π, π] when absent.
    pub angles: Option<Vec<f64>>,
    /// Overrides the end point. The sampled configuration is then no longer a
    /// root in general, so no witness is returned.
    pub end: Option<Vec<f64>>,
    /// Overrides the fixed intermediate coordinates; values come from the
    /// configuration.
    pub fixed: Option<Vec<Coord>>,
    pub seed: u64,
}

impl RobotParams {
    pub fn new(m: usize, mode: RobotMode, seed: u64) -> RobotParams {
        RobotParams { m, mode, lengths: None, angles: None, end: None, fixed: None, seed }
    }
}

/// Dispatches on `p.mode`.
pub fn gen_robot(p: &RobotParams) -> Result<Instance, GenError> {
    let dims = p.mode.dims();
    if p.m < 2 {
        return Err(GenError::Invalid(format!("robot arm needs m >= 2, got {}", p.m)));
    }
    let m = p.m;
    let mut r = rng(p.seed);
    let lengths = match &p.lengths {
        Some(l) if l.len() == m && l.iter().all(|x| *x > 0.0 && x.is_finite()) => l.clone(),
        Some(_) => return Err(GenError::Invalid(format!("need {m} positive link lengths"))),
        None => (0..m).map(|_| r.random_range(1..=10) as f64).collect(),
    };
    let nangles = if p.mode.is_spatial() { 2 * m } else { m };
    let angles = match &p.angles {
        Some(a) if a.len() == nangles => a.clone(),
        Some(_) => return Err(GenError::Invalid(format!("need {nangles} joint angles"))),
        None => (0..nangles).map(|_| r.random_range(-PI..=PI)).collect(),
    };
    let check = if p.mode.is_spatial() { check_spatial_selection } else { check_square_selection };
    let nfixed = (dims - 1) * m - dims;
    let fixed = match &p.fixed {
        Some(f) => {
            if !check(m, f) {
                return Err(GenError::Invalid("fixed coordinates fail the square-selection check".into()));
            }
            let mut f = f.clone();
            f.sort();
            f
        }
        None => {
            let pool = dims * (m - 1);
            let mut found = None;
            for _ in 0..MAX_SELECTION_ATTEMPTS {
                let mut pick: Vec<Coord> = sample(&mut r, pool, nfixed)
                    .into_iter()
                    .map(|k| Coord::new(k / dims + 1, Axis::ALL[k % dims]))
                    .collect();
                pick.sort();
                if check(m, &pick) {
                    found = Some(pick);
                    break;
                }
            }
            found.ok_or(GenError::SelectionExhausted(MAX_SELECTION_ATTEMPTS))?
        }
    };

    // link end positions of the configuration
    let mut ends = vec![[0.0f64; 3]; m + 1];
    for i in 1..=m {
        let step = if p.mode.is_spatial() {
            let (t, f) = (angles[i - 1], angles[m + i - 1]);
            [t.cos() * f.cos(), t.cos() * f.sin(), t.sin()]
        } else {
            let t = angles[i - 1];
            [t.cos(), t.sin(), 0.0]
        };
        for a in 0..3 {
            ends[i][a] = ends[i - 1][a] + lengths[i - 1] * step[a];
        }
    }
    let end_point: Vec<f64> = match &p.end {
        Some(e) if e.len() == dims => e.clone(),
        Some(_) => return Err(GenError::Invalid(format!("end point needs {dims} coordinates"))),
        None => ends[m][..dims].to_vec(),
    };

    let mut t = SysText::new(format!("robot_{}_m{}_s{}", p.mode.name().replace('-', "_"), m, p.seed));
    t.meta("family", "robot");
    t.meta("mode", p.mode.name());
    t.meta("m", m);
    t.meta("seed", p.seed);
    t.meta("rng", RNG_ALGORITHM);
    t.meta("lengths", lengths.iter().map(|l| super::fmt_f64(*l)).collect::<Vec<_>>().join(" "));
    t.meta("fixed", fixed.iter().map(|c| c.name()).collect::<Vec<_>>().join(" "));

    let mut witness = Vec::new();
    let names = |prefix: &str| (1..=m).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>();
    match p.mode {
        RobotMode::PlanarTrig => {
            for (i, n) in names("th").into_iter().enumerate() {
                t.var_text(n, "-pi", "pi");
                witness.push(angles[i]);
            }
        }
        RobotMode::SpatialTrig => {
            for (i, n) in names("th").into_iter().enumerate() {
                t.var_text(n, "-pi", "pi");
                witness.push(angles[i]);
            }
            for (i, n) in names("ph").into_iter().enumerate() {
                t.var_text(n, "-pi", "pi");
                witness.push(angles[m + i]);
            }
        }
        RobotMode::PlanarPoly => {
            for i in 0..m {
                t.var(format!("c{}", i + 1), -1.0, 1.0);
                t.var(format!("s{}", i + 1), -1.0, 1.0);
                witness.extend([angles[i].cos(), angles[i].sin()]);
            }
        }
        RobotMode::SpatialPoly => {
            for i in 0..m {
                let (th, ph) = (angles[i], angles[m + i]);
                for (n, v) in [("ct", th.cos()), ("st", th.sin()), ("cp", ph.cos()), ("sp", ph.sin())] {
                    t.var(format!("{n}{}", i + 1), -1.0, 1.0);
                    witness.push(v);
                }
            }
        }
    }
    let mut reach = 0.0;
    for j in 1..m {
        reach += lengths[j - 1];
        for &a in &Axis::ALL[..dims] {
            let c = Coord::new(j, a);
            if fixed.binary_search(&c).is_err() {
                t.var(c.name(), -reach, reach);
                witness.push(ends[j][a.index()]);
            }
        }
    }

    // left-hand side of each coordinate equation: a variable or a constant
    let lhs = |j: usize, a: Axis| -> String {
        if j == m {
            num(end_point[a.index()])
        } else if fixed.binary_search(&Coord::new(j, a)).is_ok() {
            num(ends[j][a.index()])
        } else {
            Coord::new(j, a).name()
        }
    };
    for j in 1..=m {
        for &a in &Axis::ALL[..dims] {
            let terms: Vec<String> = (1..=j)
                .map(|i| {
                    let l = num(lengths[i - 1]);
                    let f = match (p.mode, a) {
                        (RobotMode::PlanarTrig, Axis::X) => format!("cos(th{i})"),
                        (RobotMode::PlanarTrig, _) => format!("sin(th{i})"),
                        (RobotMode::PlanarPoly, Axis::X) => format!("c{i}"),
                        (RobotMode::PlanarPoly, _) => format!("s{i}"),
                        (RobotMode::SpatialTrig, Axis::X) => format!("cos(th{i})*cos(ph{i})"),
                        (RobotMode::SpatialTrig, Axis::Y) => format!("cos(th{i})*sin(ph{i})"),
                        (RobotMode::SpatialTrig, Axis::Z) => format!("sin(th{i})"),
                        (RobotMode::SpatialPoly, Axis::X) => format!("ct{i}*cp{i}"),
                        (RobotMode::SpatialPoly, Axis::Y) => format!("ct{i}*sp{i}"),
                        (RobotMode::SpatialPoly, Axis::Z) => format!("st{i}"),
                    };
                    format!("{l}*{f}")
                })
                .collect();
            t.eq(format!("{} - ({})", lhs(j, a), terms.join(" + ")));
        }
    }
    match p.mode {
        RobotMode::PlanarPoly => {
            for i in 1..=m {
                t.eq(format!("c{i}^2 + s{i}^2 - 1"));
            }
        }
        RobotMode::SpatialPoly => {
            for i in 1..=m {
                t.eq(format!("ct{i}^2 + st{i}^2 - 1"));
                t.eq(format!("cp{i}^2 + sp{i}^2 - 1"));
            }
        }
        _ => {}
    }
    let system = t.finish()?;
    Ok(Instance { system, witness: if p.end.is_none() { Some(witness) } else { None } })
}

pub fn gen_planar_robot(p: &RobotParams) -> Result<Instance, GenError> {
    if p.mode.is_spatial() {
        return Err(GenError::Invalid("planar generator called with a spatial mode".into()));
    }
    gen_robot(p)
}

pub fn gen_spatial_robot(p: &RobotParams) -> Result<Instance, GenError> {
    if !p.mode.is_spatial() {
        return Err(GenError::Invalid("spatial generator called with a planar mode".into()));
    }
    gen_robot(p)
}

//! Steady-state flash unit for a binary mixture (28 equations).
//!
//! Pure-component enthalpies and saturation pressures are evaluated from
//! correlations read from a TOML config. No coefficients are built in;
//! [`FLASH_TEMPLATE`] lists the slots to fill.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::{num, GenError, Instance, SysText};

pub const FLASH_TEMPLATE: &str = r#"# Flash unit correlation config.
#
# psat:     log10(psat / bar) = a - b / (T + c)
# h_liquid: liquid molar enthalpy, polynomial in T: c0 + c1*T + c2*T^2 + ...
# h_vapor:  vapor molar enthalpy, same form
# h_feed:   optional, defaults to h_liquid; evaluated at the feed temperature

[[component]]
name = ""
psat = { a = nan, b = nan, c = nan }
h_liquid = []
h_vapor = []

[[component]]
name = ""
psat = { a = nan, b = nan, c = nan }
h_liquid = []
h_vapor = []

# Operating inputs (pressures in bar).
[inputs]
dp = 0.1
pF = 1.0
xF1 = 0.5
FF = 1.0

# Grid swept by batch generation: [start, step, count].
[grid]
dp = [0.01, 0.01, 10]
pF = [1.0, 0.1, 10]
xF1 = [0.05, 0.09, 10]
FF = [0.5, 0.1, 10]

# Per-variable box overrides, e.g. x1 = [0, 1]. Unlisted variables use
# [-1e9, 1e9].
[bounds]
"#;

pub const FLASH_VARIABLES: [&str; 28] = [
    "K1", "K2", "x1", "x2", "xF2", "y1", "y2", "gamma1", "gamma2", "alpha1", "alpha2", "p", "hF", "hL", "hV", "FL",
    "FV", "Q", "n1", "n2", "nL", "nV", "U", "VL", "VV", "V", "A", "r",
];

pub const DEFAULT_BOUND: f64 = 1e9;

#[derive(Debug, Clone, Deserialize, PartialEq)]
pub struct Antoine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
pub struct Component {
    #[serde(default)]
    pub name: String,
    pub psat: Option<Antoine>,
    #[serde(default)]
    pub h_liquid: Vec<f64>,
    #[serde(default)]
    pub h_vapor: Vec<f64>,
    pub h_feed: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[allow(non_snake_case)]
pub struct FlashInputs {
    pub dp: f64,
    pub pF: f64,
    pub xF1: f64,
    pub FF: f64,
}

impl Default for FlashInputs {
    fn default() -> Self {
        FlashInputs { dp: 0.1, pF: 1.0, xF1: 0.5, FF: 1.0 }
    }
}

/// Inclusive sweep `start, start + step, …` with `count` points.
#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(from = "(f64, f64, usize)")]
pub struct Sweep {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl From<(f64, f64, usize)> for Sweep {
    fn from((start, step, count): (f64, f64, usize)) -> Self {
        Sweep { start, step, count }
    }
}

impl Sweep {
    fn at(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[allow(non_snake_case)]
pub struct FlashGrid {
    pub dp: Sweep,
    pub pF: Sweep,
    pub xF1: Sweep,
    pub FF: Sweep,
}

impl Default for FlashGrid {
    fn default() -> Self {
        FlashGrid {
            dp: (0.01, 0.01, 10).into(),
            pF: (1.0, 0.1, 10).into(),
            xF1: (0.05, 0.09, 10).into(),
            FF: (0.5, 0.1, 10).into(),
        }
    }
}

impl FlashGrid {
    pub fn len(&self) -> usize {
        self.dp.count * self.pF.count * self.xF1.count * self.FF.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid point `k` in row-major order (FF varies fastest), wrapping
    /// around past the end.
    pub fn point(&self, k: usize) -> FlashInputs {
        let mut k = if self.is_empty() { 0 } else { k % self.len() };
        let mut take = |s: &Sweep| {
            let n = s.count.max(1);
            let i = k % n;
            k /= n;
            s.at(i)
        };
        let ff = take(&self.FF);
        let xf1 = take(&self.xF1);
        let pf = take(&self.pF);
        let dp = take(&self.dp);
        FlashInputs { dp, pF: pf, xF1: xf1, FF: ff }
    }
}

/// Fixed model constants.
#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[allow(non_snake_case)]
#[serde(default)]
pub struct FlashConstants {
    pub T: f64,
    pub TF: f64,
    pub hEF: f64,
    pub hEL: f64,
    pub hEV: f64,
    pub D: f64,
    pub H: f64,
    pub HL: f64,
    pub vEL: f64,
    pub zV: f64,
    pub lambda: [f64; 2],
    pub v: [f64; 2],
    pub R: f64,
}

impl Default for FlashConstants {
    fn default() -> Self {
        FlashConstants {
            T: 353.15,
            TF: 353.15,
            hEF: 0.0,
            hEL: 0.0,
            hEV: 0.0,
            D: 0.16,
            H: 0.5,
            HL: 0.25,
            vEL: 0.0,
            zV: 1.0,
            lambda: [95.68, 506.7],
            v: [5.869e-5, 1.807e-5],
            R: 8.314,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
pub struct FlashConfig {
    #[serde(default)]
    pub component: Vec<Component>,
    pub inputs: Option<FlashInputs>,
    pub grid: Option<FlashGrid>,
    pub constants: Option<FlashConstants>,
    #[serde(default)]
    pub bounds: BTreeMap<String, (f64, f64)>,
}

impl FlashConfig {
    pub fn from_toml(text: &str) -> Result<FlashConfig, GenError> {
        toml::from_str(text).map_err(|e| GenError::Config(e.to_string()))
    }

    pub fn grid(&self) -> FlashGrid {
        self.grid.unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlashParams {
    pub inputs: FlashInputs,
    pub constants: FlashConstants,
    pub components: Vec<Component>,
    pub bounds: BTreeMap<String, (f64, f64)>,
    /// Label stored in the instance name; the grid index in batch runs.
    pub tag: u64,
}

impl FlashParams {
    pub fn from_config(cfg: &FlashConfig) -> FlashParams {
        FlashParams {
            inputs: cfg.inputs.unwrap_or_default(),
            constants: cfg.constants.unwrap_or_default(),
            components: cfg.component.clone(),
            bounds: cfg.bounds.clone(),
            tag: 0,
        }
    }

    /// Parameters at grid point `k` of the config's sweep.
    pub fn grid_point(cfg: &FlashConfig, k: usize) -> FlashParams {
        let mut p = FlashParams::from_config(cfg);
        p.inputs = cfg.grid().point(k);
        p.tag = k as u64;
        p
    }
}

fn poly_text(coeffs: &[f64], t: f64) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| match k {
            0 => num(*c),
            1 => format!("{}*{}", num(*c), num(t)),
            _ => format!("{}*{}^{k}", num(*c), num(t)),
        })
        .collect();
    format!("({})", terms.join(" + "))
}

struct Correlations {
    psat: String,
    h_liquid: String,
    h_vapor: String,
    h_feed: String,
}

fn correlations(c: &Component, idx: usize, k: &FlashConstants) -> Result<Correlations, GenError> {
    let missing = |what: &str| GenError::MissingCorrelation(format!("component {idx}: {what}"));
    let ant = c.psat.as_ref().ok_or_else(|| missing("psat"))?;
    if ![ant.a, ant.b, ant.c].iter().all(|x| x.is_finite()) {
        return Err(missing("psat coefficients"));
    }
    if c.h_liquid.is_empty() || c.h_liquid.iter().any(|x| !x.is_finite()) {
        return Err(missing("h_liquid"));
    }
    if c.h_vapor.is_empty() || c.h_vapor.iter().any(|x| !x.is_finite()) {
        return Err(missing("h_vapor"));
    }
    let feed = c.h_feed.as_deref().unwrap_or(&c.h_liquid);
    if feed.is_empty() || feed.iter().any(|x| !x.is_finite()) {
        return Err(missing("h_feed"));
    }
    Ok(Correlations {
        psat: format!("10^({} - {}/({} + {}))", num(ant.a), num(ant.b), num(k.T), num(ant.c)),
        h_liquid: poly_text(&c.h_liquid, k.T),
        h_vapor: poly_text(&c.h_vapor, k.T),
        h_feed: poly_text(feed, k.TF),
    })
}

pub fn gen_flash(p: &FlashParams) -> Result<Instance, GenError> {
    if p.components.len() != 2 {
        return Err(GenError::MissingCorrelation(format!(
            "need correlations for 2 components, config has {}",
            p.components.len()
        )));
    }
    for name in p.bounds.keys() {
        if !FLASH_VARIABLES.contains(&name.as_str()) {
            return Err(GenError::Config(format!("bounds for unknown variable '{name}'")));
        }
    }
    let k = &p.constants;
    let c1 = correlations(&p.components[0], 1, k)?;
    let c2 = correlations(&p.components[1], 2, k)?;
    let cs = [&c1, &c2];
    let inp = &p.inputs;

    let mut t = SysText::new(format!("flash_{}", p.tag));
    t.meta("family", "flash");
    t.meta(
        "inputs",
        format!("dp={} pF={} xF1={} FF={}", num(inp.dp), num(inp.pF), num(inp.xF1), num(inp.FF)),
    );
    t.meta(
        "components",
        p.components.iter().map(|c| if c.name.is_empty() { "?" } else { c.name.as_str() }).collect::<Vec<_>>().join(" "),
    );
    for v in FLASH_VARIABLES {
        let (lo, hi) = p.bounds.get(v).copied().unwrap_or((-DEFAULT_BOUND, DEFAULT_BOUND));
        t.var(v, lo, hi);
    }
    let (v1, v2) = (num(k.v[0]), num(k.v[1]));
    let (tt, r, zv, vel) = (num(k.T), num(k.R), num(k.zV), num(k.vEL));
    let xf1 = num(inp.xF1);

    // phase equilibrium and closure
    t.eq("K1*x1 - y1");
    t.eq("K2*x2 - y2");
    t.eq("y1 + y2 - 1");
    t.eq("x1 + x2 - 1");
    t.eq(format!("{xf1} + xF2 - 1"));
    t.eq(format!("hF - ({xf1}*{} + xF2*{} + {})", c1.h_feed, c2.h_feed, num(k.hEF)));
    t.eq(format!("hL - (x1*{} + x2*{} + {})", c1.h_liquid, c2.h_liquid, num(k.hEL)));
    t.eq(format!("hV - (y1*{} + y2*{} + {})", c1.h_vapor, c2.h_vapor, num(k.hEV)));
    t.eq(format!("{} - ({} - p)", num(inp.dp), num(inp.pF)));
    for i in 1..=2 {
        t.eq(format!("K{i} - gamma{i}*{}/p", cs[i - 1].psat));
    }
    // activity coefficients
    for i in 1..=2 {
        let j = 3 - i;
        let den = format!("(x{i} + alpha{i}*(1 - x{i}))");
        t.eq(format!(
            "gamma{i} - exp((1 - x{i})*(alpha{i}/{den} - alpha{j}/(alpha{j}*x{i} + (1 - x{i}))))/{den}"
        ));
    }
    for i in 1..=2 {
        let vi = num(k.v[i - 1]);
        t.eq(format!("alpha{i} - (({v1} + {v2}) - {vi})/{vi}*exp(-{}/{tt})", num(k.lambda[i - 1])));
    }
    // balances
    t.eq(format!("{}*hF - FV*hV - FL*hL + Q", num(inp.FF)));
    t.eq(format!("{}*{xf1} - FV*y1 - FL*x1", num(inp.FF)));
    t.eq(format!("{}*xF2 - FV*y2 - FL*x2", num(inp.FF)));
    // holdups and volumes
    t.eq(format!("U - nL*(hL - p*(1e5*(x1*{v1} + x2*{v2} + {vel}))) - nV*(hV - {r}*({tt}*{zv}))"));
    t.eq("V - (VL + VV)");
    t.eq("n1 - (x1*nL + y1*nV)");
    t.eq("n2 - (x2*nL + y2*nV)");
    t.eq(format!("VL - (({v1}*x1 + {v2}*x2 + {vel})*nL)"));
    t.eq(format!("VV - nV*{r}*({tt}*{zv})/(p*1e5)"));
    // geometry
    let (d, h) = (num(k.D), num(k.H));
    t.eq(format!("{} - 4*VL/(pi*{d}^2)", num(k.HL)));
    t.eq(format!("A - pi*{d}^2/4"));
    t.eq(format!("V - A*{h}"));
    t.eq(format!("r - {d}/{h}"));
    Ok(Instance { system: t.finish()?, witness: None })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Ethanol/water test fixture: NIST Antoine fits (bar, K) and constant
    /// heat capacities referenced to 298.15 K plus a heat of vaporization.
    pub(crate) const FIXTURE: &str = r#"
[[component]]
name = "ethanol"
psat = { a = 5.24677, b = 1598.673, c = -46.424 }
h_liquid = [-33483.8, 112.3]
h_vapor = [5076.2, 112.3]

[[component]]
name = "water"
psat = { a = 5.0768, b = 1659.793, c = -45.854 }
h_liquid = [-22450.7, 75.3]
h_vapor = [18209.3, 75.3]

[inputs]
dp = 0.1
pF = 1.0
xF1 = 0.3
FF = 1.0
"#;

    #[test]
    fn template_has_empty_slots() {
        let cfg = FlashConfig::from_toml(FLASH_TEMPLATE).unwrap();
        let err = gen_flash(&FlashParams::from_config(&cfg)).unwrap_err();
        assert!(matches!(err, GenError::MissingCorrelation(_)), "{err}");
        let err = gen_flash(&FlashParams::from_config(&FlashConfig::default())).unwrap_err();
        assert!(matches!(err, GenError::MissingCorrelation(_)));
    }

    #[test]
    fn fixture_builds_square_system() {
        let cfg = FlashConfig::from_toml(FIXTURE).unwrap();
        let sys = gen_flash(&FlashParams::from_config(&cfg)).unwrap().system;
        assert_eq!(sys.dim(), 28);
        assert_eq!(sys.equations().len(), 28);
        assert_eq!(sys.initial_box()[0].hi(), 1e9);
        // the area equation pins A to pi*D^2/4
        let a = sys.var_index("A").unwrap();
        let mut x = vec![0.0; 28];
        x[a] = std::f64::consts::PI * 0.16 * 0.16 / 4.0;
        let res = sys.residual(&x);
        assert!(res[25].abs() < 1e-15);
        assert!((x[a] - 0.0201062).abs() < 1e-7);
    }

    #[test]
    fn grid_enumerates_all_points() {
        let g = FlashGrid::default();
        assert_eq!(g.len(), 10_000);
        let p0 = g.point(0);
        assert_eq!((p0.dp, p0.pF, p0.xF1, p0.FF), (0.01, 1.0, 0.05, 0.5));
        let p1 = g.point(1);
        assert_eq!(p1.FF, 0.6);
        let last = g.point(9_999);
        assert!((last.dp - 0.1).abs() < 1e-12 && (last.FF - 1.4).abs() < 1e-12);
    }

    #[test]
    fn bounds_override_and_validation() {
        let mut cfg = FlashConfig::from_toml(FIXTURE).unwrap();
        cfg.bounds.insert("x1".into(), (0.0, 1.0));
        let sys = gen_flash(&FlashParams::from_config(&cfg)).unwrap().system;
        let i = sys.var_index("x1").unwrap();
        assert_eq!((sys.initial_box()[i].lo(), sys.initial_box()[i].hi()), (0.0, 1.0));
        cfg.bounds.insert("bogus".into(), (0.0, 1.0));
        assert!(gen_flash(&FlashParams::from_config(&cfg)).is_err());
    }
}

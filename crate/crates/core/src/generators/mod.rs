//! Seeded instance generators for five parametric families: serial robot
//! arms (planar and spatial, trigonometric and polynomial), the Stewart
//! platform, the Kuramoto equilibrium equations, a two-component flash unit
//! and initial orbit determination.
//!
//! Every generator writes system text in the format accepted by
//! [`parse_system`](crate::parse_system) and parses it back, so the text of a
//! generated system is a pure function of its parameters and seed. The random
//! stream is ChaCha8 seeded through `seed_from_u64`; the identifier
//! [`RNG_ALGORITHM`] is stored in each instance's metadata.

mod flash;
mod kuramoto;
mod orbit;
mod robot;
mod stewart;

pub use flash::{
    gen_flash, Antoine, Component, FlashConfig, FlashConstants, FlashGrid, FlashInputs, FlashParams, Sweep, FLASH_TEMPLATE,
    FLASH_VARIABLES,
};
pub use kuramoto::{gen_kuramoto, KuramotoParams};
pub use orbit::{constructed_orbit, gen_orbit, OrbitBounds, OrbitConstruction, OrbitParams, ORBIT_VARIABLES};
pub use robot::{
    check_spatial_selection, check_square_selection, gen_planar_robot, gen_robot, gen_spatial_robot, Axis, Coord,
    RobotMode, RobotParams, MAX_SELECTION_ATTEMPTS,
};
pub use stewart::{gen_stewart, StewartParams};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{fmt_f64, ParseError};
use crate::System;

pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("no admissible coordinate selection after {0} attempts")]
    SelectionExhausted(usize),
    #[error("missing correlation: {0}")]
    MissingCorrelation(String),
    #[error("config: {0}")]
    Config(String),
    #[error("generated text failed to parse: {0}")]
    Parse(#[from] ParseError),
}

/// A generated system together with a point known to solve it, when the
/// construction provides one. The witness is ordered like
/// `system.variables()`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub system: System,
    pub witness: Option<Vec<f64>>,
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number literal for generated expressions; negatives are parenthesized so
/// they can follow any operator.
pub(crate) fn num(x: f64) -> String {
    let s = fmt_f64(x);
    if x.is_sign_negative() && x != 0.0 {
        format!("({s})")
    } else {
        s
    }
}

pub(crate) enum Bound {
    Num(f64),
    Text(&'static str),
}

impl Bound {
    fn render(&self) -> String {
        match self {
            Bound::Num(x) => fmt_f64(*x),
            Bound::Text(t) => (*t).to_string(),
        }
    }
}

/// Accumulates the statements of a system file.
pub(crate) struct SysText {
    name: String,
    meta: Vec<(String, String)>,
    vars: Vec<(String, Bound, Bound)>,
    eqs: Vec<String>,
    ineqs: Vec<String>,
}

impl SysText {
    pub(crate) fn new(name: impl Into<String>) -> SysText {
        SysText { name: name.into(), meta: Vec::new(), vars: Vec::new(), eqs: Vec::new(), ineqs: Vec::new() }
    }

    pub(crate) fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub(crate) fn var(&mut self, name: impl Into<String>, lo: f64, hi: f64) {
        self.vars.push((name.into(), Bound::Num(lo), Bound::Num(hi)));
    }

    pub(crate) fn var_text(&mut self, name: impl Into<String>, lo: &'static str, hi: &'static str) {
        self.vars.push((name.into(), Bound::Text(lo), Bound::Text(hi)));
    }

    pub(crate) fn eq(&mut self, e: impl Into<String>) {
        self.eqs.push(e.into());
    }

    pub(crate) fn ineq(&mut self, e: impl Into<String>) {
        self.ineqs.push(e.into());
    }

    pub(crate) fn render(&self) -> String {
        let mut out = format!("name {}\n", self.name);
        for (k, v) in &self.meta {
            out.push_str(&format!("meta {k} {v}\n"));
        }
        let names: Vec<&str> = self.vars.iter().map(|v| v.0.as_str()).collect();
        out.push_str(&format!("vars {}\n", names.join(", ")));
        for (n, lo, hi) in &self.vars {
            out.push_str(&format!("box {n} in [{}, {}]\n", lo.render(), hi.render()));
        }
        for e in &self.eqs {
            out.push_str(&format!("eq {e}\n"));
        }
        for e in &self.ineqs {
            out.push_str(&format!("ineq {e}\n"));
        }
        out
    }

    pub(crate) fn finish(&self) -> Result<System, GenError> {
        Ok(crate::parse_system(&self.render())?)
    }
}

/// `(parameter.txt, parametricSys.txt)` contents for a family directory:
/// the parameter names with their sampling rule, and the equations with
/// parameters left symbolic.
pub fn family_files(family: &str) -> Option<(&'static str, &'static str)> {
    Some(match family {
        "robot" => (
            "m: link count\nl_i: integer link lengths in [1, 10]\nth_i, ph_i: configuration angles in [-pi, pi]\nfixed: end point plus selected intermediate coordinates\n",
            "planar: x_j - sum_{i<=j} l_i*cos(th_i) = 0, y_j - sum_{i<=j} l_i*sin(th_i) = 0, j = 1..m\nspatial: x_j - sum l_i*cos(th_i)*cos(ph_i), y_j - sum l_i*cos(th_i)*sin(ph_i), z_j - sum l_i*sin(th_i)\npolynomial forms replace cos/sin by c_i, s_i (ct_i, st_i, cp_i, sp_i) with c_i^2 + s_i^2 = 1\n",
        ),
        "stewart" => (
            "L2..L6 ~ U[0.5, 2]\na21, b21 ~ U[0, 2]\na31, a32, b31, b32, a41..b63 ~ U[0, 1.5]\n",
            "|n + b_k1*e1 + b_k2*e2 + b_k3*e3 - (a_k1, a_k2, a_k3)|^2 - L_k^2 = 0, k = 2..6, e3 = e1 x e2\n|n|^2 = 1, |e1|^2 = 1, |e2|^2 = 1, e1.e2 = 0\n",
        ),
        "kuramoto" => (
            "N: oscillator count\nomega_i ~ N(0, 0.3^2), i = 1..N-1\n",
            "omega_i - (1/N)*sum_{j} (s_i*c_j - s_j*c_i) = 0, c_i^2 + s_i^2 - 1 = 0, i = 1..N-1, c_N = 1, s_N = 0\n",
        ),
        "flash" => (
            "dp, pF, xF1, FF: operating inputs swept over the config grid\nT, TF, D, H, HL, vEL, zV, lambda, v, R: fixed constants\npsat_i, h_i: component correlations from the config\n",
            "phase equilibrium, Wilson activity coefficients, material and energy balances, holdup volumes and vessel geometry (28 equations)\n",
        ),
        "orbit" => (
            "p_i ~ U([-10, 10]^3), u_i = z_i/|z_i| with z_i standard normal, i = 1..5\n",
            "|w|^2 = 1, lam^2*|w x e1|^2 = 1, w.(p_i + rho_i*u_i) = 0\na*x_i^2 + b*x_i*y_i + c*y_i^2 + d*x_i + e*y_i + 1 = 0 with x_i = r_i.v, y_i = r_i.v'\ne^2 - d^2 + 4*a - 4*c = 0, d*e - 2*b = 0, optionally b^2 - 4*a*c < 0\n",
        ),
        _ => return None,
    })
}

/// Max over equations of |f_i(x)| under floating-point evaluation.
pub fn max_residual(sys: &System, x: &[f64]) -> f64 {
    sys.residual(x).iter().fold(0.0f64, |m, r| m.max(r.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_literals_are_wrapped() {
        assert_eq!(num(-2.5), "(-2.5)");
        assert_eq!(num(3.0), "3");
        assert_eq!(num(0.0), "0");
    }

    #[test]
    fn builder_round_trips_through_parser() {
        let mut t = SysText::new("demo");
        t.meta("family", "demo");
        t.var("x", -1.0, 1.0);
        t.var_text("t", "-pi", "pi");
        t.eq(format!("x - {}", num(-0.5)));
        t.eq("sin(t)");
        let sys = t.finish().unwrap();
        assert_eq!(sys.dim(), 2);
        assert_eq!(sys.metadata()["family"], "demo");
        assert!(max_residual(&sys, &[-0.5, 0.0]) < 1e-15);
    }
}

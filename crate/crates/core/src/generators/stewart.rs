//! Forward kinematics of the general Stewart platform.
//!
//! Unknowns are the rod direction n and the platform axes e₁, e₂ in base
//! coordinates; e₃ = e₁ × e₂ is substituted. Rod 1 has unit length, which is
//! the ‖n‖ = 1 equation.

use rand::Rng;

use super::{num, rng, GenError, Instance, SysText, RNG_ALGORITHM};

/// Anchor coordinates follow the triangular pattern: point 2 has one
/// coordinate, point 3 two, points 4..6 three, in both frames.
#[derive(Debug, Clone, PartialEq)]
pub struct StewartParams {
    /// L₂..L₆.
    pub lengths: [f64; 5],
    /// a_{i1..} for i = 2..6, in base coordinates.
    pub a: [Vec<f64>; 5],
    /// b_{i1..} for i = 2..6, in platform coordinates.
    pub b: [Vec<f64>; 5],
    pub seed: u64,
}

fn anchor_len(i: usize) -> usize {
    (i + 1).min(3)
}

impl StewartParams {
    /// Samples L ~ U[0.5, 2], a₂₁, b₂₁ ~ U[0, 2] and the remaining anchor
    /// coordinates ~ U[0, 1.5], in the order L₂..L₆, a₂₁, b₂₁, a₃₁, a₃₂,
    /// b₃₁, b₃₂, a₄₁, …, b₆₃.
    pub fn sample(seed: u64) -> StewartParams {
        let mut r = rng(seed);
        let mut lengths = [0.0; 5];
        for l in lengths.iter_mut() {
            *l = r.random_range(0.5..=2.0);
        }
        let mut a: [Vec<f64>; 5] = Default::default();
        let mut b: [Vec<f64>; 5] = Default::default();
        for k in 0..5 {
            let hi = if k == 0 { 2.0 } else { 1.5 };
            for _ in 0..anchor_len(k + 1) {
                a[k].push(r.random_range(0.0..=hi));
            }
            for _ in 0..anchor_len(k + 1) {
                b[k].push(r.random_range(0.0..=hi));
            }
        }
        StewartParams { lengths, a, b, seed }
    }

    fn validate(&self) -> Result<(), GenError> {
        for k in 0..5 {
            if self.a[k].len() != anchor_len(k + 1) || self.b[k].len() != anchor_len(k + 1) {
                return Err(GenError::Invalid(format!("anchor {} needs {} coordinates", k + 2, anchor_len(k + 1))));
            }
        }
        if self.lengths.iter().any(|l| !(*l > 0.0)) {
            return Err(GenError::Invalid("rod lengths must be positive".into()));
        }
        Ok(())
    }
}

const E3: [&str; 3] = ["(e12*e23 - e13*e22)", "(e13*e21 - e11*e23)", "(e11*e22 - e12*e21)"];

pub fn gen_stewart(p: &StewartParams) -> Result<Instance, GenError> {
    p.validate()?;
    let mut t = SysText::new(format!("stewart_s{}", p.seed));
    t.meta("family", "stewart");
    t.meta("seed", p.seed);
    t.meta("rng", RNG_ALGORITHM);
    for v in ["n1", "n2", "n3", "e11", "e12", "e13", "e21", "e22", "e23"] {
        t.var(v, -1.0, 1.0);
    }
    for k in 0..5 {
        let mut comps = Vec::new();
        for axis in 0..3 {
            let mut s = format!("n{}", axis + 1);
            for (q, bq) in p.b[k].iter().enumerate() {
                let e = match q {
                    0 => format!("e1{}", axis + 1),
                    1 => format!("e2{}", axis + 1),
                    _ => E3[axis].to_string(),
                };
                s.push_str(&format!(" + {}*{e}", num(*bq)));
            }
            if let Some(aq) = p.a[k].get(axis) {
                s.push_str(&format!(" - {}", num(*aq)));
            }
            comps.push(format!("({s})^2"));
        }
        t.eq(format!("{} - {}^2", comps.join(" + "), num(p.lengths[k])));
    }
    t.eq("n1^2 + n2^2 + n3^2 - 1");
    t.eq("e11^2 + e12^2 + e13^2 - 1");
    t.eq("e21^2 + e22^2 + e23^2 - 1");
    t.eq("e11*e21 + e12*e22 + e13*e23");
    Ok(Instance { system: t.finish()?, witness: None })
}

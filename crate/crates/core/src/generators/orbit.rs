//! Conic with a focus at the origin through five observed lines of sight.
//!
//! Unknowns: the orbital-plane normal w, λ′ = 1/‖w × e₁‖, the line
//! parameters ρ₁..ρ₅ and the conic coefficients a..e in the plane frame
//! v′ = λ′(w × e₁), v = v′ × w.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{num, rng, GenError, Instance, SysText, RNG_ALGORITHM};

pub const ORBIT_VARIABLES: [&str; 14] =
    ["w1", "w2", "w3", "lam", "rho1", "rho2", "rho3", "rho4", "rho5", "a", "b", "c", "d", "e"];

/// Box half-widths for the variables whose range is open-ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitBounds {
    /// λ′ ∈ [1, lambda_max].
    pub lambda_max: f64,
    /// ρᵢ ∈ [−rho_max, rho_max].
    pub rho_max: f64,
    /// a..e ∈ [−coef_max, coef_max].
    pub coef_max: f64,
}

impl Default for OrbitBounds {
    fn default() -> Self {
        OrbitBounds { lambda_max: 1e6, rho_max: 100.0, coef_max: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitParams {
    /// Observer positions pᵢ.
    pub p: [[f64; 3]; 5],
    /// Unit sight directions uᵢ.
    pub u: [[f64; 3]; 5],
    /// Adds b² − 4ac < 0.
    pub elliptic: bool,
    pub bounds: OrbitBounds,
    pub seed: u64,
}

fn normalize(z: [f64; 3]) -> [f64; 3] {
    let n = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
    [z[0] / n, z[1] / n, z[2] / n]
}

impl OrbitParams {
    /// pᵢ ~ U([−10, 10]³), uᵢ = zᵢ/‖zᵢ‖ with zᵢ standard normal.
    pub fn sample(seed: u64) -> OrbitParams {
        let mut r = rng(seed);
        let mut p = [[0.0; 3]; 5];
        for pi in p.iter_mut() {
            for x in pi.iter_mut() {
                *x = r.random_range(-10.0..=10.0);
            }
        }
        let mut u = [[0.0; 3]; 5];
        for ui in u.iter_mut() {
            let z: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut r));
            *ui = normalize(z);
        }
        OrbitParams { p, u, elliptic: true, bounds: OrbitBounds::default(), seed }
    }
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub fn gen_orbit(p: &OrbitParams) -> Result<Instance, GenError> {
    for (i, u) in p.u.iter().enumerate() {
        if (dot(*u, *u).sqrt() - 1.0).abs() > 1e-12 {
            return Err(GenError::Invalid(format!("sight direction {} is not a unit vector", i + 1)));
        }
    }
    let bd = &p.bounds;
    if !(bd.lambda_max > 1.0 && bd.rho_max > 0.0 && bd.coef_max > 0.0) {
        return Err(GenError::Invalid("orbit bounds must be positive with lambda_max > 1".into()));
    }
    let mut t = SysText::new(format!("orbit_s{}", p.seed));
    t.meta("family", "orbit");
    t.meta("seed", p.seed);
    t.meta("rng", RNG_ALGORITHM);
    t.meta("elliptic", p.elliptic);
    t.var("w1", 0.0, 1.0);
    t.var("w2", -1.0, 1.0);
    t.var("w3", -1.0, 1.0);
    t.var("lam", 1.0, bd.lambda_max);
    for i in 1..=5 {
        t.var(format!("rho{i}"), -bd.rho_max, bd.rho_max);
    }
    for v in ["a", "b", "c", "d", "e"] {
        t.var(v, -bd.coef_max, bd.coef_max);
    }
    t.eq("w1^2 + w2^2 + w3^2 - 1");
    t.eq("lam^2*(w2^2 + w3^2) - 1");
    let r = |i: usize, k: usize| format!("({} + rho{}*{})", num(p.p[i][k]), i + 1, num(p.u[i][k]));
    for i in 0..5 {
        t.eq(format!("w1*{} + w2*{} + w3*{}", r(i, 0), r(i, 1), r(i, 2)));
    }
    for i in 0..5 {
        // x = r·v, y = r·v′ with v = λ′(w2² + w3², −w1w2, −w1w3), v′ = λ′(0, w3, −w2)
        let x = format!("lam*((w2^2 + w3^2)*{} - w1*w2*{} - w1*w3*{})", r(i, 0), r(i, 1), r(i, 2));
        let y = format!("lam*(w3*{} - w2*{})", r(i, 1), r(i, 2));
        t.eq(format!("a*({x})^2 + b*({x})*({y}) + c*({y})^2 + d*({x}) + e*({y}) + 1"));
    }
    t.eq("e^2 - d^2 + 4*a - 4*c");
    t.eq("d*e - 2*b");
    if p.elliptic {
        t.ineq("b^2 - 4*a*c < 0");
    }
    Ok(Instance { system: t.finish()?, witness: None })
}

/// An instance built around a known ellipse, with its root.
#[derive(Debug, Clone)]
pub struct OrbitConstruction {
    pub params: OrbitParams,
    /// Values of the 14 unknowns in `ORBIT_VARIABLES` order.
    pub root: [f64; 14],
    pub semi_latus: f64,
    pub eccentricity: f64,
}

impl OrbitConstruction {
    pub fn conic(&self) -> [f64; 5] {
        std::array::from_fn(|k| self.root[9 + k])
    }
}

/// Samples a plane normal with w₁ ≥ 0.2 and ‖(w₂, w₃)‖ ≥ 0.3, an ellipse
/// r = ℓ/(1 + ε cos(ν − ω)) in that plane, five points on it and random
/// sight directions; each observer sits at rᵢ − tᵢuᵢ with tᵢ ∈ [1, 10].
pub fn constructed_orbit(seed: u64) -> OrbitConstruction {
    let mut g = rng(seed);
    let w = loop {
        let z: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut g));
        let w = normalize(z);
        let w = if w[0] < 0.0 { [-w[0], -w[1], -w[2]] } else { w };
        if w[0] >= 0.2 && (w[1] * w[1] + w[2] * w[2]).sqrt() >= 0.3 {
            break w;
        }
    };
    let lam = 1.0 / (w[1] * w[1] + w[2] * w[2]).sqrt();
    let vp = {
        let c = cross(w, [1.0, 0.0, 0.0]);
        [lam * c[0], lam * c[1], lam * c[2]]
    };
    let v = cross(vp, w);
    let ell: f64 = g.random_range(2.0..6.0);
    let ecc: f64 = g.random_range(0.1..0.7);
    let om: f64 = g.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let (co, so) = (om.cos(), om.sin());
    let l2 = ell * ell;
    let conic = [
        -(1.0 - ecc * ecc * co * co) / l2,
        2.0 * ecc * ecc * co * so / l2,
        -(1.0 - ecc * ecc * so * so) / l2,
        -2.0 * ecc * co / ell,
        -2.0 * ecc * so / ell,
    ];
    let mut p = [[0.0; 3]; 5];
    let mut u = [[0.0; 3]; 5];
    let mut ts = [0.0; 5];
    for i in 0..5 {
        // spread the true anomalies so the five points are well separated
        let nu = om + (i as f64 + g.random_range(0.1..0.9)) * 2.0 * std::f64::consts::PI / 5.0;
        let rad = ell / (1.0 + ecc * (nu - om).cos());
        let (x, y) = (rad * nu.cos(), rad * nu.sin());
        let pt = [x * v[0] + y * vp[0], x * v[1] + y * vp[1], x * v[2] + y * vp[2]];
        let z: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut g));
        u[i] = normalize(z);
        ts[i] = g.random_range(1.0..10.0);
        p[i] = std::array::from_fn(|k| pt[k] - ts[i] * u[i][k]);
    }
    let mut root = [0.0; 14];
    root[..3].copy_from_slice(&w);
    root[3] = lam;
    root[4..9].copy_from_slice(&ts);
    root[9..].copy_from_slice(&conic);
    let params = OrbitParams { p, u, elliptic: true, bounds: OrbitBounds::default(), seed };
    OrbitConstruction { params, root, semi_latus: ell, eccentricity: ecc }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::max_residual;

    #[test]
    fn constructed_root_solves_the_system() {
        for seed in 0..20 {
            let c = constructed_orbit(seed);
            let sys = gen_orbit(&c.params).unwrap().system;
            assert_eq!(sys.variables(), ORBIT_VARIABLES);
            assert_eq!(sys.dim(), 14);
            assert_eq!(sys.inequalities().len(), 1);
            assert!(sys.initial_box().contains_point(&c.root), "seed {seed}");
            assert!(max_residual(&sys, &c.root) < 1e-8, "seed {seed}: {}", max_residual(&sys, &c.root));
            let [a, b, cc, _, _] = c.conic();
            assert!(b * b - 4.0 * a * cc < 0.0);
        }
    }

    #[test]
    fn sampled_directions_are_unit() {
        let p = OrbitParams::sample(4);
        for u in p.u {
            assert!((dot(u, u) - 1.0).abs() < 1e-12);
        }
        assert!(p.p.iter().flatten().all(|x| x.abs() <= 10.0));
        let mut bad = p.clone();
        bad.u[0] = [1.0, 1.0, 0.0];
        assert!(gen_orbit(&bad).is_err());
        let a = gen_orbit(&p).unwrap().system.to_text();
        assert_eq!(a, gen_orbit(&OrbitParams::sample(4)).unwrap().system.to_text());
    }
}

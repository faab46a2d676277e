//! Reference computations for the integration tests. Nothing here goes
//! through the crate's interval code: residuals and Jacobians are written out
//! by hand or taken by finite differences in plain floating point.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Square system given by a residual closure; the Jacobian is taken by
/// central differences unless supplied.
pub struct PlainSystem<'a> {
    pub dim: usize,
    pub f: Box<dyn Fn(&[f64]) -> Vec<f64> + 'a>,
    pub jac: Option<Box<dyn Fn(&[f64]) -> DMatrix<f64> + 'a>>,
}

impl<'a> PlainSystem<'a> {
    pub fn new(dim: usize, f: impl Fn(&[f64]) -> Vec<f64> + 'a) -> Self {
        PlainSystem { dim, f: Box::new(f), jac: None }
    }

    pub fn with_jacobian(mut self, j: impl Fn(&[f64]) -> DMatrix<f64> + 'a) -> Self {
        self.jac = Some(Box::new(j));
        self
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        if let Some(j) = &self.jac {
            return j(x);
        }
        let n = self.dim;
        let mut out = DMatrix::zeros(n, n);
        let mut xp = x.to_vec();
        for k in 0..n {
            let h = 1e-7 * x[k].abs().max(1.0);
            xp[k] = x[k] + h;
            let fp = (self.f)(&xp);
            xp[k] = x[k] - h;
            let fm = (self.f)(&xp);
            xp[k] = x[k];
            for i in 0..n {
                out[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        out
    }
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Newton with backtracking on ‖F‖∞. Returns the final point when the
/// residual drops below `tol`.
pub fn damped_newton(sys: &PlainSystem, x0: &[f64], tol: f64, max_iter: usize) -> Option<Vec<f64>> {
    let mut x = x0.to_vec();
    let mut fx = (sys.f)(&x);
    let mut nf = inf_norm(&fx);
    for _ in 0..max_iter {
        if !nf.is_finite() {
            return None;
        }
        if nf < tol {
            return Some(x);
        }
        let j = sys.jacobian(&x);
        let rhs = DVector::from_iterator(sys.dim, fx.iter().map(|v| -v));
        let step = j.lu().solve(&rhs)?;
        let mut t = 1.0;
        loop {
            let xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + t * s).collect();
            let fxn = (sys.f)(&xn);
            let nfn = inf_norm(&fxn);
            if nfn < nf || t < 1e-6 {
                x = xn;
                fx = fxn;
                nf = nfn;
                break;
            }
            t *= 0.5;
        }
    }
    (nf < tol).then_some(x)
}

/// A few full Newton steps from `x`, keeping the best iterate.
pub fn newton_polish(sys: &PlainSystem, x: &[f64]) -> Vec<f64> {
    let mut best = x.to_vec();
    let mut nbest = inf_norm(&(sys.f)(x));
    let mut cur = x.to_vec();
    for _ in 0..20 {
        let j = sys.jacobian(&cur);
        let rhs = DVector::from_iterator(sys.dim, (sys.f)(&cur).iter().map(|v| -v));
        let Some(step) = j.lu().solve(&rhs) else { break };
        cur = cur.iter().zip(step.iter()).map(|(a, s)| a + s).collect();
        let n = inf_norm(&(sys.f)(&cur));
        if !(n < nbest) {
            break;
        }
        best = cur.clone();
        nbest = n;
    }
    best
}

/// Groups points closer than `tol` in the max norm; returns one
/// representative per group.
pub fn cluster(points: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut reps: Vec<Vec<f64>> = Vec::new();
    for p in points {
        let near = reps.iter().any(|r| r.iter().zip(p).all(|(a, b)| (a - b).abs() <= tol));
        if !near {
            reps.push(p.clone());
        }
    }
    reps
}

/// Multistart damped Newton from `samples` uniform points of `bounds`.
/// Converged points outside `bounds` are dropped; the rest are clustered.
pub fn multistart(sys: &PlainSystem, bounds: &[(f64, f64)], samples: usize, seed: u64, cluster_tol: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    for _ in 0..samples {
        let x0: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect();
        if let Some(x) = damped_newton(sys, &x0, 1e-13, 60) {
            let x = newton_polish(sys, &x);
            if x.iter().zip(bounds).all(|(v, &(lo, hi))| lo <= *v && *v <= hi) {
                found.push(x);
            }
        }
    }
    cluster(&found, cluster_tol)
}

/// Kuramoto equilibria in angle form: ωᵢ = (1/N) Σⱼ sin(θᵢ − θⱼ) with θ_N = 0.
pub fn kuramoto_angle_system(omega: &[f64]) -> PlainSystem<'_> {
    let n = omega.len() + 1;
    let theta = move |t: &[f64], i: usize| if i == n - 1 { 0.0 } else { t[i] };
    PlainSystem::new(n - 1, move |t: &[f64]| {
        (0..n - 1)
            .map(|i| omega[i] - (0..n).map(|j| (theta(t, i) - theta(t, j)).sin()).sum::<f64>() / n as f64)
            .collect()
    })
    .with_jacobian(move |t: &[f64]| {
        let mut jm = DMatrix::zeros(n - 1, n - 1);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                if i == j {
                    let s: f64 = (0..n).filter(|&k| k != i).map(|k| (theta(t, i) - theta(t, k)).cos()).sum();
                    jm[(i, i)] = -s / n as f64;
                } else {
                    jm[(i, j)] = (theta(t, i) - theta(t, j)).cos() / n as f64;
                }
            }
        }
        jm
    })
}

/// Distinct Kuramoto equilibria as (c₁, s₁, …, c_{N−1}, s_{N−1}).
pub fn kuramoto_oracle(omega: &[f64], samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let sys = kuramoto_angle_system(omega);
    let pi = std::f64::consts::PI;
    let bounds = vec![(-pi, pi); omega.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    for _ in 0..samples {
        let x0: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect();
        if let Some(t) = damped_newton(&sys, &x0, 1e-13, 60) {
            let t = newton_polish(&sys, &t);
            found.push(t.iter().flat_map(|a| [a.cos(), a.sin()]).collect());
        }
    }
    cluster(&found, 1e-8)
}

pub fn parse_omega(meta: &str) -> Vec<f64> {
    meta.split_whitespace().map(|w| w.parse().expect("omega value")).collect()
}

/// Elbow-up and elbow-down angles of a two-link arm reaching (x, y).
pub fn two_link_ik(l1: f64, l2: f64, x: f64, y: f64) -> Vec<[f64; 2]> {
    let c2 = (x * x + y * y - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
    if c2.abs() > 1.0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for s2 in [(1.0 - c2 * c2).sqrt(), -(1.0 - c2 * c2).sqrt()] {
        let q2 = s2.atan2(c2);
        let q1 = y.atan2(x) - (l2 * s2).atan2(l1 + l2 * c2);
        // absolute angle of link 2
        let th2 = q1 + q2;
        let wrap = |a: f64| (a + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
        out.push([wrap(q1), wrap(th2)]);
    }
    out.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    out
}

/// Orbit residuals written from the geometric definitions: the five sight
/// lines meet the plane with normal w, and the plane coordinates satisfy the
/// conic with a focus at the origin.
pub fn orbit_residual(p: &[[f64; 3]; 5], u: &[[f64; 3]; 5], x: &[f64]) -> Vec<f64> {
    let w = [x[0], x[1], x[2]];
    let lam = x[3];
    let (a, b, c, d, e) = (x[9], x[10], x[11], x[12], x[13]);
    let cross = |s: [f64; 3], t: [f64; 3]| [s[1] * t[2] - s[2] * t[1], s[2] * t[0] - s[0] * t[2], s[0] * t[1] - s[1] * t[0]];
    let dot = |s: [f64; 3], t: [f64; 3]| s[0] * t[0] + s[1] * t[1] + s[2] * t[2];
    let we1 = cross(w, [1.0, 0.0, 0.0]);
    let vp = [lam * we1[0], lam * we1[1], lam * we1[2]];
    let v = cross(vp, w);
    let mut out = vec![dot(w, w) - 1.0, lam * lam * dot(we1, we1) - 1.0];
    let pts: Vec<[f64; 3]> = (0..5).map(|i| std::array::from_fn(|k| p[i][k] + x[4 + i] * u[i][k])).collect();
    for r in &pts {
        out.push(dot(w, *r));
    }
    for r in &pts {
        let (xi, yi) = (dot(*r, v), dot(*r, vp));
        out.push(a * xi * xi + b * xi * yi + c * yi * yi + d * xi + e * yi + 1.0);
    }
    out.push(e * e - d * d + 4.0 * a - 4.0 * c);
    out.push(d * e - 2.0 * b);
    out
}

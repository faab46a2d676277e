//! Equilibria of the uniformly coupled Kuramoto model in (cᵢ, sᵢ) = (cos θᵢ,
//! sin θᵢ) coordinates with the reference oscillator pinned at θ_N = 0.

use rand_distr::{Distribution, Normal};

use super::{num, rng, GenError, Instance, SysText, RNG_ALGORITHM};

#[derive(Debug, Clone)]
pub struct KuramotoParams {
    pub n: usize,
    /// ω₁..ω_{N−1}; drawn from N(0, 0.3²) when absent.
    pub omega: Option<Vec<f64>>,
    pub seed: u64,
}

impl KuramotoParams {
    pub fn new(n: usize, seed: u64) -> KuramotoParams {
        KuramotoParams { n, omega: None, seed }
    }

    pub fn with_omega(n: usize, omega: Vec<f64>) -> KuramotoParams {
        KuramotoParams { n, omega: Some(omega), seed: 0 }
    }
}

pub const OMEGA_STD: f64 = 0.3;

pub fn gen_kuramoto(p: &KuramotoParams) -> Result<Instance, GenError> {
    let n = p.n;
    if n < 2 {
        return Err(GenError::Invalid(format!("Kuramoto needs N >= 2, got {n}")));
    }
    let omega = match &p.omega {
        Some(w) if w.len() == n - 1 => w.clone(),
        Some(_) => return Err(GenError::Invalid(format!("need {} frequencies", n - 1))),
        None => {
            let mut r = rng(p.seed);
            let dist = Normal::new(0.0, OMEGA_STD).expect("valid normal");
            (0..n - 1).map(|_| dist.sample(&mut r)).collect()
        }
    };
    let mut t = SysText::new(format!("kuramoto_n{n}_s{}", p.seed));
    t.meta("family", "kuramoto");
    t.meta("N", n);
    t.meta("seed", p.seed);
    t.meta("rng", RNG_ALGORITHM);
    t.meta("omega", omega.iter().map(|w| super::fmt_f64(*w)).collect::<Vec<_>>().join(" "));
    for i in 1..n {
        t.var(format!("c{i}"), -1.0, 1.0);
        t.var(format!("s{i}"), -1.0, 1.0);
    }
    for i in 1..n {
        let mut terms = Vec::new();
        for j in 1..n {
            if j != i {
                terms.push(format!("s{i}*c{j} - s{j}*c{i}"));
            }
        }
        // j = N contributes s_i*1 - 0*c_i
        terms.push(format!("s{i}"));
        t.eq(format!("{} - ({})/{n}", num(omega[i - 1]), terms.join(" + ")));
        t.eq(format!("c{i}^2 + s{i}^2 - 1"));
    }
    Ok(Instance { system: t.finish()?, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::max_residual;

    #[test]
    fn two_oscillators() {
        let sys = gen_kuramoto(&KuramotoParams::with_omega(2, vec![0.0])).unwrap().system;
        assert_eq!(sys.variables(), ["c1", "s1"]);
        assert!(max_residual(&sys, &[1.0, 0.0]) == 0.0);
        assert!(max_residual(&sys, &[-1.0, 0.0]) == 0.0);
        // ω₁ = s₁/2 forces s₁ = 0.4 for ω₁ = 0.2
        let sys = gen_kuramoto(&KuramotoParams::with_omega(2, vec![0.2])).unwrap().system;
        let c = (1.0f64 - 0.16).sqrt();
        assert!(max_residual(&sys, &[c, 0.4]) < 1e-15);
    }

    #[test]
    fn phase_locked_state_solves_three_oscillators() {
        // pick angles, derive the frequencies that make them an equilibrium
        let th = [0.4f64, -1.1, 0.0];
        let n = 3.0;
        let omega: Vec<f64> = (0..2).map(|i| (0..3).map(|j| (th[i] - th[j]).sin()).sum::<f64>() / n).collect();
        let sys = gen_kuramoto(&KuramotoParams::with_omega(3, omega)).unwrap().system;
        let x = [th[0].cos(), th[0].sin(), th[1].cos(), th[1].sin()];
        assert!(max_residual(&sys, &x) < 1e-14);
    }

    #[test]
    fn sampled_instances_are_square_and_seeded() {
        let a = gen_kuramoto(&KuramotoParams::new(6, 5)).unwrap().system;
        assert_eq!(a.dim(), 10);
        assert!(a.is_square());
        assert_eq!(a.metadata()["rng"], RNG_ALGORITHM);
        let b = gen_kuramoto(&KuramotoParams::new(6, 5)).unwrap().system;
        assert_eq!(a.to_text(), b.to_text());
        assert!(gen_kuramoto(&KuramotoParams::new(1, 0)).is_err());
    }
}

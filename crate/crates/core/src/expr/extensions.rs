//! Horner and mean-value interval extensions.

use std::collections::BTreeMap;

use super::flat::Expression;
use super::tree::Expr;
use crate::interval::{Interval, IntervalBox, IntervalError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtensionError {
    #[error("expression is not a polynomial")]
    NotPolynomial,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Multivariate polynomial: exponent vector -> coefficient enclosure.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Interval>,
}

impl Polynomial {
    fn constant(nvars: usize, c: Interval) -> Polynomial {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nvars], c);
        Polynomial { nvars, terms }
    }

    fn var(nvars: usize, i: usize) -> Polynomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Interval::ONE);
        Polynomial { nvars, terms }
    }

    fn add(mut self, other: &Polynomial, sign: f64) -> Polynomial {
        for (e, c) in &other.terms {
            let c = if sign < 0.0 { -*c } else { *c };
            let slot = self.terms.entry(e.clone()).or_insert(Interval::ZERO);
            *slot = *slot + c;
        }
        self
    }

    fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms: BTreeMap<Vec<u32>, Interval> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = terms.entry(e).or_insert(Interval::ZERO);
                *slot = *slot + *ca * *cb;
            }
        }
        Polynomial { nvars: self.nvars, terms }
    }

    fn scale(mut self, c: Interval) -> Polynomial {
        for v in self.terms.values_mut() {
            *v = *v * c;
        }
        self
    }

    /// Expands an expression tree; fails on any non-polynomial node.
    pub fn from_expr(e: &Expr, nvars: usize) -> Result<Polynomial, ExtensionError> {
        Ok(match e {
            Expr::Const(c) => Polynomial::constant(nvars, *c),
            Expr::Var(i) => Polynomial::var(nvars, *i),
            Expr::Neg(a) => Polynomial::from_expr(a, nvars)?.scale(Interval::point(-1.0)),
            Expr::Add(a, b) => Polynomial::from_expr(a, nvars)?.add(&Polynomial::from_expr(b, nvars)?, 1.0),
            Expr::Sub(a, b) => Polynomial::from_expr(a, nvars)?.add(&Polynomial::from_expr(b, nvars)?, -1.0),
            Expr::Mul(a, b) => Polynomial::from_expr(a, nvars)?.mul(&Polynomial::from_expr(b, nvars)?),
            Expr::Div(a, b) => match b.as_const() {
                Some(c) if !c.contains_zero() => Polynomial::from_expr(a, nvars)?.scale(Interval::ONE / c),
                _ => return Err(ExtensionError::NotPolynomial),
            },
            Expr::PowInt(a, k) if *k >= 0 => {
                let base = Polynomial::from_expr(a, nvars)?;
                let mut acc = Polynomial::constant(nvars, Interval::ONE);
                for _ in 0..*k {
                    acc = acc.mul(&base);
                }
                acc
            }
            _ => return Err(ExtensionError::NotPolynomial),
        })
    }

    /// Evaluates in nested (Horner) form, nesting variables in index order.
    pub fn eval_horner(&self, x: &[Interval]) -> Interval {
        let terms: Vec<(&[u32], Interval)> = self.terms.iter().map(|(e, c)| (e.as_slice(), *c)).collect();
        horner(&terms, 0, x)
    }
}

fn horner(terms: &[(&[u32], Interval)], from: usize, x: &[Interval]) -> Interval {
    let Some(v) = (from..x.len()).find(|&v| terms.iter().any(|(e, _)| e[v] > 0)) else {
        return terms.iter().fold(Interval::ZERO, |acc, (_, c)| acc + *c);
    };
    let mut groups: BTreeMap<u32, Vec<(&[u32], Interval)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[v]).or_default().push((e, c));
    }
    let mut acc: Option<(u32, Interval)> = None;
    for (&k, group) in groups.iter().rev() {
        let q = horner(group, v + 1, x);
        acc = Some(match acc {
            None => (k, q),
            Some((prev, a)) => (k, a * x[v].powi((prev - k) as i32) + q),
        });
    }
    let (kmin, a) = acc.expect("at least one group");
    if kmin > 0 {
        a * x[v].powi(kmin as i32)
    } else {
        a
    }
}

/// Horner-form enclosure of a polynomial expression over `b`.
pub fn eval_horner(e: &Expression, b: &IntervalBox) -> Result<Interval, ExtensionError> {
    let p = Polynomial::from_expr(e.tree(), b.dim())?;
    Ok(p.eval_horner(b.as_slice()))
}

/// Mean-value form `f(m) + Σ ∂f/∂xᵢ(b)·(bᵢ − mᵢ)` with `m = mid(b)`.
/// `grad[i]` must be the partial derivative with respect to variable `i`.
pub fn eval_mean_value(e: &Expression, grad: &[Expression], b: &IntervalBox) -> Result<Interval, ExtensionError> {
    let m = b.checked_mid()?;
    let mut acc = e.eval_at(&m);
    for v in e.variables() {
        let d = grad[*v].eval(b);
        acc = acc + d * (b[*v] - Interval::point(m[*v]));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_system;

    #[test]
    fn horner_of_square() {
        let s = parse_system("vars x; box x in [-1, 0]; eq x^2 + 2*x + 1").unwrap();
        let e = s.equations()[0].expr();
        assert_eq!(eval_horner(e, s.initial_box()).unwrap(), Interval::new(-1.0, 1.0));
    }

    #[test]
    fn horner_identity_and_constant() {
        let s = parse_system("nonsquare; vars x; box x in [-3, 5]; eq x; eq 3").unwrap();
        assert_eq!(eval_horner(s.equations()[0].expr(), s.initial_box()).unwrap(), Interval::new(-3.0, 5.0));
        assert_eq!(eval_horner(s.equations()[1].expr(), s.initial_box()).unwrap(), Interval::point(3.0));
    }

    #[test]
    fn horner_rejects_transcendental() {
        let s = parse_system("vars x; box x in [0, 1]; eq sin(x)").unwrap();
        assert_eq!(eval_horner(s.equations()[0].expr(), s.initial_box()), Err(ExtensionError::NotPolynomial));
    }

    #[test]
    fn mean_value_of_square() {
        let s = parse_system("vars x; box x in [1, 3]; eq x^2").unwrap();
        let c = &s.equations()[0];
        let r = eval_mean_value(c.expr(), c.gradient(), s.initial_box()).unwrap();
        assert_eq!(r, Interval::new(-2.0, 10.0));
    }

    #[test]
    fn mean_value_needs_bounded_box() {
        let s = parse_system("vars x; box x in [1, inf]; eq x^2").unwrap();
        let c = &s.equations()[0];
        assert!(eval_mean_value(c.expr(), c.gradient(), s.initial_box()).is_err());
    }
}

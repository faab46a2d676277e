use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use super::flat::Expression;
use super::tree::{fmt_f64, Expr};
use crate::interval::{Interval, IntervalBox, IntervalMatrix};

/// Relation of a constraint `expr ∘ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Relation> {
        Some(match s {
            "=" => Relation::Eq,
            "<" => Relation::Lt,
            "<=" => Relation::Le,
            ">" => Relation::Gt,
            ">=" => Relation::Ge,
            _ => return None,
        })
    }

    /// Closed set the constraint's value must lie in (strict relations are
    /// relaxed to their closure for contraction).
    pub fn feasible_set(self) -> Interval {
        match self {
            Relation::Eq => Interval::ZERO,
            Relation::Lt | Relation::Le => Interval::NONPOS,
            Relation::Gt | Relation::Ge => Interval::NONNEG,
        }
    }

    /// `Some(true)` if every value in `v` satisfies the relation,
    /// `Some(false)` if none does, `None` when undecided.
    pub fn decide(self, v: Interval) -> Option<bool> {
        if v.is_empty() {
            return Some(false);
        }
        let (lo, hi) = (v.lo(), v.hi());
        match self {
            Relation::Eq => {
                if lo == 0.0 && hi == 0.0 {
                    Some(true)
                } else if lo > 0.0 || hi < 0.0 {
                    Some(false)
                } else {
                    None
                }
            }
            Relation::Lt => tri(hi < 0.0, lo >= 0.0),
            Relation::Le => tri(hi <= 0.0, lo > 0.0),
            Relation::Gt => tri(lo > 0.0, hi <= 0.0),
            Relation::Ge => tri(lo >= 0.0, hi < 0.0),
        }
    }
}

fn tri(all: bool, none: bool) -> Option<bool> {
    if all {
        Some(true)
    } else if none {
        Some(false)
    } else {
        None
    }
}

/// A compiled constraint with its symbolic gradient.
#[derive(Clone, Debug)]
pub struct Constraint {
    expr: Expression,
    rel: Relation,
    grad: Vec<Expression>,
}

impl Constraint {
    pub fn new(tree: Expr, rel: Relation, nvars: usize) -> Constraint {
        let grad = (0..nvars).map(|v| Expression::new(tree.derivative(v))).collect();
        Constraint { expr: Expression::new(tree), rel, grad }
    }

    pub fn expr(&self) -> &Expression {
        &self.expr
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    /// `gradient()[i]` is the partial derivative with respect to variable `i`.
    pub fn gradient(&self) -> &[Expression] {
        &self.grad
    }

    pub fn variables(&self) -> &[usize] {
        self.expr.variables()
    }
}

/// A system of equations `fⱼ(x) = 0` with optional side inequalities.
#[derive(Clone, Debug)]
pub struct System {
    name: String,
    variables: Vec<String>,
    equations: Vec<Constraint>,
    inequalities: Vec<Constraint>,
    initial_box: IntervalBox,
    metadata: BTreeMap<String, String>,
    nonsquare: bool,
}

impl System {
    pub(crate) fn from_parts(
        name: String,
        variables: Vec<String>,
        eqs: Vec<Expr>,
        ineqs: Vec<(Expr, Relation)>,
        initial_box: IntervalBox,
        metadata: BTreeMap<String, String>,
    ) -> System {
        let n = variables.len();
        System {
            name,
            equations: eqs.into_iter().map(|e| Constraint::new(e, Relation::Eq, n)).collect(),
            inequalities: ineqs.into_iter().map(|(e, r)| Constraint::new(e, r, n)).collect(),
            variables,
            initial_box,
            metadata,
            nonsquare: false,
        }
    }

    pub(crate) fn set_nonsquare(&mut self, flag: bool) {
        self.nonsquare = flag;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn equations(&self) -> &[Constraint] {
        &self.equations
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    /// Equations followed by inequalities.
    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.equations.iter().chain(&self.inequalities)
    }

    pub fn initial_box(&self) -> &IntervalBox {
        &self.initial_box
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn is_nonsquare(&self) -> bool {
        self.nonsquare
    }

    pub fn is_square(&self) -> bool {
        self.equations.len() == self.variables.len()
    }

    /// Same system over a different initial box.
    pub fn with_box(&self, b: IntervalBox) -> System {
        assert_eq!(b.dim(), self.dim());
        System { initial_box: b, ..self.clone() }
    }

    pub fn with_metadata(mut self, key: &str, value: &str) -> System {
        self.metadata.insert(key.into(), value.into());
        self
    }

    /// Natural extension of every equation.
    pub fn eval(&self, b: &IntervalBox) -> Vec<Interval> {
        self.equations.iter().map(|c| c.expr.eval(b)).collect()
    }

    /// Rigorous enclosures of `f(x)` at a point.
    pub fn eval_at(&self, x: &[f64]) -> Vec<Interval> {
        self.equations.iter().map(|c| c.expr.eval_at(x)).collect()
    }

    /// Floating-point residuals `f(x)`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.equations.iter().map(|c| c.expr.eval_point(x)).collect()
    }

    /// Interval Jacobian; entry `(j, i)` encloses `∂fⱼ/∂xᵢ` over `b`.
    pub fn jacobian(&self, b: &IntervalBox) -> IntervalMatrix {
        let mut m = IntervalMatrix::zeros(self.equations.len(), self.dim());
        for (j, c) in self.equations.iter().enumerate() {
            for &i in c.variables() {
                m[(j, i)] = c.grad[i].eval(b);
            }
        }
        m
    }

    /// Floating-point Jacobian at a point.
    pub fn jacobian_point(&self, x: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.equations.len(), self.dim());
        for (j, c) in self.equations.iter().enumerate() {
            for &i in c.variables() {
                m[(j, i)] = c.grad[i].eval_point(x);
            }
        }
        m
    }

    /// Renders the system in the text format accepted by [`parse_system`](super::parse_system).
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.name.is_empty() {
            writeln!(f, "name {}", self.name)?;
        }
        for (k, v) in &self.metadata {
            writeln!(f, "meta {k} {v}")?;
        }
        if self.nonsquare {
            writeln!(f, "nonsquare")?;
        }
        writeln!(f, "vars {}", self.variables.join(", "))?;
        for (name, iv) in self.variables.iter().zip(self.initial_box.iter()) {
            writeln!(f, "box {name} in [{}, {}]", fmt_f64(iv.lo()), fmt_f64(iv.hi()))?;
        }
        for c in &self.equations {
            writeln!(f, "eq {}", c.expr.tree().display(&self.variables))?;
        }
        for c in &self.inequalities {
            writeln!(f, "ineq {} {} 0", c.expr.tree().display(&self.variables), c.rel.symbol())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_system;

    #[test]
    fn jacobian_of_circle_line() {
        let s = parse_system("vars x, y; box [0, 1]^2; eq x^2 + y^2 - 1; eq x - y").unwrap();
        let j = s.jacobian(s.initial_box());
        assert_eq!(j[(0, 0)], Interval::new(0.0, 2.0));
        assert_eq!(j[(0, 1)], Interval::new(0.0, 2.0));
        assert_eq!(j[(1, 0)], Interval::ONE);
        assert_eq!(j[(1, 1)], Interval::point(-1.0));
    }

    #[test]
    fn constant_row_is_zero() {
        let s = parse_system("vars x, y; box [0, 1]^2; eq x*y; eq 5").unwrap();
        let j = s.jacobian(s.initial_box());
        assert_eq!(j[(1, 0)], Interval::ZERO);
        assert_eq!(j[(1, 1)], Interval::ZERO);
    }

    #[test]
    fn text_round_trip() {
        let src = "name t\nmeta family test\nvars x, y\nbox x in [-2, 2]\nbox y in [0.1, 3]\neq x^2 - 2*y + sin(x)/3\neq 2^x - (y + 0.1)\nineq x*y - 1 < 0\n";
        let s = parse_system(src).unwrap();
        let text = s.to_text();
        assert_eq!(text, src);
        let again = parse_system(&text).unwrap();
        assert_eq!(again.to_text(), text);
        assert_eq!(again.equations()[0].expr().tree(), s.equations()[0].expr().tree());
    }

    #[test]
    fn relation_decisions() {
        assert_eq!(Relation::Lt.decide(Interval::new(-2.0, -1.0)), Some(true));
        assert_eq!(Relation::Lt.decide(Interval::new(0.0, 1.0)), Some(false));
        assert_eq!(Relation::Lt.decide(Interval::new(-1.0, 1.0)), None);
        assert_eq!(Relation::Ge.decide(Interval::new(0.0, 1.0)), Some(true));
    }
}

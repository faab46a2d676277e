use std::fmt;

use crate::interval::{Interval, PI_IV};

/// Elementary unary functions available in system text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
    Tanh,
    Atan,
    /// Sign function; appears as the generalized derivative of `abs`.
    Sign,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Tanh => "tanh",
            Func::Atan => "atan",
            Func::Sign => "sign",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "tanh" => Func::Tanh,
            "atan" => Func::Atan,
            "sign" => Func::Sign,
            _ => return None,
        })
    }

    pub fn apply(self, x: Interval) -> Interval {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
            Func::Tanh => x.tanh(),
            Func::Atan => x.atan(),
            Func::Sign => x.sign(),
        }
    }

    pub fn apply_f64(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
            Func::Tanh => x.tanh(),
            Func::Atan => x.atan(),
            Func::Sign => {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Expression tree over variables indexed by position in the owning system.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// A constant known to lie in the interval; point intervals are exact.
    Const(Interval),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, i32),
    /// Real power `a^b`; with a constant base this is `exp2(b·log2 a)`.
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(x: f64) -> Expr {
        Expr::Const(Interval::point(x))
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn as_const(&self) -> Option<Interval> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_point(&self, v: f64) -> bool {
        matches!(self, Expr::Const(c) if c.is_point() && c.lo() == v)
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            a => Expr::Neg(Box::new(a)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if a.is_point(0.0) {
            return b;
        }
        if b.is_point(0.0) {
            return a;
        }
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            (a, Expr::Neg(b)) => Expr::Sub(Box::new(a), b),
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if b.is_point(0.0) {
            return a;
        }
        if a.is_point(0.0) {
            return Expr::neg(b);
        }
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
            (a, Expr::Neg(b)) => Expr::Add(Box::new(a), b),
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if a.is_point(0.0) || b.is_point(0.0) {
            return Expr::constant(0.0);
        }
        if a.is_point(1.0) {
            return b;
        }
        if b.is_point(1.0) {
            return a;
        }
        if a.is_point(-1.0) {
            return Expr::neg(b);
        }
        if b.is_point(-1.0) {
            return Expr::neg(a);
        }
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if b.is_point(1.0) {
            return a;
        }
        if a.is_point(0.0) {
            return Expr::constant(0.0);
        }
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) if !y.contains_zero() => Expr::Const(x / y),
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn powi(a: Expr, n: i32) -> Expr {
        match n {
            0 => Expr::constant(1.0),
            1 => a,
            _ => match a {
                Expr::Const(c) if n > 0 || !c.contains_zero() => Expr::Const(c.powi(n)),
                a => Expr::PowInt(Box::new(a), n),
            },
        }
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        if let Expr::Const(e) = b {
            if e.is_point() && e.lo().fract() == 0.0 && e.lo().abs() <= i32::MAX as f64 {
                return Expr::powi(a, e.lo() as i32);
            }
        }
        Expr::Pow(Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(f.apply(c)),
            a => Expr::Call(f, Box::new(a)),
        }
    }

    /// Symbolic partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: usize) -> Expr {
        use Expr::*;
        match self {
            Const(_) => Expr::constant(0.0),
            Var(i) => Expr::constant(if *i == v { 1.0 } else { 0.0 }),
            Neg(a) => Expr::neg(a.derivative(v)),
            Add(a, b) => Expr::add(a.derivative(v), b.derivative(v)),
            Sub(a, b) => Expr::sub(a.derivative(v), b.derivative(v)),
            Mul(a, b) => Expr::add(
                Expr::mul(a.derivative(v), (**b).clone()),
                Expr::mul((**a).clone(), b.derivative(v)),
            ),
            Div(a, b) => {
                let da = a.derivative(v);
                let db = b.derivative(v);
                let first = Expr::div(da, (**b).clone());
                if db.is_point(0.0) {
                    first
                } else {
                    let second = Expr::div(Expr::mul((**a).clone(), db), Expr::powi((**b).clone(), 2));
                    Expr::sub(first, second)
                }
            }
            PowInt(a, n) => {
                let inner = Expr::mul(Expr::constant(*n as f64), Expr::powi((**a).clone(), n - 1));
                Expr::mul(inner, a.derivative(v))
            }
            Pow(a, b) => {
                let da = a.derivative(v);
                let db = b.derivative(v);
                if let Const(c) = **a {
                    // d c^b = ln(c) c^b b'
                    let lnc = Expr::Const(c.ln());
                    return Expr::mul(Expr::mul(lnc, self.clone()), db);
                }
                // a^b (b' ln a + b a'/a)
                let t1 = Expr::mul(db, Expr::call(Func::Log, (**a).clone()));
                let t2 = Expr::div(Expr::mul((**b).clone(), da), (**a).clone());
                Expr::mul(self.clone(), Expr::add(t1, t2))
            }
            Call(f, a) => {
                let da = a.derivative(v);
                if da.is_point(0.0) {
                    return Expr::constant(0.0);
                }
                let a = (**a).clone();
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, a),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, a)),
                    Func::Tan => Expr::add(Expr::constant(1.0), Expr::powi(Expr::call(Func::Tan, a), 2)),
                    Func::Exp => Expr::call(Func::Exp, a),
                    Func::Log => return Expr::div(da, a),
                    Func::Sqrt => {
                        return Expr::div(da, Expr::mul(Expr::constant(2.0), Expr::call(Func::Sqrt, a)))
                    }
                    Func::Abs => Expr::call(Func::Sign, a),
                    Func::Tanh => Expr::sub(Expr::constant(1.0), Expr::powi(Expr::call(Func::Tanh, a), 2)),
                    Func::Atan => {
                        return Expr::div(da, Expr::add(Expr::constant(1.0), Expr::powi(a, 2)))
                    }
                    Func::Sign => Expr::constant(0.0),
                };
                Expr::mul(outer, da)
            }
        }
    }

    /// Sorted, deduplicated variable indices appearing in the tree.
    pub fn variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit_vars(&mut |i| out.push(i));
        out.sort_unstable();
        out.dedup();
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(usize)) {
        use Expr::*;
        match self {
            Const(_) => {}
            Var(i) => f(*i),
            Neg(a) | PowInt(a, _) | Call(_, a) => a.visit_vars(f),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Renders with variable names; the output parses back to an equal tree.
    pub fn display<'a>(&'a self, names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if c.lo() < 0.0 && c.is_point() => 3,
            Expr::PowInt(..) | Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// Shortest decimal text that parses back to `x`.
pub fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        return "inf".into();
    }
    if x == f64::NEG_INFINITY {
        return "-inf".into();
    }
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

impl ExprDisplay<'_> {
    fn write(&self, e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match e {
            Expr::Const(c) => write_const(*c, f),
            Expr::Var(i) => match self.names.get(*i) {
                Some(n) => f.write_str(n),
                None => write!(f, "_v{i}"),
            },
            Expr::Neg(a) => {
                f.write_str("-")?;
                self.child(a, 3, f)
            }
            Expr::Add(a, b) => self.binary(a, " + ", b, 1, 2, f),
            Expr::Sub(a, b) => self.binary(a, " - ", b, 1, 2, f),
            Expr::Mul(a, b) => self.binary(a, "*", b, 2, 3, f),
            Expr::Div(a, b) => self.binary(a, "/", b, 2, 3, f),
            Expr::PowInt(a, n) => {
                self.child(a, 5, f)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Expr::Pow(a, b) => {
                self.child(a, 5, f)?;
                f.write_str("^")?;
                self.child(b, 5, f)
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                self.write(a, f)?;
                f.write_str(")")
            }
        }
    }

    fn child(&self, e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if e.prec() < min_prec {
            f.write_str("(")?;
            self.write(e, f)?;
            f.write_str(")")
        } else {
            self.write(e, f)
        }
    }

    fn binary(&self, a: &Expr, op: &str, b: &Expr, lp: u8, rp: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.child(a, lp, f)?;
        f.write_str(op)?;
        self.child(b, rp, f)
    }
}

fn write_const(c: Interval, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c == PI_IV {
        return f.write_str("pi");
    }
    if c.is_point() {
        return f.write_str(&fmt_f64(c.lo()));
    }
    if c.is_bounded() && c.lo().next_up().next_up() == c.hi() {
        // enclosure of a decimal literal; printing its nearest float reparses to the same interval
        let m = c.lo().next_up();
        if m < 0.0 {
            return write!(f, "({})", fmt_f64(m));
        }
        return f.write_str(&fmt_f64(m));
    }
    write!(f, "[{}, {}]", fmt_f64(c.lo()), fmt_f64(c.hi()))
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.expr, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn derivative_of_product() {
        let e = Expr::mul(Expr::var(0), Expr::var(1));
        assert_eq!(e.derivative(0), Expr::var(1));
        assert_eq!(e.derivative(1), Expr::var(0));
    }

    #[test]
    fn derivative_of_power() {
        let e = Expr::powi(Expr::var(0), 3);
        let d = e.derivative(0);
        assert_eq!(d.display(&names()).to_string(), "3*x^2");
    }

    #[test]
    fn display_parenthesizes() {
        let e = Expr::mul(Expr::add(Expr::var(0), Expr::constant(1.0)), Expr::var(1));
        assert_eq!(e.display(&names()).to_string(), "(x + 1)*y");
        let e = Expr::sub(Expr::var(0), Expr::sub(Expr::var(1), Expr::constant(2.0)));
        assert_eq!(e.display(&names()).to_string(), "x - (y - 2)");
        let e = Expr::powi(Expr::neg(Expr::var(0)), 2);
        assert_eq!(e.display(&names()).to_string(), "(-x)^2");
    }

    #[test]
    fn constants_fold() {
        let e = Expr::add(Expr::constant(2.0), Expr::mul(Expr::constant(3.0), Expr::constant(4.0)));
        assert_eq!(e, Expr::constant(14.0));
    }
}

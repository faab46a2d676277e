use std::collections::BTreeMap;

use super::tree::{Expr, Func};
use crate::interval::{Interval, IntervalBox};

/// Operation of one node of a compiled expression.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Op {
    Const(Interval),
    Var(usize),
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    PowInt(i32),
    Pow,
    Call(Func),
}

/// A node with the indices of its children; children always precede parents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub op: Op,
    pub a: usize,
    pub b: usize,
}

/// An expression tree flattened in postorder. The last node is the root.
///
/// Evaluation writes every node's enclosure into a caller-visible buffer,
/// which is what forward-backward propagation works on.
#[derive(Clone, Debug)]
pub struct Expression {
    tree: Expr,
    nodes: Vec<Node>,
    vars: Vec<usize>,
    occurrences: BTreeMap<usize, usize>,
}

impl Expression {
    pub fn new(tree: Expr) -> Expression {
        let mut nodes = Vec::new();
        flatten(&tree, &mut nodes);
        let mut occurrences = BTreeMap::new();
        for n in &nodes {
            if let Op::Var(i) = n.op {
                *occurrences.entry(i).or_insert(0) += 1;
            }
        }
        let vars = occurrences.keys().copied().collect();
        Expression { tree, nodes, vars, occurrences }
    }

    pub fn tree(&self) -> &Expr {
        &self.tree
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Variables occurring in the expression, ascending.
    pub fn variables(&self) -> &[usize] {
        &self.vars
    }

    /// Number of occurrences of variable `v`.
    pub fn occurrences(&self, v: usize) -> usize {
        self.occurrences.get(&v).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    /// Natural interval extension over `b`.
    pub fn eval(&self, b: &IntervalBox) -> Interval {
        let mut buf = Vec::with_capacity(self.nodes.len());
        self.eval_into(b.as_slice(), &mut buf)
    }

    /// Natural extension; fills `buf` with the enclosure of every node.
    pub fn eval_into(&self, x: &[Interval], buf: &mut Vec<Interval>) -> Interval {
        buf.clear();
        for n in &self.nodes {
            let v = match n.op {
                Op::Const(c) => c,
                Op::Var(i) => x[i],
                Op::Neg => -buf[n.a],
                Op::Add => buf[n.a] + buf[n.b],
                Op::Sub => buf[n.a] - buf[n.b],
                Op::Mul => buf[n.a] * buf[n.b],
                Op::Div => buf[n.a].div_hull(buf[n.b]),
                Op::PowInt(k) => buf[n.a].powi(k),
                Op::Pow => pow_forward(&self.nodes[n.a], buf[n.a], buf[n.b]),
                Op::Call(f) => f.apply(buf[n.a]),
            };
            buf.push(v);
        }
        buf[self.nodes.len() - 1]
    }

    /// Floating-point evaluation at a point (no enclosure guarantee).
    pub fn eval_point(&self, x: &[f64]) -> f64 {
        let mut buf: Vec<f64> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = match n.op {
                Op::Const(c) => {
                    if c.is_point() {
                        c.lo()
                    } else {
                        c.mid()
                    }
                }
                Op::Var(i) => x[i],
                Op::Neg => -buf[n.a],
                Op::Add => buf[n.a] + buf[n.b],
                Op::Sub => buf[n.a] - buf[n.b],
                Op::Mul => buf[n.a] * buf[n.b],
                Op::Div => buf[n.a] / buf[n.b],
                Op::PowInt(k) => buf[n.a].powi(k),
                Op::Pow => buf[n.a].powf(buf[n.b]),
                Op::Call(f) => f.apply_f64(buf[n.a]),
            };
            buf.push(v);
        }
        buf[self.nodes.len() - 1]
    }

    /// Interval evaluation at a point, i.e. a rigorous enclosure of `f(x)`.
    pub fn eval_at(&self, x: &[f64]) -> Interval {
        let pts: Vec<Interval> = x.iter().map(|&v| Interval::point(v)).collect();
        let mut buf = Vec::with_capacity(self.nodes.len());
        self.eval_into(&pts, &mut buf)
    }
}

/// `c^y` with a constant positive base is evaluated as `exp2(y·log2 c)`,
/// which keeps `2^k` exact for integer `k`.
pub(crate) fn pow_forward(base_node: &Node, base: Interval, y: Interval) -> Interval {
    if let Op::Const(c) = base_node.op {
        if c.lo() > 0.0 {
            return (y * c.log2()).exp2();
        }
    }
    base.pow(y)
}

fn flatten(e: &Expr, out: &mut Vec<Node>) -> usize {
    let node = match e {
        Expr::Const(c) => Node { op: Op::Const(*c), a: 0, b: 0 },
        Expr::Var(i) => Node { op: Op::Var(*i), a: 0, b: 0 },
        Expr::Neg(a) => {
            let a = flatten(a, out);
            Node { op: Op::Neg, a, b: 0 }
        }
        Expr::PowInt(a, k) => {
            let a = flatten(a, out);
            Node { op: Op::PowInt(*k), a, b: 0 }
        }
        Expr::Call(f, a) => {
            let a = flatten(a, out);
            Node { op: Op::Call(*f), a, b: 0 }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
            let ia = flatten(a, out);
            let ib = flatten(b, out);
            let op = match e {
                Expr::Add(..) => Op::Add,
                Expr::Sub(..) => Op::Sub,
                Expr::Mul(..) => Op::Mul,
                Expr::Div(..) => Op::Div,
                _ => Op::Pow,
            };
            Node { op, a: ia, b: ib }
        }
    };
    out.push(node);
    out.len() - 1
}

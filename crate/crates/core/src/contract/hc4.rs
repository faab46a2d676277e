//! Forward-backward (HC4) revision and agenda-based propagation.

use std::collections::VecDeque;

use super::{shrank, ContractionOutcome, Contractor};
use crate::expr::{pow_forward, Expression, Func, Node, Op, Relation, System};
use crate::interval::{Interval, IntervalBox, HALF_PI_IV, PI_IV, TWO_PI_IV};

/// Most periods of a trig argument for which backward branches are enumerated.
const MAX_TRIG_PERIODS: f64 = 8.0;

/// One HC4 revision of `expr ∘ 0` on `b`.
pub fn hc4_revise(expr: &Expression, rel: Relation, b: &IntervalBox) -> ContractionOutcome {
    let mut buf = Vec::new();
    hc4_revise_with_nodes(expr, rel, b, &mut buf)
}

/// Like [`hc4_revise`], leaving the backward-projected enclosure of every node
/// in `nodes` (indexed like [`Expression::nodes`]).
pub fn hc4_revise_with_nodes(
    expr: &Expression,
    rel: Relation,
    b: &IntervalBox,
    nodes: &mut Vec<Interval>,
) -> ContractionOutcome {
    let mut out = b.clone();
    if revise_in_place(expr, rel, &mut out, nodes) {
        ContractionOutcome::Contracted(out)
    } else {
        ContractionOutcome::Empty
    }
}

/// Revises `x` in place; returns false when infeasibility is proven.
pub(crate) fn revise_in_place(expr: &Expression, rel: Relation, x: &mut IntervalBox, buf: &mut Vec<Interval>) -> bool {
    let root = expr.eval_into(x.as_slice(), buf);
    let target = root.intersect(rel.feasible_set());
    if target.is_empty() {
        return false;
    }
    let nodes = expr.nodes();
    let r = nodes.len() - 1;
    buf[r] = target;
    for k in (0..nodes.len()).rev() {
        let z = buf[k];
        if z.is_empty() {
            return false;
        }
        let n = nodes[k];
        if !project(&n, nodes, z, buf, x) {
            return false;
        }
    }
    true
}

fn narrow(slot: &mut Interval, v: Interval) -> bool {
    *slot = slot.intersect(v);
    !slot.is_empty()
}

/// Projects node value `z` onto the node's children.
fn project(n: &Node, nodes: &[Node], z: Interval, buf: &mut [Interval], x: &mut IntervalBox) -> bool {
    let (a, b) = (n.a, n.b);
    match n.op {
        Op::Const(c) => !c.intersect(z).is_empty(),
        Op::Var(i) => narrow(&mut x[i], z),
        Op::Neg => narrow(&mut buf[a], -z),
        Op::Add => {
            let xb = buf[b];
            narrow(&mut buf[a], z - xb) && {
                let xa = buf[a];
                narrow(&mut buf[b], z - xa)
            }
        }
        Op::Sub => {
            let xb = buf[b];
            narrow(&mut buf[a], z + xb) && {
                let xa = buf[a];
                narrow(&mut buf[b], xa - z)
            }
        }
        Op::Mul => {
            let xb = buf[b];
            let na = crate::interval::extended_divide(z, xb).intersect(buf[a]).hull();
            if !narrow(&mut buf[a], na) {
                return false;
            }
            let nb = crate::interval::extended_divide(z, buf[a]).intersect(buf[b]).hull();
            narrow(&mut buf[b], nb)
        }
        Op::Div => {
            // z = a / b  ⇒  a ∈ z·b,  b ∈ a / z
            let xb = buf[b];
            if !narrow(&mut buf[a], z * xb) {
                return false;
            }
            let nb = crate::interval::extended_divide(buf[a], z).intersect(buf[b]).hull();
            narrow(&mut buf[b], nb)
        }
        Op::PowInt(k) => {
            let v = inverse_powi(z, k, buf[a]);
            narrow(&mut buf[a], v)
        }
        Op::Pow => {
            if let Op::Const(c) = nodes[a].op {
                if c.lo() > 0.0 {
                    // z = exp2(y·log2 c)
                    let l = c.log2();
                    let ny = crate::interval::extended_divide(z.log2(), l).intersect(buf[b]).hull();
                    return narrow(&mut buf[b], ny);
                }
            }
            let (xa, xb) = (buf[a], buf[b]);
            if !narrow(&mut buf[a], Interval::NONNEG) {
                return false;
            }
            if z.hi() <= 0.0 && !xb.contains_zero() {
                // only a = 0 can produce a nonpositive value
                return narrow(&mut buf[a], Interval::ZERO);
            }
            if !xb.contains_zero() && xa.lo() > 0.0 {
                let na = (z.ln().div_hull(xb)).exp();
                if !narrow(&mut buf[a], na) {
                    return false;
                }
            }
            if buf[a].lo() > 0.0 {
                let nb = crate::interval::extended_divide(z.ln(), buf[a].ln()).intersect(buf[b]).hull();
                if !narrow(&mut buf[b], nb) {
                    return false;
                }
            }
            !pow_forward(&nodes[a], buf[a], buf[b]).intersect(z).is_empty()
        }
        Op::Call(f) => {
            let xa = buf[a];
            let v = match f {
                Func::Exp => z.ln(),
                Func::Log => z.exp(),
                Func::Sqrt => z.intersect(Interval::NONNEG).sqr(),
                Func::Abs => {
                    let p = z.intersect(Interval::NONNEG);
                    p.intersect(xa).hull((-p).intersect(xa))
                }
                Func::Tanh => z.atanh(),
                Func::Atan => z.intersect(Interval::new(-HALF_PI_IV.hi(), HALF_PI_IV.hi())).tan(),
                Func::Sin => periodic_preimage(xa, z.asin(), |p, k| {
                    let shift = TWO_PI_IV * k;
                    [p + shift, PI_IV - p + shift]
                }),
                Func::Cos => periodic_preimage(xa, z.acos(), |p, k| {
                    let shift = TWO_PI_IV * k;
                    [p + shift, -p + shift]
                }),
                Func::Tan => tan_preimage(xa, z.atan()),
                Func::Sign => {
                    if z.lo() > 0.0 {
                        Interval::NONNEG
                    } else if z.hi() < 0.0 {
                        Interval::NONPOS
                    } else if z == Interval::ZERO {
                        Interval::ZERO
                    } else {
                        Interval::ENTIRE
                    }
                }
            };
            narrow(&mut buf[a], v)
        }
    }
}

/// Preimage of `z` under `t ↦ t^k`, intersected with the current `x`.
fn inverse_powi(z: Interval, k: i32, x: Interval) -> Interval {
    if k == 0 {
        return if z.contains(1.0) { x } else { Interval::EMPTY };
    }
    let z = if k < 0 { Interval::ONE.div_hull(z) } else { z };
    let m = k.unsigned_abs();
    let pos = z.nth_root(m);
    let neg_src = if m % 2 == 0 { z } else { -z };
    let neg = -(neg_src.nth_root(m));
    pos.intersect(x).hull(neg.intersect(x))
}

/// Hull of `x ∩ (branch pieces for every period k)`; `x` unchanged when
/// too wide to enumerate.
fn periodic_preimage(x: Interval, principal: Interval, pieces: impl Fn(Interval, f64) -> [Interval; 2]) -> Interval {
    if principal.is_empty() {
        return Interval::EMPTY;
    }
    if !x.is_bounded() || x.wid() > MAX_TRIG_PERIODS * TWO_PI_IV.hi() {
        return x;
    }
    let k0 = (x.lo() / TWO_PI_IV.lo()).floor() - 1.0;
    let k1 = (x.hi() / TWO_PI_IV.lo()).ceil() + 1.0;
    let mut acc = Interval::EMPTY;
    let mut k = k0;
    while k <= k1 {
        for p in pieces(principal, k) {
            acc = acc.hull(p.intersect(x));
        }
        k += 1.0;
    }
    acc
}

fn tan_preimage(x: Interval, principal: Interval) -> Interval {
    if principal.is_empty() {
        return Interval::EMPTY;
    }
    if !x.is_bounded() || x.wid() > 2.0 * MAX_TRIG_PERIODS * PI_IV.hi() {
        return x;
    }
    let k0 = (x.lo() / PI_IV.lo()).floor() - 1.0;
    let k1 = (x.hi() / PI_IV.lo()).ceil() + 1.0;
    let mut acc = Interval::EMPTY;
    let mut k = k0;
    while k <= k1 {
        acc = acc.hull((principal + PI_IV * k).intersect(x));
        k += 1.0;
    }
    acc
}

/// Agenda-driven HC4 over all constraints of `sys` (equations and side
/// inequalities). A constraint is re-queued when a variable it mentions
/// shrinks by more than `tau` in relative width.
pub fn propagate(sys: &System, b: &IntervalBox, tau: f64) -> ContractionOutcome {
    let mut x = b.clone();
    if propagate_in_place(sys, &mut x, tau) {
        ContractionOutcome::Contracted(x)
    } else {
        ContractionOutcome::Empty
    }
}

pub(crate) fn propagate_in_place(sys: &System, x: &mut IntervalBox, tau: f64) -> bool {
    propagate_from(sys, x, tau, None)
}

/// Like [`propagate_in_place`], but when `changed` is given only the
/// constraints mentioning that variable start on the agenda.
pub(crate) fn propagate_from(sys: &System, x: &mut IntervalBox, tau: f64, changed: Option<usize>) -> bool {
    let cons: Vec<(&Expression, Relation)> = sys.constraints().map(|c| (c.expr(), c.relation())).collect();
    let m = cons.len();
    // var -> constraints mentioning it
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); x.dim()];
    for (j, (e, _)) in cons.iter().enumerate() {
        for &v in e.variables() {
            watchers[v].push(j);
        }
    }
    let mut queued = vec![changed.is_none(); m];
    let mut queue: VecDeque<usize> = match changed {
        None => (0..m).collect(),
        Some(v) => watchers[v].clone().into(),
    };
    for &j in &queue {
        queued[j] = true;
    }
    let mut buf = Vec::new();
    let mut budget = 64 * m.max(1) * x.dim().max(1) + 1000;
    while let Some(j) = queue.pop_front() {
        queued[j] = false;
        let (e, rel) = cons[j];
        let before: Vec<Interval> = e.variables().iter().map(|&v| x[v]).collect();
        if !revise_in_place(e, rel, x, &mut buf) {
            return false;
        }
        budget = budget.saturating_sub(1);
        if budget == 0 {
            break;
        }
        for (&v, old) in e.variables().iter().zip(before) {
            if shrank(old, x[v], tau) {
                for &w in &watchers[v] {
                    if w != j && !queued[w] {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    true
}

/// HC4 propagation as a pipeline stage.
#[derive(Clone, Debug)]
pub struct Hc4 {
    pub tau: f64,
}

impl Default for Hc4 {
    fn default() -> Self {
        Hc4 { tau: 0.1 }
    }
}

impl Contractor for Hc4 {
    fn name(&self) -> &str {
        "hc4"
    }

    fn contract(&self, sys: &System, b: &IntervalBox) -> ContractionOutcome {
        propagate(sys, b, self.tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_system;

    fn first(sys: &System) -> (&Expression, Relation) {
        let c = &sys.equations()[0];
        (c.expr(), c.relation())
    }

    #[test]
    fn direct_projection() {
        let s = parse_system("vars x; box x in [0, 10]; eq x - 3").unwrap();
        let (e, r) = first(&s);
        let out = hc4_revise(e, r, s.initial_box());
        assert_eq!(out.boxes()[0][0], Interval::point(3.0));
    }

    #[test]
    fn infeasible_square() {
        let s = parse_system("vars x; box x in [-5, 5]; eq x^2 + 1").unwrap();
        let (e, r) = first(&s);
        assert!(hc4_revise(e, r, s.initial_box()).is_empty());
    }

    #[test]
    fn trig_backward() {
        let s = parse_system("vars t; box t in [-10, 10]; eq sin(t) - 1").unwrap();
        let (e, r) = first(&s);
        let out = hc4_revise(e, r, s.initial_box());
        let t = out.boxes()[0][0];
        // pi/2 - 2pi and pi/2 + 2pi are the extreme preimages
        assert!(t.contains(std::f64::consts::FRAC_PI_2 - 2.0 * std::f64::consts::PI));
        assert!(t.contains(std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI));
        assert!(t.lo() > -4.8 && t.hi() < 7.9);
    }

    #[test]
    fn inequality_projection() {
        let s = parse_system("nonsquare; vars x; box x in [-5, 5]; ineq x - 1 <= 0").unwrap();
        let c = &s.inequalities()[0];
        let out = hc4_revise(c.expr(), c.relation(), s.initial_box());
        assert_eq!(out.boxes()[0][0], Interval::new(-5.0, 1.0));
    }

    #[test]
    fn even_power_backward_keeps_both_signs() {
        assert_eq!(inverse_powi(Interval::new(4.0, 9.0), 2, Interval::new(-10.0, 10.0)), Interval::new(-3.0, 3.0));
        assert_eq!(inverse_powi(Interval::new(4.0, 9.0), 2, Interval::new(0.0, 10.0)), Interval::new(2.0, 3.0));
        assert_eq!(inverse_powi(Interval::new(-8.0, 27.0), 3, Interval::ENTIRE), Interval::new(-2.0, 3.0));
    }
}

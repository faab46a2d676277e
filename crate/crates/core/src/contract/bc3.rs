//! Box consistency (BC3) by shaving with univariate interval Newton, and the
//! HC4+BC3 combination applied to multiply-occurring variables.

use super::hc4::propagate_in_place;
use super::{shrank, ContractionOutcome, Contractor};
use crate::expr::{Constraint, Relation, System};
use crate::interval::{extended_divide, ExtendedQuotient, Interval, IntervalBox};

/// Cap on univariate search nodes per endpoint.
const MAX_SEARCH_NODES: usize = 400;

struct Univariate<'a> {
    c: &'a Constraint,
    var: usize,
    scratch: Vec<Interval>,
    point: IntervalBox,
}

impl<'a> Univariate<'a> {
    fn new(c: &'a Constraint, b: &'a IntervalBox, var: usize) -> Self {
        Univariate { c, var, scratch: Vec::new(), point: b.clone() }
    }

    fn f(&mut self, t: Interval) -> Interval {
        self.point[self.var] = t;
        self.c.expr().eval_into(self.point.as_slice(), &mut self.scratch)
    }

    fn df(&mut self, t: Interval) -> Interval {
        self.point[self.var] = t;
        self.c.gradient()[self.var].eval_into(self.point.as_slice(), &mut self.scratch)
    }

    fn feasible(&mut self, t: Interval) -> bool {
        !self.f(t).intersect(self.c.relation().feasible_set()).is_empty()
    }

    /// One interval Newton step `t ∩ (m − f(m)/f'(t))`, possibly split.
    fn newton(&mut self, t: Interval) -> ExtendedQuotient {
        if self.c.relation() != Relation::Eq || !t.is_bounded() {
            return ExtendedQuotient::One(t);
        }
        let m = t.mid();
        let fm = self.f(Interval::point(m));
        let d = self.df(t);
        if fm.is_empty() || d.is_empty() {
            return ExtendedQuotient::One(t);
        }
        let step = extended_divide(fm, d);
        let shifted = match step {
            ExtendedQuotient::Empty => ExtendedQuotient::Empty,
            ExtendedQuotient::Whole => ExtendedQuotient::One(t),
            ExtendedQuotient::One(q) => ExtendedQuotient::One(Interval::point(m) - q),
            // m − (l ∪ r) = (m − r) ∪ (m − l), left piece first
            ExtendedQuotient::Two(l, r) => ExtendedQuotient::Two(Interval::point(m) - r, Interval::point(m) - l),
        };
        shifted.intersect(t)
    }

    /// Search for the extreme quasi-zero of the univariate function in `x`.
    /// Returns the new endpoint, or `None` if no zero exists.
    fn extreme(&mut self, x: Interval, eps: f64, leftmost: bool) -> Option<f64> {
        let mut stack = vec![x];
        let mut nodes = 0;
        while let Some(t) = stack.pop() {
            nodes += 1;
            if nodes > MAX_SEARCH_NODES {
                // everything still pending lies on the far side of `t`
                return Some(if leftmost { t.lo() } else { t.hi() });
            }
            if !self.feasible(t) {
                continue;
            }
            let pieces: Vec<Interval> = match self.newton(t) {
                ExtendedQuotient::Empty => continue,
                ExtendedQuotient::Whole => vec![t],
                ExtendedQuotient::One(p) => vec![p],
                ExtendedQuotient::Two(l, r) => vec![l, r],
            };
            let pieces: Vec<Interval> = pieces.into_iter().filter(|p| !p.is_empty()).collect();
            if pieces.is_empty() {
                continue;
            }
            let near = if leftmost { pieces[0] } else { pieces[pieces.len() - 1] };
            if pieces.len() == 1 && near.wid() <= eps {
                if self.feasible(near) {
                    return Some(if leftmost { near.lo() } else { near.hi() });
                }
                continue;
            }
            // push far pieces first so the near side is explored first
            let mut ordered: Vec<Interval> = Vec::new();
            for p in pieces {
                if p.wid() <= eps {
                    ordered.push(p);
                } else if p.wid() < 0.5 * t.wid() {
                    // Newton made real progress; retry before splitting
                    ordered.push(p);
                } else {
                    let c = if p.is_bounded() { p.mid() } else { split_point(p) };
                    let (l, r) = p.split(c);
                    if l == p || r == p {
                        ordered.push(p);
                        continue;
                    }
                    ordered.push(l);
                    ordered.push(r);
                }
            }
            if leftmost {
                ordered.reverse();
            }
            // ordered is now far-to-near; the near element ends on top of the stack
            if ordered.len() == 1 && ordered[0] == t {
                return Some(if leftmost { t.lo() } else { t.hi() });
            }
            stack.extend(ordered);
        }
        None
    }
}

fn split_point(p: Interval) -> f64 {
    match (p.lo().is_finite(), p.hi().is_finite()) {
        (true, false) => p.lo().max(0.0) * 2.0 + 1.0,
        (false, true) => p.hi().min(0.0) * 2.0 - 1.0,
        _ => 0.0,
    }
}

/// Narrows `b[var]` to the outermost quasi-zeros of `c` seen as a function of
/// `var` alone, to within `eps`.
pub fn bc3_revise(c: &Constraint, b: &IntervalBox, var: usize, eps: f64) -> ContractionOutcome {
    let mut out = b.clone();
    if bc3_in_place(c, &mut out, var, eps) {
        ContractionOutcome::Contracted(out)
    } else {
        ContractionOutcome::Empty
    }
}

pub(crate) fn bc3_in_place(c: &Constraint, b: &mut IntervalBox, var: usize, eps: f64) -> bool {
    let x = b[var];
    if x.is_empty() {
        return false;
    }
    let frozen = b.clone();
    let mut u = Univariate::new(c, &frozen, var);
    let Some(lo) = u.extreme(x, eps, true) else {
        return false;
    };
    let rest = Interval::raw(lo, x.hi());
    let Some(hi) = u.extreme(rest, eps, false) else {
        return false;
    };
    b[var] = Interval::raw(lo, hi);
    !b[var].is_empty()
}

/// HC4 propagation followed by BC3 on variables that occur more than once
/// in an equation, repeated until no variable shrinks by more than `tau`.
#[derive(Clone, Debug)]
pub struct Benhamou {
    pub tau: f64,
    pub eps: f64,
    pub max_rounds: usize,
}

impl Default for Benhamou {
    fn default() -> Self {
        Benhamou { tau: 0.1, eps: 1e-6, max_rounds: 4 }
    }
}

impl Contractor for Benhamou {
    fn name(&self) -> &str {
        "hc4+bc3"
    }

    fn contract(&self, sys: &System, b: &IntervalBox) -> ContractionOutcome {
        let mut x = b.clone();
        for _ in 0..self.max_rounds {
            if !propagate_in_place(sys, &mut x, self.tau) {
                return ContractionOutcome::Empty;
            }
            let before = x.clone();
            for c in sys.equations() {
                for &v in c.variables() {
                    if c.expr().occurrences(v) > 1 && x[v].wid() > self.eps && !bc3_in_place(c, &mut x, v, self.eps) {
                        return ContractionOutcome::Empty;
                    }
                }
            }
            if !before.iter().zip(x.iter()).any(|(o, n)| shrank(*o, *n, self.tau)) {
                break;
            }
        }
        ContractionOutcome::Contracted(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_system;

    #[test]
    fn square_root_of_four() {
        let s = parse_system("vars x; box x in [0, 10]; eq x^2 - 4").unwrap();
        let out = bc3_revise(&s.equations()[0], s.initial_box(), 0, 1e-10);
        let x = out.boxes()[0][0];
        assert!(x.contains(2.0));
        assert!(x.lo() >= 2.0 - 1e-8 && x.hi() <= 2.0 + 1e-8, "{x}");
    }

    #[test]
    fn bilinear_extremes() {
        let s = parse_system("vars x, y; box x in [0, 10]; box y in [1, 2]; eq x*y - 1; eq y - 1.5").unwrap();
        let out = bc3_revise(&s.equations()[0], s.initial_box(), 0, 1e-10);
        let x = out.boxes()[0][0];
        assert!(x.lo() >= 0.5 - 1e-8 && x.hi() <= 1.0 + 1e-8 && x.contains(0.5) && x.contains(1.0), "{x}");
    }

    #[test]
    fn identically_zero_keeps_domain() {
        let s = parse_system("vars x; box x in [-3, 4]; eq x - x").unwrap();
        let out = bc3_revise(&s.equations()[0], s.initial_box(), 0, 1e-8);
        assert_eq!(out.boxes()[0][0], Interval::new(-3.0, 4.0));
    }

    #[test]
    fn no_zero_is_empty() {
        let s = parse_system("vars x; box x in [-3, 4]; eq x^2 - 2*x + 5").unwrap();
        assert!(bc3_revise(&s.equations()[0], s.initial_box(), 0, 1e-8).is_empty());
    }
}

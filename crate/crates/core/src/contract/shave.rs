//! 3B consistency by boundary shaving.

use super::hc4::propagate_from;
use super::{ContractionOutcome, Contractor};
use crate::expr::System;
use crate::interval::{Interval, IntervalBox};

/// Peels slabs of width `wid/slices` off both ends of every component and
/// drops those that HC4 propagation refutes.
pub fn shave_3b(sys: &System, b: &IntervalBox, tau: f64, slices: usize) -> ContractionOutcome {
    Shave3B { tau, slices, min_width: 0.0 }.contract(sys, b)
}

#[derive(Clone, Debug)]
pub struct Shave3B {
    pub tau: f64,
    pub slices: usize,
    /// Components narrower than this are left alone.
    pub min_width: f64,
}

impl Default for Shave3B {
    fn default() -> Self {
        Shave3B { tau: 0.1, slices: 10, min_width: 1e-6 }
    }
}

impl Shave3B {
    /// Returns the narrowed component, or `None` when every slab is refuted.
    fn shave_dim(&self, sys: &System, x: &IntervalBox, i: usize) -> Option<Interval> {
        let xi = x[i];
        if !xi.is_bounded() || xi.wid() <= self.min_width {
            return Some(xi);
        }
        let w = xi.wid() / self.slices.max(2) as f64;
        let mut lo = xi.lo();
        let mut hi = xi.hi();
        // left side
        loop {
            let cut = if lo + w >= hi { hi } else { lo + w };
            let slab = Interval::new(lo, cut);
            let mut probe = x.with(i, slab);
            if propagate_from(sys, &mut probe, self.tau, Some(i)) {
                lo = probe[i].lo();
                break;
            }
            if cut >= hi {
                return None;
            }
            lo = cut;
        }
        // right side
        loop {
            let cut = if hi - w <= lo { lo } else { hi - w };
            let slab = Interval::new(cut, hi);
            let mut probe = x.with(i, slab);
            if propagate_from(sys, &mut probe, self.tau, Some(i)) {
                hi = probe[i].hi();
                break;
            }
            if cut <= lo {
                return None;
            }
            hi = cut;
        }
        Some(Interval::new(lo, hi.max(lo)))
    }
}

impl Contractor for Shave3B {
    fn name(&self) -> &str {
        "3b"
    }

    fn contract(&self, sys: &System, b: &IntervalBox) -> ContractionOutcome {
        let mut x = b.clone();
        for i in 0..x.dim() {
            match self.shave_dim(sys, &x, i) {
                Some(v) => x[i] = v,
                None => return ContractionOutcome::Empty,
            }
        }
        ContractionOutcome::Contracted(x)
    }
}

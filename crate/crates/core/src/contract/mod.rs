//! Contractors: sound box-narrowing operators and their composition.

mod bc3;
mod hc4;
mod newton;
mod shave;

use std::collections::BTreeMap;

pub use bc3::{bc3_revise, Benhamou};
pub use hc4::{hc4_revise, hc4_revise_with_nodes, propagate, Hc4};
pub use newton::{gauss_seidel, hansen_sengupta, krawczyk, preconditioner, HansenSengupta, Krawczyk, MAX_PRECONDITIONER_COND};
pub use shave::{shave_3b, Shave3B};

pub(crate) use newton::{hansen_sengupta_step, krawczyk_image};

use crate::expr::System;
use crate::interval::{Interval, IntervalBox};

/// What a contractor concluded about a box.
#[derive(Clone, Debug, PartialEq)]
pub enum ContractionOutcome {
    /// Every root in the input lies in this sub-box.
    Contracted(IntervalBox),
    /// The input contains no root.
    Empty,
    /// Every root lies in one of two sub-boxes separated along `dim`.
    Gap(IntervalBox, IntervalBox, usize),
}

impl ContractionOutcome {
    pub fn is_empty(&self) -> bool {
        matches!(self, ContractionOutcome::Empty)
    }

    /// The zero, one or two boxes that may still hold roots.
    pub fn boxes(&self) -> Vec<IntervalBox> {
        match self {
            ContractionOutcome::Contracted(b) => vec![b.clone()],
            ContractionOutcome::Empty => Vec::new(),
            ContractionOutcome::Gap(l, r, _) => vec![l.clone(), r.clone()],
        }
    }

    /// Hull of the remaining boxes, if any.
    pub fn hull(&self) -> Option<IntervalBox> {
        match self {
            ContractionOutcome::Contracted(b) => Some(b.clone()),
            ContractionOutcome::Empty => None,
            ContractionOutcome::Gap(l, r, _) => Some(l.hull(r)),
        }
    }
}

/// A sound box-narrowing operator for the equations (and side inequalities)
/// of a system.
pub trait Contractor: Send + Sync {
    fn name(&self) -> &str;
    fn contract(&self, sys: &System, b: &IntervalBox) -> ContractionOutcome;
}

/// Did the width drop by more than the fraction `tau`?
pub(crate) fn shrank(old: Interval, new: Interval, tau: f64) -> bool {
    if new.is_empty() {
        return !old.is_empty();
    }
    let (ow, nw) = (old.wid(), new.wid());
    if ow.is_infinite() {
        return nw.is_finite();
    }
    nw < (1.0 - tau) * ow
}

/// Per-stage call counters.
pub type CallCounts = BTreeMap<String, u64>;

/// Ordered contractor stages, cheap first.
///
/// Stages run in order; a gap ends the pass. With `fixed_point` set the
/// whole sequence repeats while the box's largest width keeps shrinking by
/// more than `tau`.
pub struct Pipeline {
    stages: Vec<Box<dyn Contractor>>,
    pub tau: f64,
    pub fixed_point: bool,
    pub max_passes: usize,
}

impl Pipeline {
    pub fn new(stages: Vec<Box<dyn Contractor>>) -> Pipeline {
        Pipeline { stages, tau: 0.1, fixed_point: false, max_passes: 20 }
    }

    pub fn with_fixed_point(mut self, tau: f64) -> Pipeline {
        self.fixed_point = true;
        self.tau = tau;
        self
    }

    pub fn stages(&self) -> &[Box<dyn Contractor>] {
        &self.stages
    }

    pub fn stage_names(&self) -> Vec<String> {
        self.stages.iter().map(|s| s.name().to_string()).collect()
    }

    pub fn contract_counted(&self, sys: &System, b: &IntervalBox, counts: &mut CallCounts) -> ContractionOutcome {
        let mut x = b.clone();
        for _ in 0..self.max_passes.max(1) {
            let before = x.max_width();
            for s in &self.stages {
                *counts.entry(s.name().to_string()).or_insert(0) += 1;
                match s.contract(sys, &x) {
                    ContractionOutcome::Contracted(y) => x = y,
                    other => return other,
                }
            }
            let after = x.max_width();
            let improved = if before.is_infinite() { after.is_finite() } else { after < (1.0 - self.tau) * before };
            if !self.fixed_point || !improved {
                break;
            }
        }
        ContractionOutcome::Contracted(x)
    }
}

impl Contractor for Pipeline {
    fn name(&self) -> &str {
        "pipeline"
    }

    fn contract(&self, sys: &System, b: &IntervalBox) -> ContractionOutcome {
        let mut counts = CallCounts::new();
        self.contract_counted(sys, b, &mut counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_system;

    struct Identity;

    impl Contractor for Identity {
        fn name(&self) -> &str {
            "identity"
        }

        fn contract(&self, _: &System, b: &IntervalBox) -> ContractionOutcome {
            ContractionOutcome::Contracted(b.clone())
        }
    }

    struct Refute;

    impl Contractor for Refute {
        fn name(&self) -> &str {
            "refute"
        }

        fn contract(&self, _: &System, _: &IntervalBox) -> ContractionOutcome {
            ContractionOutcome::Empty
        }
    }

    #[test]
    fn identity_pipeline_returns_input() {
        let s = parse_system("vars x; box x in [0, 1]; eq x").unwrap();
        let p = Pipeline::new(vec![Box::new(Identity), Box::new(Identity)]).with_fixed_point(0.1);
        assert_eq!(p.contract(&s, s.initial_box()), ContractionOutcome::Contracted(s.initial_box().clone()));
    }

    #[test]
    fn empty_stops_pipeline() {
        let s = parse_system("vars x; box x in [0, 1]; eq x").unwrap();
        let p = Pipeline::new(vec![Box::new(Refute), Box::new(Identity)]);
        let mut counts = CallCounts::new();
        assert!(p.contract_counted(&s, s.initial_box(), &mut counts).is_empty());
        assert_eq!(counts.get("identity"), None);
        assert_eq!(counts["refute"], 1);
    }

    #[test]
    fn linear_chain_propagation() {
        let s = parse_system("vars x, y; box [0, 10]^2; eq x - y; eq x + y - 2").unwrap();
        let b = propagate(&s, s.initial_box(), 0.1).boxes()[0].clone();
        assert!(b.contains_point(&[1.0, 1.0]));
        assert!(b.max_width() <= 2.0);
    }

    #[test]
    fn hull_consistent_box_is_fixed() {
        let s = parse_system("vars x1, x2; box [-1, 1]^2; eq x2 + x1; eq 2*x2 - (x1 + 1)^2 + 2").unwrap();
        assert_eq!(propagate(&s, s.initial_box(), 0.1), ContractionOutcome::Contracted(s.initial_box().clone()));
    }
}

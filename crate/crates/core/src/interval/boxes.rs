use std::fmt;
use std::ops::{Index, IndexMut};

use super::{Interval, IntervalError};

/// An interval vector. A box with any empty component is the empty box.
#[derive(Clone, PartialEq, Debug)]
pub struct IntervalBox {
    comps: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(comps: Vec<Interval>) -> IntervalBox {
        IntervalBox { comps }
    }

    /// Box `[lo, hi]^n`.
    pub fn uniform(n: usize, iv: Interval) -> IntervalBox {
        IntervalBox { comps: vec![iv; n] }
    }

    /// Degenerate box at a point.
    pub fn point(x: &[f64]) -> IntervalBox {
        IntervalBox { comps: x.iter().map(|&v| Interval::point(v)).collect() }
    }

    /// Box from `(lo, hi)` pairs; panics on invalid pairs.
    pub fn from_bounds(bounds: &[(f64, f64)]) -> IntervalBox {
        IntervalBox { comps: bounds.iter().map(|&(l, h)| Interval::new(l, h)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.comps
    }

    pub fn as_mut_slice(&mut self) -> &mut [Interval] {
        &mut self.comps
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.comps.iter()
    }

    pub fn into_vec(self) -> Vec<Interval> {
        self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.iter().any(|c| c.is_empty())
    }

    pub fn is_bounded(&self) -> bool {
        self.comps.iter().all(|c| c.is_bounded())
    }

    /// Largest component width; `+inf` when some component is unbounded.
    pub fn max_width(&self) -> f64 {
        self.comps.iter().map(|c| c.wid()).fold(0.0, f64::max)
    }

    pub fn widths(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.wid()).collect()
    }

    /// Index of the widest component, lowest index on ties.
    pub fn widest_dim(&self) -> usize {
        let mut best = 0;
        for (i, c) in self.comps.iter().enumerate() {
            if c.wid() > self.comps[best].wid() {
                best = i;
            }
        }
        best
    }

    /// Componentwise midpoint; panics on unbounded components.
    pub fn mid(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.mid()).collect()
    }

    pub fn checked_mid(&self) -> Result<Vec<f64>, IntervalError> {
        self.comps.iter().map(|c| c.checked_mid()).collect()
    }

    /// Splits along `dim` at `at` (midpoint by default). The cut point is
    /// clamped into the component, so both halves are nonempty.
    pub fn bisect(&self, dim: usize, at: Option<f64>) -> (IntervalBox, IntervalBox) {
        let c = self.comps[dim];
        let p = at.unwrap_or_else(|| c.mid());
        let (l, r) = c.split(p);
        let mut a = self.clone();
        let mut b = self.clone();
        a.comps[dim] = l;
        b.comps[dim] = r;
        (a, b)
    }

    pub fn hull(&self, other: &IntervalBox) -> IntervalBox {
        IntervalBox { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.hull(*b)).collect() }
    }

    /// Componentwise intersection; check [`is_empty`](Self::is_empty) on the result.
    pub fn intersect(&self, other: &IntervalBox) -> IntervalBox {
        IntervalBox { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.intersect(*b)).collect() }
    }

    pub fn overlaps(&self, other: &IntervalBox) -> bool {
        self.comps.iter().zip(&other.comps).all(|(a, b)| a.overlaps(b))
    }

    pub fn subset_of(&self, other: &IntervalBox) -> bool {
        self.comps.iter().zip(&other.comps).all(|(a, b)| a.subset_of(b))
    }

    /// `self ⊆ int(other)`.
    pub fn interior_of(&self, other: &IntervalBox) -> bool {
        self.comps.iter().zip(&other.comps).all(|(a, b)| a.interior_of(b))
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.comps.iter().zip(x).all(|(c, &v)| c.contains(v))
    }

    /// Each component scaled by `factor` about its midpoint.
    pub fn inflate(&self, factor: f64) -> IntervalBox {
        IntervalBox { comps: self.comps.iter().map(|c| c.inflate(factor)).collect() }
    }

    /// `b - m` componentwise, with `m` taken as exact points.
    pub fn sub_point(&self, m: &[f64]) -> Vec<Interval> {
        self.comps.iter().zip(m).map(|(c, &v)| *c - Interval::point(v)).collect()
    }

    /// Box with component `dim` replaced.
    pub fn with(&self, dim: usize, iv: Interval) -> IntervalBox {
        let mut b = self.clone();
        b.comps[dim] = iv;
        b
    }
}

impl Index<usize> for IntervalBox {
    type Output = Interval;

    fn index(&self, i: usize) -> &Interval {
        &self.comps[i]
    }
}

impl IndexMut<usize> for IntervalBox {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.comps[i]
    }
}

impl From<Vec<Interval>> for IntervalBox {
    fn from(v: Vec<Interval>) -> IntervalBox {
        IntervalBox::new(v)
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_midpoint() {
        let b = IntervalBox::from_bounds(&[(0.0, 2.0), (0.0, 1.0)]);
        let (l, r) = b.bisect(0, None);
        assert_eq!(l, IntervalBox::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]));
        assert_eq!(r, IntervalBox::from_bounds(&[(1.0, 2.0), (0.0, 1.0)]));
        assert_eq!(l.hull(&r), b);
    }

    #[test]
    fn empty_component_empties_box() {
        let a = IntervalBox::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]);
        let b = IntervalBox::from_bounds(&[(0.5, 2.0), (2.0, 3.0)]);
        assert!(a.intersect(&b).is_empty());
        assert_eq!(a.max_width(), 1.0);
    }

    #[test]
    fn bisect_clamps_cut() {
        let b = IntervalBox::from_bounds(&[(0.0, 1.0)]);
        let (l, r) = b.bisect(0, Some(5.0));
        assert_eq!(l, b);
        assert_eq!(r[0], Interval::point(1.0));
    }
}

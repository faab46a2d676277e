use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::round::*;
use super::IntervalError;

/// A closed real interval `[lo, hi]` with possibly infinite endpoints, or the
/// empty set.
///
/// The empty set is the single value [`Interval::EMPTY`]; no nonempty interval
/// compares equal to it. Every arithmetic operation encloses the exact
/// real-number result and treats the empty set as absorbing.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Outcome of dividing by an interval that may contain zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedQuotient {
    Empty,
    One(Interval),
    /// Two disjoint pieces, `left.hi() < right.lo()`.
    Two(Interval, Interval),
    Whole,
}

impl ExtendedQuotient {
    pub fn hull(self) -> Interval {
        match self {
            ExtendedQuotient::Empty => Interval::EMPTY,
            ExtendedQuotient::One(a) => a,
            ExtendedQuotient::Two(a, b) => a.hull(b),
            ExtendedQuotient::Whole => Interval::ENTIRE,
        }
    }

    /// Intersect every piece with `x`. Pieces that vanish are dropped.
    pub fn intersect(self, x: Interval) -> ExtendedQuotient {
        match self {
            ExtendedQuotient::Empty => ExtendedQuotient::Empty,
            ExtendedQuotient::Whole => ExtendedQuotient::One(x),
            ExtendedQuotient::One(a) => {
                let r = a.intersect(x);
                if r.is_empty() {
                    ExtendedQuotient::Empty
                } else {
                    ExtendedQuotient::One(r)
                }
            }
            ExtendedQuotient::Two(a, b) => {
                let (ra, rb) = (a.intersect(x), b.intersect(x));
                match (ra.is_empty(), rb.is_empty()) {
                    (true, true) => ExtendedQuotient::Empty,
                    (false, true) => ExtendedQuotient::One(ra),
                    (true, false) => ExtendedQuotient::One(rb),
                    (false, false) => ExtendedQuotient::Two(ra, rb),
                }
            }
        }
    }
}

#[inline]
fn clean(x: f64) -> f64 {
    // fold -0.0 into +0.0 so endpoints print and compare uniformly
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: f64::INFINITY, hi: f64::NEG_INFINITY };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const NONNEG: Interval = Interval { lo: 0.0, hi: f64::INFINITY };
    pub const NONPOS: Interval = Interval { lo: f64::NEG_INFINITY, hi: 0.0 };

    /// Constant constructor; the caller guarantees `lo <= hi`, both finite.
    pub(crate) const fn from_consts(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    /// Builds `[lo, hi]`.
    ///
    /// Panics on NaN endpoints, `lo > hi`, `lo = +inf` or `hi = -inf`.
    pub fn new(lo: f64, hi: f64) -> Interval {
        Self::try_new(lo, hi).unwrap_or_else(|| panic!("invalid interval [{lo}, {hi}]"))
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Interval> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return None;
        }
        Some(Interval { lo: clean(lo), hi: clean(hi) })
    }

    /// `[lo, hi]`, or empty when `lo > hi`. Used for results of directed
    /// computations where crossing endpoints mean infeasibility.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Interval {
        if lo > hi || lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            Interval::EMPTY
        } else {
            Interval { lo: clean(lo), hi: clean(hi) }
        }
    }

    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    /// The smallest interval with float endpoints containing the real `x`
    /// known only to within one rounding of `x`.
    pub fn around(x: f64) -> Interval {
        Interval::new(next_down(x), next_up(x))
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        !self.is_empty() && self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`. The empty set is a subset of everything.
    pub fn subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    /// `self ⊆ int(other)`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        self.is_empty()
            || ((other.lo < self.lo || other.lo == f64::NEG_INFINITY)
                && (self.hi < other.hi || other.hi == f64::INFINITY))
    }

    /// Width rounded up; `+inf` for unbounded intervals, 0 for the empty set.
    pub fn wid(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            sub_up(self.hi, self.lo)
        }
    }

    pub fn checked_wid(&self) -> Result<f64, IntervalError> {
        if !self.is_bounded() {
            return Err(IntervalError::Unbounded);
        }
        Ok(self.wid())
    }

    /// Midpoint; always inside the interval.
    ///
    /// Panics on unbounded or empty input: callers must bound the domain first.
    pub fn mid(&self) -> f64 {
        self.checked_mid().unwrap_or_else(|e| panic!("mid of {self:?}: {e}"))
    }

    pub fn checked_mid(&self) -> Result<f64, IntervalError> {
        if self.is_empty() {
            return Err(IntervalError::Empty);
        }
        if !self.is_bounded() {
            return Err(IntervalError::Unbounded);
        }
        if self.lo == self.hi {
            return Ok(self.lo);
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        Ok(clean(m.clamp(self.lo, self.hi)))
    }

    /// Radius rounded up.
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo))
    }

    /// Largest absolute value.
    pub fn mag(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(&self) -> f64 {
        if self.is_empty() || self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn hull(self, other: Interval) -> Interval {
        if self.is_empty() {
            return other;
        }
        if other.is_empty() {
            return self;
        }
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(self, other: Interval) -> Interval {
        Interval::raw(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        !self.intersect(*other).is_empty()
    }

    /// Split at `at` (clamped into the interval).
    pub fn split(&self, at: f64) -> (Interval, Interval) {
        let c = at.clamp(self.lo, self.hi);
        (Interval::raw(self.lo, c), Interval::raw(c, self.hi))
    }

    /// Interval scaled by `factor` about its midpoint, rounded outward.
    pub fn inflate(&self, factor: f64) -> Interval {
        if self.is_empty() || !self.is_bounded() {
            return *self;
        }
        let m = self.mid();
        let r = mul_up(self.rad(), factor);
        Interval::raw(sub_down(m, r), add_up(m, r))
    }

    /// Interval widened by `r` on both sides, rounded outward.
    pub fn inflate_abs(&self, r: f64) -> Interval {
        if self.is_empty() {
            return *self;
        }
        Interval::raw(sub_down(self.lo, r), add_up(self.hi, r))
    }

    /// Sound hull of the quotient set; unbounded when `0 ∈ rhs`.
    pub fn div_hull(self, rhs: Interval) -> Interval {
        extended_divide(self, rhs).hull()
    }

    pub fn sqr(self) -> Interval {
        self.powi(2)
    }
}

/// `{ x : b·x = a for some a ∈ num, b ∈ den }` as at most two intervals.
pub fn extended_divide(num: Interval, den: Interval) -> ExtendedQuotient {
    if num.is_empty() || den.is_empty() {
        return ExtendedQuotient::Empty;
    }
    if !den.contains_zero() {
        return ExtendedQuotient::One(divide_nonzero(num, den));
    }
    if den.lo == 0.0 && den.hi == 0.0 {
        return if num.contains_zero() { ExtendedQuotient::Whole } else { ExtendedQuotient::Empty };
    }
    if num.contains_zero() {
        return ExtendedQuotient::Whole;
    }
    let (c, d) = (den.lo, den.hi);
    if num.lo > 0.0 {
        let a = num.lo;
        if c == 0.0 {
            ExtendedQuotient::One(Interval::raw(div_down(a, d), f64::INFINITY))
        } else if d == 0.0 {
            ExtendedQuotient::One(Interval::raw(f64::NEG_INFINITY, div_up(a, c)))
        } else {
            ExtendedQuotient::Two(
                Interval::raw(f64::NEG_INFINITY, div_up(a, c)),
                Interval::raw(div_down(a, d), f64::INFINITY),
            )
        }
    } else {
        let b = num.hi;
        if c == 0.0 {
            ExtendedQuotient::One(Interval::raw(f64::NEG_INFINITY, div_up(b, d)))
        } else if d == 0.0 {
            ExtendedQuotient::One(Interval::raw(div_down(b, c), f64::INFINITY))
        } else {
            ExtendedQuotient::Two(
                Interval::raw(f64::NEG_INFINITY, div_up(b, d)),
                Interval::raw(div_down(b, c), f64::INFINITY),
            )
        }
    }
}

fn divide_nonzero(a: Interval, b: Interval) -> Interval {
    let (al, ah, bl, bh) = (a.lo, a.hi, b.lo, b.hi);
    if bl > 0.0 {
        if al >= 0.0 {
            Interval::raw(div_down(al, bh), div_up(ah, bl))
        } else if ah <= 0.0 {
            Interval::raw(div_down(al, bl), div_up(ah, bh))
        } else {
            Interval::raw(div_down(al, bl), div_up(ah, bl))
        }
    } else if al >= 0.0 {
        Interval::raw(div_down(ah, bh), div_up(al, bl))
    } else if ah <= 0.0 {
        Interval::raw(div_down(ah, bl), div_up(al, bh))
    } else {
        Interval::raw(div_down(ah, bh), div_up(al, bh))
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval::raw(sub_down(self.lo, rhs.hi), sub_up(self.hi, rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        // sign classes: nonnegative, nonpositive, straddling zero
        let (lo, hi) = match (a >= 0.0, b <= 0.0, c >= 0.0, d <= 0.0) {
            (true, _, true, _) => (mul_down(a, c), mul_up(b, d)),
            (true, _, _, true) => (mul_down(b, c), mul_up(a, d)),
            (true, _, _, _) => (mul_down(b, c), mul_up(b, d)),
            (_, true, true, _) => (mul_down(a, d), mul_up(b, c)),
            (_, true, _, true) => (mul_down(b, d), mul_up(a, c)),
            (_, true, _, _) => (mul_down(a, d), mul_up(a, c)),
            (_, _, true, _) => (mul_down(a, d), mul_up(b, d)),
            (_, _, _, true) => (mul_down(b, c), mul_up(a, c)),
            _ => (mul_down(a, d).min(mul_down(b, c)), mul_up(a, c).max(mul_up(b, d))),
        };
        Interval::raw(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.div_hull(rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval { lo: clean(-self.hi), hi: clean(-self.lo) }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Interval {
        Interval::point(x)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[empty]")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b)
    }

    #[test]
    fn basic_arithmetic_examples() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 4.0), iv(4.0, 6.0));
        assert_eq!(iv(-1.0, 2.0) * iv(3.0, 4.0), iv(-4.0, 8.0));
        assert_eq!(iv(1.0, 2.0) / iv(-1.0, 1.0), Interval::ENTIRE);
        assert_eq!(iv(1.0, 2.0) - iv(3.0, 4.0), iv(-3.0, -1.0));
        assert_eq!(iv(1.0, 2.0) / iv(1.0, 2.0), iv(0.5, 2.0));
    }

    #[test]
    fn empty_is_absorbing() {
        let e = Interval::EMPTY;
        assert!((e + iv(1.0, 2.0)).is_empty());
        assert!((iv(1.0, 2.0) * e).is_empty());
        assert!((e / iv(1.0, 2.0)).is_empty());
        assert!((-e).is_empty());
        assert_ne!(e, iv(0.0, 0.0));
    }

    #[test]
    fn extended_division_cases() {
        assert_eq!(
            extended_divide(iv(1.0, 2.0), iv(-1.0, 1.0)),
            ExtendedQuotient::Two(
                Interval::new(f64::NEG_INFINITY, -1.0),
                Interval::new(1.0, f64::INFINITY)
            )
        );
        assert_eq!(extended_divide(iv(1.0, 2.0), iv(1.0, 2.0)), ExtendedQuotient::One(iv(0.5, 2.0)));
        assert_eq!(extended_divide(iv(0.0, 1.0), iv(0.0, 0.0)), ExtendedQuotient::Whole);
        assert_eq!(extended_divide(iv(1.0, 1.0), iv(0.0, 0.0)), ExtendedQuotient::Empty);
        assert_eq!(
            extended_divide(iv(1.0, 2.0), iv(0.0, 4.0)),
            ExtendedQuotient::One(Interval::new(0.25, f64::INFINITY))
        );
        assert_eq!(
            extended_divide(iv(-2.0, -1.0), iv(-4.0, 0.0)),
            ExtendedQuotient::One(Interval::new(0.25, f64::INFINITY))
        );
    }

    #[test]
    fn set_operations() {
        assert_eq!(iv(1.0 / 32.0, 32.0).intersect(iv(2.0, 35.0)), iv(2.0, 32.0));
        assert_eq!(iv(0.0, 1.0).hull(iv(3.0, 4.0)), iv(0.0, 4.0));
        assert!(iv(0.0, 1.0).intersect(iv(2.0, 3.0)).is_empty());
        assert!(iv(0.2, 0.8).interior_of(&iv(0.0, 1.0)));
        assert!(!iv(0.0, 0.8).interior_of(&iv(0.0, 1.0)));
    }

    #[test]
    fn mid_and_wid() {
        assert_eq!(iv(0.0, 2.0).mid(), 1.0);
        assert_eq!(iv(0.0, 2.0).wid(), 2.0);
        assert_eq!(Interval::ENTIRE.checked_mid(), Err(IntervalError::Unbounded));
        assert_eq!(Interval::new(0.0, f64::INFINITY).checked_wid(), Err(IntervalError::Unbounded));
        let huge = iv(-f64::MAX, f64::MAX);
        assert_eq!(huge.mid(), 0.0);
    }

    #[test]
    fn unbounded_products() {
        let a = Interval::new(0.0, f64::INFINITY);
        assert_eq!(a * iv(0.0, 0.0), iv(0.0, 0.0));
        assert_eq!(a * iv(1.0, 2.0), a);
        let b = Interval::new(1.0, f64::INFINITY);
        assert_eq!(b / b, Interval::new(0.0, f64::INFINITY));
    }
}

//! Elementary functions over intervals.
//!
//! The library math functions are faithful to within one ulp on the platforms
//! we target; results are widened by [`LIBM_ULPS`] outward unless the value is
//! known to be exact (`exp(0)`, `exp2` of an integer, `log2` of a power of two,
//! ...). Domain restrictions intersect first, so `sqrt([-4, 9]) = [0, 3]`.

use std::f64::consts::{FRAC_PI_2, PI};

use super::round::*;
use super::Interval;

pub(crate) const LIBM_ULPS: u32 = 2;

// The f64 constants for π, π/2 and 2π all round down.
use std::f64::consts;

/// Outward enclosure of π.
pub const PI_IV: Interval = Interval::from_consts(consts::PI, consts::PI.next_up());
/// Outward enclosure of π/2.
pub const HALF_PI_IV: Interval = Interval::from_consts(consts::FRAC_PI_2, consts::FRAC_PI_2.next_up());
/// Outward enclosure of 2π.
pub const TWO_PI_IV: Interval = Interval::from_consts(consts::TAU, consts::TAU.next_up());


fn down(v: f64) -> f64 {
    nudge_down(v, LIBM_ULPS)
}

fn up(v: f64) -> f64 {
    nudge_up(v, LIBM_ULPS)
}

fn exp_down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x == 0.0 {
        1.0
    } else {
        down(x.exp()).max(0.0)
    }
}

fn exp_up(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        up(x.exp())
    }
}

fn is_exact_exp2_arg(x: f64) -> bool {
    x.fract() == 0.0 && (-1022.0..=1023.0).contains(&x)
}

fn exp2_down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if is_exact_exp2_arg(x) {
        x.exp2()
    } else {
        down(x.exp2()).max(0.0)
    }
}

fn exp2_up(x: f64) -> f64 {
    if is_exact_exp2_arg(x) {
        x.exp2()
    } else {
        up(x.exp2())
    }
}

fn is_power_of_two(x: f64) -> bool {
    x.is_normal() && x > 0.0 && (x.to_bits() & ((1u64 << 52) - 1)) == 0
}

fn log_down(x: f64) -> f64 {
    if x == 1.0 {
        0.0
    } else if x == f64::INFINITY {
        f64::INFINITY
    } else {
        down(x.ln())
    }
}

fn log_up(x: f64) -> f64 {
    if x == 1.0 {
        0.0
    } else {
        up(x.ln())
    }
}

fn log2_down(x: f64) -> f64 {
    if is_power_of_two(x) {
        x.log2()
    } else if x == f64::INFINITY {
        x
    } else {
        down(x.log2())
    }
}

fn log2_up(x: f64) -> f64 {
    if is_power_of_two(x) {
        x.log2()
    } else {
        up(x.log2())
    }
}

/// Does `[lo, hi]` (conservatively) contain a point `phase + k·period`?
fn hits_lattice(lo: f64, hi: f64, phase: f64, period: f64) -> bool {
    let k0 = ((lo - phase) / period).floor();
    for dk in -1..=2 {
        let k = k0 + dk as f64;
        let c = phase + k * period;
        let tol = 8.0 * f64::EPSILON * (c.abs() + period);
        if c + tol >= lo && c - tol <= hi {
            return true;
        }
    }
    false
}

/// Above this magnitude we give up on trig range reduction.
const TRIG_LIMIT: f64 = 1.0e8;

impl Interval {
    pub fn exp(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval::raw(exp_down(self.lo()), exp_up(self.hi()))
    }

    pub fn exp2(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval::raw(exp2_down(self.lo()), exp2_up(self.hi()))
    }

    /// Natural log over `self ∩ (0, +inf)`.
    pub fn ln(self) -> Interval {
        if self.is_empty() || self.hi() <= 0.0 {
            return Interval::EMPTY;
        }
        let lo = if self.lo() <= 0.0 { f64::NEG_INFINITY } else { log_down(self.lo()) };
        Interval::raw(lo, log_up(self.hi()))
    }

    pub fn log2(self) -> Interval {
        if self.is_empty() || self.hi() <= 0.0 {
            return Interval::EMPTY;
        }
        let lo = if self.lo() <= 0.0 { f64::NEG_INFINITY } else { log2_down(self.lo()) };
        Interval::raw(lo, log2_up(self.hi()))
    }

    /// Square root over `self ∩ [0, +inf)`.
    pub fn sqrt(self) -> Interval {
        if self.is_empty() || self.hi() < 0.0 {
            return Interval::EMPTY;
        }
        Interval::raw(sqrt_down(self.lo().max(0.0)), sqrt_up(self.hi()))
    }

    pub fn abs(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        if self.lo() >= 0.0 {
            self
        } else if self.hi() <= 0.0 {
            -self
        } else {
            Interval::raw(0.0, self.mag())
        }
    }

    /// Enclosure of the sign function; the generalized derivative of `abs`.
    pub fn sign(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let lo = if self.lo() > 0.0 { 1.0 } else if self.lo() == 0.0 { 0.0 } else { -1.0 };
        let hi = if self.hi() < 0.0 { -1.0 } else if self.hi() == 0.0 { 0.0 } else { 1.0 };
        Interval::raw(lo, hi)
    }

    /// Integer power as a single primitive: `[-2, 3]^2 = [0, 9]`.
    pub fn powi(self, n: i32) -> Interval {
        if self.is_empty() {
            return self;
        }
        if n == 0 {
            return Interval::ONE;
        }
        if n < 0 {
            return Interval::ONE.div_hull(self.powi(-n));
        }
        let k = n as u32;
        let (lo, hi) = (self.lo(), self.hi());
        if k % 2 == 0 {
            if lo >= 0.0 {
                Interval::raw(powi_nonneg_down(lo, k), powi_nonneg_up(hi, k))
            } else if hi <= 0.0 {
                Interval::raw(powi_nonneg_down(-hi, k), powi_nonneg_up(-lo, k))
            } else {
                Interval::raw(0.0, powi_nonneg_up(self.mag(), k))
            }
        } else {
            let l = if lo >= 0.0 { powi_nonneg_down(lo, k) } else { -powi_nonneg_up(-lo, k) };
            let h = if hi >= 0.0 { powi_nonneg_up(hi, k) } else { -powi_nonneg_down(-hi, k) };
            Interval::raw(l, h)
        }
    }

    /// Real power `self^y = exp(y·ln self)` over the positive part of `self`.
    pub fn pow(self, y: Interval) -> Interval {
        if self.is_empty() || y.is_empty() {
            return Interval::EMPTY;
        }
        if y.is_point() && y.lo().fract() == 0.0 && y.lo().abs() < i32::MAX as f64 {
            return self.powi(y.lo() as i32);
        }
        let base = self.intersect(Interval::NONNEG);
        if base.is_empty() {
            return Interval::EMPTY;
        }
        let mut r = (y * base.ln()).exp();
        if base.lo() == 0.0 && y.lo() > 0.0 {
            r = r.hull(Interval::ZERO);
        }
        r
    }

    pub fn sin(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        self.periodic_bounds(-FRAC_PI_2, FRAC_PI_2, f64::sin)
    }

    pub fn cos(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        self.periodic_bounds(PI, 0.0, f64::cos)
    }

    /// Shared code for sin/cos: `min_phase`/`max_phase` locate the extrema on
    /// the 2π lattice.
    fn periodic_bounds(self, min_phase: f64, max_phase: f64, f: fn(f64) -> f64) -> Interval {
        let (lo, hi) = (self.lo(), self.hi());
        if !self.is_bounded() || hi - lo >= TWO_PI_IV.lo() || lo.abs() > TRIG_LIMIT || hi.abs() > TRIG_LIMIT {
            return Interval::new(-1.0, 1.0);
        }
        let period = 2.0 * PI;
        let (fl, fh) = (f(lo), f(hi));
        let exact = |x: f64, v: f64| x == 0.0 && (v == 0.0 || v == 1.0);
        let dl = |x: f64, v: f64| if exact(x, v) { v } else { down(v) };
        let ul = |x: f64, v: f64| if exact(x, v) { v } else { up(v) };
        let rlo = if hits_lattice(lo, hi, min_phase, period) { -1.0 } else { dl(lo, fl).min(dl(hi, fh)) };
        let rhi = if hits_lattice(lo, hi, max_phase, period) { 1.0 } else { ul(lo, fl).max(ul(hi, fh)) };
        Interval::raw(rlo.max(-1.0), rhi.min(1.0))
    }

    pub fn tan(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let (lo, hi) = (self.lo(), self.hi());
        if !self.is_bounded() || hi - lo >= PI_IV.lo() || lo.abs() > TRIG_LIMIT || hi.abs() > TRIG_LIMIT {
            return Interval::ENTIRE;
        }
        if hits_lattice(lo, hi, FRAC_PI_2, PI) {
            return Interval::ENTIRE;
        }
        let l = if lo == 0.0 { 0.0 } else { down(lo.tan()) };
        let h = if hi == 0.0 { 0.0 } else { up(hi.tan()) };
        Interval::raw(l, h)
    }

    pub fn atan(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let bound = HALF_PI_IV.hi();
        let l = if self.lo() == 0.0 { 0.0 } else { down(self.lo().atan()).max(-bound) };
        let h = if self.hi() == 0.0 { 0.0 } else { up(self.hi().atan()).min(bound) };
        Interval::raw(l, h)
    }

    pub fn tanh(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let l = if self.lo() == 0.0 { 0.0 } else { down(self.lo().tanh()).max(-1.0) };
        let h = if self.hi() == 0.0 { 0.0 } else { up(self.hi().tanh()).min(1.0) };
        Interval::raw(l, h)
    }

    /// `asin` over `self ∩ [-1, 1]`.
    pub fn asin(self) -> Interval {
        let d = self.intersect(Interval::new(-1.0, 1.0));
        if d.is_empty() {
            return d;
        }
        let bound = HALF_PI_IV.hi();
        let l = if d.lo() == 0.0 { 0.0 } else { down(d.lo().asin()).max(-bound) };
        let h = if d.hi() == 0.0 { 0.0 } else { up(d.hi().asin()).min(bound) };
        Interval::raw(l, h)
    }

    /// `acos` over `self ∩ [-1, 1]`, decreasing.
    pub fn acos(self) -> Interval {
        let d = self.intersect(Interval::new(-1.0, 1.0));
        if d.is_empty() {
            return d;
        }
        let l = if d.hi() == 1.0 { 0.0 } else { down(d.hi().acos()).max(0.0) };
        let h = up(d.lo().acos()).min(PI_IV.hi());
        Interval::raw(l, h)
    }

    /// `atanh` over `self ∩ [-1, 1]` (unbounded at ±1).
    pub fn atanh(self) -> Interval {
        let d = self.intersect(Interval::new(-1.0, 1.0));
        if d.is_empty() {
            return d;
        }
        let l = if d.lo() <= -1.0 { f64::NEG_INFINITY } else if d.lo() == 0.0 { 0.0 } else { down(d.lo().atanh()) };
        let h = if d.hi() >= 1.0 { f64::INFINITY } else if d.hi() == 0.0 { 0.0 } else { up(d.hi().atanh()) };
        Interval::raw(l, h)
    }

    /// Nonnegative `n`-th root of `self ∩ [0, +inf)`.
    pub fn nth_root(self, n: u32) -> Interval {
        let d = self.intersect(Interval::NONNEG);
        if d.is_empty() {
            return d;
        }
        Interval::raw(root_down(d.lo(), n), root_up(d.hi(), n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b)
    }

    #[test]
    fn pi_enclosures_bracket() {
        assert!(PI_IV.contains(PI));
        assert!(HALF_PI_IV.contains(FRAC_PI_2));
        assert!(TWO_PI_IV.contains(2.0 * PI));
        assert!(PI_IV.lo() < PI_IV.hi());
    }

    #[test]
    fn sin_over_half_period() {
        let s = iv(0.0, PI).sin();
        assert_eq!(s.lo(), 0.0);
        assert_eq!(s.hi(), 1.0);
    }

    #[test]
    fn sqrt_restricts_domain() {
        assert_eq!(iv(-4.0, 9.0).sqrt(), iv(0.0, 3.0));
        assert!(iv(-4.0, -1.0).sqrt().is_empty());
    }

    #[test]
    fn even_power_through_zero() {
        assert_eq!(iv(-2.0, 3.0).powi(2), iv(0.0, 9.0));
        assert_eq!(iv(-2.0, 3.0).powi(3), iv(-8.0, 27.0));
        assert_eq!(iv(-5.0, 5.0).powi(2), iv(0.0, 25.0));
        assert_eq!(iv(2.0, 4.0).powi(-1), iv(0.25, 0.5));
    }

    #[test]
    fn exact_power_of_two_exponentials() {
        assert_eq!(iv(-5.0, 5.0).exp2(), iv(1.0 / 32.0, 32.0));
        assert_eq!(iv(2.0, 32.0).log2(), iv(1.0, 5.0));
        assert_eq!(iv(0.0, 0.0).exp(), iv(1.0, 1.0));
    }

    #[test]
    fn log_domain() {
        assert!(iv(-2.0, 0.0).ln().is_empty());
        let l = iv(0.0, 1.0).ln();
        assert_eq!(l.lo(), f64::NEG_INFINITY);
        assert_eq!(l.hi(), 0.0);
    }

    #[test]
    fn tan_with_pole_is_entire() {
        assert_eq!(iv(1.0, 2.0).tan(), Interval::ENTIRE);
        let t = iv(-0.5, 0.5).tan();
        assert!(t.contains(0.5f64.tan()) && t.contains((-0.5f64).tan()));
    }

    #[test]
    fn cos_wraps() {
        let c = iv(3.0, 3.5).cos();
        assert_eq!(c.lo(), -1.0);
        let c = iv(-0.1, 0.1).cos();
        assert_eq!(c.hi(), 1.0);
        let c = iv(6.0, 6.5).cos();
        assert_eq!(c.hi(), 1.0);
    }

    #[test]
    fn inverse_trig_enclose() {
        let a = iv(-0.5, 0.25).asin();
        assert!(a.contains((-0.5f64).asin()) && a.contains(0.25f64.asin()));
        let a = iv(-0.5, 1.0).acos();
        assert_eq!(a.lo(), 0.0);
        assert!(a.contains((-0.5f64).acos()));
        assert_eq!(iv(-1.0, 1.0).atanh(), Interval::ENTIRE);
    }

    #[test]
    fn real_powers() {
        let r = iv(4.0, 9.0).pow(Interval::point(0.5));
        assert!(r.contains(2.0) && r.contains(3.0));
        assert_eq!(iv(-2.0, 3.0).pow(Interval::point(2.0)), iv(0.0, 9.0));
    }
}

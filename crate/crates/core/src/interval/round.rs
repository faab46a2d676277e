//! Directed rounding on top of round-to-nearest hardware arithmetic.
//!
//! The basic operations recover the exact rounding error with error-free
//! transforms (TwoSum, FMA remainders) and step one float outward only when the
//! rounded result is on the wrong side of the exact value. Results that are
//! exactly representable therefore stay exact. Near the underflow threshold the
//! error terms stop being exact and we fall back to an unconditional one-ulp
//! nudge.

/// Below this magnitude FMA residuals may be inexact.
const TINY: f64 = 1.0e-290;

#[inline]
pub(crate) fn next_up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
pub(crate) fn next_down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
pub(crate) fn nudge_up(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = y.next_up();
    }
    y
}

#[inline]
pub(crate) fn nudge_down(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = y.next_down();
    }
    y
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bp = s - a;
    let ap = s - bp;
    (a - ap) + (b - bp)
}

pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if s == f64::INFINITY && a.is_finite() && b.is_finite() {
            return f64::MAX;
        }
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        next_down(s)
    } else {
        s
    }
}

pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if s == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            return f64::MIN;
        }
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        next_up(s)
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Beyond this magnitude Veltkamp splitting can overflow.
const SPLIT_MAX: f64 = 1.0e295;

/// Exact `a*b - fl(a*b)` for finite operands of moderate size. Uses the
/// hardware FMA when the target has one and Dekker's product otherwise,
/// since the software `mul_add` fallback is very slow.
#[inline]
fn prod_err(a: f64, b: f64, p: f64) -> Option<f64> {
    if cfg!(target_feature = "fma") {
        return Some(a.mul_add(b, -p));
    }
    if a.abs() > SPLIT_MAX || b.abs() > SPLIT_MAX {
        return None;
    }
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    Some(((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = 134_217_729.0 * a;
    let h = c - (c - a);
    (h, a - h)
}

/// Sign of the exact `x - a*b`, where `a*b` is close to `x`.
#[inline]
fn residual_sign(x: f64, a: f64, b: f64) -> Option<f64> {
    let p = a * b;
    let e = prod_err(a, b, p)?;
    // x - p is exact by Sterbenz when p is within a factor 2 of x
    if !(p / 2.0 <= x && x <= 2.0 * p) && !(2.0 * p <= x && x <= p / 2.0) {
        return None;
    }
    let r = (x - p) - e;
    Some(if r == 0.0 { 0.0 } else { r.signum() })
}

/// Product rounded toward -inf. `0 * inf` is taken as 0, the convention
/// required for endpoint products of unbounded intervals.
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        if p == f64::INFINITY && a.is_finite() && b.is_finite() {
            return f64::MAX;
        }
        return p;
    }
    if p.abs() < TINY {
        return next_down(p);
    }
    let Some(e) = prod_err(a, b, p) else {
        return next_down(p);
    };
    if e < 0.0 {
        next_down(p)
    } else {
        p
    }
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        if p == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            return f64::MIN;
        }
        return p;
    }
    if p.abs() < TINY {
        return next_up(p);
    }
    let Some(e) = prod_err(a, b, p) else {
        return next_up(p);
    };
    if e > 0.0 {
        next_up(p)
    } else {
        p
    }
}

/// Sign of the exact quotient error `a/b - fl(a/b)`: -1, 0 or 1, or `None`
/// when the remainder is not trustworthy.
fn div_err_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if !a.is_finite() || !b.is_finite() {
        // inf / finite and finite / inf are exact.
        return Some(0.0);
    }
    if !q.is_finite() || q.abs() < TINY || a.abs() < TINY {
        return None;
    }
    residual_sign(a, q, b).map(|r| r * b.signum())
}

pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    match div_err_sign(a, b, q) {
        Some(s) if s < 0.0 => next_down(q),
        Some(_) => q,
        None => {
            if q == f64::INFINITY && a.is_finite() {
                f64::MAX
            } else if q.is_infinite() {
                q
            } else {
                next_down(q)
            }
        }
    }
}

pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    match div_err_sign(a, b, q) {
        Some(s) if s > 0.0 => next_up(q),
        Some(_) => q,
        None => {
            if q == f64::NEG_INFINITY && a.is_finite() {
                f64::MIN
            } else if q.is_infinite() {
                q
            } else {
                next_up(q)
            }
        }
    }
}

pub(crate) fn sqrt_down(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    if !s.is_finite() {
        return s;
    }
    if x < TINY {
        return next_down(s).max(0.0);
    }
    let Some(r) = residual_sign(x, s, s) else {
        return next_down(s).max(0.0);
    };
    if r < 0.0 {
        next_down(s)
    } else {
        s
    }
}

pub(crate) fn sqrt_up(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    if !s.is_finite() {
        return s;
    }
    if x < TINY {
        return next_up(s);
    }
    let Some(r) = residual_sign(x, s, s) else {
        return next_up(s);
    };
    if r > 0.0 {
        next_up(s)
    } else {
        s
    }
}

/// `x^n` for `x >= 0`, rounded down.
pub(crate) fn powi_nonneg_down(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut k = n;
    // square-and-multiply keeps the number of roundings logarithmic
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_down(acc, base);
        }
        k >>= 1;
        if k > 0 {
            base = mul_down(base, base);
        }
    }
    acc
}

pub(crate) fn powi_nonneg_up(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_up(acc, base);
        }
        k >>= 1;
        if k > 0 {
            base = mul_up(base, base);
        }
    }
    acc
}

/// Largest float `y >= 0` found with `y^n <= x` guaranteed, i.e. a lower bound of `x^(1/n)`.
pub(crate) fn root_down(x: f64, n: u32) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if n == 1 {
        return x;
    }
    if n == 2 {
        return sqrt_down(x);
    }
    let mut y = if n == 3 { x.cbrt() } else { x.powf(1.0 / n as f64) };
    if !y.is_finite() {
        y = f64::MAX;
    }
    for _ in 0..64 {
        if powi_nonneg_up(y, n) <= x {
            return y;
        }
        y = next_down(y);
        if y <= 0.0 {
            return 0.0;
        }
    }
    // the libm estimate was far off; back off geometrically
    while y > 0.0 && powi_nonneg_up(y, n) > x {
        y *= 0.5;
    }
    y.max(0.0)
}

/// Smallest float found with `y^n >= x` guaranteed, an upper bound of `x^(1/n)`.
pub(crate) fn root_up(x: f64, n: u32) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if n == 1 {
        return x;
    }
    if n == 2 {
        return sqrt_up(x);
    }
    let mut y = if n == 3 { x.cbrt() } else { x.powf(1.0 / n as f64) };
    if !y.is_finite() {
        return f64::INFINITY;
    }
    for _ in 0..64 {
        if powi_nonneg_down(y, n) >= x {
            return y;
        }
        y = next_up(y);
    }
    while y.is_finite() && powi_nonneg_down(y, n) < x {
        y *= 2.0;
    }
    y
}

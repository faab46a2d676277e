//! Interval Newton contractors: Gauss–Seidel, Hansen–Sengupta, Krawczyk.

use nalgebra::DMatrix;

use super::{ContractionOutcome, Contractor};
use crate::expr::System;
use crate::interval::{extended_divide, ExtendedQuotient, Interval, IntervalBox, IntervalMatrix};

/// Condition-number estimate above which the midpoint inverse is not trusted.
pub const MAX_PRECONDITIONER_COND: f64 = 1e12;

/// Result of one Gauss–Seidel sweep.
#[derive(Clone, Debug)]
pub(crate) struct SweepResult {
    pub outcome: ContractionOutcome,
    /// Every unintersected update landed strictly inside its component and
    /// no diagonal entry contained zero.
    pub interior: bool,
}

/// Interval Gauss–Seidel sweep for `A·y = rhs`, `y ∈ x`.
///
/// Division by a diagonal entry containing zero may split a component; the
/// first such gap is reported and later components use its hull.
pub fn gauss_seidel(a: &IntervalMatrix, rhs: &[Interval], x: &IntervalBox) -> ContractionOutcome {
    sweep(a, rhs, x).outcome
}

pub(crate) fn sweep(a: &IntervalMatrix, rhs: &[Interval], x: &IntervalBox) -> SweepResult {
    let n = x.dim();
    assert!(a.nrows() == n && a.ncols() == n && rhs.len() == n, "dimension mismatch");
    let mut y = x.clone();
    let mut gap: Option<(usize, Interval, Interval)> = None;
    let mut interior = true;
    for i in 0..n {
        let mut s = rhs[i];
        for j in 0..n {
            if j != i {
                s = s - a[(i, j)] * y[j];
            }
        }
        let aii = a[(i, i)];
        if aii.contains_zero() {
            interior = false;
        }
        let q = extended_divide(s, aii);
        if interior {
            match q {
                ExtendedQuotient::One(v) if v.interior_of(&x[i]) => {}
                _ => interior = false,
            }
        }
        match q.intersect(y[i]) {
            ExtendedQuotient::Empty => return SweepResult { outcome: ContractionOutcome::Empty, interior: false },
            ExtendedQuotient::Whole => {}
            ExtendedQuotient::One(v) => y[i] = v,
            ExtendedQuotient::Two(l, r) => {
                if gap.is_none() {
                    gap = Some((i, l, r));
                }
                y[i] = l.hull(r);
            }
        }
    }
    let outcome = match gap {
        Some((i, l, r)) => ContractionOutcome::Gap(y.with(i, l), y.with(i, r), i),
        None => ContractionOutcome::Contracted(y),
    };
    SweepResult { outcome, interior }
}

/// Midpoint-inverse preconditioner, falling back to the identity.
pub fn preconditioner(j: &IntervalMatrix) -> DMatrix<f64> {
    j.mid_inverse(MAX_PRECONDITIONER_COND).unwrap_or_else(|| DMatrix::identity(j.nrows(), j.ncols()))
}

fn center_of(b: &IntervalBox, center: Option<&[f64]>) -> Vec<f64> {
    match center {
        Some(c) => c.to_vec(),
        None => b.mid(),
    }
}

fn point_times(c: &DMatrix<f64>, v: &[Interval]) -> Vec<Interval> {
    (0..c.nrows())
        .map(|i| {
            v.iter().enumerate().fold(Interval::ZERO, |acc, (k, x)| {
                let ck = c[(i, k)];
                if ck == 0.0 {
                    acc
                } else {
                    acc + *x * ck
                }
            })
        })
        .collect()
}

/// Hansen–Sengupta step; also reports whether the result proves uniqueness.
pub(crate) fn hansen_sengupta_step(
    sys: &System,
    b: &IntervalBox,
    center: Option<&[f64]>,
    c: Option<&DMatrix<f64>>,
) -> SweepResult {
    let m = center_of(b, center);
    let jac = sys.jacobian(b);
    let owned;
    let c = match c {
        Some(c) => c,
        None => {
            owned = preconditioner(&jac);
            &owned
        }
    };
    let a = jac.premul_point(c);
    let fm = sys.eval_at(&m);
    if fm.iter().any(|v| v.is_empty()) {
        return SweepResult { outcome: ContractionOutcome::Contracted(b.clone()), interior: false };
    }
    let rhs: Vec<Interval> = point_times(c, &fm).into_iter().map(|v| -v).collect();
    let shifted = IntervalBox::new(b.sub_point(&m));
    let res = sweep(&a, &rhs, &shifted);
    let back = |y: IntervalBox| -> IntervalBox {
        IntervalBox::new(y.iter().zip(&m).map(|(v, &mi)| *v + Interval::point(mi)).collect()).intersect(b)
    };
    let outcome = match res.outcome {
        ContractionOutcome::Empty => ContractionOutcome::Empty,
        ContractionOutcome::Contracted(y) => nonempty(back(y)),
        ContractionOutcome::Gap(l, r, i) => {
            let (l, r) = (back(l), back(r));
            match (l.is_empty(), r.is_empty()) {
                (true, true) => ContractionOutcome::Empty,
                (false, true) => ContractionOutcome::Contracted(l),
                (true, false) => ContractionOutcome::Contracted(r),
                _ => ContractionOutcome::Gap(l, r, i),
            }
        }
    };
    SweepResult { outcome, interior: res.interior }
}

fn nonempty(b: IntervalBox) -> ContractionOutcome {
    if b.is_empty() {
        ContractionOutcome::Empty
    } else {
        ContractionOutcome::Contracted(b)
    }
}

/// `H(b) = m + Γ(C·J(b), −C·f(m), b − m) ∩ b`; defaults `m = mid(b)`,
/// `C = mid(J(b))⁻¹`.
pub fn hansen_sengupta(
    sys: &System,
    b: &IntervalBox,
    center: Option<&[f64]>,
    c: Option<&DMatrix<f64>>,
) -> ContractionOutcome {
    hansen_sengupta_step(sys, b, center, c).outcome
}

/// The unintersected Krawczyk image `m − C·f(m) + (I − C·J(b))(b − m)`.
pub(crate) fn krawczyk_image(
    sys: &System,
    b: &IntervalBox,
    center: Option<&[f64]>,
    c: Option<&DMatrix<f64>>,
) -> Option<IntervalBox> {
    let m = center_of(b, center);
    let jac = sys.jacobian(b);
    let owned;
    let c = match c {
        Some(c) => c,
        None => {
            owned = preconditioner(&jac);
            &owned
        }
    };
    let fm = sys.eval_at(&m);
    if fm.iter().any(|v| v.is_empty()) {
        return None;
    }
    let cf = point_times(c, &fm);
    let mut r = jac.premul_point(c);
    let n = b.dim();
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { Interval::ONE } else { Interval::ZERO };
            r[(i, j)] = id - r[(i, j)];
        }
    }
    let d = r.mul_vec(&b.sub_point(&m));
    Some(IntervalBox::new((0..n).map(|i| Interval::point(m[i]) - cf[i] + d[i]).collect()))
}

/// Krawczyk contraction `K(b) ∩ b`; never produces a gap.
pub fn krawczyk(sys: &System, b: &IntervalBox, center: Option<&[f64]>, c: Option<&DMatrix<f64>>) -> ContractionOutcome {
    match krawczyk_image(sys, b, center, c) {
        Some(k) => nonempty(k.intersect(b)),
        None => ContractionOutcome::Contracted(b.clone()),
    }
}

/// Hansen–Sengupta as a pipeline stage (requires a bounded, square system).
#[derive(Clone, Debug, Default)]
pub struct HansenSengupta;

impl Contractor for HansenSengupta {
    fn name(&self) -> &str {
        "hansen-sengupta"
    }

    fn contract(&self, sys: &System, b: &IntervalBox) -> ContractionOutcome {
        if !sys.is_square() || !b.is_bounded() {
            return ContractionOutcome::Contracted(b.clone());
        }
        hansen_sengupta(sys, b, None, None)
    }
}

/// Krawczyk as a pipeline stage.
#[derive(Clone, Debug, Default)]
pub struct Krawczyk;

impl Contractor for Krawczyk {
    fn name(&self) -> &str {
        "krawczyk"
    }

    fn contract(&self, sys: &System, b: &IntervalBox) -> ContractionOutcome {
        if !sys.is_square() || !b.is_bounded() {
            return ContractionOutcome::Contracted(b.clone());
        }
        krawczyk(sys, b, None, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_system;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b)
    }

    #[test]
    fn identity_system() {
        let a = IntervalMatrix::identity(2);
        let x = IntervalBox::from_bounds(&[(0.0, 10.0), (0.0, 10.0)]);
        let out = gauss_seidel(&a, &[Interval::point(2.0), Interval::point(3.0)], &x);
        assert_eq!(out.boxes()[0], IntervalBox::point(&[2.0, 3.0]));
    }

    #[test]
    fn zero_straddling_pivot_gives_gap() {
        let a = IntervalMatrix::from_rows(vec![vec![iv(-1.0, 1.0)]]);
        let x = IntervalBox::from_bounds(&[(-10.0, 10.0)]);
        match gauss_seidel(&a, &[iv(1.0, 2.0)], &x) {
            ContractionOutcome::Gap(l, r, 0) => {
                assert_eq!(l[0], iv(-10.0, -1.0));
                assert_eq!(r[0], iv(1.0, 10.0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inconsistent_rhs_is_empty() {
        let a = IntervalMatrix::from_rows(vec![vec![Interval::ONE]]);
        let x = IntervalBox::from_bounds(&[(0.0, 1.0)]);
        assert!(gauss_seidel(&a, &[Interval::point(5.0)], &x).is_empty());
    }

    #[test]
    fn linear_one_d() {
        let s = parse_system("vars x; box x in [0, 10]; eq x - 2").unwrap();
        let h = hansen_sengupta(&s, s.initial_box(), None, None);
        assert_eq!(h.boxes()[0][0], Interval::point(2.0));
        let c = DMatrix::from_element(1, 1, 1.0);
        let k = krawczyk(&s, s.initial_box(), Some(&[5.0]), Some(&c));
        assert_eq!(k.boxes()[0][0], Interval::point(2.0));
    }

    #[test]
    fn linear_two_d() {
        let s = parse_system("vars x, y; box [0, 3]^2; eq x - y; eq x + y - 2").unwrap();
        for out in [hansen_sengupta(&s, s.initial_box(), None, None), krawczyk(&s, s.initial_box(), None, None)] {
            let b = &out.boxes()[0];
            assert!(b.contains_point(&[1.0, 1.0]));
            assert!(b.max_width() < 1e-12);
        }
    }

    #[test]
    fn gap_around_zero_derivative() {
        let s = parse_system("vars x; box x in [-2, 2]; eq x^2 - 1").unwrap();
        let c = DMatrix::from_element(1, 1, 1.0);
        match hansen_sengupta(&s, s.initial_box(), Some(&[0.0]), Some(&c)) {
            ContractionOutcome::Gap(l, r, 0) => {
                assert!(l[0].contains(-1.0) && r[0].contains(1.0));
                assert!(l[0].hi() < 0.0 && r[0].lo() > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn krawczyk_narrow_box_is_interior() {
        let s = parse_system("vars x; box x in [0.9, 1.1]; eq x^2 - 1").unwrap();
        let k = krawczyk_image(&s, s.initial_box(), None, None).unwrap();
        assert!(k.interior_of(s.initial_box()), "{k}");
    }
}

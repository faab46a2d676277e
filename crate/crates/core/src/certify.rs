//! Existence and uniqueness tests for roots in boxes, inflation, and
//! deduplication of certified outputs.

use nalgebra::DMatrix;

use crate::contract::{hansen_sengupta_step, krawczyk_image, preconditioner, ContractionOutcome};
use crate::expr::System;
use crate::interval::{Interval, IntervalBox};

#[derive(Clone, Debug, PartialEq)]
pub enum CertificationResult {
    /// Exactly one root lies in the box.
    UniqueRoot(IntervalBox),
    /// At least one root lies in the box.
    ExistsRoot(IntervalBox),
    Unknown,
}

impl CertificationResult {
    pub fn is_unique(&self) -> bool {
        matches!(self, CertificationResult::UniqueRoot(_))
    }

    pub fn proves_existence(&self) -> bool {
        !matches!(self, CertificationResult::Unknown)
    }

    pub fn certified_box(&self) -> Option<&IntervalBox> {
        match self {
            CertificationResult::UniqueRoot(b) | CertificationResult::ExistsRoot(b) => Some(b),
            CertificationResult::Unknown => None,
        }
    }
}

/// Which uniqueness operator to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Certifier {
    Krawczyk,
    #[default]
    HansenSengupta,
}

impl Certifier {
    pub fn test(self, sys: &System, b: &IntervalBox) -> CertificationResult {
        match self {
            Certifier::Krawczyk => krawczyk_test(sys, b),
            Certifier::HansenSengupta => hansen_sengupta_test(sys, b),
        }
    }
}

impl std::str::FromStr for Certifier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hs" | "hansen-sengupta" => Ok(Certifier::HansenSengupta),
            "krawczyk" | "k" => Ok(Certifier::Krawczyk),
            other => Err(format!("unknown certifier '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CertifyError {
    #[error("inflation factor must exceed 1, got {0}")]
    BadFactor(f64),
}

fn precheck(sys: &System, b: &IntervalBox) -> Option<CertificationResult> {
    if !sys.is_square() || b.is_empty() || !b.is_bounded() {
        return Some(CertificationResult::Unknown);
    }
    // a degenerate box has no interior; it is certified by an exact zero
    // residual at a provably regular Jacobian (a simple root)
    if b.iter().all(|c| c.is_point()) {
        let exact = sys.eval(b).iter().all(|v| *v == Interval::ZERO);
        return Some(if exact && regular_at(sys, b) {
            CertificationResult::UniqueRoot(b.clone())
        } else {
            CertificationResult::Unknown
        });
    }
    None
}

/// The preconditioned Jacobian over `b` is strictly diagonally dominant,
/// hence every matrix it encloses is nonsingular.
fn regular_at(sys: &System, b: &IntervalBox) -> bool {
    let jac = sys.jacobian(b);
    let Some(c) = jac.mid_inverse(crate::contract::MAX_PRECONDITIONER_COND) else {
        return false;
    };
    let a = jac.premul_point(&c);
    (0..a.nrows()).all(|i| {
        let off: f64 = (0..a.ncols()).filter(|&j| j != i).map(|j| a[(i, j)].mag()).sum();
        a[(i, i)].mig() > off * (1.0 + 1e-10)
    })
}

/// UniqueRoot when the Krawczyk image lies in the interior of `b`.
pub fn krawczyk_test(sys: &System, b: &IntervalBox) -> CertificationResult {
    if let Some(r) = precheck(sys, b) {
        return r;
    }
    match krawczyk_image(sys, b, None, None) {
        Some(k) if k.interior_of(b) => CertificationResult::UniqueRoot(k),
        _ => CertificationResult::Unknown,
    }
}

/// UniqueRoot when the Hansen–Sengupta image lies in the interior of `b`.
pub fn hansen_sengupta_test(sys: &System, b: &IntervalBox) -> CertificationResult {
    if let Some(r) = precheck(sys, b) {
        return r;
    }
    let step = hansen_sengupta_step(sys, b, None, None);
    match step.outcome {
        ContractionOutcome::Contracted(h) if step.interior => CertificationResult::UniqueRoot(h),
        _ => CertificationResult::Unknown,
    }
}

/// Sign-change test on opposite faces: ExistsRoot when, for every `i`, the
/// (optionally preconditioned) `gᵢ` is `<= 0` on one face `xᵢ = const` and
/// `>= 0` on the other.
pub fn miranda_test(sys: &System, b: &IntervalBox, precondition: bool) -> CertificationResult {
    if !sys.is_square() || b.is_empty() || !b.is_bounded() {
        return CertificationResult::Unknown;
    }
    let n = b.dim();
    let c = if precondition { preconditioner(&sys.jacobian(b)) } else { DMatrix::identity(n, n) };
    // natural extension of C·f intersected with its mean-value form, which
    // keeps the cancellation that preconditioning is meant to expose
    let g = |face: &IntervalBox, i: usize| -> Interval {
        let combine = |v: &[Interval]| {
            v.iter().enumerate().fold(Interval::ZERO, |acc, (k, x)| {
                let ck = c[(i, k)];
                if ck == 0.0 {
                    acc
                } else {
                    acc + *x * ck
                }
            })
        };
        let natural = combine(&sys.eval(face));
        let m = face.mid();
        let fm = sys.eval_at(&m);
        let jac = sys.jacobian(face);
        let slope: Vec<Interval> = (0..n).map(|k| combine(&(0..n).map(|j| jac[(j, k)]).collect::<Vec<_>>())).collect();
        let mv = face
            .iter()
            .zip(&m)
            .zip(&slope)
            .fold(combine(&fm), |acc, ((x, &mk), d)| acc + *d * (*x - Interval::point(mk)));
        natural.intersect(mv)
    };
    for i in 0..n {
        let lo_face = b.with(i, Interval::point(b[i].lo()));
        let hi_face = b.with(i, Interval::point(b[i].hi()));
        let (gl, gh) = (g(&lo_face, i), g(&hi_face, i));
        if gl.is_empty() || gh.is_empty() {
            return CertificationResult::Unknown;
        }
        let up = gl.hi() <= 0.0 && gh.lo() >= 0.0;
        let down = gl.lo() >= 0.0 && gh.hi() <= 0.0;
        if !up && !down {
            return CertificationResult::Unknown;
        }
    }
    CertificationResult::ExistsRoot(b.clone())
}

/// Scales `b` about its midpoint; degenerate components get a small
/// absolute radius so the result has an interior.
pub fn inflate_box(b: &IntervalBox, factor: f64) -> IntervalBox {
    IntervalBox::new(
        b.iter()
            .map(|c| {
                let m = c.mid();
                let floor = 64.0 * f64::EPSILON * m.abs().max(1.0);
                if c.rad() < floor {
                    Interval::point(m).inflate_abs(floor)
                } else {
                    c.inflate(factor)
                }
            })
            .collect(),
    )
}

/// Tries `certifier` on `b`, then on up to `max_rounds` successive
/// inflations by `factor`.
pub fn inflate_and_certify(
    sys: &System,
    b: &IntervalBox,
    factor: f64,
    max_rounds: usize,
    certifier: Certifier,
) -> Result<CertificationResult, CertifyError> {
    if factor.is_nan() || factor <= 1.0 {
        return Err(CertifyError::BadFactor(factor));
    }
    let mut cur = b.clone();
    for round in 0..=max_rounds {
        if round > 0 {
            cur = inflate_box(&cur, factor);
        }
        if let r @ CertificationResult::UniqueRoot(_) = certifier.test(sys, &cur) {
            return Ok(r);
        }
    }
    Ok(CertificationResult::Unknown)
}

/// Merges certified boxes that overlap or whose midpoints agree within
/// `tol` (max-norm), replacing each group by its hull. The output is sorted
/// and independent of input order.
pub fn dedup_solutions(boxes: &[IntervalBox], tol: f64) -> Vec<IntervalBox> {
    let mut cur: Vec<IntervalBox> = boxes.to_vec();
    loop {
        let n = cur.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mids: Vec<Vec<f64>> = cur.iter().map(|b| b.mid()).collect();
        for i in 0..n {
            for j in i + 1..n {
                let close = mids[i].iter().zip(&mids[j]).all(|(a, b)| (a - b).abs() <= tol);
                if close || cur[i].overlaps(&cur[j]) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<Option<IntervalBox>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            groups[r] = Some(match groups[r].take() {
                Some(h) => h.hull(&cur[i]),
                None => cur[i].clone(),
            });
        }
        let next: Vec<IntervalBox> = groups.into_iter().flatten().collect();
        let stable = next.len() == n;
        cur = next;
        if stable {
            break;
        }
    }
    cur.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.lo().total_cmp(&y.lo()).then(x.hi().total_cmp(&y.hi())))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_system;

    #[test]
    fn sqrt2_is_unique() {
        let s = parse_system("vars x; box x in [1.40, 1.43]; eq x^2 - 2").unwrap();
        assert!(krawczyk_test(&s, s.initial_box()).is_unique());
        assert!(hansen_sengupta_test(&s, s.initial_box()).is_unique());
    }

    #[test]
    fn double_root_is_unknown() {
        let s = parse_system("vars x; box x in [-0.1, 0.1]; eq x^2").unwrap();
        assert_eq!(krawczyk_test(&s, s.initial_box()), CertificationResult::Unknown);
        assert_eq!(hansen_sengupta_test(&s, s.initial_box()), CertificationResult::Unknown);
        assert_eq!(
            inflate_and_certify(&s, s.initial_box(), 1.1, 5, Certifier::HansenSengupta),
            Ok(CertificationResult::Unknown)
        );
    }

    #[test]
    fn point_box_at_root() {
        let s = parse_system("vars x; box x in [3, 3]; eq x^2 - 9").unwrap();
        assert!(hansen_sengupta_test(&s, s.initial_box()).is_unique());
        let s = parse_system("vars x; box x in [0, 0]; eq x^2").unwrap();
        assert_eq!(hansen_sengupta_test(&s, s.initial_box()), CertificationResult::Unknown);
    }

    #[test]
    fn miranda_cases() {
        let s = parse_system("vars x; box x in [-1, 1]; eq x").unwrap();
        assert!(matches!(miranda_test(&s, s.initial_box(), false), CertificationResult::ExistsRoot(_)));
        let s = parse_system("vars x, y; box [-1, 1]^2; eq y - x; eq y + x").unwrap();
        assert!(matches!(miranda_test(&s, s.initial_box(), false), CertificationResult::ExistsRoot(_)));
        let s = parse_system("vars x, y; box [-1, 1]^2; eq x - 2*y; eq x + 2*y").unwrap();
        assert_eq!(miranda_test(&s, s.initial_box(), false), CertificationResult::Unknown);
        assert!(matches!(miranda_test(&s, s.initial_box(), true), CertificationResult::ExistsRoot(_)));
    }

    #[test]
    fn inflation_rejects_small_factor() {
        let s = parse_system("vars x; box x in [0, 1]; eq x").unwrap();
        assert!(inflate_and_certify(&s, s.initial_box(), 1.0, 5, Certifier::HansenSengupta).is_err());
    }

    #[test]
    fn dedup_merges_abutting() {
        let a = IntervalBox::from_bounds(&[(0.0, 1.0)]);
        let b = IntervalBox::from_bounds(&[(1.0, 2.0)]);
        let c = IntervalBox::from_bounds(&[(5.0, 6.0)]);
        let out = dedup_solutions(&[c.clone(), a.clone(), b.clone()], 1e-6);
        assert_eq!(out, vec![IntervalBox::from_bounds(&[(0.0, 2.0)]), c.clone()]);
        assert_eq!(dedup_solutions(&[b, c, a], 1e-6), out);
        assert!(dedup_solutions(&[], 1e-6).is_empty());
    }
}

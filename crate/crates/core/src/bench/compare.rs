//! Cross-checking two solution sets for the same instance.

use crate::interval::IntervalBox;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolutionSet {
    pub certified: Vec<IntervalBox>,
    pub unknown: Vec<IntervalBox>,
}

impl From<&super::format::SolutionFile> for SolutionSet {
    fn from(f: &super::format::SolutionFile) -> Self {
        SolutionSet { certified: f.certified.clone(), unknown: f.unknown.clone() }
    }
}

/// Outcome of matching certified roots of `a` against `b`. Index 0 of the
/// pairs refers to roots of `a` unmatched in `b`, index 1 the reverse.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub matched: usize,
    /// Unmatched roots lying in one of the other side's unknown boxes.
    pub consistent_suspect: [usize; 2],
    pub discrepancy: [usize; 2],
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.discrepancy == [0, 0]
    }
}

fn close(a: &IntervalBox, b: &IntervalBox, tol: f64) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    if a.overlaps(b) {
        return true;
    }
    let (ma, mb) = (a.mid(), b.mid());
    ma.iter().zip(&mb).all(|(x, y)| (x - y).abs() <= tol)
}

fn inside_any(b: &IntervalBox, boxes: &[IntervalBox], tol: f64) -> bool {
    let m = b.mid();
    boxes.iter().any(|u| u.dim() == b.dim() && u.inflate(tol).contains_point(&m))
}

/// Maximum bipartite matching (Kuhn) between certified roots.
fn max_matching(a: &[IntervalBox], b: &[IntervalBox], tol: f64) -> (usize, Vec<bool>, Vec<bool>) {
    let adj: Vec<Vec<usize>> =
        a.iter().map(|x| (0..b.len()).filter(|&j| close(x, &b[j], tol)).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; b.len()];
    fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, adj, owner, seen)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut count = 0;
    for i in 0..a.len() {
        let mut seen = vec![false; b.len()];
        if augment(i, &adj, &mut owner, &mut seen) {
            count += 1;
        }
    }
    let mut a_used = vec![false; a.len()];
    let mut b_used = vec![false; b.len()];
    for (j, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            a_used[*i] = true;
            b_used[j] = true;
        }
    }
    (count, a_used, b_used)
}

/// Two certified boxes match when they overlap or their midpoints agree
/// within `tol` in every coordinate. An unmatched root counts as a
/// consistent suspect if its midpoint lies in an unknown box of the other
/// set (inflated by `tol`), and as a discrepancy otherwise.
pub fn compare_results(a: &SolutionSet, b: &SolutionSet, tol: f64) -> ConsistencyReport {
    let (matched, a_used, b_used) = max_matching(&a.certified, &b.certified, tol);
    let mut rep = ConsistencyReport { matched, ..Default::default() };
    for (side, (set, used, other)) in [(a, &a_used, b), (b, &b_used, a)].into_iter().enumerate() {
        for (r, u) in set.certified.iter().zip(used.iter()) {
            if *u {
                continue;
            }
            if inside_any(r, &other.unknown, tol) {
                rep.consistent_suspect[side] += 1;
            } else {
                rep.discrepancy[side] += 1;
            }
        }
    }
    rep
}

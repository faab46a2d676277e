use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use super::Interval;

/// Dense row-major matrix of intervals.
#[derive(Clone, PartialEq, Debug)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntervalMatrix {
        IntervalMatrix { rows, cols, data: vec![Interval::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> IntervalMatrix {
        let mut m = IntervalMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    /// Builds from rows; panics when rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Interval>>) -> IntervalMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged interval matrix");
        IntervalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_point(m: &DMatrix<f64>) -> IntervalMatrix {
        let mut out = IntervalMatrix::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = Interval::point(m[(i, j)]);
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Componentwise midpoints; unbounded entries map to 0.
    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].checked_mid().unwrap_or(0.0))
    }

    pub fn mul_vec(&self, x: &[Interval]) -> Vec<Interval> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(Interval::ZERO, |acc, (a, b)| acc + *a * *b))
            .collect()
    }

    /// `C · self` for a point matrix `C`, with outward rounding.
    pub fn premul_point(&self, c: &DMatrix<f64>) -> IntervalMatrix {
        assert_eq!(c.ncols(), self.rows);
        let mut out = IntervalMatrix::zeros(c.nrows(), self.cols);
        for i in 0..c.nrows() {
            for j in 0..self.cols {
                let mut acc = Interval::ZERO;
                for k in 0..self.rows {
                    let ck = c[(i, k)];
                    if ck != 0.0 {
                        acc = acc + self[(k, j)] * ck;
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Inverse of the midpoint matrix, or `None` when singular or when the
    /// 1-norm condition estimate exceeds `max_cond`.
    pub fn mid_inverse(&self, max_cond: f64) -> Option<DMatrix<f64>> {
        if self.rows != self.cols {
            return None;
        }
        let m = self.mid();
        let inv = m.clone().try_inverse()?;
        let cond = norm1(&m) * norm1(&inv);
        if !cond.is_finite() || cond > max_cond {
            return None;
        }
        Some(inv)
    }
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

impl Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;

    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mid_and_inverse() {
        let m = IntervalMatrix::from_rows(vec![
            vec![Interval::new(1.0, 3.0), Interval::ZERO],
            vec![Interval::ZERO, Interval::new(3.0, 5.0)],
        ]);
        let mid = m.mid();
        assert_eq!(mid[(0, 0)], 2.0);
        assert_eq!(mid[(1, 1)], 4.0);
        let inv = m.mid_inverse(1e12).unwrap();
        assert_eq!(inv[(0, 0)], 0.5);
        let singular = IntervalMatrix::from_rows(vec![vec![Interval::ONE, Interval::ONE], vec![Interval::ONE, Interval::ONE]]);
        assert!(singular.mid_inverse(1e12).is_none());
    }

    #[test]
    fn preconditioned_product_encloses() {
        let m = IntervalMatrix::from_rows(vec![vec![Interval::new(1.0, 2.0)]]);
        let c = DMatrix::from_element(1, 1, 0.5);
        assert_eq!(m.premul_point(&c)[(0, 0)], Interval::new(0.5, 1.0));
    }
}

//! Exact rational linear algebra: reduced row echelon form, null spaces,
//! solving in a fixed span. Deterministic given row order.

use crate::scalar::{qi, Scalar};
use num::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        assert!(rows.iter().all(|v| v.len() == c));
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut s = Scalar::zero();
                for c in 0..self.cols {
                    let a = self.at(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        s += a * &v[c];
                    }
                }
                s
            })
            .collect()
    }

    /// In-place reduction to reduced row echelon form; returns the pivot
    /// columns in order. Pivoting takes the first nonzero entry in each
    /// column, so the result is deterministic for a given row order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let found = (pivot_row..self.rows).find(|&r| !self.at(r, col).is_zero());
            let Some(r0) = found else { continue };
            if r0 != pivot_row {
                for c in 0..self.cols {
                    self.data
                        .swap(r0 * self.cols + c, pivot_row * self.cols + c);
                }
            }
            let inv = {
                let p = self.at(pivot_row, col).clone();
                qi(1) / p
            };
            for c in col..self.cols {
                let v = self.at(pivot_row, c) * &inv;
                self.set(pivot_row, c, v);
            }
            for r in 0..self.rows {
                if r == pivot_row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c) - &(self.at(pivot_row, c) * &factor);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the null space in the standard rref-derived form: one
    /// vector per free column `f`, with entry 1 at `f` and the negated
    /// pivot-row entries above.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = qi(1);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m.at(row, f).clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Solves `A c = b` repeatedly against a fixed matrix of independent
/// columns. Precomputes an elimination operator `E` with `E A` in rref.
pub struct SpanSolver {
    rref: QMatrix,
    elim: QMatrix,
    pivots: Vec<usize>,
    cols: usize,
}

impl SpanSolver {
    /// `columns`: the spanning vectors, all of length `dim`.
    pub fn new(dim: usize, columns: &[Vec<Scalar>]) -> Self {
        let k = columns.len();
        // build [A | I] and reduce
        let mut aug = QMatrix::zeros(dim, k + dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim);
            for (i, v) in col.iter().enumerate() {
                aug.set(i, j, v.clone());
            }
        }
        for i in 0..dim {
            aug.set(i, k + i, qi(1));
        }
        let pivots_all = aug.rref();
        let pivots: Vec<usize> = pivots_all.into_iter().filter(|&c| c < k).collect();
        let mut rref = QMatrix::zeros(dim, k);
        let mut elim = QMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..k {
                rref.set(i, j, aug.at(i, j).clone());
            }
            for j in 0..dim {
                elim.set(i, j, aug.at(i, k + j).clone());
            }
        }
        SpanSolver {
            rref,
            elim,
            pivots,
            cols: k,
        }
    }

    /// Number of independent columns.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `b` in the column span, or `None` if `b` is outside.
    /// Free columns (dependent spanning vectors) get coordinate 0.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let y = self.elim.mul_vec(b);
        let mut c = vec![Scalar::zero(); self.cols];
        for (row, &p) in self.pivots.iter().enumerate() {
            c[p] = y[row].clone();
        }
        // consistency: rows beyond the pivots must vanish, and rows whose
        // pivot lies in the identity block impose conditions too
        for (row, yv) in y.iter().enumerate() {
            if row < self.pivots.len() {
                continue;
            }
            if !yv.is_zero() {
                return None;
            }
        }
        // verify (guards against dependent columns interacting with rhs)
        let check = self.rref.mul_vec(&c);
        if check != y {
            return None;
        }
        Some(c)
    }

    /// Whether `b` lies in the span.
    pub fn contains(&self, b: &[Scalar]) -> bool {
        self.solve(b).is_some()
    }
}

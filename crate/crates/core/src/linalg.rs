//! Small dense row-major matrices and a partial-pivot LU inverse.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default singularity threshold on LU pivot magnitude.
pub const PIVOT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `vᵀ M`.
    pub fn left_mul(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &w) in v.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(r)) {
                *o += w * m;
            }
        }
        out
    }

    /// Inverse by LU decomposition with partial pivoting. Fails with
    /// [`Error::SingularChannel`] when a pivot falls below `epsilon`.
    pub fn inverse(&self, epsilon: f64) -> Result<Matrix> {
        let lu = LuDecomposition::new(self, epsilon)?;
        let n = self.rows;
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for c in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[c] = 1.0;
            let x = lu.solve(&e);
            for r in 0..n {
                inv[(r, c)] = x[r];
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Result<f64> {
        match LuDecomposition::new(self, 0.0) {
            Ok(lu) => Ok(lu.determinant()),
            Err(Error::SingularChannel { .. }) => Ok(0.0),
            Err(e) => Err(e),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

struct LuDecomposition {
    n: usize,
    // L (unit diagonal, below) and U (on and above) packed together.
    lu: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl LuDecomposition {
    fn new(m: &Matrix, epsilon: f64) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::DimensionMismatch(format!(
                "LU of non-square {}x{} matrix",
                m.rows, m.cols
            )));
        }
        let n = m.rows;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for col in 0..n {
            let (p, mag) =
                (col..n)
                    .map(|r| (r, lu[r * n + col].abs()))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if mag <= epsilon || mag == 0.0 {
                return Err(Error::SingularChannel {
                    pivot: mag,
                    threshold: epsilon,
                });
            }
            if p != col {
                for j in 0..n {
                    lu.swap(p * n + j, col * n + j);
                }
                perm.swap(p, col);
                swaps += 1;
            }
            let pivot = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / pivot;
                lu[r * n + col] = f;
                if f != 0.0 {
                    for j in col + 1..n {
                        lu[r * n + j] -= f * lu[col * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm, swaps })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            for c in 0..r {
                y[r] -= self.lu[r * n + c] * y[c];
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                y[r] -= self.lu[r * n + c] * y[c];
            }
            y[r] /= self.lu[r * n + r];
        }
        y
    }

    fn determinant(&self) -> f64 {
        let diag: f64 = (0..self.n).map(|i| self.lu[i * self.n + i]).product();
        if self.swaps % 2 == 0 {
            diag
        } else {
            -diag
        }
    }
}

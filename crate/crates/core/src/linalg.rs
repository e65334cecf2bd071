//! Dense matrices over any [`RingElem`], with division-free determinants and
//! adjugates.

use std::fmt;

use crate::par::{self, Execution};
use crate::poly::{PolyError, QuotientElement};
use crate::ring::RingElem;

/// Largest dimension accepted by [`Matrix::det`] and [`Matrix::adjugate`].
pub const MAX_DET_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

/// Matrix over a presented ring; every entry shares one context.
pub type RingMatrix = Matrix<QuotientElement>;

impl<T: RingElem> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self, PolyError> {
        if rows == 0 || cols == 0 {
            return Err(PolyError::Shape("dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(PolyError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    /// `n × n` identity over the ring of `proto`.
    pub fn identity_like(n: usize, proto: &T) -> Self {
        let (zero, one) = (proto.zero_like(), proto.one_like());
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn scalar_like(n: usize, s: &T) -> Self {
        let zero = s.zero_like();
        Self::from_fn(n, n, |i, j| if i == j { s.clone() } else { zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.negated())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|e| e.times(s))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.mul_with(rhs, Execution::default())
    }

    pub fn mul_with(&self, rhs: &Self, exec: Execution) -> Result<Self, PolyError> {
        if self.cols != rhs.rows {
            return Err(PolyError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = par::map_range(exec, self.rows * rhs.cols, |k| {
            let (i, j) = (k / rhs.cols, k % rhs.cols);
            let mut acc = self.get(i, 0).times(rhs.get(0, j));
            for t in 1..self.cols {
                let a = self.get(i, t);
                let b = rhs.get(t, j);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.plus(&a.times(b));
            }
            acc
        });
        Matrix::new(self.rows, rhs.cols, entries)
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let zero = self.entries[0].zero_like();
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Self::from_fn(r, c, |i, j| match (i < self.rows, j < self.cols) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - self.rows, j - self.cols).clone(),
            _ => zero.clone(),
        })
    }

    /// Top-left `r × c` block.
    pub fn block(&self, r: usize, c: usize) -> Self {
        assert!(r <= self.rows && c <= self.cols);
        Self::from_fn(r, c, |i, j| self.get(i, j).clone())
    }

    fn check_det_shape(&self) -> Result<(), PolyError> {
        if !self.is_square() {
            return Err(PolyError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows > MAX_DET_DIM {
            return Err(PolyError::DimensionTooLarge {
                dim: self.rows,
                max: MAX_DET_DIM,
            });
        }
        Ok(())
    }

    pub fn det(&self) -> Result<T, PolyError> {
        self.det_with(Execution::default())
    }

    /// Laplace expansion with memoized minors: the minor on the first `k`
    /// rows and a column subset is computed once per subset, bottom-up.
    pub fn det_with(&self, exec: Execution) -> Result<T, PolyError> {
        self.check_det_shape()?;
        Ok(cofactor_det(self, exec))
    }

    /// Transpose of the cofactor matrix, so `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Result<Self, PolyError> {
        self.adjugate_with(Execution::default())
    }

    pub fn adjugate_with(&self, exec: Execution) -> Result<Self, PolyError> {
        self.check_det_shape()?;
        let n = self.rows;
        let one = self.entries[0].one_like();
        if n == 1 {
            return Ok(Matrix::new(1, 1, vec![one]).unwrap());
        }
        // adj[i][j] = (-1)^(i+j) * minor(j, i)
        let entries = par::map_range(exec, n * n, |k| {
            let (i, j) = (k / n, k % n);
            let minor = Self::from_fn(n - 1, n - 1, |r, c| {
                let r = if r < j { r } else { r + 1 };
                let c = if c < i { c } else { c + 1 };
                self.get(r, c).clone()
            });
            let d = cofactor_det(&minor, Execution::Sequential);
            if (i + j) % 2 == 0 {
                d
            } else {
                d.negated()
            }
        });
        Matrix::new(n, n, entries)
    }
}

fn cofactor_det<T: RingElem>(m: &Matrix<T>, exec: Execution) -> T {
    let n = m.rows;
    let zero = m.entries[0].zero_like();
    // memo[mask]: determinant of rows 0..popcount(mask) restricted to the
    // columns in `mask`
    let mut memo: Vec<Option<T>> = vec![None; 1 << n];
    memo[0] = Some(m.entries[0].one_like());
    for k in 1..=n {
        let masks: Vec<usize> = (0..(1usize << n)).filter(|s| s.count_ones() as usize == k).collect();
        let row = k - 1;
        let level = par::map(exec, &masks, |&mask| {
            let mut acc = zero.clone();
            let mut pos = 0;
            for c in 0..n {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let a = m.get(row, c);
                if !a.is_zero() {
                    let sub = memo[mask & !(1 << c)].as_ref().unwrap();
                    if !sub.is_zero() {
                        let t = a.times(sub);
                        // sign of entry (row, pos) within the k x k submatrix
                        acc = if (row + pos) % 2 == 0 {
                            acc.plus(&t)
                        } else {
                            acc.minus(&t)
                        };
                    }
                }
                pos += 1;
            }
            acc
        });
        for (mask, v) in masks.into_iter().zip(level) {
            memo[mask] = Some(v);
        }
    }
    memo[(1 << n) - 1].take().unwrap()
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

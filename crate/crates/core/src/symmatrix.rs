//! Dense matrices over the polynomial ring: product, trace, determinant and
//! adjugate.

use std::fmt;

use thiserror::Error;

use crate::exactpoly::{Monomial, Polynomial, Rational, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {op} of {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} needs a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },
    #[error("expected {expected} entries, got {got}")]
    BadEntryCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl SymMatrix {
    /// Row-major construction.
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::BadEntryCount { expected: rows * cols, got: entries.len() });
        }
        Ok(SymMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        SymMatrix { rows, cols, entries }
    }

    pub fn from_rationals(rows: usize, cols: usize, values: &[Rational]) -> Result<Self, MatrixError> {
        Self::new(rows, cols, values.iter().cloned().map(Polynomial::constant).collect())
    }

    pub fn from_ints(rows: usize, cols: usize, values: &[i64]) -> Result<Self, MatrixError> {
        Self::new(rows, cols, values.iter().map(|&v| Polynomial::int(v)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Polynomial::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Polynomial::one() } else { Polynomial::zero() })
    }

    /// Matrix of fresh variables `x_<arrow>_<row>_<col>`.
    pub fn generic(arrow: &str, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| Polynomial::var(VarId::arrow(arrow, i as u32 + 1, j as u32 + 1)))
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

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Polynomial) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> SymMatrix {
        SymMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Polynomial) -> SymMatrix {
        self.map(|e| e * c)
    }

    pub fn transpose(&self) -> SymMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix, MatrixError> {
        self.same_shape("add", other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix, MatrixError> {
        self.same_shape("sub", other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j)))
    }

    fn same_shape(&self, op: &'static str, other: &SymMatrix) -> Result<(), MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    fn require_square(&self, op: &'static str) -> Result<usize, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { op, rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    pub fn mul(&self, other: &SymMatrix) -> Result<SymMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                op: "mul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Polynomial::zero();
            for l in 0..self.cols {
                let (a, b) = (self.get(i, l), other.get(l, j));
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        }))
    }

    pub fn trace(&self) -> Result<Polynomial, MatrixError> {
        let n = self.require_square("trace")?;
        let mut acc = Polynomial::zero();
        for i in 0..n {
            acc += self.get(i, i);
        }
        Ok(acc)
    }

    pub fn det(&self) -> Result<Polynomial, MatrixError> {
        self.det_filtered(|_| true)
    }

    /// Determinant with every intermediate minor truncated to the monomials
    /// accepted by `keep`.
    ///
    /// Exact whenever the rejected monomials form an ideal; the plain
    /// determinant is the `keep = |_| true` case.
    pub fn det_filtered(&self, keep: impl Fn(&Monomial) -> bool) -> Result<Polynomial, MatrixError> {
        let n = self.require_square("det")?;
        if n == 2 {
            let mut d = &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0));
            d.retain(&keep);
            return Ok(d);
        }
        // minors[mask] = det of rows 0..popcount(mask) against the columns in mask;
        // expand each along its last row.
        let mut minors: Vec<Polynomial> = vec![Polynomial::zero(); 1 << n];
        minors[0] = Polynomial::one();
        for mask in 1usize..(1 << n) {
            let m = mask.count_ones() as usize;
            let row = m - 1;
            let mut acc = Polynomial::zero();
            let mut pos = 0;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let entry = self.get(row, j);
                let sub = &minors[mask & !(1 << j)];
                if !entry.is_zero() && !sub.is_zero() {
                    let term = entry * sub;
                    if (row + pos) % 2 == 0 {
                        acc += &term;
                    } else {
                        acc += &(-term);
                    }
                }
                pos += 1;
            }
            acc.retain(&keep);
            minors[mask] = acc;
        }
        Ok(std::mem::take(&mut minors[(1 << n) - 1]))
    }

    /// The matrix with row `r` and column `c` removed.
    pub fn minor_matrix(&self, r: usize, c: usize) -> SymMatrix {
        Self::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let ii = if i < r { i } else { i + 1 };
            let jj = if j < c { j } else { j + 1 };
            self.get(ii, jj).clone()
        })
    }

    /// Transpose of the cofactor matrix, so that `a * adj(a) = det(a) * I`.
    pub fn adjugate(&self) -> Result<SymMatrix, MatrixError> {
        let n = self.require_square("adjugate")?;
        match n {
            1 => Ok(SymMatrix::identity(1)),
            2 => Ok(SymMatrix {
                rows: 2,
                cols: 2,
                entries: vec![
                    self.get(1, 1).clone(),
                    -self.get(0, 1),
                    -self.get(1, 0),
                    self.get(0, 0).clone(),
                ],
            }),
            _ => {
                let mut out = SymMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let minor = self.minor_matrix(j, i).det()?;
                        out.set(i, j, if (i + j) % 2 == 0 { minor } else { -minor });
                    }
                }
                Ok(out)
            }
        }
    }

    /// Entries as rationals when the matrix is constant.
    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        self.entries.iter().map(Polynomial::as_constant).collect()
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

//! Dense linear algebra over a [`FieldSpec`].

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Row-major dense matrix over `F_q`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}x{} [", self.field, self.rows, self.cols)?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Builds a matrix from row-major elements, checking length and that
    /// every element is canonical.
    pub fn from_elements(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(bad) = data.iter().find(|e| !field.contains(**e)) {
            return Err(Error::NonCanonical {
                value: bad.value() as u64,
                order: field.order(),
            });
        }
        Ok(Self {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from integer rows. All rows must have `cols` entries;
    /// `cols` is needed separately so that zero-row matrices keep a width.
    pub fn from_rows<R: AsRef<[u64]>>(field: &FieldSpec, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for &v in row {
                data.push(field.element(v)?);
            }
        }
        Self::from_elements(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[FieldElement]> {
        // chunks_exact panics on a zero chunk size.
        (0..self.rows).map(move |r| self.row(r))
    }

    /// Rows as plain integers, handy for assertions and printing.
    pub fn to_rows(&self) -> Vec<Vec<u16>> {
        self.row_iter()
            .map(|r| r.iter().map(|e| e.value()).collect())
            .collect()
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let f = &self.field;
        Ok(self
            .row_iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn mul_mat(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = FieldElement::ZERO;
                for l in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, l), other.get(l, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// The submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows, columns.len());
        for r in 0..self.rows {
            for (j, &c) in columns.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Reduced row echelon form by Gauss-Jordan elimination. The pivot in
    /// each column is the first nonzero entry at or below the current row.
    pub fn rref(&self) -> Rref {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r == row || factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve_square(&self, b: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let n = self.rows;
        let rhs = Matrix::from_elements(&self.field, 1, n, b.to_vec())?;
        let augmented = self.transpose().vstack(&rhs)?.transpose();
        let reduced = augmented.rref();
        if reduced.pivots.iter().take_while(|&&p| p < n).count() < n {
            return Err(Error::SingularMatrix);
        }
        Ok((0..n).map(|r| reduced.matrix.get(r, n)).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Extends the row space of a full-row-rank `self` (r x n) to all of
    /// `F_q^n` with `n - r` standard basis rows.
    ///
    /// The candidates `e_0, e_1, ...` are scanned in order and kept whenever
    /// they increase the rank of the stack, so the result is deterministic.
    /// Orthogonalisation is not an option here: over a finite field a
    /// nonzero vector can be orthogonal to itself.
    pub fn complete_basis(&self) -> Result<Matrix> {
        let rank = self.rank();
        if rank != self.rows {
            return Err(Error::RankDeficient {
                rank,
                rows: self.rows,
            });
        }
        let n = self.cols;
        let f = &self.field;
        let mut stack = self.clone();
        let mut complement = Matrix::zeros(f, 0, n);
        let mut current = rank;
        for i in 0..n {
            if current == n {
                break;
            }
            let mut e = Matrix::zeros(f, 1, n);
            e.set(0, i, FieldElement::ONE);
            let candidate = stack.vstack(&e)?;
            let r = candidate.rank();
            if r > current {
                stack = candidate;
                complement = complement.vstack(&e)?;
                current = r;
            }
        }
        debug_assert_eq!(current, n);
        Ok(complement)
    }
}

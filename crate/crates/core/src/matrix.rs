//! Dense matrices over a generic scalar.

use crate::error::{Error, Result};
use crate::num::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "matrix entries length {} != {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
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

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::domain("matrix dimension mismatch in mul"));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + add;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.clone() * s.clone();
        }
        out
    }

    /// Block-diagonal assembly in argument order.
    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zero(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        out
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == skip_row {
                continue;
            }
            for j in 0..self.cols {
                if j == skip_col {
                    continue;
                }
                entries.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        }
    }

    /// Exact determinant by Gaussian elimination with exact division.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::domain("determinant of non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot_row = match (col..n).find(|&r| !a[(r, col)].is_zero()) {
                Some(r) => r,
                None => return Ok(T::zero()),
            };
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            for r in col + 1..n {
                let factor = a[(r, col)].clone() / p.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let sub = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - sub;
                }
            }
        }
        Ok(det)
    }

    /// Adjugate matrix: `M * adjugate(M) = det(M) * I`, exactly.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::domain("adjugate of non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut adj = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det()?;
                let sign_neg = (i + j) % 2 == 1;
                // adj = transposed cofactor matrix
                adj[(j, i)] = if sign_neg { -c } else { c };
            }
        }
        Ok(adj)
    }

    /// Exact inverse; error if singular.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::domain("inverse of non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or_else(|| Error::domain("singular matrix has no inverse"))?;
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let p = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / p.clone();
                inv[(col, c)] = inv[(col, c)].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in 0..n {
                    let s = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - s;
                    let s = factor.clone() * inv[(col, c)].clone();
                    inv[(r, c)] = inv[(r, c)].clone() - s;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use crate::rational::rat;
    use crate::RationalMatrix;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn det_small() {
        assert_eq!(m(&[&[2]]).det().unwrap(), rat(2, 1));
        assert_eq!(m(&[&[2, -1], &[-1, 2]]).det().unwrap(), rat(3, 1));
        assert_eq!(
            m(&[&[0, 1], &[1, 0]]).det().unwrap(),
            rat(-1, 1),
            "pivoting keeps the sign"
        );
    }

    #[test]
    fn adjugate_identity_law() {
        let a = m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let adj = a.adjugate().unwrap();
        let d = a.det().unwrap();
        let prod = a.mul(&adj).unwrap();
        assert_eq!(prod, RationalMatrix::identity(3).scale(&d));
    }

    #[test]
    fn adjugate_2x2() {
        let a = m(&[&[2, -1], &[-1, 2]]);
        assert_eq!(a.adjugate().unwrap(), m(&[&[2, 1], &[1, 2]]));
    }

    #[test]
    fn adjugate_singular() {
        // rank-1 singular: adjugate law still holds with det = 0
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 2, 3]]);
        let adj = a.adjugate().unwrap();
        let prod = a.mul(&adj).unwrap();
        assert_eq!(prod, RationalMatrix::zero(3, 3));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
    }
}

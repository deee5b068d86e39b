use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, rational::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    /// Integer matrix literal, mostly for tests and fixtures. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| rational::int(x)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged integer matrix literal")
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                m.set(r, k, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let data = rows.iter().flat_map(|&r| self.row(r).to_vec()).collect();
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Appends `b` as an extra column.
    pub fn augment(&self, b: &[Rational]) -> Result<Self> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "augmenting {}x{} with a vector of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let rows = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(b[r].clone());
                row
            })
            .collect();
        Self::from_rows(rows, self.cols + 1)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|r| rational::dot(self.row(r), v)).collect())
    }

    /// `yᵀ M`.
    pub fn left_mul_vec(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                y.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (r, yr) in y.iter().enumerate() {
            if yr.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.row(r)) {
                if !x.is_zero() {
                    *o += yr * x;
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Block Kronecker product: entry `(i·p + k, j·q + l)` is `self[i][j] · other[k][l]`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let (p, q) = (other.rows, other.cols);
        let mut out = Self::zeros(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * p + k, j * q + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(rational::format).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Kronecker product of a list of matrices, left to right. The empty product is `[1]`.
pub fn kronecker_all(mats: &[&Matrix]) -> Matrix {
    mats.iter()
        .fold(Matrix::identity(1), |acc, m| acc.kronecker(m))
}

pub fn kron_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Computes `(M₁ ⊗ … ⊗ M_T) z` one tensor mode at a time, without forming the product.
pub fn kron_apply(mats: &[&Matrix], z: &[Rational]) -> Result<Vec<Rational>> {
    let expected: usize = mats.iter().map(|m| m.cols()).product();
    if z.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "kronecker product has {expected} columns, vector has {} entries",
            z.len()
        )));
    }
    let mut current = z.to_vec();
    // Modes before `t` are already mapped to row space; modes after are untouched.
    let mut left = 1usize;
    for (t, m) in mats.iter().enumerate() {
        let right: usize = mats[t + 1..].iter().map(|m| m.cols()).product();
        let (rows, cols) = (m.rows(), m.cols());
        let mut next = vec![Rational::zero(); left * rows * right];
        for l in 0..left {
            for c in 0..cols {
                let src = &current[(l * cols + c) * right..(l * cols + c + 1) * right];
                if src.iter().all(Zero::is_zero) {
                    continue;
                }
                for r in 0..rows {
                    let coef = m.get(r, c);
                    if coef.is_zero() {
                        continue;
                    }
                    let dst = &mut next[(l * rows + r) * right..(l * rows + r + 1) * right];
                    for (d, s) in dst.iter_mut().zip(src) {
                        if !s.is_zero() {
                            *d += coef * s;
                        }
                    }
                }
            }
        }
        current = next;
        left *= rows;
    }
    Ok(current)
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Matrix;
use crate::error::Result;
use crate::rational::Rational;

/// Clears denominators row by row so elimination can stay in the integers.
fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * &lcm).to_integer()).collect()
        })
        .collect()
}

/// Exact rank by fraction-free (Bareiss) elimination.
pub fn rank(m: &Matrix) -> usize {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let reduced = Matrix::from_rows(a, cols).expect("rref preserves shape");
    (reduced, pivots)
}

/// Some exact solution of `a v = b` (free variables set to zero), or `None` if `b`
/// is outside the column space. Entries may be negative.
pub fn solve_particular(a: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let aug = a.augment(b)?;
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut v = vec![Rational::zero(); a.cols()];
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = red.get(r, a.cols()).clone();
    }
    Ok(Some(v))
}

/// Whether `b` lies in the column space of `a`, decided by comparing ranks.
pub fn in_span(a: &Matrix, b: &[Rational]) -> Result<bool> {
    let aug = a.augment(b)?;
    Ok(rank(&aug) == rank(a))
}

/// A basis of `{v : a v = 0}`, one vector per free column.
pub fn null_space(a: &Matrix) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(a);
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); a.cols()];
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -red.get(r, f).clone();
            }
            v
        })
        .collect()
}

//! Phase-I simplex over the rationals for `∃ w ≥ 0 : A w = b`.
//!
//! Every row gets an artificial variable; the auxiliary problem minimises their sum.
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index leaving
//! basic variable on ratio ties), so the run is deterministic and cannot cycle.
//! At a positive optimum the simplex multipliers `u = c_Bᵀ B⁻¹` of the auxiliary
//! problem, mapped back through the row sign flips, form a Farkas witness.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Outcome of a nonnegative feasibility query, carrying its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FeasibilityResult {
    /// `witness ≥ 0` with `A · witness = b`.
    Feasible {
        #[serde(with = "rational::serde_rational_vec")]
        witness: Vec<Rational>,
    },
    /// `yᵀA ≤ 0` componentwise and `yᵀb > 0`.
    Infeasible {
        #[serde(with = "rational::serde_rational_vec")]
        farkas: Vec<Rational>,
    },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Self::Feasible { witness } => Some(witness),
            Self::Infeasible { .. } => None,
        }
    }

    pub fn farkas(&self) -> Option<&[Rational]> {
        match self {
            Self::Infeasible { farkas } => Some(farkas),
            Self::Feasible { .. } => None,
        }
    }

    /// Re-checks the certificate against the system it claims to answer.
    pub fn verify(&self, a: &Matrix, b: &[Rational]) -> bool {
        match self {
            Self::Feasible { witness } => verify_witness(a, b, witness),
            Self::Infeasible { farkas } => verify_farkas(a, b, farkas),
        }
    }
}

pub fn verify_witness(a: &Matrix, b: &[Rational], w: &[Rational]) -> bool {
    if w.iter().any(Signed::is_negative) {
        return false;
    }
    matches!(a.mul_vec(w), Ok(aw) if aw == b)
}

pub fn verify_farkas(a: &Matrix, b: &[Rational], y: &[Rational]) -> bool {
    if y.len() != b.len() {
        return false;
    }
    let Ok(ya) = a.left_mul_vec(y) else {
        return false;
    };
    ya.iter().all(|x| !x.is_positive()) && rational::dot(y, b).is_positive()
}

struct Tableau {
    /// `m` rows of `n + m + 1` entries: original columns, artificials, right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs of the auxiliary objective, same layout; last entry is `-objective`.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn new(a: &Matrix, b: &[Rational], signs: &[bool]) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        let mut cost = vec![Rational::zero(); width];
        for i in 0..m {
            let mut row = vec![Rational::zero(); width];
            for j in 0..n {
                let x = a.get(i, j);
                if !x.is_zero() {
                    row[j] = if signs[i] { -x.clone() } else { x.clone() };
                }
            }
            row[n + i] = Rational::one();
            row[width - 1] = if signs[i] { -b[i].clone() } else { b[i].clone() };
            for j in 0..n {
                if !row[j].is_zero() {
                    cost[j] -= &row[j];
                }
            }
            cost[width - 1] -= &row[width - 1];
            rows.push(row);
        }
        Self {
            rows,
            cost,
            basis: (n..n + m).collect(),
            n,
        }
    }

    fn rhs(&self) -> usize {
        self.cost.len() - 1
    }

    /// Bland's rule: lowest-index column with negative reduced cost.
    fn entering(&self) -> Option<usize> {
        (0..self.rhs()).find(|&j| self.cost[j].is_negative())
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let rhs = self.rhs();
        let mut best: Option<(usize, Rational)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[col];
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let support: Vec<usize> = (0..self.cost.len())
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn run(&mut self) {
        while let Some(c) = self.entering() {
            // The auxiliary objective is bounded below by zero, so a ratio row exists.
            let r = self.leaving(c).expect("phase-one objective is bounded");
            self.pivot(r, c);
        }
    }
}

/// Decides whether `A w = b` has a solution `w ≥ 0`, returning a self-checked
/// certificate either way.
pub fn lp_feasible(a: &Matrix, b: &[Rational]) -> Result<FeasibilityResult> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let (m, n) = (a.rows(), a.cols());
    let signs: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let mut t = Tableau::new(a, b, &signs);
    t.run();
    let rhs = t.rhs();
    let objective = -t.cost[rhs].clone();
    let result = if objective.is_zero() {
        let mut w = vec![Rational::zero(); n];
        for (i, &bv) in t.basis.iter().enumerate() {
            if bv < t.n {
                w[bv] = t.rows[i][rhs].clone();
            }
        }
        FeasibilityResult::Feasible { witness: w }
    } else {
        // reduced cost of artificial i is 1 - u_i
        let farkas = (0..m)
            .map(|i| {
                let u = Rational::one() - &t.cost[n + i];
                if signs[i] {
                    -u
                } else {
                    u
                }
            })
            .collect();
        FeasibilityResult::Infeasible { farkas }
    };
    if !result.verify(a, b) {
        return Err(Error::CertificateCheck(
            "simplex produced a certificate that does not re-verify".into(),
        ));
    }
    Ok(result)
}

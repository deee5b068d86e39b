//! Polyhedral cones in V-representation (`{K v : v ≥ 0}`) and H-representation
//! (`{z : H z ≥ 0}`), conversion between the two, and the Kronecker-product
//! necessity check for tensor cones.
//!
//! Rows and generators are reported in a canonical form: scaled by a positive
//! factor so the first nonzero entry has absolute value 1, deduplicated, and sorted
//! in descending lexicographic order. Implicit equalities appear as `±` row pairs.

mod dd;

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, kron_apply, lp_feasible, Matrix};
use crate::rational::{self, Rational};

use dd::cone_generators;

/// Default limit on the double description working set.
pub const DEFAULT_RAY_CAP: usize = 100_000;

/// Above this many coordinate subsets, facet representatives fall back to a single
/// canonical choice instead of every sparsest one.
const SUBSET_LIMIT: usize = 20_000;

fn cmp_desc(a: &[Rational], b: &[Rational]) -> Ordering {
    b.cmp(a)
}

fn canonical_set(mut vs: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    for v in &mut vs {
        *v = rational::normalize_leading(v);
    }
    vs.retain(|v| v.iter().any(|x| !x.is_zero()));
    vs.sort_by(|a, b| cmp_desc(a, b));
    vs.dedup();
    vs
}

/// Reduced row echelon basis of a subspace given by spanning vectors.
fn subspace_basis(vs: &[Vec<Rational>], n: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    if vs.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let m = Matrix::from_rows(vs.to_vec(), n).expect("uniform vectors");
    let (red, pivots) = linalg::rref(&m);
    let basis = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
    (basis, pivots)
}

/// `v` minus the basis combination that zeroes it at the basis pivot columns.
fn reduce_mod(v: &[Rational], basis: &[Vec<Rational>], pivots: &[usize]) -> Vec<Rational> {
    let mut out = v.to_vec();
    for (b, &p) in basis.iter().zip(pivots) {
        let f = out[p].clone();
        if f.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            if !x.is_zero() {
                *o -= &f * x;
            }
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn support(v: &[Rational]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// All sparsest members of the coset `v + span(basis)`.
fn sparsest_representatives(
    v: &[Rational],
    basis: &[Vec<Rational>],
    pivots: &[usize],
) -> Vec<Vec<Rational>> {
    let (n, d) = (v.len(), basis.len());
    if d == 0 {
        return vec![v.to_vec()];
    }
    if binomial(n, d) > SUBSET_LIMIT {
        return vec![reduce_mod(v, basis, pivots)];
    }
    let mut best: Vec<Vec<Rational>> = Vec::new();
    let mut best_support = usize::MAX;
    for subset in combinations(n, d) {
        // coefficients c with v_s + Σ c_i basis_i[s] = 0 for s in subset
        let rows: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&s| basis.iter().map(|b| b[s].clone()).collect())
            .collect();
        let sys = Matrix::from_rows(rows, d).expect("square system");
        if linalg::rank(&sys) < d {
            continue;
        }
        let rhs: Vec<Rational> = subset.iter().map(|&s| -v[s].clone()).collect();
        let c = linalg::solve_particular(&sys, &rhs)
            .expect("square system")
            .expect("nonsingular system");
        let mut rep = v.to_vec();
        for (ci, b) in c.iter().zip(basis) {
            if ci.is_zero() {
                continue;
            }
            for (r, x) in rep.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r += ci * x;
                }
            }
        }
        let s = support(&rep);
        match s.cmp(&best_support) {
            Ordering::Less => {
                best_support = s;
                best = vec![rep];
            }
            Ordering::Equal => best.push(rep),
            Ordering::Greater => {}
        }
    }
    best
}

fn rows_to_matrix(rows: Vec<Vec<Rational>>, n: usize) -> Matrix {
    Matrix::from_rows(rows, n).expect("uniform rows")
}

fn equality_pairs(basis: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    basis
        .iter()
        .flat_map(|l| [l.clone(), l.iter().map(|x| -x).collect()])
        .collect()
}

/// H-representation of `{gen · v : v ≥ 0}` comparable with hand-derived tables:
/// the implicit equalities as `±` pairs, every facet written in each of its sparsest
/// forms modulo those equalities, and every coordinate inequality `z_i ≥ 0` that the
/// cone satisfies. Use [`v_to_h_irredundant`] for one row per facet.
pub fn v_to_h(gen: &Matrix) -> Result<Matrix> {
    v_to_h_with_cap(gen, DEFAULT_RAY_CAP)
}

pub fn v_to_h_with_cap(gen: &Matrix, cap: usize) -> Result<Matrix> {
    let n = gen.rows();
    let dual = cone_generators(&gen.transpose(), cap)?;
    let (basis, pivots) = subspace_basis(&dual.lineality, n);
    let mut rows = equality_pairs(&basis);
    for r in &dual.rays {
        rows.extend(sparsest_representatives(r, &basis, &pivots));
    }
    for i in 0..n {
        if gen.row(i).iter().all(|x| !x.is_negative()) {
            let mut e = vec![Rational::zero(); n];
            e[i] = rational::one();
            rows.push(e);
        }
    }
    Ok(rows_to_matrix(canonical_set(rows), n))
}

/// Irredundant H-representation: `±` equality pairs plus one row per facet.
pub fn v_to_h_irredundant(gen: &Matrix, cap: usize) -> Result<Matrix> {
    let n = gen.rows();
    let dual = cone_generators(&gen.transpose(), cap)?;
    let (basis, pivots) = subspace_basis(&dual.lineality, n);
    let mut rows = equality_pairs(&basis);
    rows.extend(dual.rays.iter().map(|r| reduce_mod(r, &basis, &pivots)));
    Ok(rows_to_matrix(canonical_set(rows), n))
}

/// Generators (as columns) of `{z : h z ≥ 0}`: extreme rays modulo the lineality
/// space, plus `±` pairs spanning the lineality space.
pub fn h_to_v(h: &Matrix) -> Result<Matrix> {
    h_to_v_with_cap(h, DEFAULT_RAY_CAP)
}

pub fn h_to_v_with_cap(h: &Matrix, cap: usize) -> Result<Matrix> {
    let n = h.cols();
    let gens = cone_generators(h, cap)?;
    let (basis, pivots) = subspace_basis(&gens.lineality, n);
    let mut cols = equality_pairs(&basis);
    cols.extend(gens.rays.iter().map(|r| reduce_mod(r, &basis, &pivots)));
    let cols = canonical_set(cols);
    Matrix::from_columns(&cols, n)
}

/// A polyhedral cone with at least one of its two representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    v_rep: Option<Matrix>,
    h_rep: Option<Matrix>,
}

/// `true` iff every column of `inner` lies in `{outer · v : v ≥ 0}`.
pub fn generators_contained(inner: &Matrix, outer: &Matrix) -> Result<bool> {
    for c in 0..inner.cols() {
        if !lp_feasible(outer, &inner.column(c))?.is_feasible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether two generator matrices span the same cone (mutual containment).
pub fn same_cone(a: &Matrix, b: &Matrix) -> Result<bool> {
    Ok(generators_contained(a, b)? && generators_contained(b, a)?)
}

impl Cone {
    pub fn from_generators(gen: Matrix) -> Self {
        Self {
            dim: gen.rows(),
            v_rep: Some(gen),
            h_rep: None,
        }
    }

    pub fn from_inequalities(h: Matrix) -> Self {
        Self {
            dim: h.cols(),
            v_rep: None,
            h_rep: Some(h),
        }
    }

    /// Pairs two representations after checking they describe the same cone.
    pub fn from_both(gen: Matrix, h: Matrix) -> Result<Self> {
        if gen.rows() != h.cols() {
            return Err(Error::DimensionMismatch(format!(
                "generators live in dimension {}, inequalities in {}",
                gen.rows(),
                h.cols()
            )));
        }
        let cone = Self {
            dim: gen.rows(),
            v_rep: Some(gen),
            h_rep: Some(h),
        };
        if !cone.representations_agree()? {
            return Err(Error::DimensionMismatch(
                "V- and H-representations describe different cones".into(),
            ));
        }
        Ok(cone)
    }

    /// Fills in whichever representation is missing.
    pub fn complete(mut self, cap: usize) -> Result<Self> {
        if self.h_rep.is_none() {
            let gen = self.v_rep.as_ref().expect("cone has a representation");
            self.h_rep = Some(v_to_h_with_cap(gen, cap)?);
        }
        if self.v_rep.is_none() {
            let h = self.h_rep.as_ref().expect("cone has a representation");
            self.v_rep = Some(h_to_v_with_cap(h, cap)?);
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn v_rep(&self) -> Option<&Matrix> {
        self.v_rep.as_ref()
    }

    pub fn h_rep(&self) -> Option<&Matrix> {
        self.h_rep.as_ref()
    }

    /// Mutual inclusion: generators satisfy every inequality, and every generator of
    /// the inequality cone is a nonnegative combination of the given generators.
    pub fn representations_agree(&self) -> Result<bool> {
        let (Some(gen), Some(h)) = (&self.v_rep, &self.h_rep) else {
            return Ok(true);
        };
        let hk = h.mul(gen)?;
        if (0..hk.rows()).any(|r| hk.row(r).iter().any(Signed::is_negative)) {
            return Ok(false);
        }
        generators_contained(&h_to_v(h)?, gen)
    }

    pub fn contains(&self, z: &[Rational]) -> Result<bool> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "cone in dimension {}, vector of length {}",
                self.dim,
                z.len()
            )));
        }
        if let Some(h) = &self.h_rep {
            return Ok(h.mul_vec(z)?.iter().all(|x| !x.is_negative()));
        }
        let gen = self.v_rep.as_ref().expect("cone has a representation");
        Ok(lp_feasible(gen, z)?.is_feasible())
    }
}

/// Whether `(L¹ ⊗ … ⊗ L^T) z ≥ 0` for the cones' H-representations `L^t`.
/// Every `z = (K¹ ⊗ … ⊗ K^T) v` with `v ≥ 0` passes; the converse can fail.
pub fn tensor_necessity_check(cones: &[Cone], z: &[Rational]) -> Result<bool> {
    let hs = cones
        .iter()
        .enumerate()
        .map(|(t, c)| {
            c.h_rep().ok_or_else(|| {
                Error::DimensionMismatch(format!("cone {t} has no H-representation"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(kron_apply(&hs, z)?.iter().all(|x| !x.is_negative()))
}

/// Vertices of the product of simplices `{z ≥ 0 : Σ_{menu block} z = 1 for every block}`,
/// enumerated from this inequality description alone. Vertices are returned as
/// columns in canonical order.
pub fn simplex_product_vertices(block_sizes: &[usize]) -> Result<Matrix> {
    let n: usize = block_sizes.iter().sum();
    // homogenise: (z, s) with z ≥ 0, s ≥ 0, block sums equal to s
    let mut rows = Vec::new();
    let unit = |i: usize| {
        let mut e = vec![Rational::zero(); n + 1];
        e[i] = rational::one();
        e
    };
    for i in 0..=n {
        rows.push(unit(i));
    }
    let mut offset = 0;
    for &size in block_sizes {
        let mut eq = vec![Rational::zero(); n + 1];
        for x in &mut eq[offset..offset + size] {
            *x = rational::one();
        }
        eq[n] = rational::int(-1);
        rows.push(eq.iter().map(|x| -x).collect());
        rows.push(eq);
        offset += size;
    }
    let h = rows_to_matrix(rows, n + 1);
    let gens = cone_generators(&h, DEFAULT_RAY_CAP)?;
    if !gens.lineality.is_empty() {
        return Err(Error::DimensionMismatch("unexpected lineality".into()));
    }
    let mut verts: Vec<Vec<Rational>> = gens
        .rays
        .iter()
        .filter(|r| r[n].is_positive())
        .map(|r| r[..n].iter().map(|x| x / &r[n]).collect())
        .collect();
    verts.sort_by(|a, b| cmp_desc(a, b));
    verts.dedup();
    Matrix::from_columns(&verts, n)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<Vec<Vec<String>>>,
}

fn matrix_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(rational::format).collect())
        .collect()
}

fn matrix_from_strings(rows: &[Vec<String>], cols: Option<usize>) -> Result<Matrix> {
    let width = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed, width)
}

impl Cone {
    /// `{"v": rows of the generator matrix, "h": rows of the inequality matrix}`,
    /// entries as exact rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        let doc = ConeJson {
            v: self.v_rep.as_ref().map(matrix_to_strings),
            h: self.h_rep.as_ref().map(matrix_to_strings),
        };
        serde_json::to_value(doc).expect("cone serializes")
    }

    /// Parses the JSON form; when both representations are present their agreement is
    /// checked.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: ConeJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        match (doc.v, doc.h) {
            (Some(v), Some(h)) => {
                let gen = matrix_from_strings(&v, None)?;
                let h = matrix_from_strings(&h, Some(gen.rows()))?;
                Cone::from_both(gen, h)
            }
            (Some(v), None) => Ok(Cone::from_generators(matrix_from_strings(&v, None)?)),
            (None, Some(h)) => Ok(Cone::from_inequalities(matrix_from_strings(&h, None)?)),
            (None, None) => Err(Error::Parse("cone needs \"v\" or \"h\"".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn frodo() -> Matrix {
        Matrix::from_ints(&[[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 0, 0], [0, 0, 1, 1]])
    }

    fn dominance() -> Matrix {
        Matrix::from_ints(&[[1, 1, 0], [0, 0, 1], [1, 0, 0], [0, 1, 1]])
    }

    fn row_set(m: &Matrix) -> Vec<Vec<Rational>> {
        let mut rows: Vec<_> = m.to_rows();
        rows.sort();
        rows
    }

    #[test]
    fn frodo_h_rep_matches_printed() {
        let printed = Matrix::from_ints(&[
            [-1, -1, 1, 1],
            [1, 1, -1, -1],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]);
        assert_eq!(row_set(&v_to_h(&frodo()).unwrap()), row_set(&printed));
    }

    #[test]
    fn dominance_h_rep_matches_printed() {
        let printed = Matrix::from_ints(&[
            [1, 0, -1, 0],
            [0, -1, 0, 1],
            [-1, -1, 1, 1],
            [1, 1, -1, -1],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]);
        assert_eq!(row_set(&v_to_h(&dominance()).unwrap()), row_set(&printed));
        // three facets of a simplicial cone plus one equality pair
        assert_eq!(v_to_h_irredundant(&dominance(), 1000).unwrap().rows(), 5);
    }

    #[test]
    fn orthant_round_trip() {
        for n in 1..5 {
            assert_eq!(v_to_h(&Matrix::identity(n)).unwrap(), Matrix::identity(n));
            assert_eq!(h_to_v(&Matrix::identity(n)).unwrap(), Matrix::identity(n));
        }
    }

    #[test]
    fn h_to_v_of_printed_h_spans_frodo_cone() {
        let h = v_to_h(&frodo()).unwrap();
        let gens = h_to_v(&h).unwrap();
        assert!(same_cone(&gens, &frodo()).unwrap());
    }

    #[test]
    fn lineality_only_cone() {
        // z1 >= 0 and -z1 >= 0 in the plane: the z2 axis, as a ± pair
        let h = Matrix::from_ints(&[[1, 0], [-1, 0]]);
        let gens = h_to_v(&h).unwrap();
        assert_eq!(gens, Matrix::from_ints(&[[0, 0], [1, -1]]));
    }

    #[test]
    fn containment() {
        let orthant = Cone::from_inequalities(Matrix::identity(2));
        assert!(orthant.contains(&[int(1), int(0)]).unwrap());
        assert!(orthant.contains(&[int(1)]).is_err());
        let c = Cone::from_generators(frodo());
        assert!(c.contains(&vec![frac(1, 2); 4]).unwrap());
        assert!(!c.contains(&[int(1), int(0), int(0), int(0)]).unwrap());
        let both = c.complete(DEFAULT_RAY_CAP).unwrap();
        assert!(!both.contains(&[int(1), int(0), int(0), int(0)]).unwrap());
        assert!(both.representations_agree().unwrap());
    }

    #[test]
    fn mismatched_representations_rejected() {
        assert!(Cone::from_both(frodo(), Matrix::identity(4)).is_err());
    }

    #[test]
    fn ray_cap_guardrail() {
        assert_eq!(
            v_to_h_with_cap(&frodo(), 1),
            Err(Error::TooLarge { cap: 1 })
        );
    }

    #[test]
    fn json_round_trip() {
        let c = Cone::from_generators(dominance()).complete(1000).unwrap();
        let back = Cone::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn simplex_product_vertices_are_type_columns() {
        let verts = simplex_product_vertices(&[2, 2]).unwrap();
        assert!(same_cone(&verts, &frodo()).unwrap());
        assert_eq!(verts.cols(), 4);
    }

    #[test]
    fn combination_enumeration() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(binomial(9, 2), 36);
    }
}

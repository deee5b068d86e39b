use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{allowed_for, check_marginality, Allowed, MarginalityViolation, Verdict};
use crate::cone::v_to_h;
use crate::error::{Error, Result};
use crate::linalg::{kron_apply, Matrix};
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;
use crate::space::{decode_row_major, type_matrix_for, ChoiceSpace};

/// A negative entry of `(H¹ ⊗ … ⊗ H^T) ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorViolation {
    /// Row of the Kronecker product.
    pub row: usize,
    /// The corresponding row of each `H^t`.
    pub factor_rows: Vec<usize>,
    /// Those rows' coefficients, one vector per DM.
    #[serde(with = "factors_serde")]
    pub factors: Vec<Vec<Rational>>,
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
}

mod factors_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{self, Rational};

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = v
            .iter()
            .map(|row| row.iter().map(rational::format).collect())
            .collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let text = Vec::<Vec<String>>::deserialize(d)?;
        text.iter()
            .map(|row| {
                row.iter()
                    .map(|x| rational::parse(x).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RestrictionViolation {
    Marginality(MarginalityViolation),
    Tensor(TensorViolation),
}

/// H-representations of each DM's (possibly restricted) type matrix.
pub fn default_h_list(space: &ChoiceSpace, allowed: &Allowed) -> Result<Vec<Matrix>> {
    (0..space.dm_count())
        .map(|t| v_to_h(&type_matrix_for(space, t, allowed_for(allowed, t))?))
        .collect()
}

/// Marginality plus `(⊗_t H^t) ρ ≥ 0`; marginality is reported first.
pub fn check_separable_restrictions(
    rule: &JointChoiceRule,
    h_list: &[Matrix],
) -> Result<Verdict<RestrictionViolation>> {
    let space = rule.space();
    if h_list.len() != space.dm_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} H matrices for {} DMs",
            h_list.len(),
            space.dm_count()
        )));
    }
    for (t, h) in h_list.iter().enumerate() {
        if h.cols() != space.pair_count(t) {
            return Err(Error::DimensionMismatch(format!(
                "H matrix for DM {} has {} columns, expected {}",
                t,
                h.cols(),
                space.pair_count(t)
            )));
        }
    }
    if let Verdict::Violated(v) = check_marginality(rule) {
        return Ok(Verdict::Violated(RestrictionViolation::Marginality(v)));
    }
    let refs: Vec<&Matrix> = h_list.iter().collect();
    let values = kron_apply(&refs, &rule.joint_vector())?;
    let Some(row) = values.iter().position(|x| x.is_negative()) else {
        return Ok(Verdict::Holds);
    };
    let radices: Vec<usize> = h_list.iter().map(Matrix::rows).collect();
    let factor_rows = decode_row_major(row, &radices);
    let factors = factor_rows
        .iter()
        .zip(h_list)
        .map(|(&r, h)| h.row(r).to_vec())
        .collect();
    Ok(Verdict::Violated(RestrictionViolation::Tensor(TensorViolation {
        row,
        factor_rows,
        factors,
        value: values[row].clone(),
    })))
}

impl TensorViolation {
    /// Checks that `(⊗ factors) · ρ` equals the recorded negative value and that each
    /// factor is a valid inequality for its DM's (allowed) type matrix, so the
    /// violation alone rules out any separable explanation.
    pub fn verify(&self, rule: &JointChoiceRule, allowed: &Allowed) -> Result<bool> {
        let space = rule.space();
        if self.factors.len() != space.dm_count() || !self.value.is_negative() {
            return Ok(false);
        }
        for (t, f) in self.factors.iter().enumerate() {
            if f.len() != space.pair_count(t) {
                return Ok(false);
            }
            let a = type_matrix_for(space, t, allowed_for(allowed, t))?;
            if a.left_mul_vec(f)?.iter().any(|x| x.is_negative()) {
                return Ok(false);
            }
        }
        let rows: Vec<Matrix> = self
            .factors
            .iter()
            .map(|f| Matrix::from_rows(vec![f.clone()], f.len()))
            .collect::<Result<_>>()?;
        let refs: Vec<&Matrix> = rows.iter().collect();
        let value = kron_apply(&refs, &rule.joint_vector())?;
        Ok(value[0] == self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::scenarios::{frodo_sam_space, gen_dominance_space, gen_table1};
    use crate::separability::fixtures::signaling_rule;

    fn printed_h() -> Matrix {
        Matrix::from_ints(&[
            [-1, -1, 1, 1],
            [1, 1, -1, -1],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ])
    }

    fn printed_h_restricted() -> Matrix {
        Matrix::from_ints(&[
            [1, 0, -1, 0],
            [0, -1, 0, 1],
            [-1, -1, 1, 1],
            [1, 1, -1, -1],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ])
    }

    #[test]
    fn table1_passes_unrestricted_restrictions() {
        let h = printed_h();
        for n in 0..=8 {
            let r = gen_table1(&frac(n, 16)).unwrap();
            assert!(check_separable_restrictions(&r, &[h.clone(), h.clone()]).unwrap().holds());
        }
        let u = JointChoiceRule::uniform(frodo_sam_space());
        assert!(check_separable_restrictions(&u, &[h.clone(), h]).unwrap().holds());
    }

    #[test]
    fn dominance_restriction_catches_table1() {
        let r = gen_table1(&frac(1, 2)).unwrap();
        let out = check_separable_restrictions(&r, &[printed_h_restricted(), printed_h()]).unwrap();
        let Some(RestrictionViolation::Tensor(v)) = out.violation() else {
            panic!("expected tensor violation, got {out:?}");
        };
        assert_eq!(v.value, frac(-1, 2));
        assert_eq!(v.factor_rows, vec![0, 5]);
        assert_eq!(v.factors[1], vec![int(0), int(0), int(0), int(1)]);
        let (_, allowed) = gen_dominance_space();
        assert!(v.verify(&r, &allowed).unwrap());
        // Against the unrestricted model the x − y row is not valid.
        assert!(!v.verify(&r, &[]).unwrap());
    }

    #[test]
    fn default_h_list_matches_printed_sets() {
        let (s, allowed) = gen_dominance_space();
        let hs = default_h_list(&s, &allowed).unwrap();
        let sorted = |m: &Matrix| {
            let mut rows = m.to_rows();
            rows.sort();
            rows
        };
        assert_eq!(sorted(&hs[0]), sorted(&printed_h_restricted()));
        assert_eq!(sorted(&hs[1]), sorted(&printed_h()));
    }

    #[test]
    fn marginality_reported_first() {
        let h = printed_h();
        let out = check_separable_restrictions(&signaling_rule(), &[h.clone(), h]).unwrap();
        assert!(matches!(out.violation(), Some(RestrictionViolation::Marginality(_))));
    }

    #[test]
    fn dimension_mismatch() {
        let r = gen_table1(&frac(1, 4)).unwrap();
        let h = printed_h();
        assert!(check_separable_restrictions(&r, &[h.clone()]).is_err());
        assert!(check_separable_restrictions(&r, &[h, Matrix::identity(3)]).is_err());
    }
}

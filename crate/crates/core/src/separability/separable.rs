use super::{allowed_for, Allowed};
use crate::error::{Error, Result};
use crate::linalg::{kronecker_all, lp_feasible, solve_particular, FeasibilityResult, Matrix};
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;
use crate::space::{decode_row_major, type_matrix_for, ChoiceSpace};

/// ⊗_t A^{t,◇}; column `c` is the row-major combination of per-DM allowed rules.
pub fn joint_type_matrix(space: &ChoiceSpace, allowed: &Allowed) -> Result<Matrix> {
    if allowed.len() > space.dm_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} allowed sets given for {} DMs",
            allowed.len(),
            space.dm_count()
        )));
    }
    let mats = (0..space.dm_count())
        .map(|t| type_matrix_for(space, t, allowed_for(allowed, t)))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Matrix> = mats.iter().collect();
    Ok(kronecker_all(&refs))
}

/// Per-DM rule indices (into the full rule lists) behind column `column` of
/// [`joint_type_matrix`].
pub fn joint_column_rules(space: &ChoiceSpace, allowed: &Allowed, column: usize) -> Vec<usize> {
    let lists: Vec<Vec<usize>> = (0..space.dm_count())
        .map(|t| match allowed_for(allowed, t) {
            Some(a) => a.to_vec(),
            None => (0..space.rule_count(t)).collect(),
        })
        .collect();
    let radices: Vec<usize> = lists.iter().map(Vec::len).collect();
    decode_row_major(column, &radices)
        .iter()
        .zip(&lists)
        .map(|(&d, l)| l[d])
        .collect()
}

/// Decides whether some probability measure over (allowed) joint deterministic
/// rules reproduces the rule.
pub fn check_separable(rule: &JointChoiceRule, allowed: &Allowed) -> Result<FeasibilityResult> {
    let a = joint_type_matrix(rule.space(), allowed)?;
    let result = lp_feasible(&a, &rule.joint_vector())?;
    if let Some(nu) = result.witness() {
        if rational::sum(nu) != rational::one() {
            return Err(Error::CertificateCheck(
                "mixing weights do not sum to 1".into(),
            ));
        }
    }
    Ok(result)
}

/// Some ν (entries of any sign) with Aν = ρ over the full type matrices.
pub fn solve_signed_measure(rule: &JointChoiceRule) -> Result<Option<Vec<Rational>>> {
    let a = joint_type_matrix(rule.space(), &[])?;
    solve_particular(&a, &rule.joint_vector())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{verify_farkas, verify_witness};
    use crate::rational::{frac, int};
    use crate::scenarios::{frodo_sam_space, gen_table1};
    use crate::separability::fixtures::signaling_rule;
    use num_traits::Signed;

    #[test]
    fn table1_half_is_infeasible_with_certificate() {
        let r = gen_table1(&frac(1, 2)).unwrap();
        let res = check_separable(&r, &[]).unwrap();
        let a = joint_type_matrix(r.space(), &[]).unwrap();
        let y = res.farkas().expect("infeasible");
        assert!(verify_farkas(&a, &r.joint_vector(), y));
    }

    #[test]
    fn deterministic_joint_rule_is_a_unit_mixture() {
        let s = frodo_sam_space();
        let a = joint_type_matrix(&s, &[]).unwrap();
        for c in [0, 5, 11, 15] {
            let r = JointChoiceRule::from_joint_vector(s.clone(), &a.column(c)).unwrap();
            let res = check_separable(&r, &[]).unwrap();
            let nu = res.witness().unwrap();
            assert!(verify_witness(&a, &r.joint_vector(), nu));
            // Distinct columns of A are distinct 0/1 vectors, so ν must be e_c.
            assert_eq!(nu[c], int(1));
        }
    }

    #[test]
    fn column_rules_follow_row_major_order() {
        let s = frodo_sam_space();
        assert_eq!(joint_column_rules(&s, &[], 13), vec![3, 1]);
        let allowed = [Some(vec![0, 2, 3]), None];
        assert_eq!(joint_column_rules(&s, &allowed, 5), vec![2, 1]);
    }

    #[test]
    fn boundary_member_is_feasible() {
        let r = gen_table1(&frac(3, 8)).unwrap();
        let res = check_separable(&r, &[]).unwrap();
        assert_eq!(rational::sum(res.witness().unwrap()), int(1));
    }

    #[test]
    fn restricted_columns_follow_allowed_order() {
        let s = frodo_sam_space();
        let a = joint_type_matrix(&s, &[Some(vec![0, 2, 3]), None]).unwrap();
        assert_eq!((a.rows(), a.cols()), (16, 12));
        let err = joint_type_matrix(&s, &[None, None, None]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
        assert!(joint_type_matrix(&s, &[Some(vec![])]).is_err());
    }

    #[test]
    fn signed_measure_for_entangled_rule_has_negative_mass() {
        let r = gen_table1(&frac(1, 2)).unwrap();
        let nu = solve_signed_measure(&r).unwrap().unwrap();
        let a = joint_type_matrix(r.space(), &[]).unwrap();
        assert_eq!(a.mul_vec(&nu).unwrap(), r.joint_vector());
        assert!(nu.iter().any(|x| x.is_negative()));
    }

    #[test]
    fn signed_measure_exists_for_separable_and_not_for_signaling() {
        let r = gen_table1(&frac(1, 3)).unwrap();
        assert!(solve_signed_measure(&r).unwrap().is_some());
        assert!(solve_signed_measure(&signaling_rule()).unwrap().is_none());
    }
}

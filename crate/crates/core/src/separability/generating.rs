use crate::error::{Error, Result};
use crate::linalg::{in_span, rank, Matrix};
use crate::rational::{self, Rational};
use crate::space::ChoiceSpace;

/// Basis of the span of DM `t`'s individual choice rules: the rule picking the first
/// alternative of every menu, plus e_{j,i} − e_{j,0} for every menu `j` and `i ≥ 1`.
pub fn pcr_span_basis(space: &ChoiceSpace, t: usize) -> Result<Vec<Vec<Rational>>> {
    space.check_dm(t)?;
    let n = space.pair_count(t);
    let mut first = vec![rational::zero(); n];
    for j in 0..space.menu_count(t) {
        first[space.pair_index(t, j, 0)] = rational::one();
    }
    let mut basis = vec![first];
    for j in 0..space.menu_count(t) {
        for i in 1..space.menu_size(t, j) {
            let mut v = vec![rational::zero(); n];
            v[space.pair_index(t, j, i)] = rational::one();
            v[space.pair_index(t, j, 0)] = rational::int(-1);
            basis.push(v);
        }
    }
    Ok(basis)
}

/// Whether the columns of `a` span every individual choice rule of DM `t`.
pub fn is_generating(a: &Matrix, space: &ChoiceSpace, t: usize) -> Result<bool> {
    space.check_dm(t)?;
    if a.rows() != space.pair_count(t) {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, DM {} has {} (menu, alternative) pairs",
            a.rows(),
            t,
            space.pair_count(t)
        )));
    }
    for v in pcr_span_basis(space, t)? {
        if !in_span(a, &v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every individual rule has exactly one representation over the columns.
pub fn has_unique_representation(a: &Matrix, space: &ChoiceSpace, t: usize) -> Result<bool> {
    if !is_generating(a, space, t)? {
        return Err(Error::NotGenerating);
    }
    Ok(rank(a) == a.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::frodo_sam_space;
    use crate::space::{build_type_matrix, validate_space, RawDm};

    #[test]
    fn fs_subsets() {
        let s = frodo_sam_space();
        let a = build_type_matrix(&s, 0).unwrap();
        assert!(is_generating(&a, &s, 0).unwrap());
        assert!(!has_unique_representation(&a, &s, 0).unwrap());
        let three = a.select_columns(&[0, 2, 3]);
        assert!(is_generating(&three, &s, 0).unwrap());
        assert!(has_unique_representation(&three, &s, 0).unwrap());
        let two = a.select_columns(&[0, 3]);
        assert!(!is_generating(&two, &s, 0).unwrap());
        assert_eq!(has_unique_representation(&two, &s, 0), Err(Error::NotGenerating));
    }

    #[test]
    fn three_binary_menus_are_not_unique() {
        let dm = RawDm::new(
            &["a", "b", "c", "d", "e", "f"],
            &[&["a", "b"], &["c", "d"], &["e", "f"]],
        );
        let s = validate_space(&[dm]).unwrap();
        let a = build_type_matrix(&s, 0).unwrap();
        assert_eq!((a.rows(), a.cols()), (6, 8));
        assert!(is_generating(&a, &s, 0).unwrap());
        assert!(!has_unique_representation(&a, &s, 0).unwrap());
    }

    #[test]
    fn basis_vectors_have_equal_block_sums() {
        let dm = RawDm::new(&["a", "b", "c"], &[&["a", "b", "c"], &["a", "c"], &["b"]]);
        let s = validate_space(&[dm]).unwrap();
        let basis = pcr_span_basis(&s, 0).unwrap();
        assert_eq!(basis.len(), 1 + 2 + 1);
        for v in &basis {
            let sums: Vec<Rational> = (0..s.menu_count(0))
                .map(|j| {
                    let o = s.menu_offset(0, j);
                    rational::sum(&v[o..o + s.menu_size(0, j)])
                })
                .collect();
            assert!(sums.windows(2).all(|w| w[0] == w[1]));
        }
        assert!(is_generating(&build_type_matrix(&s, 0).unwrap(), &s, 0).unwrap());
    }

    #[test]
    fn wrong_row_count_rejected() {
        let s = frodo_sam_space();
        assert!(matches!(
            is_generating(&Matrix::identity(3), &s, 0),
            Err(Error::DimensionMismatch(_))
        ));
    }
}

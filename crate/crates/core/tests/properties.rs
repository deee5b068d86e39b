use num_traits::Signed;
use proptest::prelude::*;
use sepchoice::cone::{generators_contained, h_to_v, v_to_h, Cone};
use sepchoice::format::{parse_rule, rule_to_json};
use sepchoice::linalg::{kron_apply, kronecker_all, lp_feasible, rank, Matrix};
use sepchoice::rational::{frac, int, Rational};
use sepchoice::scenarios::{frodo_sam_space, gen_product};
use sepchoice::separability::{
    check_marginality, check_separable, classify, default_h_list, check_separable_restrictions,
};
use sepchoice::corpus::{item_rng, random_allowed, random_separable_rule, random_small_space};

fn int_matrix(max_rows: usize, max_cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(lo..=hi, c), r)
            .prop_map(|rows| Matrix::from_ints(&rows))
    })
}

fn sized_matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
        .prop_map(|rows| Matrix::from_ints(&rows))
}

fn pcr() -> impl Strategy<Value = Vec<Rational>> {
    (0i64..=6, 0i64..=6).prop_map(|(a, b)| {
        vec![frac(a, 6), frac(6 - a, 6), frac(b, 6), frac(6 - b, 6)]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_product_law(
        (a, c) in (1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(r, k, q)| (sized_matrix(r, k), sized_matrix(k, q))),
        (b, d) in (1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(r, k, q)| (sized_matrix(r, k), sized_matrix(k, q))),
    ) {
        let left = a.kronecker(&b).mul(&c.kronecker(&d)).unwrap();
        let right = a.mul(&c).unwrap().kronecker(&b.mul(&d).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kron_apply_matches_explicit(a in int_matrix(3, 3, -2, 2), b in int_matrix(3, 3, -2, 2), seed in 0i64..100) {
        let n = a.cols() * b.cols();
        let z: Vec<Rational> = (0..n as i64).map(|i| frac((i * 7 + seed) % 11 - 5, 1 + seed % 3)).collect();
        let explicit = kronecker_all(&[&a, &b]).mul_vec(&z).unwrap();
        prop_assert_eq!(kron_apply(&[&a, &b], &z).unwrap(), explicit);
    }

    #[test]
    fn rank_ignores_row_and_column_order(m in int_matrix(5, 5, -3, 3), rot_r in 0usize..5, rot_c in 0usize..5) {
        let rows: Vec<usize> = (0..m.rows()).map(|i| (i + rot_r) % m.rows()).rev().collect();
        let cols: Vec<usize> = (0..m.cols()).map(|j| (j + rot_c) % m.cols()).collect();
        let p = m.select_rows(&rows).select_columns(&cols);
        prop_assert_eq!(rank(&m), rank(&p));
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn lp_certificates_always_verify(a in int_matrix(4, 5, -2, 2), seed in 0i64..50) {
        let b: Vec<Rational> = (0..a.rows() as i64).map(|i| int((i * 5 + seed) % 7 - 3)).collect();
        let res = lp_feasible(&a, &b).unwrap();
        prop_assert!(res.verify(&a, &b));
    }

    #[test]
    fn double_description_round_trip(m in int_matrix(6, 6, 0, 1)) {
        let h = v_to_h(&m).unwrap();
        // every generator satisfies every inequality
        let hm = h.mul(&m).unwrap();
        prop_assert!(hm.to_rows().iter().flatten().all(|x| !x.is_negative()));
        let back = h_to_v(&h).unwrap();
        prop_assert!(generators_contained(&back, &m).unwrap());
        prop_assert!(generators_contained(&m, &back).unwrap());
        prop_assert!(Cone::from_both(m, h).is_ok());
    }

    #[test]
    fn products_are_separable_and_no_signaling(r1 in pcr(), r2 in pcr()) {
        let r = gen_product(&frodo_sam_space(), &[r1, r2]).unwrap();
        prop_assert!(check_marginality(&r).holds());
        let res = check_separable(&r, &[]).unwrap();
        prop_assert!(res.is_feasible());
        prop_assert!(classify(&r, &[]).verify(&r).unwrap());
    }

    #[test]
    fn rule_files_round_trip(r1 in pcr(), r2 in pcr()) {
        let r = gen_product(&frodo_sam_space(), &[r1, r2]).unwrap();
        let text = rule_to_json(&r, None);
        let back = parse_rule(&text).unwrap();
        prop_assert_eq!(&back.rule, &r);
        prop_assert_eq!(rule_to_json(&back.rule, None), text);
    }

    #[test]
    fn separable_rules_pass_tensor_restrictions(seed in 0u64..10_000, dms in 2usize..=3) {
        let mut rng = item_rng(seed, dms);
        let space = random_small_space(&mut rng, dms);
        let allowed: Vec<Option<Vec<usize>>> = (0..dms).map(|t| random_allowed(&mut rng, &space, t)).collect();
        let rule = random_separable_rule(&mut rng, &space, &allowed);
        let h = default_h_list(&space, &allowed).unwrap();
        prop_assert!(check_separable_restrictions(&rule, &h).unwrap().holds());
        prop_assert!(check_separable(&rule, &allowed).unwrap().is_feasible());
    }
}

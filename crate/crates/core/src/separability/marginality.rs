use serde::{Deserialize, Serialize};

use super::Verdict;
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;
use crate::space::{decode_row_major, ChoiceSpace};

/// A DM held at a fixed (menu, in-menu position) while another DM is summed out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedChoice {
    pub dm: usize,
    pub menu: usize,
    pub position: usize,
}

/// Two menus of `dm` whose marginal sums disagree with the other DMs held fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalityViolation {
    /// DM whose choices are summed out.
    pub dm: usize,
    pub menus: (usize, usize),
    pub fixed: Vec<FixedChoice>,
    /// Sum over `dm`'s choices from `menus.0`.
    #[serde(with = "rational::serde_rational")]
    pub lhs: Rational,
    /// Sum over `dm`'s choices from `menus.1`.
    #[serde(with = "rational::serde_rational")]
    pub rhs: Rational,
}

/// Σ over DM `t`'s choices in `menu` of the joint vector, other DMs held at `fixed`.
pub fn marginal_sum(
    space: &ChoiceSpace,
    joint: &[Rational],
    t: usize,
    menu: usize,
    fixed: &[FixedChoice],
) -> Rational {
    let radices: Vec<usize> = (0..space.dm_count()).map(|s| space.pair_count(s)).collect();
    let mut pairs = vec![0usize; space.dm_count()];
    for f in fixed {
        pairs[f.dm] = space.pair_index(f.dm, f.menu, f.position);
    }
    let mut total = Rational::from_integer(0.into());
    for pos in 0..space.menu_size(t, menu) {
        pairs[t] = space.pair_index(t, menu, pos);
        let idx = crate::space::encode_row_major(&pairs, &radices);
        total += &joint[idx];
    }
    total
}

/// No-signaling check: for every DM `t`, every fixed (menu, choice) of all other DMs
/// and every menu `j` of `t`, the sum over `t`'s choices from `j` must equal the sum
/// from `t`'s first menu. Reports the first failure in (DM, other-DM assignment,
/// menu) order.
pub fn check_marginality(rule: &JointChoiceRule) -> Verdict<MarginalityViolation> {
    let space = rule.space();
    let joint = rule.joint_vector();
    for t in 0..space.dm_count() {
        if space.menu_count(t) < 2 {
            continue;
        }
        let others: Vec<usize> = (0..space.dm_count()).filter(|&s| s != t).collect();
        let radices: Vec<usize> = others.iter().map(|&s| space.pair_count(s)).collect();
        let combos: usize = radices.iter().product();
        for k in 0..combos {
            let digits = decode_row_major(k, &radices);
            let fixed: Vec<FixedChoice> = others
                .iter()
                .zip(&digits)
                .map(|(&s, &p)| {
                    let (menu, position) = space.pair_at(s, p);
                    FixedChoice {
                        dm: s,
                        menu,
                        position,
                    }
                })
                .collect();
            let base = marginal_sum(space, &joint, t, 0, &fixed);
            for j in 1..space.menu_count(t) {
                let other = marginal_sum(space, &joint, t, j, &fixed);
                if other != base {
                    return Verdict::Violated(MarginalityViolation {
                        dm: t,
                        menus: (0, j),
                        fixed,
                        lhs: base,
                        rhs: other,
                    });
                }
            }
        }
    }
    Verdict::Holds
}

impl MarginalityViolation {
    /// Recomputes both sums from the rule.
    pub fn verify(&self, rule: &JointChoiceRule) -> bool {
        let space = rule.space();
        if self.dm >= space.dm_count()
            || self.menus.0 >= space.menu_count(self.dm)
            || self.menus.1 >= space.menu_count(self.dm)
            || self.fixed.len() + 1 != space.dm_count()
        {
            return false;
        }
        let mut covered: Vec<usize> = self.fixed.iter().map(|f| f.dm).collect();
        covered.push(self.dm);
        covered.sort_unstable();
        if covered != (0..space.dm_count()).collect::<Vec<_>>() {
            return false;
        }
        if self.fixed.iter().any(|f| {
            f.menu >= space.menu_count(f.dm) || f.position >= space.menu_size(f.dm, f.menu)
        }) {
            return false;
        }
        let joint = rule.joint_vector();
        let lhs = marginal_sum(space, &joint, self.dm, self.menus.0, &self.fixed);
        let rhs = marginal_sum(space, &joint, self.dm, self.menus.1, &self.fixed);
        lhs == self.lhs && rhs == self.rhs && lhs != rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::scenarios::{frodo_sam_space, gen_product, gen_table1};
    use crate::separability::fixtures::signaling_rule;

    #[test]
    fn table1_family_holds() {
        for n in [0, 3, 6, 8] {
            assert!(check_marginality(&gen_table1(&frac(n, 16)).unwrap()).holds());
        }
    }

    #[test]
    fn product_rule_holds() {
        let r1 = vec![frac(2, 3), frac(1, 3), frac(1, 5), frac(4, 5)];
        let r2 = vec![frac(1, 7), frac(6, 7), int(1), int(0)];
        let r = gen_product(&frodo_sam_space(), &[r1, r2]).unwrap();
        assert!(check_marginality(&r).holds());
    }

    #[test]
    fn signaling_rule_reports_sam_x_mass() {
        let rule = signaling_rule();
        let v = check_marginality(&rule);
        let v = v.violation().expect("violation");
        assert_eq!(v.dm, 0);
        assert_eq!(v.menus, (0, 1));
        assert_eq!(
            v.fixed,
            vec![FixedChoice {
                dm: 1,
                menu: 0,
                position: 0
            }]
        );
        assert_eq!(v.lhs, int(1));
        assert_eq!(v.rhs, int(0));
        assert!(v.verify(&rule));
    }

    #[test]
    fn tampered_violation_fails_verification() {
        let rule = signaling_rule();
        let mut v = check_marginality(&rule).violation().unwrap().clone();
        v.lhs = int(0);
        assert!(!v.verify(&rule));
        let ok = gen_table1(&frac(1, 2)).unwrap();
        let real = check_marginality(&rule).violation().unwrap().clone();
        assert!(!real.verify(&ok));
    }

    #[test]
    fn three_dm_signaling_detected() {
        use crate::space::{validate_space, RawDm};
        let dm = RawDm::new(&["a", "b"], &[&["a", "b"], &["a"]]);
        let space = validate_space(&[dm.clone(), dm.clone(), dm]).unwrap();
        // DM 2 picks b exactly when DM 0 faces its second menu.
        let r = JointChoiceRule::from_fn(space.clone(), |p, c| {
            let want2 = if p.0[2] == 0 { usize::from(p.0[0] == 1) } else { 0 };
            if c.0[0] == 0 && c.0[1] == 0 && c.0[2] == want2 {
                int(1)
            } else {
                int(0)
            }
        })
        .unwrap();
        let v = check_marginality(&r);
        let v = v.violation().unwrap();
        assert_eq!(v.dm, 0);
        assert!(v.verify(&r));
        assert!(check_marginality(&JointChoiceRule::uniform(space)).holds());
    }
}

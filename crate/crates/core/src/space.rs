//! Decision makers, menus, deterministic choice rules and the index orderings
//! shared by every other module.
//!
//! Orderings:
//! * a DM's (menu, alternative) pairs are ordered by menu, then by position in the menu;
//! * deterministic rules are numbered in mixed radix with the pick from menu 0 varying fastest;
//! * menu paths, choice paths and joint pair vectors use Kronecker order, last DM fastest.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational;

/// One decision maker's alternatives and menus. Menus hold indices into `alternatives`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DmSpec {
    alternatives: Vec<String>,
    menus: Vec<Vec<usize>>,
}

impl DmSpec {
    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn menus(&self) -> &[Vec<usize>] {
        &self.menus
    }

    pub fn menu_labels(&self, menu: usize) -> Vec<&str> {
        self.menus[menu]
            .iter()
            .map(|&a| self.alternatives[a].as_str())
            .collect()
    }
}

/// Unvalidated description of one DM, as read from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDm {
    pub alternatives: Vec<String>,
    pub menus: Vec<Vec<String>>,
}

impl RawDm {
    pub fn new<S: AsRef<str>>(alternatives: &[S], menus: &[&[S]]) -> Self {
        Self {
            alternatives: alternatives.iter().map(|s| s.as_ref().to_string()).collect(),
            menus: menus
                .iter()
                .map(|m| m.iter().map(|s| s.as_ref().to_string()).collect())
                .collect(),
        }
    }
}

/// A validated finite choice experiment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceSpace {
    dms: Vec<DmSpec>,
}

/// One menu index per DM.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MenuPath(pub Vec<usize>);

/// One in-menu position per DM, relative to a [`MenuPath`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChoicePath(pub Vec<usize>);

/// A single-valued choice function: for each menu of `dm`, the position picked.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeterministicRule {
    pub dm: usize,
    pub picks: Vec<usize>,
}

/// Validates a raw description; index orderings are kept exactly as declared.
pub fn validate_space(raw: &[RawDm]) -> Result<ChoiceSpace> {
    if raw.is_empty() {
        return Err(Error::NoDms);
    }
    let mut dms = Vec::with_capacity(raw.len());
    for (t, dm) in raw.iter().enumerate() {
        let mut seen = HashSet::new();
        for label in &dm.alternatives {
            if label.is_empty() || label.contains('|') {
                return Err(Error::BadLabel {
                    dm: t,
                    label: label.clone(),
                });
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateAlternative {
                    dm: t,
                    context: "the alternative list".into(),
                    label: label.clone(),
                });
            }
        }
        if dm.menus.is_empty() {
            return Err(Error::NoMenus { dm: t });
        }
        let mut menus: Vec<Vec<usize>> = Vec::with_capacity(dm.menus.len());
        for (j, menu) in dm.menus.iter().enumerate() {
            if menu.is_empty() {
                return Err(Error::EmptyMenu { dm: t, menu: j });
            }
            let mut idx = Vec::with_capacity(menu.len());
            for label in menu {
                let a = dm
                    .alternatives
                    .iter()
                    .position(|x| x == label)
                    .ok_or_else(|| Error::UnknownAlternative {
                        dm: t,
                        menu: j,
                        label: label.clone(),
                    })?;
                if idx.contains(&a) {
                    return Err(Error::DuplicateAlternative {
                        dm: t,
                        context: format!("menu {j}"),
                        label: label.clone(),
                    });
                }
                idx.push(a);
            }
            let as_set = |m: &[usize]| {
                let mut s = m.to_vec();
                s.sort_unstable();
                s
            };
            if let Some(first) = menus.iter().position(|m| as_set(m) == as_set(&idx)) {
                return Err(Error::DuplicateMenu {
                    dm: t,
                    menu: j,
                    first,
                });
            }
            menus.push(idx);
        }
        dms.push(DmSpec {
            alternatives: dm.alternatives.clone(),
            menus,
        });
    }
    Ok(ChoiceSpace { dms })
}

/// Mixed-radix decoding with the first digit least significant.
pub(crate) fn decode_mixed(mut index: usize, radices: &[usize]) -> Vec<usize> {
    radices
        .iter()
        .map(|&r| {
            let d = index % r;
            index /= r;
            d
        })
        .collect()
}

/// Row-major (last digit fastest) decoding.
pub(crate) fn decode_row_major(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = index % r;
        index /= r;
    }
    digits
}

pub(crate) fn encode_row_major(digits: &[usize], radices: &[usize]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

impl ChoiceSpace {
    /// Assembles a space from already validated DMs.
    pub(crate) fn from_dms(dms: Vec<DmSpec>) -> Self {
        Self { dms }
    }

    pub fn dm_count(&self) -> usize {
        self.dms.len()
    }

    pub fn dms(&self) -> &[DmSpec] {
        &self.dms
    }

    pub fn dm(&self, t: usize) -> &DmSpec {
        &self.dms[t]
    }

    pub fn check_dm(&self, t: usize) -> Result<()> {
        if t < self.dms.len() {
            Ok(())
        } else {
            Err(Error::BadDm {
                dm: t,
                count: self.dms.len(),
            })
        }
    }

    pub fn menu_count(&self, t: usize) -> usize {
        self.dms[t].menus.len()
    }

    pub fn menu_size(&self, t: usize, menu: usize) -> usize {
        self.dms[t].menus[menu].len()
    }

    pub fn menu_sizes(&self, t: usize) -> Vec<usize> {
        self.dms[t].menus.iter().map(Vec::len).collect()
    }

    /// Rows of the type matrix: number of (menu, alternative) pairs.
    pub fn pair_count(&self, t: usize) -> usize {
        self.dms[t].menus.iter().map(Vec::len).sum()
    }

    /// Columns of the type matrix: number of deterministic rules.
    pub fn rule_count(&self, t: usize) -> usize {
        self.dms[t].menus.iter().map(Vec::len).product()
    }

    /// Row index of (menu, position) within DM `t`'s pair ordering.
    pub fn pair_index(&self, t: usize, menu: usize, pos: usize) -> usize {
        self.menu_offset(t, menu) + pos
    }

    pub fn menu_offset(&self, t: usize, menu: usize) -> usize {
        self.dms[t].menus[..menu].iter().map(Vec::len).sum()
    }

    /// Inverse of [`pair_index`](Self::pair_index).
    pub fn pair_at(&self, t: usize, mut pair: usize) -> (usize, usize) {
        for (j, m) in self.dms[t].menus.iter().enumerate() {
            if pair < m.len() {
                return (j, pair);
            }
            pair -= m.len();
        }
        panic!("pair index out of range for dm {t}");
    }

    pub fn label(&self, t: usize, menu: usize, pos: usize) -> &str {
        let dm = &self.dms[t];
        &dm.alternatives[dm.menus[menu][pos]]
    }

    pub fn menu_display(&self, t: usize, menu: usize) -> String {
        format!("{{{}}}", self.dms[t].menu_labels(menu).join(","))
    }

    pub fn menu_path_count(&self) -> usize {
        (0..self.dm_count()).map(|t| self.menu_count(t)).product()
    }

    fn menu_radices(&self) -> Vec<usize> {
        (0..self.dm_count()).map(|t| self.menu_count(t)).collect()
    }

    /// All menu paths, last DM fastest.
    pub fn menu_paths(&self) -> Vec<MenuPath> {
        let radices = self.menu_radices();
        (0..self.menu_path_count())
            .map(|i| MenuPath(decode_row_major(i, &radices)))
            .collect()
    }

    pub fn menu_path_index(&self, path: &MenuPath) -> usize {
        encode_row_major(&path.0, &self.menu_radices())
    }

    pub fn check_menu_path(&self, path: &MenuPath) -> bool {
        path.0.len() == self.dm_count()
            && path.0.iter().enumerate().all(|(t, &j)| j < self.menu_count(t))
    }

    fn choice_radices(&self, path: &MenuPath) -> Vec<usize> {
        path.0
            .iter()
            .enumerate()
            .map(|(t, &j)| self.menu_size(t, j))
            .collect()
    }

    pub fn choice_path_count(&self, path: &MenuPath) -> usize {
        self.choice_radices(path).iter().product()
    }

    /// Choice paths of a menu path, last DM fastest.
    pub fn choice_paths(&self, path: &MenuPath) -> Vec<ChoicePath> {
        let radices = self.choice_radices(path);
        (0..radices.iter().product())
            .map(|i| ChoicePath(decode_row_major(i, &radices)))
            .collect()
    }

    pub fn choice_path_index(&self, path: &MenuPath, choice: &ChoicePath) -> usize {
        encode_row_major(&choice.0, &self.choice_radices(path))
    }

    /// Position in the joint Kronecker-ordered vector of (menu, choice) pairs.
    pub fn joint_index(&self, path: &MenuPath, choice: &ChoicePath) -> usize {
        let pairs: Vec<usize> = (0..self.dm_count())
            .map(|t| self.pair_index(t, path.0[t], choice.0[t]))
            .collect();
        let radices: Vec<usize> = (0..self.dm_count()).map(|t| self.pair_count(t)).collect();
        encode_row_major(&pairs, &radices)
    }

    pub fn joint_len(&self) -> usize {
        (0..self.dm_count()).map(|t| self.pair_count(t)).product()
    }

    pub fn choice_labels(&self, path: &MenuPath, choice: &ChoicePath) -> Vec<&str> {
        (0..self.dm_count())
            .map(|t| self.label(t, path.0[t], choice.0[t]))
            .collect()
    }
}

/// Decodes rule number `index` of DM `t` (menu 0 varies fastest).
pub fn rule_from_index(space: &ChoiceSpace, t: usize, index: usize) -> DeterministicRule {
    DeterministicRule {
        dm: t,
        picks: decode_mixed(index, &space.menu_sizes(t)),
    }
}

/// Human-readable form of rule `index` of DM `t`, e.g. `{x,w}->x {y,z}->z`.
pub fn describe_rule(space: &ChoiceSpace, t: usize, index: usize) -> String {
    let rule = rule_from_index(space, t, index);
    rule.picks
        .iter()
        .enumerate()
        .map(|(j, &pos)| format!("{}->{}", space.menu_display(t, j), space.label(t, j, pos)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn enumerate_rules(space: &ChoiceSpace, t: usize) -> Result<Vec<DeterministicRule>> {
    space.check_dm(t)?;
    Ok((0..space.rule_count(t))
        .map(|c| rule_from_index(space, t, c))
        .collect())
}

/// The 0/1 type matrix of DM `t`: rows are (menu, alternative) pairs, columns are
/// deterministic rules; each column has exactly one 1 per menu block.
pub fn build_type_matrix(space: &ChoiceSpace, t: usize) -> Result<Matrix> {
    let rules = enumerate_rules(space, t)?;
    let mut m = Matrix::zeros(space.pair_count(t), rules.len());
    for (c, rule) in rules.iter().enumerate() {
        for (j, &pos) in rule.picks.iter().enumerate() {
            m.set(space.pair_index(t, j, pos), c, rational::one());
        }
    }
    Ok(m)
}

/// Columns `allowed` of the type matrix, in the given order.
pub fn restrict_type_matrix(space: &ChoiceSpace, t: usize, allowed: &[usize]) -> Result<Matrix> {
    let full = build_type_matrix(space, t)?;
    check_allowed(space, t, allowed)?;
    Ok(full.select_columns(allowed))
}

pub(crate) fn check_allowed(space: &ChoiceSpace, t: usize, allowed: &[usize]) -> Result<()> {
    if allowed.is_empty() {
        return Err(Error::EmptyAllowedSet { dm: t });
    }
    let count = space.rule_count(t);
    let mut seen = HashSet::new();
    for &c in allowed {
        if c >= count || !seen.insert(c) {
            return Err(Error::BadIndex {
                dm: t,
                index: c,
                count,
            });
        }
    }
    Ok(())
}

/// Type matrix of DM `t` restricted to `allowed` when given, else the full matrix.
pub fn type_matrix_for(space: &ChoiceSpace, t: usize, allowed: Option<&[usize]>) -> Result<Matrix> {
    match allowed {
        Some(cols) => restrict_type_matrix(space, t, cols),
        None => build_type_matrix(space, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs() -> ChoiceSpace {
        let dm = RawDm::new(&["x", "w", "y", "z"], &[&["x", "w"], &["y", "z"]]);
        validate_space(&[dm.clone(), dm]).unwrap()
    }

    #[test]
    fn frodo_sam_counts() {
        let s = fs();
        for t in 0..2 {
            assert_eq!(s.pair_count(t), 4);
            assert_eq!(s.rule_count(t), 4);
        }
        assert_eq!(s.menu_path_count(), 4);
        assert_eq!(s.joint_len(), 16);
    }

    #[test]
    fn degenerate_single_menu() {
        let s = validate_space(&[RawDm::new(&["a"], &[&["a"]])]).unwrap();
        assert_eq!(s.rule_count(0), 1);
        assert_eq!(build_type_matrix(&s, 0).unwrap(), Matrix::identity(1));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(validate_space(&[]), Err(Error::NoDms));
        let dup = RawDm::new(&["x"], &[&["x", "x"]]);
        assert!(matches!(
            validate_space(&[dup]),
            Err(Error::DuplicateAlternative { dm: 0, .. })
        ));
        let empty = RawDm::new(&["x"], &[&[]]);
        assert_eq!(
            validate_space(&[empty]),
            Err(Error::EmptyMenu { dm: 0, menu: 0 })
        );
        let unknown = RawDm::new(&["x"], &[&["q"]]);
        assert!(matches!(
            validate_space(&[unknown]),
            Err(Error::UnknownAlternative { dm: 0, menu: 0, .. })
        ));
        let repeated = RawDm::new(&["x", "y"], &[&["x", "y"], &["y", "x"]]);
        assert_eq!(
            validate_space(&[repeated]),
            Err(Error::DuplicateMenu {
                dm: 0,
                menu: 1,
                first: 0
            })
        );
        let no_menus = RawDm {
            alternatives: vec!["x".into()],
            menus: vec![],
        };
        assert_eq!(validate_space(&[no_menus]), Err(Error::NoMenus { dm: 0 }));
        let piped = RawDm::new(&["x|y"], &[&["x|y"]]);
        assert!(matches!(validate_space(&[piped]), Err(Error::BadLabel { .. })));
    }

    #[test]
    fn rule_enumeration_order() {
        let s = fs();
        let picks: Vec<Vec<usize>> = enumerate_rules(&s, 0)
            .unwrap()
            .into_iter()
            .map(|r| r.picks)
            .collect();
        // (x,y), (w,y), (x,z), (w,z)
        assert_eq!(picks, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let mixed = validate_space(&[RawDm::new(
            &["a", "b", "c", "d", "e"],
            &[&["a", "b"], &["c", "d", "e"]],
        )])
        .unwrap();
        assert_eq!(enumerate_rules(&mixed, 0).unwrap().len(), 6);
        let single = validate_space(&[RawDm::new(&["a", "b"], &[&["a", "b"]])]).unwrap();
        assert_eq!(build_type_matrix(&single, 0).unwrap(), Matrix::identity(2));
        assert!(enumerate_rules(&single, 1).is_err());
    }

    #[test]
    fn frodo_type_matrix_matches_printed() {
        let expected =
            Matrix::from_ints(&[[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 0, 0], [0, 0, 1, 1]]);
        assert_eq!(build_type_matrix(&fs(), 0).unwrap(), expected);
    }

    #[test]
    fn repeated_binary_menus_over_same_alternatives() {
        let s = validate_space(&[RawDm::new(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]])])
            .unwrap();
        let m = build_type_matrix(&s, 0).unwrap();
        // hand enumeration: columns are (e_i ; e_j) with the first block varying fastest
        let expected =
            Matrix::from_ints(&[[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 0, 0], [0, 0, 1, 1]]);
        assert_eq!(m, expected);
    }

    #[test]
    fn restriction() {
        let s = fs();
        let dominance = restrict_type_matrix(&s, 0, &[0, 2, 3]).unwrap();
        assert_eq!(
            dominance,
            Matrix::from_ints(&[[1, 1, 0], [0, 0, 1], [1, 0, 0], [0, 1, 1]])
        );
        assert_eq!(
            restrict_type_matrix(&s, 0, &[0, 1, 2, 3]).unwrap(),
            build_type_matrix(&s, 0).unwrap()
        );
        assert_eq!(
            restrict_type_matrix(&s, 0, &[1]).unwrap(),
            Matrix::from_ints(&[[0], [1], [1], [0]])
        );
        assert_eq!(
            restrict_type_matrix(&s, 0, &[]),
            Err(Error::EmptyAllowedSet { dm: 0 })
        );
        assert!(matches!(
            restrict_type_matrix(&s, 0, &[4]),
            Err(Error::BadIndex { index: 4, .. })
        ));
        assert!(matches!(
            restrict_type_matrix(&s, 0, &[1, 1]),
            Err(Error::BadIndex { index: 1, .. })
        ));
    }

    #[test]
    fn joint_index_is_kronecker_order() {
        let s = fs();
        // (w,{xw}; y,{yz}) is row 7 (1-based) of the printed 16-row listing
        let idx = s.joint_index(&MenuPath(vec![0, 1]), &ChoicePath(vec![1, 0]));
        assert_eq!(idx, 6);
        let paths = s.menu_paths();
        assert_eq!(paths[1], MenuPath(vec![0, 1]));
        assert_eq!(s.menu_path_index(&paths[3]), 3);
    }
}

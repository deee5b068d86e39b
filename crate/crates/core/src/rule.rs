//! Joint probabilistic choice rules.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::space::{ChoicePath, ChoiceSpace, MenuPath};

/// For every menu path, a probability vector over its choice paths (both in
/// Kronecker order). Entries are nonnegative and each menu path sums to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointChoiceRule {
    space: ChoiceSpace,
    probs: Vec<Vec<Rational>>,
}

fn describe_path(space: &ChoiceSpace, path: &MenuPath) -> String {
    let menus: Vec<String> = path
        .0
        .iter()
        .enumerate()
        .map(|(t, &j)| space.menu_display(t, j))
        .collect();
    format!("menu path {:?} ({})", path.0, menus.join(" | "))
}

impl JointChoiceRule {
    /// `probs[p]` is the distribution for the `p`-th menu path of `space.menu_paths()`.
    pub fn new(space: ChoiceSpace, probs: Vec<Vec<Rational>>) -> Result<Self> {
        let paths = space.menu_paths();
        if probs.len() != paths.len() {
            return Err(Error::InvalidRule(format!(
                "expected {} menu paths, got {}",
                paths.len(),
                probs.len()
            )));
        }
        for (path, dist) in paths.iter().zip(&probs) {
            let expected = space.choice_path_count(path);
            if dist.len() != expected {
                return Err(Error::InvalidRule(format!(
                    "{}: expected {expected} choice paths, got {}",
                    describe_path(&space, path),
                    dist.len()
                )));
            }
            if let Some(neg) = dist.iter().find(|x| x.is_negative()) {
                return Err(Error::InvalidRule(format!(
                    "{}: negative probability {}",
                    describe_path(&space, path),
                    rational::format(neg)
                )));
            }
            let total = rational::sum(dist);
            if !total.is_one() {
                return Err(Error::InvalidRule(format!(
                    "{}: probabilities sum to {}, expected 1",
                    describe_path(&space, path),
                    rational::format(&total)
                )));
            }
        }
        Ok(Self { space, probs })
    }

    pub fn from_fn(
        space: ChoiceSpace,
        mut f: impl FnMut(&MenuPath, &ChoicePath) -> Rational,
    ) -> Result<Self> {
        let probs = space
            .menu_paths()
            .iter()
            .map(|p| space.choice_paths(p).iter().map(|c| f(p, c)).collect())
            .collect();
        Self::new(space, probs)
    }

    /// Reads a vector indexed by joint (menu, alternative) pairs in Kronecker order.
    pub fn from_joint_vector(space: ChoiceSpace, v: &[Rational]) -> Result<Self> {
        if v.len() != space.joint_len() {
            return Err(Error::DimensionMismatch(format!(
                "joint vector of length {}, space needs {}",
                v.len(),
                space.joint_len()
            )));
        }
        let sp = space.clone();
        Self::from_fn(space, |p, c| v[sp.joint_index(p, c)].clone())
    }

    pub fn space(&self) -> &ChoiceSpace {
        &self.space
    }

    pub fn probs(&self) -> &[Vec<Rational>] {
        &self.probs
    }

    pub fn distribution(&self, path: &MenuPath) -> &[Rational] {
        &self.probs[self.space.menu_path_index(path)]
    }

    pub fn prob(&self, path: &MenuPath, choice: &ChoicePath) -> &Rational {
        &self.distribution(path)[self.space.choice_path_index(path, choice)]
    }

    /// The rule stacked as one vector over joint (menu, alternative) pairs, Kronecker
    /// order with the last DM fastest; this is the right-hand side of `A ν = ρ`.
    pub fn joint_vector(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.space.joint_len()];
        for path in self.space.menu_paths() {
            let dist = self.distribution(&path);
            for (k, choice) in self.space.choice_paths(&path).iter().enumerate() {
                v[self.space.joint_index(&path, choice)] = dist[k].clone();
            }
        }
        v
    }

    /// The uniform rule: every choice path of a menu path equally likely.
    pub fn uniform(space: ChoiceSpace) -> Self {
        let sp = space.clone();
        Self::from_fn(space, |p, _| {
            Rational::one() / Rational::from_integer(sp.choice_path_count(p).into())
        })
        .expect("uniform rule is valid")
    }
}

//! Seeded random rules for property and oracle tests.
//!
//! Every item is derived from `(seed, index)` alone, so corpora can be generated in
//! parallel and still come out identical.

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{kron_vec, Matrix};
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;
use crate::scenarios::{frodo_sam_space, gen_table1};
use crate::separability::joint_type_matrix;
use crate::space::{build_type_matrix, type_matrix_for, validate_space, ChoiceSpace, RawDm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    /// Random mixture of a few joint deterministic rules.
    Mixture,
    /// Member of the correlated α/β family.
    Table1,
    /// `A ν` for a random signed ν, pulled toward the uniform rule until nonnegative.
    Signed,
    /// Relabelled maximally correlated box mixed with a random mixture.
    NoisyBox,
    /// Independent random distribution per menu path (generally signaling).
    Signaling,
}

const KINDS: [CorpusKind; 5] = [
    CorpusKind::Mixture,
    CorpusKind::Table1,
    CorpusKind::Signed,
    CorpusKind::NoisyBox,
    CorpusKind::Signaling,
];

#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub index: usize,
    pub kind: CorpusKind,
    pub rule: JointChoiceRule,
}

pub fn item_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Random probability vector of length `n` with small denominators.
pub fn random_distribution(rng: &mut impl Rng, n: usize, max_weight: i64) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_weight)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.iter().map(|&x| rational::frac(x, total)).collect();
        }
    }
}

/// Random mixture over `support` randomly chosen columns of `a`.
pub fn random_mixture_vector(rng: &mut impl Rng, a: &Matrix, support: usize) -> Vec<Rational> {
    let mut cols: Vec<usize> = (0..a.cols()).collect();
    cols.shuffle(rng);
    cols.truncate(support.clamp(1, a.cols()));
    let weights = random_distribution(rng, cols.len(), 6);
    let mut v = vec![rational::zero(); a.rows()];
    for (&c, w) in cols.iter().zip(&weights) {
        for (r, x) in v.iter_mut().enumerate() {
            *x += w * a.get(r, c);
        }
    }
    v
}

/// Pulls `target` toward `anchor` (componentwise positive) just far enough to be
/// nonnegative, then optionally further toward `anchor`.
fn pull_to_nonnegative(rng: &mut impl Rng, target: &[Rational], anchor: &[Rational]) -> Vec<Rational> {
    let mut lambda = rational::one();
    for (t, u) in target.iter().zip(anchor) {
        if t.is_negative() {
            let bound = u / (u - t);
            if bound < lambda {
                lambda = bound;
            }
        }
    }
    let shrink = [(1, 1), (1, 1), (19, 20), (3, 4), (1, 2)];
    let (p, q) = *shrink.choose(rng).expect("nonempty");
    lambda *= rational::frac(p, q);
    target
        .iter()
        .zip(anchor)
        .map(|(t, u)| u + &lambda * (t - u))
        .collect()
}

/// Random signed measure ν with Σν = 1, pushed through `a`.
fn signed_image(rng: &mut impl Rng, a: &Matrix) -> Vec<Rational> {
    let mut nu: Vec<Rational> = (0..a.cols()).map(|_| rational::int(rng.gen_range(-3..=3))).collect();
    let rest = rational::sum(&nu[..nu.len() - 1]);
    let last = nu.len() - 1;
    nu[last] = rational::one() - rest;
    let scale = rational::frac(1, rng.gen_range(1..=4));
    let nu: Vec<Rational> = nu
        .iter()
        .enumerate()
        .map(|(i, x)| {
            // Keep Σν = 1 while shrinking the spread: ν ↦ s·ν + (1−s)·e_0.
            let base = if i == 0 { rational::one() } else { rational::zero() };
            &scale * x + (rational::one() - &scale) * base
        })
        .collect();
    a.mul_vec(&nu).expect("dimensions agree")
}

/// The maximally correlated box with random relabelling of each (DM, menu).
fn random_box(rng: &mut impl Rng, space: &ChoiceSpace) -> Vec<Rational> {
    let flips: Vec<bool> = (0..4).map(|_| rng.gen()).collect();
    let target: usize = rng.gen_range(0..4);
    let mut v = vec![rational::zero(); space.joint_len()];
    for j0 in 0..2 {
        for j1 in 0..2 {
            let anti = usize::from(2 * j0 + j1 == target);
            for i0 in 0..2 {
                for i1 in 0..2 {
                    let a = i0 ^ usize::from(flips[j0]);
                    let b = i1 ^ usize::from(flips[2 + j1]);
                    if (a ^ b) == anti {
                        let idx = space.pair_index(0, j0, i0) * 4 + space.pair_index(1, j1, i1);
                        v[idx] = rational::frac(1, 2);
                    }
                }
            }
        }
    }
    v
}

/// A random rule of the given kind on the two-DM binary space; `a` is that space's
/// unrestricted joint type matrix.
pub fn random_rule(rng: &mut impl Rng, kind: CorpusKind, a: &Matrix) -> JointChoiceRule {
    let space = frodo_sam_space();
    let uniform = vec![rational::frac(1, 4); space.joint_len()];
    let v = match kind {
        CorpusKind::Mixture => {
            let support = rng.gen_range(1..=5);
            random_mixture_vector(rng, a, support)
        }
        CorpusKind::Table1 => {
            let alpha = rational::frac(rng.gen_range(0..=24), 48);
            return gen_table1(&alpha).expect("alpha in range");
        }
        CorpusKind::Signed => {
            let s = signed_image(rng, a);
            pull_to_nonnegative(rng, &s, &uniform)
        }
        CorpusKind::NoisyBox => {
            let b = random_box(rng, &space);
            let support = rng.gen_range(1..=4);
            let m = random_mixture_vector(rng, a, support);
            let lambda = rational::frac(rng.gen_range(0..=24), 24);
            b.iter()
                .zip(&m)
                .map(|(x, y)| &lambda * x + (rational::one() - &lambda) * y)
                .collect()
        }
        CorpusKind::Signaling => {
            let probs: Vec<Vec<Rational>> = (0..space.menu_path_count())
                .map(|_| random_distribution(rng, 4, 5))
                .collect();
            return JointChoiceRule::new(space, probs).expect("valid distributions");
        }
    };
    JointChoiceRule::from_joint_vector(space, &v).expect("construction keeps adding up")
}

/// `n` rules on the two-DM binary space cycling through every [`CorpusKind`].
pub fn chsh_corpus(seed: u64, n: usize) -> Vec<CorpusItem> {
    let a = joint_type_matrix(&frodo_sam_space(), &[]).expect("fixed space");
    (0..n)
        .map(|index| {
            let kind = KINDS[index % KINDS.len()];
            let rule = random_rule(&mut item_rng(seed, index), kind, &a);
            CorpusItem { index, kind, rule }
        })
        .collect()
}

/// Random space with `dms` DMs, each with 1–2 distinct menus of size 1–3 drawn from
/// up to four alternatives.
pub fn random_small_space(rng: &mut impl Rng, dms: usize) -> ChoiceSpace {
    let labels = ["a", "b", "c", "d"];
    let raw: Vec<RawDm> = (0..dms)
        .map(|_| {
            let n_alt = rng.gen_range(1..=4);
            let alts: Vec<String> = labels[..n_alt].iter().map(|s| s.to_string()).collect();
            let n_menus = rng.gen_range(1..=2);
            let mut menus: Vec<Vec<String>> = Vec::new();
            for _ in 0..20 {
                if menus.len() == n_menus {
                    break;
                }
                let size = rng.gen_range(1..=3.min(n_alt));
                let mut m = alts.clone();
                m.shuffle(rng);
                m.truncate(size);
                let mut key = m.clone();
                key.sort();
                if !menus.iter().any(|x| {
                    let mut k = x.clone();
                    k.sort();
                    k == key
                }) {
                    menus.push(m);
                }
            }
            RawDm {
                alternatives: alts,
                menus,
            }
        })
        .collect();
    validate_space(&raw).expect("generated space is valid")
}

/// A random nonempty subset of DM `t`'s rules, or `None` for no restriction.
pub fn random_allowed(rng: &mut impl Rng, space: &ChoiceSpace, t: usize) -> Option<Vec<usize>> {
    if rng.gen_bool(0.5) {
        return None;
    }
    let n = space.rule_count(t);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.truncate(rng.gen_range(1..=n));
    idx.sort_unstable();
    Some(idx)
}

/// A random separable rule over the given (restricted) type matrices: a mixture of
/// a few joint columns.
pub fn random_separable_rule(
    rng: &mut impl Rng,
    space: &ChoiceSpace,
    allowed: &[Option<Vec<usize>>],
) -> JointChoiceRule {
    let mats: Vec<Matrix> = (0..space.dm_count())
        .map(|t| {
            type_matrix_for(space, t, allowed.get(t).and_then(|a| a.as_deref()))
                .expect("allowed sets are valid")
        })
        .collect();
    let support = rng.gen_range(1..=4);
    let weights = random_distribution(rng, support, 6);
    let mut v = vec![rational::zero(); space.joint_len()];
    for w in &weights {
        let col = mats.iter().fold(vec![rational::one()], |acc, m| {
            let c = rng.gen_range(0..m.cols());
            kron_vec(&acc, &m.column(c))
        });
        for (x, c) in v.iter_mut().zip(col) {
            *x += w * c;
        }
    }
    JointChoiceRule::from_joint_vector(space.clone(), &v).expect("mixture adds up")
}

/// Full type matrices of every DM.
pub fn type_matrices(space: &ChoiceSpace) -> Vec<Matrix> {
    (0..space.dm_count())
        .map(|t| build_type_matrix(space, t).expect("valid dm"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separability::check_marginality;

    #[test]
    fn corpus_is_deterministic() {
        let a = chsh_corpus(7, 25);
        let b = chsh_corpus(7, 25);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.rule, y.rule);
        }
        let c = chsh_corpus(8, 25);
        assert!(a.iter().zip(&c).any(|(x, y)| x.rule != y.rule));
    }

    #[test]
    fn non_signaling_kinds_satisfy_marginality() {
        for item in chsh_corpus(3, 60) {
            if item.kind != CorpusKind::Signaling {
                assert!(check_marginality(&item.rule).holds(), "{:?}", item.kind);
            }
        }
    }

    #[test]
    fn small_spaces_respect_bounds() {
        let mut rng = item_rng(1, 0);
        for _ in 0..50 {
            let s = random_small_space(&mut rng, 3);
            for t in 0..s.dm_count() {
                assert!((1..=2).contains(&s.menu_count(t)));
                assert!(s.menu_sizes(t).iter().all(|&m| (1..=3).contains(&m)));
            }
        }
    }
}

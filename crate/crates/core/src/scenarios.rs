//! Named example rules on the two-DM, two-menu binary space.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron_vec, Matrix};
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;
use crate::space::{build_type_matrix, validate_space, ChoiceSpace, RawDm};

/// Frodo and Sam each face the menus `{x, w}` and `{y, z}`.
pub fn frodo_sam_space() -> ChoiceSpace {
    let frodo = RawDm::new(&["x", "w", "y", "z"], &[&["x", "w"], &["y", "z"]]);
    let sam = frodo.clone();
    validate_space(&[frodo, sam]).expect("fixed space is valid")
}

/// Rows are Frodo's (menu, alternative) pairs x, w, y, z; columns are Sam's.
/// `true` marks an α cell, `false` a β cell.
const TABLE1: [[bool; 4]; 4] = [
    [true, false, true, false],
    [false, true, false, true],
    [true, false, false, true],
    [false, true, true, false],
];

/// The correlated rule with weight α on coordinated cells and β = 1/2 − α elsewhere.
pub fn gen_table1(alpha: &Rational) -> Result<JointChoiceRule> {
    let half = rational::frac(1, 2);
    if alpha.is_negative() || *alpha > half {
        return Err(Error::BadAlpha(rational::format(alpha)));
    }
    let beta = &half - alpha;
    let mut v = Vec::with_capacity(16);
    for row in TABLE1 {
        for cell in row {
            v.push(if cell { alpha.clone() } else { beta.clone() });
        }
    }
    JointChoiceRule::from_joint_vector(frodo_sam_space(), &v)
}

fn check_pcr(space: &ChoiceSpace, t: usize, pcr: &[Rational]) -> Result<()> {
    if pcr.len() != space.pair_count(t) {
        return Err(Error::InvalidRule(format!(
            "choice rule for DM {} has {} entries, expected {}",
            t,
            pcr.len(),
            space.pair_count(t)
        )));
    }
    if pcr.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidRule(format!(
            "choice rule for DM {t} has a negative entry"
        )));
    }
    for j in 0..space.menu_count(t) {
        let start = space.menu_offset(t, j);
        let total = rational::sum(&pcr[start..start + space.menu_size(t, j)]);
        if total != rational::one() {
            return Err(Error::InvalidRule(format!(
                "choice rule for DM {} sums to {} on menu {}",
                t,
                rational::format(&total),
                space.menu_display(t, j)
            )));
        }
    }
    Ok(())
}

/// Independent DMs: the joint rule is the product of individual choice rules, each
/// given over that DM's (menu, alternative) pairs.
pub fn gen_product(space: &ChoiceSpace, pcrs: &[Vec<Rational>]) -> Result<JointChoiceRule> {
    if pcrs.len() != space.dm_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} choice rules for {} DMs",
            pcrs.len(),
            space.dm_count()
        )));
    }
    for (t, pcr) in pcrs.iter().enumerate() {
        check_pcr(space, t, pcr)?;
    }
    let v = pcrs
        .iter()
        .fold(vec![rational::one()], |acc, p| kron_vec(&acc, p));
    JointChoiceRule::from_joint_vector(space.clone(), &v)
}

/// Mixture of joint deterministic rules; keys hold one rule index per DM.
pub fn gen_mixture(
    space: &ChoiceSpace,
    weights: &BTreeMap<Vec<usize>, Rational>,
) -> Result<JointChoiceRule> {
    if weights.is_empty() {
        return Err(Error::BadWeights("no weights given".into()));
    }
    let mats: Vec<Matrix> = (0..space.dm_count())
        .map(|t| build_type_matrix(space, t))
        .collect::<Result<_>>()?;
    let mut total = rational::zero();
    let mut v = vec![rational::zero(); space.joint_len()];
    for (key, w) in weights {
        if key.len() != space.dm_count() {
            return Err(Error::BadWeights(format!(
                "key {:?} needs one rule index per DM ({})",
                key,
                space.dm_count()
            )));
        }
        if let Some(t) = (0..key.len()).find(|&t| key[t] >= space.rule_count(t)) {
            return Err(Error::BadWeights(format!(
                "key {:?}: DM {} has {} rules",
                key,
                t,
                space.rule_count(t)
            )));
        }
        if w.is_negative() {
            return Err(Error::BadWeights(format!(
                "key {:?} has negative weight {}",
                key,
                rational::format(w)
            )));
        }
        total += w;
        let col = key
            .iter()
            .zip(&mats)
            .fold(vec![rational::one()], |acc, (&c, m)| kron_vec(&acc, &m.column(c)));
        for (x, c) in v.iter_mut().zip(col) {
            *x += w * c;
        }
    }
    if total != rational::one() {
        return Err(Error::BadWeights(format!(
            "weights sum to {}, expected 1",
            rational::format(&total)
        )));
    }
    JointChoiceRule::from_joint_vector(space.clone(), &v)
}

/// Frodo never picks w from {x, w} together with y from {y, z}: his admissible
/// rules are the other three; Sam is unrestricted.
pub fn gen_dominance_space() -> (ChoiceSpace, Vec<Option<Vec<usize>>>) {
    (frodo_sam_space(), vec![Some(vec![0, 2, 3]), None])
}

/// A named scenario with rational parameters, as accepted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(with = "params_serde")]
    pub params: BTreeMap<String, Rational>,
}

mod params_serde {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{self, Rational};

    pub fn serialize<S: Serializer>(
        p: &BTreeMap<String, Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        p.iter()
            .map(|(k, v)| (k.clone(), rational::format(v)))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<String, Rational>, D::Error> {
        BTreeMap::<String, String>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| Ok((k, rational::parse(&v).map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

impl ScenarioSpec {
    /// Builds the rule. Supported names: `table1` (param `alpha`) and `uniform`.
    pub fn build(&self) -> Result<JointChoiceRule> {
        match self.name.as_str() {
            "table1" => {
                let alpha = self
                    .params
                    .get("alpha")
                    .ok_or_else(|| Error::BadParameter("table1 needs alpha".into()))?;
                gen_table1(alpha)
            }
            "uniform" => Ok(JointChoiceRule::uniform(frodo_sam_space())),
            other => Err(Error::BadParameter(format!("unknown scenario {other:?}"))),
        }
    }
}

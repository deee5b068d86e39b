use serde::{Deserialize, Serialize};

use super::Verdict;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;
use crate::space::{ChoicePath, ChoiceSpace, MenuPath};

/// Correlators indexed `[menu of DM 0][menu of DM 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatorTable {
    #[serde(with = "table_serde")]
    pub e: [[Rational; 2]; 2],
}

mod table_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{self, Rational};

    pub fn serialize<S: Serializer>(e: &[[Rational; 2]; 2], s: S) -> Result<S::Ok, S::Error> {
        e.each_ref()
            .map(|row| row.each_ref().map(rational::format))
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[[Rational; 2]; 2], D::Error> {
        let text = <[[String; 2]; 2]>::deserialize(d)?;
        let mut out: [[Rational; 2]; 2] = Default::default();
        for (row, cells) in out.iter_mut().zip(&text) {
            for (x, t) in row.iter_mut().zip(cells) {
                *x = rational::parse(t).map_err(serde::de::Error::custom)?;
            }
        }
        Ok(out)
    }
}

/// Which in-menu positions count as coordinating. By default position `i` of one DM
/// coordinates with position `i` of the other; flipping a (DM, menu) swaps its two
/// positions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub flip: [[bool; 2]; 2],
}

/// Coefficients of E00, E10, E01, E11 (first index DM 0's menu) in the four
/// expressions.
pub const CHSH_SIGNS: [[i64; 4]; 4] = [[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChshViolation {
    /// 1-based expression number.
    pub expression: usize,
    pub bound: Bound,
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
}

fn check_scenario(space: &ChoiceSpace) -> Result<()> {
    let ok = space.dm_count() == 2
        && (0..2).all(|t| space.menu_count(t) == 2 && space.menu_sizes(t) == [2, 2]);
    if ok {
        Ok(())
    } else {
        Err(Error::NotChshScenario)
    }
}

pub fn correlators(rule: &JointChoiceRule) -> Result<CorrelatorTable> {
    correlators_with(rule, Pairing::default())
}

pub fn correlators_with(rule: &JointChoiceRule, pairing: Pairing) -> Result<CorrelatorTable> {
    check_scenario(rule.space())?;
    let mut e: [[Rational; 2]; 2] = Default::default();
    for (j0, row) in e.iter_mut().enumerate() {
        for (j1, cell) in row.iter_mut().enumerate() {
            let path = MenuPath(vec![j0, j1]);
            let mut total = rational::zero();
            for i0 in 0..2 {
                for i1 in 0..2 {
                    let p = rule.prob(&path, &ChoicePath(vec![i0, i1]));
                    let a = i0 ^ usize::from(pairing.flip[0][j0]);
                    let b = i1 ^ usize::from(pairing.flip[1][j1]);
                    if a == b {
                        total += p;
                    } else {
                        total -= p;
                    }
                }
            }
            *cell = total;
        }
    }
    Ok(CorrelatorTable { e })
}

/// Values of the four expressions.
pub fn chsh_values(table: &CorrelatorTable) -> [Rational; 4] {
    let terms = [&table.e[0][0], &table.e[1][0], &table.e[0][1], &table.e[1][1]];
    CHSH_SIGNS.map(|signs| {
        signs
            .iter()
            .zip(terms)
            .fold(rational::zero(), |acc, (&s, e)| acc + rational::int(s) * e)
    })
}

/// Evaluates −2 ≤ S_k ≤ 2 for k = 1..4 and reports the first failing bound.
pub fn check_chsh(rule: &JointChoiceRule) -> Result<Verdict<ChshViolation>> {
    check_chsh_with(rule, Pairing::default())
}

pub fn check_chsh_with(rule: &JointChoiceRule, pairing: Pairing) -> Result<Verdict<ChshViolation>> {
    let table = correlators_with(rule, pairing)?;
    let two = rational::int(2);
    for (k, value) in chsh_values(&table).into_iter().enumerate() {
        let bound = if value > two {
            Bound::Upper
        } else if value < -two.clone() {
            Bound::Lower
        } else {
            continue;
        };
        return Ok(Verdict::Violated(ChshViolation {
            expression: k + 1,
            bound,
            value,
        }));
    }
    Ok(Verdict::Holds)
}

/// Symbolic form of expression `k` (1-based), e.g.
/// `E[{x,w},{x,w}] + E[{y,z},{x,w}] + E[{x,w},{y,z}] - E[{y,z},{y,z}]`.
pub fn chsh_expression_text(space: &ChoiceSpace, k: usize) -> String {
    let cells = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let mut out = String::new();
    for (n, (&s, (j0, j1))) in CHSH_SIGNS[k - 1].iter().zip(cells).enumerate() {
        let term = format!(
            "E[{},{}]",
            space.menu_display(0, j0),
            space.menu_display(1, j1)
        );
        match (n, s < 0) {
            (0, false) => out.push_str(&term),
            (0, true) => out.push_str(&format!("-{term}")),
            (_, false) => out.push_str(&format!(" + {term}")),
            (_, true) => out.push_str(&format!(" - {term}")),
        }
    }
    out
}

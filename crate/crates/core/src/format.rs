//! JSON files for spaces and rules.
//!
//! Space: `{"dms":[{"alternatives":["x","w"],"menus":[["x","w"]]}]}`.
//! Rule: `{"space":{...},"rule":[{"menus":[0,1],"probs":{"x|y":"1/2",...}}],"allowed":[[0,2,3],null]}`
//! with 0-based menu indices, `|`-joined alternative labels in DM order and exact
//! rational strings. `allowed` is optional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;
use crate::space::{validate_space, ChoiceSpace, MenuPath, RawDm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmFile {
    pub alternatives: Vec<String>,
    pub menus: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub dms: Vec<DmFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleEntry {
    pub menus: Vec<usize>,
    pub probs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub space: SpaceFile,
    pub rule: Vec<RuleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowed: Option<Vec<Option<Vec<usize>>>>,
}

/// A parsed rule file.
#[derive(Debug, Clone)]
pub struct LoadedRule {
    pub rule: JointChoiceRule,
    pub allowed: Vec<Option<Vec<usize>>>,
}

impl SpaceFile {
    pub fn from_space(space: &ChoiceSpace) -> Self {
        Self {
            dms: space
                .dms()
                .iter()
                .enumerate()
                .map(|(t, dm)| DmFile {
                    alternatives: dm.alternatives().to_vec(),
                    menus: (0..dm.menus().len())
                        .map(|j| space.dm(t).menu_labels(j).iter().map(|s| s.to_string()).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_space(&self) -> Result<ChoiceSpace> {
        let raw: Vec<RawDm> = self
            .dms
            .iter()
            .map(|d| RawDm {
                alternatives: d.alternatives.clone(),
                menus: d.menus.clone(),
            })
            .collect();
        validate_space(&raw)
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_space(text: &str) -> Result<ChoiceSpace> {
    parse_json::<SpaceFile>(text)?.to_space()
}

fn describe(space: &ChoiceSpace, path: &MenuPath) -> String {
    let menus: Vec<String> = path
        .0
        .iter()
        .enumerate()
        .map(|(t, &j)| space.menu_display(t, j))
        .collect();
    format!("menu path {:?} ({})", path.0, menus.join(" | "))
}

impl RuleFile {
    pub fn load(&self) -> Result<LoadedRule> {
        let space = self.space.to_space()?;
        let mut by_path: Vec<Option<&RuleEntry>> = vec![None; space.menu_path_count()];
        for entry in &self.rule {
            let path = MenuPath(entry.menus.clone());
            if !space.check_menu_path(&path) {
                return Err(Error::Parse(format!(
                    "menu path {:?} does not index a menu for every DM",
                    entry.menus
                )));
            }
            let slot = &mut by_path[space.menu_path_index(&path)];
            if slot.is_some() {
                return Err(Error::Parse(format!(
                    "{} listed twice",
                    describe(&space, &path)
                )));
            }
            *slot = Some(entry);
        }
        let mut probs = Vec::with_capacity(by_path.len());
        for (path, entry) in space.menu_paths().iter().zip(&by_path) {
            let entry = entry.ok_or_else(|| {
                Error::Parse(format!("{} is missing", describe(&space, path)))
            })?;
            let choices = space.choice_paths(path);
            let mut dist: Vec<Rational> = Vec::with_capacity(choices.len());
            for c in &choices {
                let key = space.choice_labels(path, c).join("|");
                let text = entry.probs.get(&key).ok_or_else(|| {
                    Error::Parse(format!(
                        "{}: no probability for choice {key:?}",
                        describe(&space, path)
                    ))
                })?;
                let p = rational::parse(text).map_err(|_| {
                    Error::Parse(format!(
                        "{}: choice {key:?} has invalid probability {text:?}",
                        describe(&space, path)
                    ))
                })?;
                dist.push(p);
            }
            if entry.probs.len() != choices.len() {
                let valid: Vec<String> = choices
                    .iter()
                    .map(|c| space.choice_labels(path, c).join("|"))
                    .collect();
                let extra = entry
                    .probs
                    .keys()
                    .find(|k| !valid.contains(k))
                    .cloned()
                    .unwrap_or_default();
                return Err(Error::Parse(format!(
                    "{}: unknown choice {extra:?}",
                    describe(&space, path)
                )));
            }
            probs.push(dist);
        }
        let rule = JointChoiceRule::new(space, probs)?;
        Ok(LoadedRule {
            rule,
            allowed: self.allowed.clone().unwrap_or_default(),
        })
    }

    pub fn from_rule(rule: &JointChoiceRule, allowed: Option<Vec<Option<Vec<usize>>>>) -> Self {
        let space = rule.space();
        let entries = space
            .menu_paths()
            .iter()
            .map(|path| {
                let dist = rule.distribution(path);
                let probs = space
                    .choice_paths(path)
                    .iter()
                    .zip(dist)
                    .map(|(c, p)| (space.choice_labels(path, c).join("|"), rational::format(p)))
                    .collect();
                RuleEntry {
                    menus: path.0.clone(),
                    probs,
                }
            })
            .collect();
        Self {
            space: SpaceFile::from_space(space),
            rule: entries,
            allowed,
        }
    }
}

pub fn parse_rule(text: &str) -> Result<LoadedRule> {
    parse_json::<RuleFile>(text)?.load()
}

/// Pretty JSON with a trailing newline; identical input gives identical bytes.
pub fn rule_to_json(rule: &JointChoiceRule, allowed: Option<Vec<Option<Vec<usize>>>>) -> String {
    let mut s = serde_json::to_string_pretty(&RuleFile::from_rule(rule, allowed))
        .expect("rule file serializes");
    s.push('\n');
    s
}

pub fn space_to_json(space: &ChoiceSpace) -> String {
    let mut s = serde_json::to_string_pretty(&SpaceFile::from_space(space))
        .expect("space file serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::scenarios::{frodo_sam_space, gen_table1};

    #[test]
    fn round_trip_table1() {
        let r = gen_table1(&frac(1, 2)).unwrap();
        let text = rule_to_json(&r, None);
        let back = parse_rule(&text).unwrap();
        assert_eq!(back.rule, r);
        assert!(back.allowed.is_empty());
        assert_eq!(rule_to_json(&back.rule, None), text);
        assert!(text.contains("\"x|x\": \"1/2\""));
        assert!(!text.contains("allowed"));
    }

    #[test]
    fn allowed_round_trip() {
        let r = gen_table1(&frac(1, 4)).unwrap();
        let allowed = vec![Some(vec![0, 2, 3]), None];
        let back = parse_rule(&rule_to_json(&r, Some(allowed.clone()))).unwrap();
        assert_eq!(back.allowed, allowed);
    }

    #[test]
    fn space_round_trip() {
        let s = frodo_sam_space();
        assert_eq!(parse_space(&space_to_json(&s)).unwrap(), s);
    }

    fn table1_file() -> RuleFile {
        RuleFile::from_rule(&gen_table1(&frac(1, 2)).unwrap(), None)
    }

    #[test]
    fn sum_error_names_menu_path() {
        let mut f = table1_file();
        f.rule[2].probs.insert("y|x".into(), "3/2".into());
        let err = f.load().unwrap_err().to_string();
        assert!(err.contains("[1, 0]") && err.contains("{y,z} | {x,w}"), "{err}");
    }

    #[test]
    fn missing_and_extra_entries() {
        let mut f = table1_file();
        f.rule.pop();
        assert!(f.load().unwrap_err().to_string().contains("missing"));

        let mut f = table1_file();
        f.rule[0].probs.remove("x|x");
        assert!(f.load().unwrap_err().to_string().contains("\"x|x\""));

        let mut f = table1_file();
        f.rule[0].probs.insert("q|x".into(), "0".into());
        assert!(f.load().unwrap_err().to_string().contains("\"q|x\""));

        let mut f = table1_file();
        let dup = f.rule[0].clone();
        f.rule.push(dup);
        assert!(f.load().unwrap_err().to_string().contains("twice"));

        let mut f = table1_file();
        f.rule[0].menus = vec![0, 2];
        assert!(f.load().is_err());
    }

    #[test]
    fn bad_rational_rejected() {
        let mut f = table1_file();
        f.rule[0].probs.insert("x|x".into(), "0.5".into());
        let err = f.load().unwrap_err().to_string();
        assert!(err.contains("invalid probability"), "{err}");
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert!(matches!(parse_rule("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_space("{\"dms\":[], \"x\":1}"), Err(Error::Parse(_))));
        assert!(matches!(parse_space("{\"dms\":[]}"), Err(Error::NoDms)));
    }
}

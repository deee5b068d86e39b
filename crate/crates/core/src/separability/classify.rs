use serde::{Deserialize, Serialize};

use super::{
    check_marginality, check_separable, check_separable_restrictions, default_h_list,
    joint_type_matrix, Allowed, MarginalityViolation, RestrictionViolation, TensorViolation,
    Verdict,
};
use crate::error::{Error, Result};
use crate::linalg::{verify_farkas, verify_witness, FeasibilityResult};
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Invalid,
    Signaling,
    Separable,
    Entangled,
    RestrictedViolation,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Invalid => "Invalid",
            Self::Signaling => "Signaling",
            Self::Separable => "Separable",
            Self::Entangled => "Entangled",
            Self::RestrictedViolation => "RestrictedViolation",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence backing a label; checkable against the rule without rerunning the
/// decision procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Invalid {
        message: String,
    },
    Marginality {
        violation: MarginalityViolation,
    },
    Tensor {
        violation: TensorViolation,
    },
    /// Weights over joint (allowed) deterministic rules, row-major in per-DM order.
    Mixture {
        #[serde(with = "rational::serde_rational_vec")]
        nu: Vec<Rational>,
    },
    /// `y` with `yᵀA ≤ 0` and `yᵀρ > 0`.
    Farkas {
        #[serde(with = "rational::serde_rational_vec")]
        y: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub label: Label,
    pub allowed: Vec<Option<Vec<usize>>>,
    pub evidence: Certificate,
}

fn invalid(allowed: &Allowed, e: Error) -> Classification {
    Classification {
        label: Label::Invalid,
        allowed: allowed.to_vec(),
        evidence: Certificate::Invalid {
            message: e.to_string(),
        },
    }
}

/// Marginality, then the tensor restrictions of the allowed sets, then the mixture
/// LP; the first failing step decides the label.
pub fn classify(rule: &JointChoiceRule, allowed: &Allowed) -> Classification {
    match classify_inner(rule, allowed) {
        Ok(c) => c,
        Err(e) => invalid(allowed, e),
    }
}

fn classify_inner(rule: &JointChoiceRule, allowed: &Allowed) -> Result<Classification> {
    // Validates the allowed sets before anything else.
    joint_type_matrix(rule.space(), allowed)?;
    let (label, evidence) = if let Verdict::Violated(v) = check_marginality(rule) {
        (Label::Signaling, Certificate::Marginality { violation: v })
    } else {
        let h_list = default_h_list(rule.space(), allowed)?;
        match check_separable_restrictions(rule, &h_list)? {
            Verdict::Violated(RestrictionViolation::Tensor(v)) => {
                (Label::RestrictedViolation, Certificate::Tensor { violation: v })
            }
            Verdict::Violated(RestrictionViolation::Marginality(v)) => {
                (Label::Signaling, Certificate::Marginality { violation: v })
            }
            Verdict::Holds => match check_separable(rule, allowed)? {
                FeasibilityResult::Feasible { witness } => {
                    (Label::Separable, Certificate::Mixture { nu: witness })
                }
                FeasibilityResult::Infeasible { farkas } => {
                    (Label::Entangled, Certificate::Farkas { y: farkas })
                }
            },
        }
    };
    let out = Classification {
        label,
        allowed: allowed.to_vec(),
        evidence,
    };
    if !out.verify(rule)? {
        return Err(Error::CertificateCheck(format!(
            "{} evidence failed re-verification",
            out.label
        )));
    }
    Ok(out)
}

impl Classification {
    /// Re-checks the evidence against `rule` and that it supports the label.
    pub fn verify(&self, rule: &JointChoiceRule) -> Result<bool> {
        let allowed = &self.allowed;
        Ok(match (&self.label, &self.evidence) {
            (Label::Invalid, Certificate::Invalid { .. }) => true,
            (Label::Signaling, Certificate::Marginality { violation }) => violation.verify(rule),
            (Label::RestrictedViolation, Certificate::Tensor { violation }) => {
                violation.verify(rule, allowed)?
            }
            (Label::Separable, Certificate::Mixture { nu }) => {
                let a = joint_type_matrix(rule.space(), allowed)?;
                verify_witness(&a, &rule.joint_vector(), nu)
                    && rational::sum(nu) == rational::one()
            }
            (Label::Entangled, Certificate::Farkas { y }) => {
                let a = joint_type_matrix(rule.space(), allowed)?;
                verify_farkas(&a, &rule.joint_vector(), y)
            }
            _ => false,
        })
    }
}

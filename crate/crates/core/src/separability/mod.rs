//! Decision procedures on joint probabilistic choice rules.
//!
//! `allowed` arguments list, per DM, an optional set of admissible deterministic rule
//! indices (columns of that DM's type matrix); `None`, or a list shorter than the
//! number of DMs, leaves a DM unrestricted.

mod chsh;
mod classify;
mod extension;
mod generating;
mod marginality;
mod restrictions;
mod separable;

use serde::{Deserialize, Serialize};

pub use chsh::{
    check_chsh, check_chsh_with, chsh_expression_text, chsh_values, correlators,
    correlators_with, Bound, ChshViolation, CorrelatorTable, Pairing, CHSH_SIGNS,
};
pub use classify::{classify, Certificate, Classification, Label};
pub use extension::{check_k_marginalizable, extension_system, ExtensionSystem};
pub use generating::{has_unique_representation, is_generating, pcr_span_basis};
pub use marginality::{check_marginality, marginal_sum, FixedChoice, MarginalityViolation};
pub use restrictions::{
    check_separable_restrictions, default_h_list, RestrictionViolation, TensorViolation,
};
pub use separable::{
    check_separable, joint_column_rules, joint_type_matrix, solve_signed_measure,
};

/// Per-DM admissible rule sets.
pub type Allowed = [Option<Vec<usize>>];

pub(crate) fn allowed_for(allowed: &Allowed, t: usize) -> Option<&[usize]> {
    allowed.get(t).and_then(|a| a.as_deref())
}

/// Outcome of a test that either holds or is refuted by a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "violation", rename_all = "snake_case")]
pub enum Verdict<V> {
    Holds,
    Violated(V),
}

impl<V> Verdict<V> {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds)
    }

    pub fn violation(&self) -> Option<&V> {
        match self {
            Self::Holds => None,
            Self::Violated(v) => Some(v),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::rational::{one, zero};
    use crate::rule::JointChoiceRule;
    use crate::scenarios::frodo_sam_space;

    /// Frodo always takes his first listed alternative; Sam takes x from {x, w} when
    /// Frodo faces {x, w} but w when Frodo faces {y, z}, and y from {y, z}.
    pub fn signaling_rule() -> JointChoiceRule {
        JointChoiceRule::from_fn(frodo_sam_space(), |p, c| {
            let sam = usize::from(p.0 == [1, 0]);
            if c.0 == [0, sam] {
                one()
            } else {
                zero()
            }
        })
        .unwrap()
    }
}

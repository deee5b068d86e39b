//! Exact tests for separable, entangled and signaling joint stochastic choice.
//!
//! A joint probabilistic choice rule records, for every combination of menus shown
//! to a group of decision makers, the probability of every combination of picks.
//! It is *separable* when it is a mixture of profiles of deterministic choice rules,
//! one per decision maker; it is *signaling* when one decision maker's marginal
//! choices depend on another's menu; it is *entangled* when it passes every
//! restriction built from the individual models yet is not separable.
//!
//! All arithmetic is exact (`num_rational::BigRational`) and every decision comes
//! with a certificate that re-verifies by direct substitution.

pub mod cone;
pub mod corpus;
pub mod error;
pub mod format;
pub mod linalg;
pub mod rational;
pub mod rule;
pub mod scenarios;
pub mod separability;
pub mod space;

pub use error::{Error, Result};
pub use rational::Rational;
pub use rule::JointChoiceRule;
pub use space::{ChoicePath, ChoiceSpace, DeterministicRule, MenuPath, RawDm};

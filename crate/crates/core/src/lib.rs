//! Possible-worlds inference policies.
//!
//! The crate provides a small propositional engine with exhaustive
//! truth-table semantics and several ways of turning the same knowledge
//! into belief values:
//!
//! * [`policy`]: possibility ratios, partition-mixed "reliable" beliefs,
//!   point probabilities, the quadratic expected error and a causal-chain
//!   emulation of Laplace's rule of succession.
//! * [`credal`]: interval and conditional probability constraints with
//!   exact linear-fractional bounds.
//! * [`defaults`]: extensions of normal default theories and an audit of each
//!   rule's probabilistic justification.
//! * [`sim`]: seeded Monte Carlo checks of calibration and Brier score.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix the two
//! instantiations used in practice.

pub mod credal;
pub mod defaults;
pub mod logic;
pub mod num;
pub mod policy;
pub mod sim;

pub use num::{Interval, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type Interval64 = Interval<f64>;
pub type ExactInterval = Interval<Rational>;
pub type Partition64 = policy::Partition<f64>;
pub type ExactPartition = policy::Partition<Rational>;
pub type Constraint64 = credal::CredalConstraint<f64>;
pub type ExactConstraint = credal::CredalConstraint<Rational>;

//! Exact solver for cheap-talk games in which a biased sender pitches
//! narratives (claims about which observations of a public record are
//! informative) to a receiver who is uncertain how to read the data but
//! fully aware of the sender's incentives.
//!
//! The receiver resolves the remaining model uncertainty with a pluggable
//! ambiguity rule (maximum-likelihood, max-min, Bayesian averaging, or the
//! smooth model). Equilibria are interval partitions of the ordered bliss
//! points; the crate enumerates and verifies them exactly with rational
//! arithmetic, computes the bias thresholds separating full, partial and no
//! information transmission, and contrasts equilibrium play with a naive
//! receiver who adopts any narrative that fits at least as well as the truth.
//!
//! Entry points:
//!
//! - [`ModelSpace::build`]: bliss classes of the beta-binomial setting
//! - [`rules::best_response`]: the four ambiguity rules
//! - [`engine::enumerate_equilibria`] / [`engine::reduce_step`]
//! - [`bounds::lower_bound`] / [`bounds::upper_bound`]
//! - [`naive::persuasion_sets`]: rational vs. naive receiver comparison
//! - [`oracle`]: slow brute-force re-implementations used for cross-checks

pub mod bounds;
pub mod engine;
pub mod error;
pub mod history;
pub mod model;
pub mod naive;
pub mod oracle;
pub mod partition;
pub mod posterior;
pub mod rational;
pub mod report;
pub mod rules;
pub mod scenario;
pub mod space;
pub mod tiebreak;

pub use error::{Error, Result};
pub use history::History;
pub use model::Model;
pub use posterior::{expected_sender_utility, likelihood, posterior_summary, PosteriorSummary};
pub use rational::{format_rat, parse_rat, rat, Rat};
pub use scenario::Scenario;
pub use space::{ds_update, BlissClass, ClassRange, ModelSpace};
pub use tiebreak::TiebreakPolicy;

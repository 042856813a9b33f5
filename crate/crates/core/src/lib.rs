//! Wake-benefit model and equilibrium nonexistence analysis for echelon
//! formations of fixed-wing flyers.
//!
//! - [`benefit`]: benefit abstraction, formation state, per-agent and group
//!   objectives with their longitudinal gradients.
//! - [`wake`]: horseshoe-vortex upwash and its span-averaged benefit.
//! - [`conditions`]: interval conditions that rule out selfish or
//!   cooperative equilibria with all neighbor gaps inside `P`.
//! - [`search`]: numerical equilibrium searches and brute-force residual scans.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benefit;
pub mod conditions;
pub mod error;
pub mod numeric;
pub mod search;
pub mod wake;

pub use benefit::{
    ce_gradient, ne_stationarity_residual, per_agent_benefit, total_benefit, BenefitFunction, ConstantBenefit,
    FormationState, LateralProfile, LongitudinalProfile, SeparableBenefit, NEIGHBOR_HOPS,
};
pub use conditions::{CheckSettings, ConditionKind, ConditionReport, IntervalSet, IntervalSpec, Verdict};
pub use error::{Error, Result};
pub use search::{SearchKind, SearchResult, SearchSettings, UpdateMode};
pub use wake::WakeParams;

//! Numerical engine for valuing risky options by anticipated surprise.
//!
//! An option is judged by the surprise its resolution is expected to generate:
//! each outcome's deviation from the option's own expected value is passed
//! through a convex magnitude function, with downside deviations amplified by
//! a constant factor k >= 1, and the results are probability-weighted. On
//! multi-step trees the reference point cascades: every transition is gauged
//! against the expectation held just before it, so how a problem is framed
//! into stages changes its value even when the terminal payoffs are identical.
//!
//! The crate is generic over the float type; `f64` aliases are provided at the
//! root and are the supported precision for all documented tolerances.

pub mod analysis;
pub mod error;
pub mod io;
pub mod lottery;
pub mod num;
pub mod oracle;
pub mod scenario;
pub mod surprise;
pub mod tree;
pub mod verify;

pub use error::Error;
pub use lottery::{surprise_flat, Lottery};
pub use num::Real;
pub use surprise::{Domain, SurpriseFamily, SurpriseSpec, SurpriseTable};
pub use tree::{
    annotate, enumerate_trajectories, surprise_tree, with_status_quo, AnnotatedTree, DecisionTree,
    Trajectory,
};

/// Double-precision instantiations used by the CLI and the acceptance suite.
pub type Spec64 = SurpriseSpec<f64>;
pub type Lottery64 = Lottery<f64>;
pub type Tree64 = DecisionTree<f64>;
pub type Scenario64 = scenario::Scenario<f64>;
pub type Preference64 = analysis::Preference<f64>;

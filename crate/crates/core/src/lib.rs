//! Linear preferential attachment trees, their looptrees, martingale
//! observables for seed recovery, and desk-scale checks of their scaling
//! limits.

pub mod error;
pub mod rng;
pub mod growth;
pub mod tree_core;
pub mod looptree;
pub mod gh_metric;
pub mod observables;
pub mod continuum;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};

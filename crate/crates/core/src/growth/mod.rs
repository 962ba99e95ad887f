//! Random growth: plane attachment chains, Rémy and Ford splitting, the
//! coupling between them, urn-based seed decomposition, and exact laws for
//! small sizes.

mod binary;
mod coupled;
mod decomposition;
mod exact;
mod lpam;
mod polya;

pub use binary::{grow_ford, grow_remy, BinaryTrajectory, FordGrower, LabeledBinaryTree};
pub use coupled::{grow_coupled, CoupledGrower, CoupledRun};
pub use decomposition::{assemble, decompose_growth, grow_via_seed_decomposition, SeedDecomposition};
pub use exact::{
    exact_step_distribution, exact_step_states, expand_paths, ford_paths, ford_split_law, merge_law,
    plane_lpam_paths, remy_paths, ExactDistribution, EXACT_STEP_GUARD,
};
pub use lpam::{corner_law, grow_free_tree, grow_lpam, grow_lpam_tree, grow_lpam_with, GrowthTrajectory, LpamGrower};
pub use polya::{polya_sample, UrnState};

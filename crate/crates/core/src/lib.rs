//! The three-state Potts model with nearest-neighbor, one-level second-neighbor,
//! triple and external-field interactions on the Cayley tree of order two.
//!
//! The crate covers exact finite-volume partition functions, the recursion
//! they obey, the fixed points of the induced two-variable ratio map together
//! with their stability, and parameter scans that locate regions with several
//! translation-invariant Gibbs measures.

pub mod error;
pub mod fixed_points;
pub mod fixture;
pub mod logspace;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod poly;
pub mod recursion;
pub mod tree;

pub use error::{Error, Result};
pub use fixed_points::{all_fixed_points, stability_of, Branch, FixedPoint, Stability};
pub use fixture::Fixture;
pub use model::{thetas_from, BoundarySpec, ModelParams, SpinConfiguration, ThetaParams};
pub use oracle::{exact_partition_vector, root_marginal, PartitionVector};
pub use phase::{classify, critical_beta_bracket, find_regime, scan, Classification, PhasePoint};
pub use recursion::{
    base_partition, boundary_seeded_limit, iterate, ratio_step, recurse, step_partition,
    subtracted_difference, IterateOptions, IterationResult, RatioPoint,
};
pub use tree::{delta2, delta3, CayleyTree, InteractionLists, Spin, TripleDeltaVariant};

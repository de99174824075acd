//! The witness for strictly convex targets: `M = (⋃ M_n) ∪ {0}` where
//! `M_n` lives in a simplex far from the origin whose vertices sit on the
//! coordinate rays, and holds a net of a unit ball plus the chain points
//! that pin every net point to the span of the ray points under any
//! isometry fixing 0.

mod level;
mod rigidity;
mod space;

pub use level::{
    build_level, certify_level, Chain, ChainLink, LevelCertificate, LevelParams, PointRole,
    SimplexScaffold,
};
pub use rigidity::{
    perturb_chain_point, random_orthogonal, rigidity_constraints, verify_embedding_rigidity,
    Constraint, ConstraintKind, LevelImage, PointRef, RigidityOutcome,
};
pub use space::{build_space, WitnessPoint, WitnessSpace};

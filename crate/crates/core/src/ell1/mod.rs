//! The `L_1(−∞, ∞)` witness: dyadic step functions `d_σ`, the members
//! `f_σ = d_σ + ℓ(σ)·𝟙_{(Ψ(σ), Ψ(σ)+1]}`, exact `L_1` distances, the
//! interval picture of `ℓ_1` vectors and the disjoint-split obstruction.
//!
//! All arithmetic here is exact; identities hold with equality.

mod dyadic;
mod interval;
mod member;
mod split;
mod step;

pub use dyadic::{interval_of_string, psi, DyadicInterval, DyadicString};
pub use interval::{derive_x_sigma, overlap_length, render_common, IntervalVector};
pub use member::{
    build_l1_space, l1_distance, verify_decomposition_identities, DecompositionReport,
    L1Family, L1Member, L1Space, LevelCheck,
};
pub use split::{
    disjoint_split_check, Obstruction, SplitOptions, SplitVerdict, SPLIT_SUPPORT_GUARD,
};
pub use step::StepFunction;

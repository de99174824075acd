//! δ-nets in shifted Euclidean balls, simplex facets and Chebyshev
//! centers, ball containment, and the chain points that tie a net point
//! to the vertices of its simplex.

mod greedy;
mod schedule;
mod simplex;

pub use greedy::{greedy_net, CoveringCertificate, EuclideanPointSet, Net};
pub use schedule::NetSchedule;
pub use simplex::{
    chain_points, chebyshev_center, simplex_contains_ball, ChainStep, Containment, Facet, Simplex,
    BARYCENTRIC_TOL,
};

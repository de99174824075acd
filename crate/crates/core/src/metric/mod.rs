//! Finite metric spaces, distortion of maps, linear tuples and
//! local-finiteness certificates.

mod ball;
mod distortion;
mod space;
mod tuples;

pub use ball::{ball_count, BallCount, LevelledFamily};
pub use distortion::{distortion_of_map, DistortionReport};
pub use space::{validate_space, Arith, Distances, FiniteMetricSpace, Violation};
pub use tuples::{find_linear_tuples, is_linear_tuple, LinearTuple, TRIPLE_SEARCH_MAX_POINTS};

/// Relative tolerance for floating-point metric comparisons.
pub const REL_TOL: f64 = 1e-9;

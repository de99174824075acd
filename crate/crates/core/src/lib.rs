//! Exact constructions of two locally finite metric spaces whose finite
//! pieces embed isometrically into `ℓ_p` while the whole space does not,
//! together with general tooling for embedding finite metric spaces into
//! `ℓ_p^d`.
//!
//! * [`ell1`] builds the `L_1` witness from dyadic step functions, with exact
//!   rational distances and the disjoint-split obstruction.
//! * [`strict_convex`] builds the simplex/net witness for strictly convex
//!   targets and checks its rigidity constraints.
//! * [`metric`] holds finite metric spaces, distortion, linear tuples and
//!   local-finiteness certificates.
//! * [`net`] builds δ-nets, Chebyshev centers and chain points.
//! * [`ell2`] decides isometric embeddability into `ℓ_2`.
//! * [`solver`] minimizes distortion into `ℓ_p^d`.
//! * [`cli`] drives generation, solving and verification from the command line.

pub mod cli;
pub mod ell1;
pub mod ell2;
pub mod error;
pub mod exact;
pub mod limits;
pub mod metric;
pub mod net;
pub mod seed;
pub mod solver;
pub mod strict_convex;
pub mod vecops;

pub use error::{Error, Result};
pub use metric::{DistortionReport, FiniteMetricSpace};

//! Isometric embeddability into `ℓ_2` via the Schoenberg criterion,
//! coordinate recovery, and a collinearity test.

mod jacobi;
mod schoenberg;

pub use jacobi::{symmetric_eigen, SymmetricEigen};
pub use schoenberg::{
    check_collinear, embeds_isometrically_l2, schoenberg_matrix, L2Verdict, SchoenbergMatrix,
    PSD_REL_TOL,
};

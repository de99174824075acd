//! Minimizing the distortion of a finite metric space into `ℓ_p^d`: a
//! smoothed local search with restarts for upper bounds, and a branch and
//! bound oracle that brackets the optimum on tiny instances.

mod objective;
mod optimize;
mod oracle;

pub use oracle::ORACLE_MAX_DIM;
pub use objective::{evaluate_distortion, smoothed_objective, SmoothedObjective};
pub use optimize::{embed_min_distortion, EmbeddingResult, SolveConfig};
pub use oracle::{brute_force_oracle, OracleBracket, OracleConfig, ORACLE_MAX_POINTS};

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong shape, bad index, negative entry and so on.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("not an embedding: source points {0} and {1} map to coincident targets")]
    NotAnEmbedding(usize, usize),

    #[error("local finiteness not certifiable: {0}")]
    NotCertifiable(String),

    #[error("net too large: cap {cap}, estimated {estimate} points")]
    NetTooLarge { cap: usize, estimate: usize },

    #[error("cardinality cap {cap} exceeded: {what} needs {required}")]
    CapExceeded {
        cap: usize,
        required: usize,
        what: String,
    },

    #[error("no interior: simplex is degenerate in its affine span")]
    NoInterior,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("point lies outside the simplex (barycentric weight {weight:e} at vertex {vertex})")]
    OutsideSimplex { vertex: usize, weight: f64 },

    #[error("level {level} failed certificate: {certificate}")]
    Construction { level: usize, certificate: String },

    #[error("partial build: completed through level {completed}: {reason}")]
    PartialBuild { completed: usize, reason: String },

    #[error("not an isometry: pair ({0}, {1}) off by {2:e}")]
    NotIsometry(usize, usize, f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("exceeds search guard: {0}")]
    SearchGuard(String),

    #[error("search cancelled at deadline")]
    Cancelled,

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

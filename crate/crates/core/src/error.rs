use thiserror::Error;

/// Errors raised by graph construction, game evaluation and the Gibbs machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// No `k`-regular graph on `n` vertices exists.
    #[error("no {k}-regular graph on {n} vertices: {reason}")]
    InfeasibleDegree {
        n: usize,
        k: usize,
        reason: &'static str,
    },

    #[error("cannot augment degree {k} on {n} vertices: result would exceed n-1")]
    DegreeSaturated { n: usize, k: usize },

    #[error("no edge-disjoint {0} found in the graph complement")]
    AugmentationNotFound(&'static str),

    #[error(
        "eigensolver did not converge after {rotations} rotations (off-diagonal norm {off_norm:e})"
    )]
    ConvergenceFailure { rotations: usize, off_norm: f64 },

    #[error("profile has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("exhaustive enumeration needs n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("theta = {theta} sits on the threshold N/(2K) = {threshold}; the optimal profile is not unique")]
    DegenerateTheta { theta: f64, threshold: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

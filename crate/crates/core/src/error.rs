use thiserror::Error;

/// Errors produced by the graph, packing, electrical and walk routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {0}-{1} is a loop or repeats an earlier edge")]
    MultiEdgeOrLoop(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not planar: {0}")]
    NonPlanar(String),
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("size parameter {got} is below the minimum {min} for this family")]
    SizeTooSmall { got: usize, min: usize },
    #[error("triangulation needs at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("({0}, {1}, {2}) is not a face of the triangulation")]
    NotAFace(usize, usize, usize),
    #[error("input is not a triangulation: {0}")]
    NotATriangulation(String),
    #[error("circle packing did not converge after {iterations} sweeps (angle error {error:e})")]
    NoConvergence { iterations: usize, error: f64 },
    #[error("linear solve failed: relative residual {residual:e} above tolerance {tol:e}")]
    SolveFailure { residual: f64, tol: f64 },
    #[error("resistance between a vertex and itself is undefined")]
    SameVertex,
    #[error("test function has zero Dirichlet energy")]
    ZeroEnergy,
    #[error("disk centers of {0} and {1} coincide")]
    CoincidentCenters(usize, usize),
    #[error("vertex subset needs at least {min} members, got {got}")]
    SubsetTooSmall { got: usize, min: usize },
    #[error("vertex set W is empty")]
    EmptyW,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("exact cover-time recursion is limited to {max} vertices, got {got}")]
    TooLargeForExact { got: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

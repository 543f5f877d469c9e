use thiserror::Error;

use crate::fixedpoint::FitStatus;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Node values carried in errors are 1-based labels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid edge space: {0}")]
    InvalidSpace(String),

    #[error("edge of size {size} is outside the edge space (allowed sizes {allowed:?})")]
    EdgeSizeOutsideSpace { size: usize, allowed: Vec<usize> },

    #[error("edge {edge:?} is not in the edge space")]
    EdgeOutsideSpace { edge: Vec<usize> },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate edge {edge:?}")]
    DuplicateEdge { line: usize, edge: Vec<usize> },

    #[error("line {line}: node {label} outside 1..={n}")]
    NodeOutOfRange { line: usize, label: usize, n: usize },

    #[error("line {line}: an edge needs at least two distinct nodes")]
    EdgeTooSmall { line: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid degree sequence: {0}")]
    InvalidDegrees(String),

    #[error("degree of node {label}{} must be positive, got {value}", size.map(|k| format!(" (size {k})")).unwrap_or_default())]
    NonpositiveDegree {
        label: usize,
        size: Option<usize>,
        value: f64,
    },

    #[error("empty sample set")]
    EmptySampleSet,

    #[error("density must lie in [0, 1], got {0}")]
    InvalidDensity(f64),

    #[error("node {label} has zero margin but positive target degree {target}")]
    ZeroMarginWithPositiveTarget { label: usize, target: f64 },

    #[error("probability {p} of edge {edge:?} is on the boundary of (0, 1)")]
    ProbabilityOnBoundary { edge: Vec<usize>, p: f64 },

    #[error("degenerate design: edge size {k} on {n} nodes does not identify node parameters")]
    DegenerateDesign { n: usize, k: usize },

    #[error("size-{size} layer: {source}")]
    Layer { size: usize, source: Box<Error> },

    #[error("{model} model fit failed with status {status}")]
    FitFailed { model: String, status: FitStatus },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid option: {0}")]
    InvalidOption(String),
}

impl Error {
    pub(crate) fn in_layer(self, size: usize) -> Self {
        Error::Layer {
            size,
            source: Box::new(self),
        }
    }
}

use crate::complex::Face;
use crate::vertex::VertexId;

/// Library-wide error type. Every variant carries the offending data so
/// callers (and the CLI) can report structured failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex set of size {count} exceeds the configured cap of {cap}")]
    VertexCapExceeded { count: usize, cap: usize },

    #[error("boundary of void: the boundary complex needs at least one vertex")]
    BoundaryOfVoid,

    #[error("operation `{op}` is undefined on the void complex")]
    VoidInput { op: &'static str },

    #[error("vertex sets are not disjoint: both sides contain {vertex}")]
    OverlappingVertices { vertex: VertexId },

    #[error("vertex {vertex} does not belong to the ambient vertex set")]
    UnknownVertex { vertex: VertexId },

    #[error("face {face:?} uses vertices outside the declared vertex set")]
    FaceOutsideVertexSet { face: Vec<String> },

    #[error("expected {expected} inner complexes/pairs for a complex on {expected} vertices, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid fold: {reason}")]
    InvalidFold { reason: String },

    #[error("invalid simplicial pair: {reason}")]
    InvalidPair { reason: String },

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("identity complex requires k >= 3, got k = {k}")]
    PartitionTooSmall { k: usize },

    #[error("invalid permutation: {reason}")]
    InvalidPermutation { reason: String },

    #[error("invalid expression: {reason}")]
    InvalidExpression { reason: String },

    #[error("multilinearity requires suspension: slot `{name}` has domain_is_suspension = false")]
    SuspensionRequired { name: String },

    #[error("spherical operation on non-spherical leaf `{name}`")]
    NonSphericalLeaf { name: String },

    #[error("eta matrix requires k >= 3, got k = {k}")]
    EtaTooSmall { k: usize },

    #[error("exhaustive enumeration is capped at {cap} vertices, got {n}")]
    EnumerationTooLarge { n: usize, cap: usize },

    #[error("unknown verification suite `{name}`")]
    UnknownSuite { name: String },

    #[error("ambient complex does not contain {what}: missing face {face:?}")]
    ContainmentFailure { what: String, face: Vec<String> },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code for each failure class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::VertexCapExceeded { .. } => "vertex-cap",
            Error::BoundaryOfVoid => "boundary-of-void",
            Error::VoidInput { .. } => "void-input",
            Error::OverlappingVertices { .. } => "overlapping-vertices",
            Error::UnknownVertex { .. } => "unknown-vertex",
            Error::FaceOutsideVertexSet { .. } => "face-outside-vertex-set",
            Error::ArityMismatch { .. } => "arity-mismatch",
            Error::InvalidFold { .. } => "invalid-fold",
            Error::InvalidPair { .. } => "invalid-pair",
            Error::InvalidPartition { .. } => "invalid-partition",
            Error::PartitionTooSmall { .. } => "partition-too-small",
            Error::InvalidPermutation { .. } => "invalid-permutation",
            Error::InvalidExpression { .. } => "invalid-expression",
            Error::SuspensionRequired { .. } => "suspension-required",
            Error::NonSphericalLeaf { .. } => "non-spherical-leaf",
            Error::EtaTooSmall { .. } => "eta-too-small",
            Error::EnumerationTooLarge { .. } => "enumeration-too-large",
            Error::UnknownSuite { .. } => "unknown-suite",
            Error::ContainmentFailure { .. } => "containment-failure",
            Error::Parse(_) => "parse-error",
        }
    }

    pub(crate) fn containment(what: impl Into<String>, face: &Face) -> Self {
        Error::ContainmentFailure {
            what: what.into(),
            face: face.iter().map(|v| v.to_string()).collect(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised anywhere in the motion-graph pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid skeleton: {0}")]
    Skeleton(String),

    #[error("pose has {got} rotations but skeleton has {expected} joints")]
    PoseSize { expected: usize, got: usize },

    #[error("track too short: need at least {needed} frames, got {got}")]
    TrackTooShort { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("unsupported format version {found} (expected {expected})")]
    Version { expected: u32, found: u32 },

    #[error("edge {edge} references node {node} but graph has {count} nodes")]
    EdgeBounds { edge: usize, node: usize, count: usize },

    #[error("search frontier emptied at query frame {tau}")]
    FrontierExhausted { tau: usize },

    #[error("non-finite value during sampling at step {step}")]
    NonFinite { step: usize },

    #[error("dimension mismatch in {stream}: {detail}")]
    Dimension { stream: String, detail: String },

    #[error("path does not match graph: {0}")]
    PathMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable short name of the variant, for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Skeleton(_) => "skeleton",
            Error::PoseSize { .. } => "pose_size",
            Error::TrackTooShort { .. } => "track_too_short",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Malformed(_) => "malformed",
            Error::Version { .. } => "version",
            Error::EdgeBounds { .. } => "edge_bounds",
            Error::FrontierExhausted { .. } => "frontier_exhausted",
            Error::NonFinite { .. } => "non_finite",
            Error::Dimension { .. } => "dimension",
            Error::PathMismatch(_) => "path_mismatch",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Errors shared across the geometry, solver, and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Endpoints too close to define a line direction.
    #[error("degenerate endpoints: {0}")]
    DegenerateEndpoints(&'static str),

    /// Plucker normal is zero: the line passes through the camera origin and
    /// cannot be projected.
    #[error("line passes through the camera origin (zero Plucker normal)")]
    ZeroNormal,

    /// Projected line is at projective infinity, (l1, l2) = (0, 0).
    #[error("projected line at infinity for correspondence {0}")]
    ProjectionDegenerate(String),

    /// A transformed endpoint has nonpositive depth.
    #[error("endpoint behind camera (depth {depth})")]
    BehindCamera { depth: f64 },

    #[error("at least {required} line pairs required, got {actual}")]
    InsufficientLines { required: usize, actual: usize },

    #[error("invalid intrinsics: focal lengths must be positive (fu={fu}, fv={fv})")]
    InvalidIntrinsics { fu: f64, fv: f64 },

    /// Rotation fails the orthonormality check beyond the repairable limit.
    #[error("invalid rotation matrix: orthonormality defect {defect} exceeds {limit}")]
    InvalidRotation { defect: f64, limit: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptyPointSet,

    #[error("segment has zero length")]
    DegenerateSegment,

    #[error("lines are parallel or nearly parallel (|sin angle| = {sin_angle:e})")]
    NearParallelLines { sin_angle: f64 },

    #[error("line coefficients ({alpha}, {beta}) do not define a direction")]
    DegenerateLine { alpha: f64, beta: f64 },

    #[error("non-finite coordinate ({x}, {y})")]
    NonFinitePoint { x: f64, y: f64 },

    #[error("distance {distance} m is not positive")]
    NonPositiveDistance { distance: f64 },

    #[error("distance {distance} m is below the {minimum} m propagation floor")]
    BelowMinimumDistance { distance: f64, minimum: f64 },

    #[error("no boundary nodes observed")]
    NoBoundaryNodes,

    #[error("need at least 3 distinct boundary positions, got {distinct}")]
    InsufficientBoundaryNodes { distinct: usize },

    #[error("no chord differs from the longest chord by at least {min_angle_deg} degrees")]
    NoTransverseChord { min_angle_deg: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    /// True for the typed GJL failures that the harness answers with a CJ fallback.
    pub fn is_gjl_fallback(&self) -> bool {
        matches!(
            self,
            Error::InsufficientBoundaryNodes { .. }
                | Error::NoTransverseChord { .. }
                | Error::NearParallelLines { .. }
        )
    }
}

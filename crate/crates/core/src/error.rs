use thiserror::Error;

/// Errors raised by the geometry kernel, the curve pipeline and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a function (poles, antipodes, coincident points).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input violating a stated precondition beyond tolerance.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point is not on the model surface: {0}")]
    NotOnSheet(String),

    #[error("curve has zero speed (min speed {min_speed:e})")]
    ZeroSpeed { min_speed: f64 },

    #[error("curve is not strongly convex (margin {margin:e})")]
    NotStronglyConvex { margin: f64 },

    #[error("curve is not positively oriented")]
    NotPositivelyOriented,

    #[error("parameter {t} is a singular point of the evolute")]
    SingularPoint { t: f64 },

    #[error("unsupported curve: {0}")]
    UnsupportedCurve(String),

    /// Sampling too coarse for a topological quantity to be trusted.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Base point for polar coordinates is outside the admissible region.
    #[error("base point error: {0}")]
    BasePoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed input files rather than geometry.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            return Error::Io(e.into());
        }
        Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

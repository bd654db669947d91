use std::path::PathBuf;

/// Errors raised by the geometry, flow and monitoring layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("degenerate edge {edge}: length {length:e} below {threshold:e}")]
    MeshDegenerate {
        edge: usize,
        length: f64,
        threshold: f64,
    },

    #[error("surface is not mean convex: H = {value:e} at vertex {vertex}")]
    NotMeanConvex { vertex: usize, value: f64 },

    #[error("surface self-intersects (segments {first} and {second})")]
    SelfIntersection { first: usize, second: usize },

    #[error("target spacing {spacing} exceeds diameter/8 = {limit}")]
    ResampleTooCoarse { spacing: f64, limit: f64 },

    #[error("azimuthal resolution {got} is below the minimum of {min}")]
    ResolutionTooLow { got: usize, min: usize },

    #[error("time step {dt:e} exceeds the stability limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("maximum number of steps ({0}) exceeded")]
    MaxStepsExceeded(usize),

    #[error("time {t} is past the extinction time {extinction}")]
    ExtinctionPassed { t: f64, extinction: f64 },

    #[error("trace contains no samples")]
    NoSamples,

    #[error("time window of {got} samples is too short (need at least {min})")]
    WindowTooShort { got: usize, min: usize },

    #[error("test function is positive at vertex {vertex} outside the interior-contact set")]
    SupportViolation { vertex: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no analytic oracle for scenario kind `{0}`")]
    NoAnalyticOracle(String),

    #[error("field has {got} values but the surface has {expected} vertices")]
    FieldLength { got: usize, expected: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

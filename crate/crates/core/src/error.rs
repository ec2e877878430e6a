use thiserror::Error;

/// Errors surfaced by generators, solvers and the metric routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("could not draw a connected instance after {attempts} attempts")]
    ResampleExhausted { attempts: u32 },

    #[error("no non-edge available to rewire into")]
    NoNonEdge,

    #[error("graph has {n} nodes, above the enumeration limit of {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("graph has no coordinates; supply an explicit node order")]
    RequiresCoordinates,

    #[error("variant budget exceeded: {variants_peak} variants (limit {limit})")]
    Budget { variants_peak: usize, limit: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("density undefined for graphs with fewer than two nodes")]
    UndefinedDensity,

    #[error("hardness undefined: mis_size and d_mis must be positive")]
    UndefinedHardness,

    #[error("censored estimate: no successes observed")]
    Censored,

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

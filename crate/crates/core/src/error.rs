use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series have no common period")]
    NoCommonPeriod,
    #[error("duplicate series name `{0}`")]
    DuplicateName(String),
    #[error("unknown series `{0}`")]
    UnknownSeries(String),
    #[error("series `{0}` has zero variance")]
    ZeroVariance(String),
    #[error("too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("invalid transform state: {0}")]
    InvalidState(String),
    #[error("design matrix is rank deficient (column {column})")]
    SingularDesign { column: usize },
    #[error("underdetermined fit: {rows} rows for {cols} columns")]
    Underdetermined { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("output series contains a non-positive value at year {year}")]
    NonPositiveOutput { year: i32 },
    #[error("log fit requires positive values; found {value} at year {year}")]
    NonPositiveInput { year: i32, value: f64 },
    #[error("classification labels must contain both -1 and +1")]
    DegenerateLabels,
    #[error("labels must be -1 or +1, found {0}")]
    BadLabel(f64),
    #[error("SMO did not converge after {iterations} pair updates (gap {gap:e})")]
    NoConvergence { iterations: usize, gap: f64 },
    #[error("train fraction {0} outside (0, 1)")]
    BadFraction(f64),
    #[error("{folds} folds requested for {rows} rows")]
    TooFewRows { folds: usize, rows: usize },
    #[error("C grid is empty")]
    EmptyGrid,
    #[error("C must be positive, got {0}")]
    BadC(f64),
    #[error("bad horizon {0}")]
    BadHorizon(i64),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("parse error at row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },
    #[error("years are not consecutive: {previous} followed by {next}")]
    Frequency { previous: i32, next: i32 },
    #[error("config error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short stable identifier used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NoCommonPeriod => "NoCommonPeriod",
            Error::DuplicateName(_) => "DuplicateName",
            Error::UnknownSeries(_) => "UnknownSeries",
            Error::ZeroVariance(_) => "ZeroVariance",
            Error::TooShort { .. } => "TooShort",
            Error::InvalidValue(_) => "InvalidValue",
            Error::InvalidState(_) => "InvalidState",
            Error::SingularDesign { .. } => "SingularDesign",
            Error::Underdetermined { .. } => "Underdetermined",
            Error::ShapeError(_) => "ShapeError",
            Error::NonPositiveOutput { .. } => "NonPositiveOutput",
            Error::NonPositiveInput { .. } => "NonPositiveInput",
            Error::DegenerateLabels => "DegenerateLabels",
            Error::BadLabel(_) => "BadLabel",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::BadFraction(_) => "BadFraction",
            Error::TooFewRows { .. } => "TooFewRows",
            Error::EmptyGrid => "EmptyGrid",
            Error::BadC(_) => "BadC",
            Error::BadHorizon(_) => "BadHorizon",
            Error::Schema(_) => "SchemaError",
            Error::Parse { .. } => "ParseError",
            Error::Frequency { .. } => "FrequencyError",
            Error::Config(_) => "ConfigError",
            Error::Usage(_) => "UsageError",
            Error::Io(_) => "IoError",
        }
    }

    /// Process exit code: 2 usage/config, 3 data, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. } | Error::SingularDesign { .. } => 4,
            Error::BadFraction(_)
            | Error::TooFewRows { .. }
            | Error::EmptyGrid
            | Error::BadC(_)
            | Error::BadHorizon(_)
            | Error::Config(_)
            | Error::Usage(_) => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

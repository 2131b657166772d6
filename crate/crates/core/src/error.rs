use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("validation error at row {row}: {msg}")]
    Validation { row: usize, msg: String },

    /// A tenseness indicator could not be computed (missing landmark values).
    #[error("indicator error: {0}")]
    Indicator(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("extrapolation error: t = {t} outside fit window [0, {span}] ds")]
    Extrapolation { t: f64, span: f64 },

    #[error("extraction error: {0}")]
    Extraction(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("simulation error at t = {t} ds: {msg}")]
    Simulation { t: f64, msg: String },

    #[error("synthesis error at t = {t_ms} ms: {msg}")]
    Synthesis { t_ms: f64, msg: String },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

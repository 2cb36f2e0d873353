use thiserror::Error;

/// Errors produced while building rules, evaluating bounds or running sweeps.
///
/// Every `Display` message starts with the variant name so the command line
/// front end can echo it verbatim as a one-line diagnostic.
#[derive(Debug, Error)]
pub enum Error {
    #[error("PanelLimitExceeded panels={panels} log_error={log_error:.6} target={log_target:.6}")]
    PanelLimitExceeded {
        panels: usize,
        log_error: f64,
        log_target: f64,
    },

    #[error("InvalidInterval a={a} b={b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("NonexistentWeight gamma={gamma} > pi/(2d)={limit:.4}")]
    NonexistentWeight { gamma: f64, limit: f64 },

    #[error("InvalidParameter {name}={value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("BracketViolation root {index} in [{lo}, {hi}]: {reason}")]
    BracketViolation {
        index: usize,
        lo: f64,
        hi: f64,
        reason: &'static str,
    },

    #[error("Overflow {what} at index {index}")]
    Overflow { what: &'static str, index: usize },

    #[error("PreconditionNotMet {0}")]
    PreconditionNotMet(String),

    #[error("InsufficientData need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("DegenerateAbscissa model abscissa has zero variance")]
    DegenerateAbscissa,

    #[error("ParseError {0}")]
    Parse(String),

    #[error("IoError {0}")]
    Io(#[from] std::io::Error),

    #[error("CsvError {0}")]
    Csv(#[from] csv::Error),

    #[error("JsonError {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

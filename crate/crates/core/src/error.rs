use thiserror::Error;

/// Every failure the toolkit can report.
///
/// The variants are grouped so that a driver can map them onto process exit
/// codes: configuration problems, numerical aborts and audit-level
/// structural violations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("density value {value} at cell {cell} lies outside the velocity range [-{bound}, {bound}]")]
    VelocityRange { value: f64, bound: f64, cell: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("CFL condition violated: number {cfl:.4} exceeds 1")]
    Cfl { cfl: f64 },

    #[error("invalid test function: {0}")]
    InvalidTest(String),

    #[error("structural violation: {0}")]
    Structural(String),

    #[error("numerical abort at step {step} (t = {time}): {detail}")]
    NumericalAbort { step: usize, time: f64, detail: String },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

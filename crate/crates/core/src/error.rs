use thiserror::Error;

/// Errors raised by the spiral laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point budget exceeded: {needed} points needed, budget is {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(
        "mass bound diverges along the ladder (log-ratio slope {slope:.4}); \
         worst window centre ({cx:.6e}, {cy:.6e}) diameter {diameter:.6e} at delta {delta:.6e}"
    )]
    MassViolation {
        slope: f64,
        delta: f64,
        cx: f64,
        cy: f64,
        diameter: f64,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error record.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid-params",
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Budget { .. } => "budget",
            Error::Convergence(_) => "convergence",
            Error::Numerical(_) => "numerical",
            Error::MassViolation { .. } => "mass-violation",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input (shape, finiteness, file contents).
    #[error("input error: {0}")]
    Input(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An iterative or direct numerical kernel failed.
    #[error("numeric error: {message}")]
    Numeric { message: String, residual: Option<f64> },

    /// The spectrum could not be classified consistently under the active tolerances.
    #[error("classification error: {0}")]
    Classification(String),

    /// A value expected to be real carries an imaginary residue above `tol_imag`.
    #[error("conjugate-pairing error: imaginary residue {residue:e} exceeds {tolerance:e}")]
    ConjugatePairing { residue: f64, tolerance: f64 },

    /// Two anchors that must agree for a genuine solution disagree.
    #[error("inconsistency: {message} (discrepancy {discrepancy:e})")]
    Inconsistency { message: String, discrepancy: f64 },

    /// The sequence does not satisfy x_t = Φ x_{t-1} + ε_t.
    #[error("recursion violated at t = {t}: residual {residual:e} exceeds {tolerance:e}")]
    Recursion { t: i64, residual: f64, tolerance: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn numeric(message: impl Into<String>) -> Self {
        Error::Numeric {
            message: message.into(),
            residual: None,
        }
    }

    /// Short machine-readable tag for structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Precondition(_) => "precondition",
            Error::Numeric { .. } => "numeric",
            Error::Classification(_) => "classification",
            Error::ConjugatePairing { .. } => "conjugate_pairing",
            Error::Inconsistency { .. } => "inconsistency",
            Error::Recursion { .. } => "recursion",
            Error::Io(_) => "io",
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Precondition(_) | Error::Io(_) => 2,
            Error::Numeric { .. }
            | Error::Classification(_)
            | Error::ConjugatePairing { .. }
            | Error::Inconsistency { .. } => 3,
            Error::Recursion { .. } => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

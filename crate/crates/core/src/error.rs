use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("index {index} out of range for {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("operator on {n} qubits exceeds the limit of {limit} for this representation")]
    SizeGuard { n: usize, limit: usize },

    #[error("matrix element ({row}, {col}) has imaginary part {value:e}; generators must have odd y-count and the Hamiltonian must be real")]
    ImaginaryElement { row: usize, col: usize, value: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("Brillouin-Wigner iterations diverged at step {step} (|dE| = {delta:e})")]
    Divergence { step: usize, delta: f64 },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

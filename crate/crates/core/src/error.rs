use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "eigenbasis condition estimate {estimate:.3e} exceeds cap {cap:.3e}; \
         the matrix is (nearly) defective"
    )]
    DefectiveMatrix { estimate: f64, cap: f64 },

    #[error("eigenvalue iteration failed to converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("{upper} upper-half-plane eigenvalues but {lower} lower-half-plane eigenvalues")]
    UnpairedEigenvalues { upper: usize, lower: usize },

    #[error("signal has zero norm")]
    ZeroSignal,

    #[error("spectral radius {radius:.3e} is too small to normalize")]
    NilpotentMatrix { radius: f64 },

    #[error("imaginary residue {residue:.3e} exceeds bound {bound:.3e}")]
    NonRealResult { residue: f64, bound: f64 },

    #[error("design matrix condition {condition:.3e} exceeds cap {cap:.3e}")]
    IllConditioned { condition: f64, cap: f64 },

    #[error("index {index} is not in the upper-half-plane partition")]
    IndexOutOfPartition { index: usize },

    #[error(
        "index {low} (smoothness {low_smoothness:.6}) must be strictly smoother \
         than index {high} (smoothness {high_smoothness:.6})"
    )]
    FrequencyOrder {
        low: usize,
        high: usize,
        low_smoothness: f64,
        high_smoothness: f64,
    },

    #[error("size {n} is below the minimum {min}")]
    TooSmall { n: usize, min: usize },

    #[error("size {n} exceeds the maximum {max}")]
    SizeOverflow { n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("n + k = {n} + {k} is odd; real-eigenvalue classification is inconsistent")]
    ParityViolation { n: usize, k: usize },

    #[error("adjacency learning needs at least 2 nodes, got {n}")]
    InfeasibleDimensions { n: usize },

    #[error("KKT system is numerically singular; supply a positive ridge")]
    SingularSystem,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Errors caused by malformed or inconsistent input, as opposed to
    /// numerical failure on valid input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NonSquare { .. }
                | Error::NonFinite { .. }
                | Error::DimensionMismatch { .. }
                | Error::ZeroSignal
                | Error::IndexOutOfPartition { .. }
                | Error::FrequencyOrder { .. }
                | Error::TooSmall { .. }
                | Error::SizeOverflow { .. }
                | Error::InvalidParameter(_)
                | Error::InfeasibleDimensions { .. }
                | Error::Parse { .. }
                | Error::Io(_)
        )
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::NonFinite { .. } => "NonFinite",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DefectiveMatrix { .. } => "DefectiveMatrix",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::UnpairedEigenvalues { .. } => "UnpairedEigenvalues",
            Error::ZeroSignal => "ZeroSignal",
            Error::NilpotentMatrix { .. } => "NilpotentMatrix",
            Error::NonRealResult { .. } => "NonRealResult",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::IndexOutOfPartition { .. } => "IndexOutOfPartition",
            Error::FrequencyOrder { .. } => "FrequencyOrder",
            Error::TooSmall { .. } => "TooSmall",
            Error::SizeOverflow { .. } => "SizeOverflow",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::ParityViolation { .. } => "ParityViolation",
            Error::InfeasibleDimensions { .. } => "InfeasibleDimensions",
            Error::SingularSystem => "SingularSystem",
            Error::Parse { .. } => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

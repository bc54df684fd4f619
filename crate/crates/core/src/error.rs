use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("not Hermitian: residual {0:.0e}")]
    NotHermitian(f64),

    #[error("not positive semidefinite: min eigenvalue {0:.3e}")]
    NotPsd(f64),

    #[error("trace deviation {0:.0e}")]
    TraceDeviation(f64),

    #[error("unknown register `{0}`")]
    UnknownRegister(String),

    #[error("duplicate register `{0}`")]
    DuplicateRegister(String),

    #[error("register sets overlap on `{0}`")]
    OverlappingParts(String),

    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("Renyi order alpha = 1 is not allowed; use relative_entropy")]
    RenyiOrderOne,

    #[error("diagonal-scan smoothing requires commuting inputs (commutator norm {0:.3e})")]
    NonCommuting(f64),

    #[error("hypothesis-test bisection did not converge after {iterations} iterations (t in [{lo:e}, {hi:e}], type-I {alpha_lo:.12} .. {alpha_hi:.12})")]
    BisectionNonConvergence {
        iterations: usize,
        lo: f64,
        hi: f64,
        alpha_lo: f64,
        alpha_hi: f64,
    },

    #[error("conditioning alphabet of `{register}` has {size} letters; at most {max} supported")]
    AlphabetTooLarge {
        register: String,
        size: usize,
        max: usize,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid state for input pair ({pair}): {source}")]
    InvalidChannelState {
        pair: String,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("unsupported sender count {0}; expected 2 or 3")]
    UnsupportedSenderCount(usize),

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("grid needs {needed} evaluations, cap is {cap}")]
    GridTooLarge { needed: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed input text rather than a violated invariant.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the coherence toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid subsystem shape: {0}")]
    InvalidShape(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("cannot trace out every subsystem")]
    TraceAll,

    #[error("not Hermitian (max |m - m^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max |U^dag U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("state is not pure (purity {0})")]
    NotPure(f64),

    #[error("Kraus set is not complete (max |sum K^dag K - I| = {0:e})")]
    IncompleteKraus(f64),

    #[error("Kraus set is not certified incoherent")]
    UncertifiedKraus,

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("Cartan vector {0:?} outside the Weyl chamber 0 <= |c3| <= c2 <= c1 <= pi/4")]
    OutsideWeylChamber([f64; 3]),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

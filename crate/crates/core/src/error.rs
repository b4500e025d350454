use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not unitary (max |UU^† - 1| = {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max |H - H^†| = {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("generator reconstruction residual {0:.3e} exceeds tolerance")]
    GeneratorResidual(f64),

    #[error("pauli strings have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("pauli strings commute; no su(2) triple")]
    Commuting,

    #[error("generator terms do not all commute")]
    NotAllCommuting,

    #[error("zero-weight pauli string")]
    ZeroWeight,

    #[error("expected an all-z pauli string, got {0}")]
    NotZString(String),

    #[error("invalid spin index {index} for {spins} spins")]
    InvalidSpin { index: usize, spins: usize },

    #[error("spin indices must differ (got {0} twice)")]
    SameSpin(usize),

    #[error("spin count {0} outside supported range 1..={1}")]
    SpinCount(usize, usize),

    #[error("reference matrix is identically zero")]
    ZeroMatrix,

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid option: {0}")]
    InvalidOption(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

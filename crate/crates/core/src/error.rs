use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state dimension must be at least 2, found {0}")]
    DimensionTooSmall(usize),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {max_deviation:e}")]
    NotHermitian { max_deviation: f64 },

    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("commutator expectation has real residue {0:e}")]
    CommutatorNotImaginary(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("pre- and post-selected states nearly orthogonal at t = {t}: |overlap| = {overlap:e}")]
    NearOrthogonal { t: f64, overlap: f64 },

    #[error("time grid does not cover the coupling support: {0}")]
    SupportNotCovered(String),

    #[error("coupling window edges do not land on grid nodes: {0}")]
    GridMisaligned(String),

    #[error("impulse coupling has no pointwise value")]
    ImpulseEvaluation,

    #[error("PT transformation requires a certified even coupling profile")]
    CouplingNotCertified,

    #[error("pointer state not normalized: norm^2 = {0}")]
    PointerNotNormalized(f64),

    #[error("pointer grid too narrow: {0}")]
    PointerGrid(String),

    #[error("pointer shift exceeds grid margin: {0}")]
    ShiftOutOfGrid(String),

    #[error("momentum reweighting escapes the grid band: {0}")]
    MomentumBand(String),
}

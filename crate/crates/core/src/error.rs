//! Error type and the shared numerical tolerances.

use thiserror::Error;

/// Default tolerance for algebraic identities (unitarity, orthonormality,
/// trace/norm checks).
pub const TOL_ALGEBRAIC: f64 = 1e-9;

/// Default tolerance for composed results (reconstructions, products of
/// several decompositions).
pub const TOL_COMPOSED: f64 = 1e-8;

/// Eigenvalues in `[-TOL_ALGEBRAIC, 0)` are clamped to zero before square
/// roots; anything below [`PSD_HARD_FLOOR`] is treated as genuinely
/// non-positive input.
pub const PSD_HARD_FLOOR: f64 = -1e-6;

/// Schmidt coefficients below this cutoff count as numerical noise.
pub const SCHMIDT_CUTOFF: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("invalid register shape: {0}")]
    BadShape(String),

    #[error("register index set invalid: {0}")]
    BadRegisterSet(String),

    #[error("state is not normalized (L2 norm {norm}, tolerance {tol})")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("an unnormalized state was passed where a normalized one is required")]
    UnnormalizedInput,

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("invalid key {key:?} for family {family}")]
    InvalidKey { family: String, key: String },

    #[error("family {0} has no enumerable key set")]
    NotEnumerable(String),

    #[error("basis construction failed verification: {0}")]
    ConstructionFailed(String),

    #[error("instance validation failed: {0}")]
    InvalidInstance(String),

    #[error("dense layout too large: total dimension {total} exceeds {limit}")]
    LayoutTooLarge { total: usize, limit: usize },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

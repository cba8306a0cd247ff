//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("not a contraction: spectral norm {norm} exceeds 1 + {tol}")]
    NotAContraction { norm: f64, tol: f64 },

    #[error("no defect-supported solution for equation {index}: residual {residual:.3e}")]
    NoSolution { index: usize, residual: f64 },

    #[error("word index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("truncation order {order} too small, need at least {required}")]
    OrderTooSmall { order: usize, required: usize },

    #[error("not Toeplitz within the window: max diagonal deviation {deviation:.3e}")]
    NotToeplitz { deviation: f64 },

    #[error("mass {mass:.3e} beyond declared band {band}")]
    BandExceeded { band: usize, mass: f64 },

    #[error("subspace not co-invariant under operator {index}: deviation {deviation:.3e}")]
    NotCoinvariant { index: usize, deviation: f64 },

    #[error("fundamental solution invalid: residual {residual:.3e}")]
    InvalidSolution { residual: f64 },

    #[error("not an Agler-Young isometry: {context}")]
    NotAyIsometry { context: String },

    #[error("interior window too small: {context}")]
    WindowTooSmall { context: String },

    #[error("tuple has a nontrivial unitary part of dimension {dim}")]
    HasUnitaryPart { dim: usize },

    #[error("symbol not inner: deviation {deviation:.3e} on the circle grid")]
    NotInner { deviation: f64 },

    #[error("multiplier range not invariant under symbol {index}: leakage {leakage:.3e}")]
    NotInvariant { index: usize, leakage: f64 },

    #[error("operator not pure: spectral radius {radius}")]
    NotPure { radius: f64 },

    #[error("model intertwining failed: deviation {deviation:.3e}")]
    ModelMismatch { deviation: f64 },

    #[error("Blaschke zero too close to the unit circle: modulus {modulus}")]
    ZeroTooCloseToCircle { modulus: f64 },

    #[error("symbol bandwidth {bandwidth} too large for ambient order {order}")]
    BandwidthTooLarge { bandwidth: usize, order: usize },

    #[error("unknown fixture kind: {kind}")]
    UnknownKind { kind: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

//! Finite-truncation numerical workbench for Agler-Young operator tuples.
//!
//! An Agler-Young tuple is an n-tuple of bounded operators `(S_1, ..., S_n)`
//! with `S_n` a contraction such that the fundamental equations
//! `S_i - S_{n-i}^* S_n = D_{S_n} X_i D_{S_n}` have solutions `X_i` on the
//! defect space of `S_n`. Everything here is represented by dense complex
//! matrices at a finite truncation order; operator identities that hold on
//! infinite-dimensional Hardy spaces are checked bit-exactly on declared
//! interior windows instead of approximately everywhere.
//!
//! Module map:
//! - [`mat`], [`linalg`]: dense complex primitives (defect operators,
//!   numerical radius, restricted solves).
//! - [`tuple`]: operator tuples and word products.
//! - [`hardy`]: operator-valued Laurent symbols, block Toeplitz truncations,
//!   canonical Agler-Young isometries.
//! - [`ay`]: membership solvers, isometry/unitary predicates, hereditary
//!   functional calculus, compressions.
//! - [`dilation`]: the explicit Agler-Young isometric dilation and its
//!   verification.
//! - [`wold`]: Wold decomposition, fundamental-function extraction, symbol
//!   transfer under inner multipliers.
//! - [`model`]: characteristic function and the functional model for pure
//!   tuples.
//! - [`ttoeplitz`]: model spaces of finite Blaschke products and the
//!   classification of Agler-Young pairs of truncated Toeplitz operators.
//! - [`json`]: the wire formats used by the CLI.
//! - [`fixtures`]: seeded generators for every fixture family the test
//!   suites rely on.

pub mod ay;
pub mod dilation;
pub mod error;
pub mod fixtures;
pub mod hardy;
pub mod json;
pub mod linalg;
pub mod mat;
pub mod model;
pub mod ttoeplitz;
pub mod tuple;
pub mod wold;

pub use error::{Error, Result};
pub use hardy::{CanonicalAy, LaurentSymbol, TruncatedToeplitz};
pub use linalg::DefectData;
pub use mat::{C64, ComplexMatrix};
pub use tuple::OperatorTuple;

/// Default tolerance used by the CLI and the fixture suites.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default relative rank cutoff for defect spaces.
pub const DEFECT_RANK_TOL: f64 = 1e-10;

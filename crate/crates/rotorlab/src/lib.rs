//! Laboratory for Propp's rotor-router machine ("P-machine") on `Z^d`.
//!
//! The crate has four layers:
//!
//! - [`lattice`]: lattice points, the fixed direction ordering `e_0..e_{2d-1}`,
//!   parity and norms.
//! - [`machine`]: the deterministic rotor-router process with full event
//!   tracing, plus the linear (even-split) relaxation in exact rationals.
//! - [`kernel`]: exact simple-random-walk kernels `S_t(v)` by big-integer
//!   path counting, closed forms for d=1,2, the Gaussian approximation
//!   `p(t,x)`, and discrete-gradient error measurement.
//! - [`weights`] and [`conjectures`]: the weight function `W_t`, the
//!   quasi-martingale `X_t`, per-site contributions `Delta_w` with the exact
//!   telescoping decomposition, and empirical scanners for sign changes,
//!   unimodality, decay exponents, and extrema counts.
//!
//! Everything probabilistic is exact: kernels, weights and deltas are
//! `BigRational` values with denominator a power of `2d`. Floating point
//! appears only in the Gaussian approximation and in least-squares fits.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod conjectures;
pub mod kernel;
pub mod lattice;
pub mod machine;
pub mod scenario;
pub mod weights;

pub use kernel::{ClosedFormKernel, Kernel, PathCountTable};
pub use lattice::{DirectionIndex, LatticePoint};
pub use machine::{ChipConfig, MoveEvent, RationalConfig, RotorField, RunTrace};
pub use scenario::Scenario;

use thiserror::Error;

pub type ExactRational = num_rational::BigRational;

#[derive(Debug, Error)]
pub enum RotorError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction index {j} out of range for dimension {d}")]
    BadDirection { j: usize, d: usize },
    #[error("kernel table covers t <= {t_max}, requested t = {t}")]
    TableTooShort { t: u64, t_max: u64 },
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("decomposition identity violated: sum of deltas != X_n - X_0 (this is a bug)")]
    IdentityViolation,
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, RotorError>;

//! Cramér–Rao bounds for parameters constrained to arbitrary sets.
//!
//! The classical Cramér–Rao bound (CRB) limits the covariance of an estimator
//! of a parameter ranging over all of ℝᵏ. When the parameter is confined to a
//! set Θ ⊂ ℝᵏ — a sphere, a matrix manifold, a sparsity set, the image of a
//! smooth map — the bound tightens, and the object that governs the tightening
//! is the *tangent cone* to Θ at the parameter. The span of that cone, through
//! its orthogonal projector Π, yields the best constrained bound
//!
//! ```text
//! C ⪰ (I + ∂b/∂θ) Π (ΠJΠ)† Π (I + ∂b/∂θ)ᵀ
//! ```
//!
//! valid for any bias gradient ∂b/∂θ and any Fisher information matrix J,
//! singular or not.
//!
//! The crate is organized as follows:
//!
//! - [`matlin`] — dense-matrix kernel: pseudoinverse, symmetric square root,
//!   projectors, null spaces, Loewner-order and column-space predicates, all
//!   with explicit tolerances.
//! - [`schur`] — the generalized Schur complement test for block positive
//!   semidefiniteness, with an independent eigenvalue cross-check.
//! - [`tangent`] — a catalog of constraint sets with their tangent-cone spans
//!   and projectors, plus directional derivatives, a greedy spanning-basis
//!   builder, and tangent-vector witness sequences.
//! - [`crb`] — the bound engine: unconstrained CRB, per-direction-matrix
//!   bounds, feasibility conditions, the span-projector constrained CRB, the
//!   reduction decomposition, parameter-transformation identities, and
//!   monotonicity checks.
//! - [`models`] — Gaussian observation models, estimators, and seeded Monte
//!   Carlo machinery that validates the bounds empirically.
//! - [`randmat`] — seeded random-matrix generators used by validation sweeps.
//!
//! A companion guide with worked examples lives in the `book/` directory of
//! the repository; its code snippets are compiled and run as doc-tests.

#![forbid(unsafe_code)]

pub mod matlin;
pub mod schur;
pub mod tangent;
pub mod crb;
pub mod models;
pub mod randmat;

pub use matlin::{Mat, SymMat, Tolerances};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not symmetric within tolerance (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("tolerances must be strictly positive")]
    BadTolerance,

    #[error("point is not on the constraint set (residual {0:.3e})")]
    NotOnSet(f64),

    #[error("numerical rank of the point is ambiguous at the configured tolerance")]
    RankTolAmbiguous,

    #[error("no retraction is available for this constraint set")]
    NoRetraction,

    #[error("direction is not tangent to the set at the given point")]
    NotTangent,

    #[error("matrix is not a projector within tolerance")]
    NotProjector,

    #[error("Fisher information matrix is singular")]
    SingularJ,

    #[error("projection onto this constraint set is not supported")]
    ProjectionUnsupported,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

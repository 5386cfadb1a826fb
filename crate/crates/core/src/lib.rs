//! Nonlocal retrieval games at desk scale: exact classical maxima by strategy
//! enumeration, quantum maxima by multi-start derivative-free search over
//! projective measurement angles, no-signaling maxima by linear programming,
//! and the single-qubit fine-grained uncertainty bound.
//!
//! # Index conventions
//!
//! Every table in this crate uses the same two integer encodings. Getting
//! these wrong is the classic cross-module bug, so they are fixed here once:
//!
//! * **Outcome tuples** `(a, b, c)` are encoded little-endian in party order:
//!   `index = a + 2*b + 4*c` for binary outcomes (party 0 is the low digit;
//!   mixed radix for more outcomes).
//! * **Setting tuples** `(s, t, u)` use the same encoding:
//!   `index = s + 2*t + 4*u`.
//! * **Ket amplitudes** use the usual Kronecker order: party 0 is the *most*
//!   significant qubit, so `|abc>` sits at index `4*a + 2*b + c`. The GHZ
//!   state therefore has support on indices 0 and 7.
//!
//! Conditional probability tables `p(outcomes | settings)` are stored one
//! row per setting tuple, one column per outcome tuple.

pub mod classical;
pub mod fur;
pub mod games;
pub mod nosignal;
pub mod optim;
pub mod qcore;
pub mod quantum;
pub mod tol;

use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (max |M - M†| entry = {0:.3e})")]
    NotHermitian(f64),
    #[error("observable is not an involution (max |O² - I| entry = {0:.3e})")]
    NotInvolution(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("enumeration budget exceeded: {0} deterministic strategies")]
    EnumerationBudget(u128),
    #[error("problem size exceeds budget: {0} variables")]
    SizeBudget(usize),
    #[error("linear program infeasible (phase-1 objective {0:.3e})")]
    Infeasible(f64),
    #[error("linear program unbounded")]
    Unbounded,
    #[error("eigensolver failed to converge")]
    EigenConvergence,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

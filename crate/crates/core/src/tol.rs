//! Numeric tolerances, centralized so no module invents its own magic number.
//!
//! Two base categories: *structural* checks accept an operator or behavior as
//! valid input (Hermiticity, involutions, no-signaling of computed quantum
//! behaviors), *arithmetic* checks compare two routes to the same number
//! (operator identity vs. direct summation, tensor bilinearity).

/// Structural validation of inputs and solver postconditions.
pub const STRUCTURAL: f64 = 1e-10;

/// Exact arithmetic identities evaluated in f64.
pub const ARITHMETIC: f64 = 1e-12;

/// Ket normalization after construction.
pub const KET_NORM: f64 = 1e-12;

/// Jacobi sweep stop: off-diagonal Frobenius norm below this is diagonal.
pub const EIGEN_SWEEP: f64 = 1e-12;

/// Conditional distributions may deviate from unit sum by this much before
/// construction refuses to repair them.
pub const DIST_SUM: f64 = 1e-9;

/// Negative probability entries within this window are clamped to zero.
pub const PROB_CLAMP: f64 = 1e-12;

/// Simplex pivot threshold: smaller magnitudes are treated as zero.
pub const LP_PIVOT: f64 = 1e-11;

/// Accepted residual of LP solutions (primal feasibility, optimum).
pub const LP_RESIDUAL: f64 = 1e-9;

/// LP argmax entries below this magnitude are snapped to exactly zero.
pub const LP_SNAP: f64 = 1e-11;

/// Complementary slackness self-check of the simplex solver.
pub const LP_SLACKNESS: f64 = 1e-8;

/// Slack allowed when asserting classical <= quantum <= no-signaling.
pub const HIERARCHY_SLACK: f64 = 1e-9;

/// Default simplex-diameter convergence threshold of the Nelder-Mead search.
pub const NM_DIAMETER: f64 = 1e-10;

/// Step for central finite differences in the stationarity report.
pub const FD_STEP: f64 = 1e-5;

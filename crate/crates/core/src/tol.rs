//! Numerical tolerances shared across modules.

/// Per-entry Hermiticity tolerance.
pub const HERMITIAN: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density operator.
pub const PSD: f64 = 1e-10;
/// Trace tolerance for density operators.
pub const TRACE: f64 = 1e-10;
/// Eigenvalue comparisons and degeneracy detection.
pub const DEGENERACY: f64 = 1e-12;
/// Eigenvalues below this are treated as exact zeros inside logarithms.
pub const LOG_CLAMP: f64 = 1e-15;
/// Commutator norm below which two operators are taken to commute.
pub const COMMUTE: f64 = 1e-10;
/// Eigenvalue below which a state is outside the support of another.
pub const SUPPORT: f64 = 1e-12;
/// Weight above which a support mismatch makes a relative entropy infinite.
pub const SUPPORT_WEIGHT: f64 = 1e-10;
/// Numerical rank threshold.
pub const RANK: f64 = 1e-10;

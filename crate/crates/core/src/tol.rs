//! Numerical tolerances shared across modules.

/// Max elementwise |rho - rho^dag| accepted for a density matrix.
pub const HERMITIAN: f64 = 1e-10;
/// Allowed deviation of a density-matrix trace from 1.
pub const TRACE: f64 = 1e-10;
/// Most negative eigenvalue accepted for a density matrix.
pub const PSD: f64 = 1e-10;
/// Allowed deviation of a pure-state norm from 1.
pub const NORM: f64 = 1e-12;
/// Max elementwise |U^dag U - I| for a unitary.
pub const UNITARY: f64 = 1e-10;
/// Eigenvalues below this are treated as outside the support.
pub const SUPPORT: f64 = 1e-10;
/// Max elementwise |sum K^dag K - I| for a complete Kraus set.
pub const KRAUS_COMPLETENESS: f64 = 1e-9;
/// Magnitude above which a Kraus entry counts as nonzero.
pub const KRAUS_NONZERO: f64 = 1e-12;
/// Outcome probabilities at or below this are flagged null.
pub const NULL_OUTCOME: f64 = 1e-12;
/// Purity below `1 - PURITY` marks a state as mixed.
pub const PURITY: f64 = 1e-8;

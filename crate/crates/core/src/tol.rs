//! Numerical tolerances shared across modules.
//!
//! Every threshold used to accept, clamp or reject a value lives here so the
//! tests and the library read the same numbers.

/// Relative Hermiticity slack: `max |A - A†| <= HERMITIAN * (1 + ‖A‖)`.
pub const HERMITIAN: f64 = 1e-12;

/// Absolute slack on `Tr ρ = 1`.
pub const TRACE: f64 = 1e-12;

/// Absolute slack on the Euclidean norm of a state vector.
pub const NORM: f64 = 1e-12;

/// Eigenvalues above `-PSD_CLAMP` are clamped to zero; anything lower is an error.
pub const PSD_CLAMP: f64 = 1e-10;

/// Pairs with `λ_k + λ_l < RANK * max λ` are dropped from QFI and SLD sums.
pub const RANK: f64 = 1e-12;

/// A state is treated as pure when its top eigenvalue is at least `1 - PURITY`.
pub const PURITY: f64 = 1e-10;

/// Allowed negative slack in the fidelity / trace-distance inequality chain.
pub const CHAIN_SLACK: f64 = 1e-9;

/// Allowed negative slack of audited bounds, in units of `N²`.
pub const AUDIT_SLACK_PER_N2: f64 = 1e-8;

/// Eigenvalues of a PSD matrix below `dim * ε * max λ` are rounding noise and
/// are zeroed before taking square roots.
pub(crate) fn noise_floor(dim: usize, scale: f64) -> f64 {
    8.0 * dim as f64 * f64::EPSILON * scale
}

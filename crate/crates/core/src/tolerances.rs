//! Numerical thresholds used across the crate.

/// Hermiticity check: `max|A - A†| <= HERMITIAN_REL * max|A|`.
pub const HERMITIAN_REL: f64 = 1e-12;

/// Allowed `|Tr ρ - 1|` for anything treated as a state.
pub const TRACE_TOL: f64 = 1e-9;

/// Largest acceptable probability mass lost to the Fock cutoff when building a state.
pub const TRUNCATION_TOL: f64 = 1e-8;

/// Default relative tolerance of the positive-semidefinite test:
/// PSD iff `λ_min >= -PSD_TOL * (1 + σ_max)`.
pub const PSD_TOL: f64 = 1e-9;

/// A criterion reports detection only when its witness is below
/// `-DETECTION_TOL * scale`.
pub const DETECTION_TOL: f64 = 1e-8;

/// Relative singular-value cutoff of the Moore-Penrose inverse.
pub const PINV_RCOND: f64 = 1e-10;

/// Imaginary residue tolerated in quantities that are real in exact arithmetic.
pub const IMAG_RESIDUE: f64 = 1e-10;

/// Largest squeezing parameter accepted by default.
pub const MAX_SQUEEZE: f64 = 2.0;

/// Mass of the photon-number distribution allowed beyond the cutoff picked by
/// [`crate::states::auto_cutoff`].
pub const AUTO_CUTOFF_TAIL: f64 = 1e-14;

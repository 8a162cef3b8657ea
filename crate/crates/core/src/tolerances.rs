//! Numerical tolerances shared across the crate.
//!
//! Every threshold the library asserts against lives here so that a change in
//! numerical policy is a one-line edit.

/// Maximum elementwise deviation `|M - M†|` accepted for a Hermitian matrix.
pub const HERMITIAN: f64 = 1e-12;

/// Deviation of a state norm from one accepted after construction.
pub const STATE_NORM: f64 = 1e-12;

/// Elementwise agreement expected from compositions of unitary propagation.
pub const PROPAGATION: f64 = 1e-10;

/// Imaginary residue tolerated in the expectation value of a Hermitian operator.
pub const EXPECTATION_IMAG: f64 = 1e-12;

/// Default minimum `|<psi_f(t)|psi_i(t)>|` below which a weak value is refused.
pub const DEFAULT_OVERLAP_FLOOR: f64 = 1e-8;

/// Default threshold for symmetry verdicts on analytically generated series.
pub const DEFAULT_SYMMETRY: f64 = 1e-9;

/// Relative finite-difference step: `h = FD_STEP * max(1, |t|)`.
pub const FD_STEP: f64 = 1e-4;

/// Pointer normalization `sum |psi|^2 dq = 1` tolerance.
pub const POINTER_NORM: f64 = 1e-10;

/// Largest amplitude allowed at the edges of a pointer grid (both q and p).
pub const POINTER_BOUNDARY: f64 = 1e-8;

/// Minimum number of standard deviations a Gaussian pointer grid must extend
/// on either side of the packet centre.
pub const POINTER_COVERAGE_SIGMAS: f64 = 8.0;

/// Momentum resolution contract: `step <= hbar / (POINTER_BAND_FACTOR * p_max)`.
pub const POINTER_BAND_FACTOR: f64 = 8.0;

/// Number of standard deviations of a Gaussian coupling that must lie inside
/// the time grid.
pub const GAUSSIAN_COUPLING_SIGMAS: f64 = 6.0;

/// Relative slack when deciding whether a time lands on a grid node.
pub const GRID_ALIGNMENT: f64 = 1e-9;

/// Slack on the uncertainty relation `var_q var_p >= (hbar/2)^2`.
pub const UNCERTAINTY_SLACK: f64 = 1e-9;

/// Norm change beyond which a parsed state triggers a renormalization warning.
pub const RENORMALIZATION_WARNING: f64 = 1e-6;

/// Real part tolerated in `<[M, p]>`, relative to the size of the two orderings.
pub const COMMUTATOR_REAL: f64 = 1e-9;

//! Centralized numerical tolerances.
//!
//! Every comparison threshold used by the engine lives here so that the
//! meaning of "passes" is defined in exactly one place.  Tolerances split
//! into two regimes: quantities produced by the exact jet pipeline (metric,
//! Christoffel symbols, curvature, and everything algebraically derived from
//! them) and quantities that go through central finite differences.

/// Structure-axiom residuals from the exact pipeline.
pub const AXIOM: f64 = 1e-6;

/// Identities whose verification relies on central finite differences.
pub const FD_IDENTITY: f64 = 1e-4;

/// Step for all central finite differences.
pub const FD_STEP: f64 = 1e-4;

/// Closed-form curvature and Ricci reconstructions.
pub const RECONSTRUCTION: f64 = 1e-5;

/// Pointwise scalar identities (scalar curvature relation, Ricci contraction
/// against the Reeb field).
pub const SCALAR_IDENTITY: f64 = 1e-6;

/// Agreement between the assembled generalized curvature tensor and its
/// closed form on eigenframe data.
pub const CLOSED_FORM: f64 = 1e-12;

/// Reeb-slice identities of the generalized curvature tensor.
pub const SLICE: f64 = 1e-9;

/// Least-squares fit residual for scalar collapse polynomials.
pub const FIT: f64 = 1e-9;

/// Relative part of the classification threshold: a derivation residual
/// counts as vanishing when it is below `CLASSIFY_REL * scale + CLASSIFY_ABS`
/// with `scale = max(1, |W| * |operand|)`.
pub const CLASSIFY_REL: f64 = 1e-5;

/// Absolute floor of the classification threshold.
pub const CLASSIFY_ABS: f64 = 1e-9;

/// A sample point is rejected when an excluded-locus expression evaluates
/// below this magnitude at the point.
pub const EXCLUDED_LOCUS: f64 = 1e-3;

/// `1 - kappa` below this is treated as the degenerate case `h = 0`.
pub const SASAKIAN_CUTOFF: f64 = 1e-8;

/// An assembled tensor with max component below this counts as identically
/// zero for vacuity detection (the genuinely nonzero tensors of the gallery
/// sit above 0.1).
pub const ZERO_TENSOR: f64 = 1e-6;

/// Curvature max component below this (together with `kappa`, `mu` within
/// [`MU_ZERO`]) certifies flatness.
pub const FLAT_CURVATURE: f64 = 1e-8;

/// Coefficient identities sharper than this count as exact for
/// coefficient-forced vacuity.
pub const COEFF_EPS: f64 = 1e-12;

/// Relative spread below which an extracted scalar counts as constant over
/// the sample set.
pub const CONSTANCY_SPREAD: f64 = 1e-5;

/// Magnitude below which an extracted `mu` counts as zero for branch
/// decisions.
pub const MU_ZERO: f64 = 1e-6;

/// Magnitude below which a scalar-relation factor counts as a root.
pub const ROOT: f64 = 1e-6;

/// First vector component larger than this fixes the eigenvector sign.
pub const SIGN_EPS: f64 = 1e-9;

/// `|det g|` below this raises a singular-metric error.
pub const SINGULAR_DET: f64 = 1e-12;

/// Bit-level agreement checks for affine reassembly of curvature families.
pub const AFFINE: f64 = 1e-10;

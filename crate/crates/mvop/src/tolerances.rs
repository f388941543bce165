//! Residual tolerances used across the verification battery.
//!
//! Two tiers: identities that are exact by theory and only pick up f64
//! rounding get `EXACT_FLOAT`; quantities that pass through a matrix
//! inverse or a fit get the slightly looser `THROUGH_INVERSE`. Matrix sizes
//! stay below ten and everything is evaluated well inside `(0,1)`, so these
//! are comfortable bounds.

/// Exact-by-theory identities evaluated in floating point.
pub const EXACT_FLOAT: f64 = 1e-10;

/// Quantities that pass through a matrix inverse.
pub const THROUGH_INVERSE: f64 = 1e-9;

/// Cross-Gram orthogonality residual of a monic sequence.
pub const ORTHOGONALITY: f64 = 1e-9;

/// Eigenvalue relation and operator symmetry residuals.
pub const OPERATOR: f64 = 1e-9;

/// First-order equation residual for the degree-zero spherical function
/// with fitted coefficients.
pub const PSI0_ODE: f64 = 1e-10;

/// Holdout residual threshold for polynomiality fits of weights and of the
/// degree-two/degree-one shift polynomials.
pub const POLY_FIT: f64 = 1e-10;

/// Derivative relation between consecutive deformed weights.
pub const WEIGHT_DERIVATIVE: f64 = 1e-9;

/// Derivative-shift relation between consecutive monic families.
pub const SHIFT: f64 = 1e-9;

/// Rodrigues-built polynomials against Gram-Schmidt, and the raising
/// operator identities.
pub const RODRIGUES: f64 = 1e-8;

/// Commutator and first-order eigenvalue checks.
pub const COMMUTATOR: f64 = 1e-10;

/// Tightened gate for the scalar reference family.
pub const SCALAR_GATE: f64 = 1e-11;

/// Negative controls must push residuals above this.
pub const CONTROL_FLOOR: f64 = 1e-4;

/// Convergence guard: doubling the quadrature order must not move inner
/// products by more than this, relatively.
pub const QUAD_CONVERGENCE: f64 = 1e-11;

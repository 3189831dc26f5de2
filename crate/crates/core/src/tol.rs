//! Numerical tolerances shared across modules.

/// Dead zone around every strict inequality (`> 1`, `< 1`) tested by the rules.
pub const STRICT_DEAD_ZONE: f64 = 1e-7;

/// Absolute tolerance on log-domain comparisons of weights.
pub const LOG_TOLERANCE: f64 = 1e-9;

/// Maximum distance between an outer jet's base and the inner jet's value.
pub const BASE_POINT_TOLERANCE: f64 = 1e-12;

/// Poles must sit at least this far outside the domain.
pub const POLE_CLEARANCE: f64 = 1e-9;

/// Boundary samples of a self-map may exceed modulus one by this much.
pub const SELF_MAP_TOLERANCE: f64 = 1e-9;

/// Maximum deviation of `|phi|` from one on the circle for an inner map.
pub const INNER_TOLERANCE: f64 = 1e-9;

/// Residual and `|1 - |z||` bound for accepting a boundary fixed point.
pub const BOUNDARY_FIXED_TOLERANCE: f64 = 1e-7;

/// A point is on the unit circle for tangent purposes within this tolerance.
pub const TANGENT_TOLERANCE: f64 = 1e-12;

/// Minimal distance from `phi(K)` to the boundary for the decomposition rule.
pub const MARGIN_SAFETY: f64 = 1e-3;

/// Allowed excess over one when testing the non-strict `||phi'|| <= 1`.
pub const UNIT_DERIVATIVE_SLACK: f64 = 1e-9;

//! Numerical tolerances shared across modules.

/// Allowed drift of a strict input's component sum from one.
pub const SUM: f64 = 1e-9;

/// Sum window accepted by the renormalizing input policy.
pub const RENORMALIZE_WINDOW: f64 = 1e-3;

/// Default componentwise tolerance of the compatibility relation.
pub const COMPAT: f64 = 1e-10;

/// Relative tolerance on a ratio-cycle product during candidate generation.
pub const CYCLE: f64 = 1e-6;

/// Compatibility tolerance applied to matched tuples before acceptance.
pub const MATCH_COMPAT: f64 = 1e-8;

/// Reconstructed points closer than this (∞-norm) are treated as coincident.
pub const COINCIDENT: f64 = 1e-7;

/// Ratios outside `[1/RATIO_CONDITIONING, RATIO_CONDITIONING]` are flagged as ill-conditioned.
pub const RATIO_CONDITIONING: f64 = 1e12;

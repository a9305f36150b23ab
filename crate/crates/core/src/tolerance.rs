//! Numerical tolerances shared by every module.
//!
//! Construction-time checks use the tight bound; algebraic identities
//! (unitarity, idempotence, reconstruction) use the looser one.

/// Norm and Hermiticity checks at construction.
pub const CONSTRUCTION: f64 = 1e-12;

/// Algebraic identities: unitarity, idempotence, orthonormality, reconstruction.
pub const ALGEBRAIC: f64 = 1e-10;

/// Probabilities may sum to 1 only within this slack.
pub const PROBABILITY_SUM: f64 = 1e-9;

/// Clamping a probability by more than this is an internal error.
pub const CLAMP: f64 = 1e-9;

/// Smallest outcome probability treated as possible.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// ABL denominators at or below this mean post-selection is impossible.
pub const ABL_DENOMINATOR: f64 = 1e-15;

/// Schmidt coefficients closer than this are treated as degenerate.
pub const SCHMIDT_DEGENERACY: f64 = 1e-9;

/// Probability at or above `1 - CERTAINTY` counts as certain.
pub const CERTAINTY: f64 = 1e-9;

/// Amplitudes below this magnitude are skipped when fixing a global phase.
pub const PHASE_PIVOT: f64 = 1e-10;

/// All tolerances as (name, value), for report metadata.
pub fn table() -> [(&'static str, f64); 9] {
    [
        ("construction", CONSTRUCTION),
        ("algebraic", ALGEBRAIC),
        ("probability_sum", PROBABILITY_SUM),
        ("clamp", CLAMP),
        ("zero_probability", ZERO_PROBABILITY),
        ("abl_denominator", ABL_DENOMINATOR),
        ("schmidt_degeneracy", SCHMIDT_DEGENERACY),
        ("certainty", CERTAINTY),
        ("phase_pivot", PHASE_PIVOT),
    ]
}

//! Executable checkers for the envelope and descent properties. Each returns a
//! [`CheckReport`] that either passes or lists concrete witnesses.

mod bruteforce;
mod cloud_checks;
mod pointwise;
mod report;
mod sweep;

pub use bruteforce::{
    exhaustive_convexity_flags, lce_bruteforce, lce_exhaustive, BRUTEFORCE_MAX_POINTS,
    EXHAUSTIVE_MAX_POINTS,
};
pub use cloud_checks::{
    check_caratheodory, check_envelope_oracle, check_envelope_restriction,
    check_minimizer_preservation, check_subgradient_equivalence, BARYCENTER_TOL, ORACLE_TOL,
    RESTRICTION_TOL, UNIQUENESS_TOL,
};
pub use pointwise::{
    check_monotone_segment, check_optimal_direction, DirectionSweep, DEFAULT_SEGMENT_GRID,
    DIRECTION_TOL, MONOTONE_SLACK, TIE_BAND, TIE_SEPARATION,
};
pub use report::{CheckReport, Diagnostic, ViolationWitness, WitnessKind, MAX_WITNESSES};
pub use sweep::{angle_grid, fibonacci_sphere, unit_directions};

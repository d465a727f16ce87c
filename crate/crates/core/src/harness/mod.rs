//! Numerical probes of the `L¹` inequalities: ratio studies on seeded bump
//! families, blow-up along the `ρKw` family, the `L^∞` sphere condition and
//! the potential-operator demo.
//!
//! Every experiment is deterministic given its seed and configuration.

mod experiments;
mod family;
mod linfty;
mod potential;
mod table;

pub use experiments::{
    blowup_experiment, check_j, dealias, default_lorentz_q, field_ratio, hardy_experiment, intersection_defect, intersection_vector,
    operator_l1, projected_derivatives, rhokw_family, sobolev_exponent, sobolev_ratio_experiment, BlowupNorm,
    ExperimentConfig, TargetNorm, BLOWUP_BOX_LENGTH, DEFAULT_BLOWUP_SIZE, DEFAULT_EPS, DEGENERATE_TOL,
};
pub use family::{bump_family, bump_specs, cutoff, mollifier, BumpSpec, TestField, DEFAULT_FAMILY_SIZE};
pub use linfty::{linfty_condition, LInftyConditionReport};
pub use potential::{potential_failure_demo, PotentialDemoReport};
pub use table::{
    RatioRow, RatioTable, Summary, Sweep, Thresholds, Verdict, CSV_HEADER, DEFAULT_BOUNDED_FACTOR,
    DEFAULT_GROWTH_THRESHOLD,
};

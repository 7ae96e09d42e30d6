//! Explicit constants of the decay estimates, and their empirical verification.

mod certificate;
mod dispersive;
pub mod ingredients;
mod vdc;
mod verify;

pub use certificate::{bound_value, BoundCertificate, Regime, TheoremTag};
pub use dispersive::{
    cone_constants_C1, limited_growth_constants, limited_growth_series_inside, limited_growth_series_outside,
    linf_constants_C1, offaxis_constants, singular_direction_constants,
};
pub use vdc::{
    exterior_formula, interior_formula, nostationary_constant, nostationary_formula, vdc_combined_constant,
    vdc_exterior_constant, vdc_interior_constant,
};
pub use verify::{verify_bound, Sample, VerificationReport, DEFAULT_SLACK};

//! Solutions of `i ∂t u = f(D) u` from frequency-side data, space-time
//! cones, the Klein-Gordon split and localization experiments.

mod cone;
mod kg;
mod localize;
mod solution;

pub use cone::{cone, ConeSpec, Membership};
pub use kg::{kg_coefficients, kg_demo, kg_solution_eval, KgDemoParams, KgDemoReport, KleinGordon};
pub use localize::{
    certificate_groups, check_group, linf_checks, localization_report, localize_with_sweeps, sup_over_x,
    CertificateGroup, GroupCheck, LocalizationReport, LocalizeOptions, RayReport,
};
pub use solution::{band_decompose, ray_sweep, reversed_solution_eval, solution_eval, RaySample};

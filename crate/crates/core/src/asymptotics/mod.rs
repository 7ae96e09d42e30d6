//! Leading asymptotic terms and empirical decay rates.

mod fit;
mod gamma;
mod leading;

pub use fit::{envelope, fit_decay, fit_raw, geometric_grid, DecayFit};
pub use gamma::gamma;
pub use leading::{leading_term_interior, leading_term_nostat, optimality_ratio, LeadingTerm};

//! Phases, amplitudes, symbols and frequency-side initial data.

mod amplitude;
mod catalog;
mod datum;
mod factor;
mod phase;
pub mod spec;
mod symbol;

pub use amplitude::Amplitude;
pub use catalog::{builtin_catalog, lookup, CatalogEntry, CatalogItem};
pub use datum::{DatumKind, DecayParams, InitialDatum, Support};
pub use factor::{CValue, ComplexFn, FactorSpec, RealFn, RegularFactor};
pub use phase::{Phase, Stationary};
pub use symbol::{Growth, Symbol};

use num_complex::Complex64;

use crate::error::Result;

/// `U(p)` for `p` in the amplitude's interval.
pub fn amplitude_eval(a: &Amplitude, p: f64) -> Result<Complex64> {
    a.eval(p)
}

/// The phase `v p - f(p)` of the solution along the ray `x = v t`.
pub fn make_drift_phase(s: &Symbol, v: f64) -> Phase {
    s.drift_phase(v)
}

pub fn invert_fprime(s: &Symbol, v: f64) -> Result<f64> {
    s.invert_fprime(v)
}

//! Explicit van der Corput bounds for oscillatory integrals with stationary
//! points of real order and singular amplitudes, with reference quadrature,
//! leading asymptotic terms, and their application to dispersive equations
//! `i ∂t u = f(D) u`.

pub mod asymptotics;
pub mod bounds;
pub mod error;
pub mod functions;
pub mod propagator;
pub mod quadrature;

pub use error::{Error, Result};

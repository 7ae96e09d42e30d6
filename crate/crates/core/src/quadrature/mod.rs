//! Reference evaluation of oscillatory integrals and of the norms entering the constants.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod norms;
mod oscillatory;
mod rules;
mod tails;

pub use oscillatory::{integrate_weighted, oscillatory_integral, oscillatory_integral_with, WeightedIntegrand};
pub use tails::{improper_oscillatory_integral, improper_oscillatory_integral_with, truncation_radius};

/// Outcome of one quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
            panels_used: 0,
            converged: true,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        QuadResult {
            value: self.value * c,
            abs_error_estimate: self.abs_error_estimate * c.abs(),
            ..self
        }
    }

    pub fn combine(self, other: QuadResult) -> Self {
        QuadResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            panels_used: self.panels_used + other.panels_used,
            converged: self.converged && other.converged,
        }
    }

    pub fn conj(self) -> Self {
        QuadResult {
            value: self.value.conj(),
            ..self
        }
    }
}

/// Tuning of the adaptive oscillatory quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadOptions {
    /// Target: `|error| <= tol·(1 + |value|)`.
    pub tol: f64,
    /// Refinement budget: panels that may be added by bisection on top of the
    /// oscillation-resolving base partition.
    pub max_panels: usize,
    /// Largest base partition attempted before giving up.
    pub max_base_panels: usize,
    /// Phase variation `ω·|Δψ|` allowed on one base panel.
    pub max_phase_per_panel: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-10,
            max_panels: 200_000,
            max_base_panels: 40_000_000,
            max_phase_per_panel: std::f64::consts::PI,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions {
            tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_tol(self.tol)?;
        if !(self.max_phase_per_panel > 0.0) || self.max_base_panels == 0 {
            return Err(Error::Parameter("panel limits must be positive".into()));
        }
        Ok(())
    }
}

/// Accepts tolerances in `(1e-14, 1e-2)`.
pub fn check_tol(tol: f64) -> Result<()> {
    if tol > 1e-14 && tol < 1e-2 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("tolerance {tol} outside (1e-14, 1e-2)")))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct HeapItem {
    pub error: f64,
    pub index: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Pairwise sum, so the result does not depend on accumulation length.
pub(crate) fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

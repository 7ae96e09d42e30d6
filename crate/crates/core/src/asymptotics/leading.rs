use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{Amplitude, Phase};
use crate::quadrature::{norms, oscillatory_integral};

use super::gamma::gamma;

/// `coefficient_modulus · phase_offset · e^{iω·reference_phase} · ω^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadingTerm {
    pub coefficient_modulus: f64,
    /// Unit complex constant.
    pub phase_offset: Complex64,
    /// ψ at the point the term is attached to.
    pub reference_phase: f64,
    pub exponent: f64,
}

impl LeadingTerm {
    pub fn value(&self, omega: f64) -> Complex64 {
        let (s, c) = (omega * self.reference_phase).sin_cos();
        self.phase_offset * Complex64::new(c, s) * self.coefficient_modulus * omega.powf(self.exponent)
    }

    pub fn modulus(&self, omega: f64) -> f64 {
        self.coefficient_modulus * omega.powf(self.exponent)
    }
}

fn unit(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        Complex64::new(1.0, 0.0)
    }
}

fn coincides(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Stationary-point term when the stationary point sits on the singular end.
///
/// A negative ψ̃ is reduced to the positive case by conjugation, which flips
/// the sign of the constant phase `πμ/(2ρ)`.
pub fn leading_term_interior(a: &Amplitude, ph: &Phase) -> Result<LeadingTerm> {
    let st = ph
        .stationary
        .ok_or_else(|| Error::Precondition("phase has no stationary point".into()))?;
    if !coincides(st.p0, a.p1) {
        return Err(Error::Precondition(format!(
            "stationary point {} differs from the singular point {}",
            st.p0, a.p1
        )));
    }
    let u1 = a.factor.eval(a.p1);
    if a.mu < 1.0 && u1.norm() == 0.0 {
        return Err(Error::DegenerateLeadingTerm("ũ(p1) = 0 with mu < 1".into()));
    }
    let (mu, rho) = (a.mu, st.rho);
    let g = st.right_factor;
    if !(g != 0.0) {
        return Err(Error::Assumption("ψ̃(p1+) = 0".into()));
    }
    let k = mu / rho;
    let modulus = rho.powf(k) / rho * gamma(k) * u1.norm() / g.abs().powf(k);
    let sign = g.signum();
    Ok(LeadingTerm {
        coefficient_modulus: modulus,
        phase_offset: Complex64::from_polar(1.0, sign * PI * k / 2.0) * unit(u1),
        reference_phase: ph.eval(a.p1),
        exponent: -k,
    })
}

/// Endpoint terms at the singular end and at the far end when ψ' does not vanish.
pub fn leading_term_nostat(a: &Amplitude, ph: &Phase) -> Result<(LeadingTerm, LeadingTerm)> {
    if let Some(p0) = ph.p0() {
        if p0 >= a.p1 && p0 <= a.p2 {
            return Err(Error::Precondition(format!("ψ' vanishes at {p0} inside the interval")));
        }
    }
    let d = |p: f64| ph.deriv(p);
    let floor = norms::min_abs(&d, a.p1, a.p2);
    if !(floor > 0.0) {
        return Err(Error::Precondition("ψ' vanishes on the interval".into()));
    }
    let (d1, d2) = (ph.deriv(a.p1), ph.deriv(a.p2));
    let mu = a.mu;
    let u1 = a.factor.eval(a.p1);
    let first = LeadingTerm {
        coefficient_modulus: gamma(mu) * u1.norm() / d1.abs().powf(mu),
        phase_offset: Complex64::from_polar(1.0, d1.signum() * PI * mu / 2.0) * unit(u1),
        reference_phase: ph.eval(a.p1),
        exponent: -mu,
    };
    let u2 = a.eval(a.p2)?;
    let second = LeadingTerm {
        coefficient_modulus: u2.norm() / d2.abs(),
        phase_offset: Complex64::new(0.0, -d2.signum()) * unit(u2),
        reference_phase: ph.eval(a.p2),
        exponent: -1.0,
    };
    Ok((first, second))
}

/// `|I(ω)| / (leading modulus · ω^exponent)` for each ω.
///
/// Uses the stationary term when `p0 = p1`, otherwise the singular-end term.
pub fn optimality_ratio(a: &Amplitude, ph: &Phase, omegas: &[f64], tol: f64) -> Result<Vec<(f64, f64)>> {
    if a.factor.eval(a.p1).norm() == 0.0 {
        return Err(Error::DegenerateLeadingTerm("ũ(p1) = 0".into()));
    }
    let lead = match ph.p0() {
        Some(p0) if coincides(p0, a.p1) => leading_term_interior(a, ph)?,
        _ => leading_term_nostat(a, ph)?.0,
    };
    omegas
        .par_iter()
        .map(|&w| {
            let r = oscillatory_integral(a, ph, w, tol)?;
            Ok((w, r.value.norm() / lead.modulus(w)))
        })
        .collect()
}

//! Integrals of data with unbounded support, truncated with a certified tail bound.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{DecayParams, InitialDatum, Phase};

use super::oscillatory::{integrate_weighted, WeightedIntegrand};
use super::{check_tol, QuadOptions, QuadResult};

/// Truncation of the frequency axis around the singular point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub lo: f64,
    pub hi: f64,
    /// Bound on the discarded tails.
    pub tail_bound: f64,
}

/// `∫_P^∞ M q^(mu-1-alpha) dq`.
fn absolute_tail(dp: &DecayParams, mu: f64, p: f64) -> f64 {
    dp.m * p.powf(mu - dp.alpha) / (dp.alpha - mu)
}

/// Radius where the absolute tail drops to `budget`.
fn absolute_radius(dp: &DecayParams, mu: f64, budget: f64) -> f64 {
    if dp.m == 0.0 {
        return 1.0;
    }
    (budget * (dp.alpha - mu) / dp.m).powf(1.0 / (mu - dp.alpha))
}

/// Integration by parts on a tail where ψ' is monotone with `|ψ'| >= m`:
/// `(3 sup|U| + ||U'||_L1) / (|ω| m)`.
fn oscillatory_tail(dp: &DecayParams, mu: f64, p: f64, omega: f64, m: f64) -> f64 {
    let s = dp.alpha + 1.0 - mu;
    let sup = dp.m * p.powf(-s);
    let k0 = p.floor().max(2.0);
    let series = k0.powf(-s) + k0.powf(1.0 - s) / (dp.alpha - mu);
    let var = (1.0 - mu) * dp.m * p.powf(-s) / s + 2f64.powf(1.0 - mu) * dp.m_prime * series;
    (3.0 * sup + var) / (omega.abs() * m)
}

/// Chooses how far from the singular point to integrate on each unbounded side.
///
/// Each side's discarded tail is at most `tol/4`. The absolute majorant
/// always applies; when the phase carries tail limits and ω ≠ 0 an
/// integration-by-parts bound can justify a much shorter range.
pub fn truncation_radius(d: &InitialDatum, ph: &Phase, omega: f64, tol: f64) -> Result<Truncation> {
    let ps = d.singular_point;
    let sup = d.support;
    if sup.is_bounded() {
        return Ok(Truncation {
            lo: sup.lo,
            hi: sup.hi,
            tail_bound: 0.0,
        });
    }
    let dp = d.decay.ok_or(Error::MissingMajorant)?;
    let mu = d.mu;
    let budget = 0.25 * tol;
    let p_abs = absolute_radius(&dp, mu, budget);
    let start = dp.r.ceil().max(3.0);

    let side = |sign: f64| -> (f64, f64) {
        let mut best = (p_abs.max(start), absolute_tail(&dp, mu, p_abs.max(start)));
        let Some(limits) = ph.dpsi_limits else {
            return best;
        };
        if omega == 0.0 {
            return best;
        }
        let limit = if sign > 0.0 { limits.1 } else { limits.0 };
        let mut p = start;
        if let Some(p0) = ph.p0() {
            p = p.max(sign * (p0 - ps) + 1.0);
        }
        while p < best.0 {
            let q = ps + sign * p;
            let m = ph.deriv(q).abs().min(limit.abs());
            if m > 0.0 {
                let t = oscillatory_tail(&dp, mu, p, omega, m);
                if t <= budget {
                    best = (p, t);
                    break;
                }
            }
            p *= 1.1;
        }
        best
    };
    let (mut lo, mut hi, mut tail) = (sup.lo, sup.hi, 0.0);
    if !sup.lo.is_finite() {
        let (p, t) = side(-1.0);
        lo = ps - p;
        tail += t;
    }
    if !sup.hi.is_finite() {
        let (p, t) = side(1.0);
        hi = ps + p;
        tail += t;
    }
    Ok(Truncation {
        lo: lo.max(sup.lo),
        hi: hi.min(sup.hi),
        tail_bound: tail,
    })
}

/// `∫ Fu0(p) e^{iωψ(p)} dp` over the datum's support.
pub fn improper_oscillatory_integral(d: &InitialDatum, ph: &Phase, omega: f64, tol: f64) -> Result<QuadResult> {
    improper_oscillatory_integral_with(d, ph, omega, &QuadOptions::with_tol(tol))
}

pub fn improper_oscillatory_integral_with(
    d: &InitialDatum,
    ph: &Phase,
    omega: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    check_tol(opts.tol)?;
    if !omega.is_finite() {
        return Err(Error::Parameter("omega must be finite".into()));
    }
    let cut = truncation_radius(d, ph, omega, opts.tol)?;
    let factor = |p: f64| d.factor.eval(p);
    let psi = |p: f64| ph.eval(p);
    let dpsi = |p: f64| ph.deriv(p);
    let job = WeightedIntegrand {
        factor: &factor,
        singular_point: d.singular_point,
        mu: d.mu,
        phase: &psi,
        dphase: &dpsi,
        omega,
        stationary: ph.p0(),
    };
    let inner = QuadOptions {
        tol: 0.5 * opts.tol,
        ..*opts
    };
    let mut r = integrate_weighted(&job, cut.lo, cut.hi, &inner);
    r.abs_error_estimate += cut.tail_bound;
    if r.value.re.is_nan() {
        r.value = Complex64::new(f64::NAN, f64::NAN);
    }
    Ok(r)
}

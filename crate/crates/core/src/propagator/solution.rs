use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{Amplitude, DatumKind, InitialDatum, Phase, Support, Symbol};
use crate::quadrature::{improper_oscillatory_integral, oscillatory_integral, QuadResult};

/// `∫ Fu0(p) e^{iωψ(p)} dp`, through the bounded-interval routine when the
/// datum is a band singular at its left end.
fn integrate(d: &InitialDatum, ph: &Phase, omega: f64, tol: f64) -> Result<QuadResult> {
    let sup = d.support;
    if sup.lo == sup.hi {
        return Ok(QuadResult::zero());
    }
    if d.kind == DatumKind::C1 && sup.is_bounded() && d.singular_point == sup.lo {
        let a = Amplitude::new_unchecked_factor(sup.lo, sup.hi, d.mu, d.factor.clone())?;
        oscillatory_integral(&a, ph, omega, tol)
    } else {
        improper_oscillatory_integral(d, ph, omega, tol)
    }
}

/// `u(t, x) = (1/2π) ∫ Fu0(p) e^{-itf(p) + ixp} dp`.
///
/// For t ≠ 0 the large parameter is `|t|` and the phase is the drift phase
/// of the ray `x = vt`; at t = 0 this is the inverse Fourier transform.
/// Negative t is accepted and evaluates the backward solution.
pub fn solution_eval(s: &Symbol, d: &InitialDatum, t: f64, x: f64, tol: f64) -> Result<QuadResult> {
    if !t.is_finite() || !x.is_finite() {
        return Err(Error::Parameter(format!("(t, x) = ({t}, {x}) must be finite")));
    }
    let r = if t == 0.0 {
        integrate(d, &Phase::linear(0.0, x)?, 1.0, tol)?
    } else if t > 0.0 {
        integrate(d, &s.drift_phase(x / t), t, tol)?
    } else {
        // e^{-itf} = e^{i|t|f}: the drift phase of -f.
        integrate(d, &s.reversed_drift_phase(x / -t), -t, tol)?
    };
    Ok(r.scaled(0.5 / PI))
}

/// The solution for the symbol `-f`, `(1/2π) ∫ Fu0 e^{itf + ixp} dp`,
/// as `conj(u_f[conj Fu0](t, -x))`.
pub fn reversed_solution_eval(s: &Symbol, d: &InitialDatum, t: f64, x: f64, tol: f64) -> Result<QuadResult> {
    Ok(solution_eval(s, &d.conj(), t, -x, tol)?.conj())
}

/// Values of the solution along the ray `x = vt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySample {
    pub v: f64,
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub converged: Vec<bool>,
}

impl RaySample {
    /// `(t, |u(t, vt)|)` pairs.
    pub fn moduli(&self) -> Vec<(f64, f64)> {
        self.times
            .iter()
            .zip(&self.values)
            .map(|(&t, u)| (t, u.norm()))
            .collect()
    }

    pub fn result_at(&self, i: usize) -> QuadResult {
        QuadResult {
            value: self.values[i],
            abs_error_estimate: self.errors[i],
            panels_used: 0,
            converged: self.converged[i],
        }
    }
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if let Some(&t) = times.iter().find(|&&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::Parameter(format!("ray time {t} is not positive")));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Parameter("ray times must be strictly increasing".into()));
    }
    Ok(())
}

pub fn ray_sweep(s: &Symbol, d: &InitialDatum, v: f64, times: &[f64], tol: f64) -> Result<RaySample> {
    if !v.is_finite() {
        return Err(Error::Parameter(format!("ray slope {v} is not finite")));
    }
    check_times(times)?;
    let results: Vec<QuadResult> = times
        .par_iter()
        .map(|&t| solution_eval(s, d, t, v * t, tol))
        .collect::<Result<_>>()?;
    Ok(RaySample {
        v,
        times: times.to_vec(),
        values: results.iter().map(|r| r.value).collect(),
        errors: results.iter().map(|r| r.abs_error_estimate).collect(),
        converged: results.iter().map(|r| r.converged).collect(),
    })
}

/// Splits Fu0 by the indicators of `[b_k, b_{k+1})`, the outer pieces
/// reaching to the ends of the support.
pub fn band_decompose(d: &InitialDatum, breakpoints: &[f64]) -> Result<Vec<InitialDatum>> {
    if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Parameter(
            "breakpoints must be finite and strictly increasing".into(),
        ));
    }
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend_from_slice(breakpoints);
    edges.push(f64::INFINITY);
    Ok(edges
        .windows(2)
        .filter_map(|w| {
            let piece = Support {
                lo: w[0],
                hi: w[1],
                lo_closed: true,
                hi_closed: false,
            };
            d.restricted(piece)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::RegularFactor;

    const TOL: f64 = 1e-10;

    #[test]
    fn inverse_transform_of_indicator() {
        let s = Symbol::schrodinger();
        let d = InitialDatum::indicator(-1.0, 1.0).unwrap();
        let u = solution_eval(&s, &d, 0.0, 0.0, TOL).unwrap();
        assert!((u.value - Complex64::new(1.0 / PI, 0.0)).norm() < 1e-12);
        for x in [0.3, -2.0, 7.5] {
            let u = solution_eval(&s, &d, 0.0, x, TOL).unwrap();
            assert!((u.value - Complex64::new(x.sin() / (PI * x), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_datum() {
        let s = Symbol::schrodinger();
        let d = InitialDatum::c1(0.0, 1.0, 1.0, RegularFactor::constant(0.0)).unwrap();
        let r = ray_sweep(&s, &d, 1.0, &[1.0, 10.0, 100.0], TOL).unwrap();
        assert!(r.values.iter().all(|u| *u == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn backward_time_is_reversed_symbol() {
        let s = Symbol::schrodinger();
        let d = InitialDatum::c1(0.0, 1.0, 0.5, RegularFactor::constant(1.0)).unwrap();
        let a = solution_eval(&s, &d, -3.0, 1.5, TOL).unwrap().value;
        let b = reversed_solution_eval(&s, &d, 3.0, 1.5, TOL).unwrap().value;
        assert!((a - b).norm() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn decomposition_pieces() {
        let d = InitialDatum::indicator(0.0, 2.0).unwrap();
        let parts = band_decompose(&d, &[1.0]).unwrap();
        assert_eq!(parts.len(), 2);
        let (a, b) = (parts[0].support, parts[1].support);
        assert_eq!((a.lo, a.hi, a.lo_closed, a.hi_closed), (0.0, 1.0, true, false));
        assert_eq!((b.lo, b.hi, b.lo_closed, b.hi_closed), (1.0, 2.0, true, true));
        assert_eq!(band_decompose(&d, &[]).unwrap()[0].support, d.support);
        assert!(band_decompose(&d, &[1.0, 0.5]).is_err());
        for p in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5] {
            let total: Complex64 = parts.iter().map(|q| q.eval(p).unwrap()).sum();
            assert_eq!(total, d.eval(p).unwrap());
        }
    }

    #[test]
    fn rejects_bad_times() {
        let s = Symbol::schrodinger();
        let d = InitialDatum::indicator(0.0, 1.0).unwrap();
        assert!(ray_sweep(&s, &d, 1.0, &[1.0, 1.0], TOL).is_err());
        assert!(ray_sweep(&s, &d, 1.0, &[0.0, 1.0], TOL).is_err());
    }
}

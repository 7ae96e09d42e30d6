//! Norms entering the constants, preferring exact values over sampled ones.

use crate::error::{Error, Result};
use crate::functions::{Phase, RegularFactor, Symbol};
use crate::quadrature::norms;

/// `(sup |ũ|, ||ũ'||_L1)` on `[lo, hi]`.
///
/// User-supplied values win, then closed forms from the factor's spec, then
/// quadrature estimates.
pub fn factor_norms(f: &RegularFactor, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let exact = f.exact_norms(lo, hi);
    let sup = match f.analytic_sup.or(exact.map(|e| e.0)) {
        Some(s) => s,
        None => {
            let g = f.eval_fn();
            norms::sup_norm_complex(&*g, lo, hi)
        }
    };
    let l1 = match f.analytic_l1_deriv.or(exact.map(|e| e.1)) {
        Some(v) => v,
        None => {
            let d = f.deriv_fn();
            let (v, ok) = norms::l1_norm(&|p| d(p).norm(), lo, hi);
            if !ok {
                return Err(Error::Assumption(format!("||ũ'||_L1 on [{lo}, {hi}] did not converge")));
            }
            v
        }
    };
    Ok((sup, l1))
}

/// `min f''` on `[lo, hi]`, exact when f'' is known to be unimodal.
pub fn min_fsecond(s: &Symbol, lo: f64, hi: f64) -> f64 {
    if s.fsecond_peak.is_some() && lo.is_finite() && hi.is_finite() {
        return s.fsecond(lo).min(s.fsecond(hi));
    }
    norms::min_abs(&|p| s.fsecond(p), lo, hi)
}

/// `min |ψ̃|` on `[lo, hi]`.
pub fn min_factor(ph: &Phase, lo: f64, hi: f64) -> f64 {
    if let Some(m) = ph.factor_modulus {
        return m;
    }
    norms::min_abs(&|p| ph.nonvanishing_factor(p), lo, hi)
}

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::factor::RealFn;
use super::phase::{Phase, Stationary};

/// Growth condition `c_minus |p|^-beta_minus <= f''(p) <= c_plus |p|^-beta_plus` for `|p| >= R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

/// A convex Fourier-multiplier symbol f with f' and f''.
#[derive(Clone)]
pub struct Symbol {
    name: String,
    f: RealFn,
    fprime: RealFn,
    fsecond: RealFn,
    pub growth: Option<Growth>,
    /// Limits of f' at -∞ and +∞. `None` means f' is onto ℝ.
    pub fprime_limits: Option<(f64, f64)>,
    /// f'' is nondecreasing left of this point and nonincreasing right of it,
    /// so its minimum on an interval sits at an endpoint.
    pub fsecond_peak: Option<f64>,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("name", &self.name)
            .field("growth", &self.growth)
            .field("fprime_limits", &self.fprime_limits)
            .finish_non_exhaustive()
    }
}

impl Symbol {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        fprime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        fsecond: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Symbol {
            name: name.into(),
            f: Arc::new(f),
            fprime: Arc::new(fprime),
            fsecond: Arc::new(fsecond),
            growth: None,
            fprime_limits: None,
            fsecond_peak: None,
        }
    }

    /// `f(p) = p^2`.
    pub fn schrodinger() -> Self {
        let mut s = Symbol::new("schrodinger", |p| p * p, |p| 2.0 * p, |_| 2.0);
        s.fsecond_peak = Some(0.0);
        s
    }

    /// `f(p) = sqrt(c^4 + c^2 p^2)`.
    pub fn klein_gordon(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Parameter(format!("Klein-Gordon needs c > 0, got {c}")));
        }
        let c2 = c * c;
        let mut s = Symbol::new(
            format!("klein-gordon c={c}"),
            move |p| c * (c2 + p * p).sqrt(),
            move |p| c * p / (c2 + p * p).sqrt(),
            move |p| {
                let q = c2 + p * p;
                c * c2 / (q * q.sqrt())
            },
        );
        s.growth = Some(Growth {
            beta_plus: 3.0,
            beta_minus: 3.0,
            c_plus: c * c2,
            c_minus: 2f64.powf(-1.5) * c * c2,
            r: c,
        });
        s.fprime_limits = Some((-c, c));
        s.fsecond_peak = Some(0.0);
        Ok(s)
    }

    /// `f(p) = Σ coeffs[k] p^k`, checked for f'' > 0.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        let n = coeffs.len();
        if n < 3 || coeffs[n - 1] <= 0.0 || !(n - 1).is_multiple_of(2) {
            return Err(Error::Parameter(
                "polynomial symbol needs even degree >= 2 with positive leading coefficient".into(),
            ));
        }
        let d1: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
        let d2: Vec<f64> = d1.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
        let ev = |cs: Vec<f64>| move |p: f64| cs.iter().rev().fold(0.0, |a, &c| a * p + c);
        let s = Symbol::new(format!("polynomial {coeffs:?}"), ev(coeffs), ev(d1), ev(d2));
        s.validate()?;
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn f(&self, p: f64) -> f64 {
        (self.f)(p)
    }

    #[inline]
    pub fn fprime(&self, p: f64) -> f64 {
        (self.fprime)(p)
    }

    #[inline]
    pub fn fsecond(&self, p: f64) -> f64 {
        (self.fsecond)(p)
    }

    /// `(a, b)` with f'(ℝ) = (a, b), possibly infinite.
    pub fn fprime_range(&self) -> (f64, f64) {
        self.fprime_limits.unwrap_or((f64::NEG_INFINITY, f64::INFINITY))
    }

    /// Sampled check of f'' > 0, the growth condition and the f' limits.
    pub fn validate(&self) -> Result<()> {
        for i in 0..=2000 {
            let p = -50.0 + 0.05 * i as f64;
            let s = self.fsecond(p);
            if !(s > 0.0) {
                return Err(Error::Assumption(format!("f'' = {s} <= 0 at p = {p}")));
            }
        }
        if let Some(g) = self.growth {
            if !(g.beta_minus >= g.beta_plus && g.beta_plus > 1.0) {
                return Err(Error::Assumption("growth needs beta_minus >= beta_plus > 1".into()));
            }
            if !(g.c_plus >= g.c_minus && g.c_minus > 0.0) || !(g.r >= 1.0) {
                return Err(Error::Assumption(
                    "growth needs c_plus >= c_minus > 0 and R >= 1".into(),
                ));
            }
            for i in 0..=400 {
                let a = g.r * 100f64.powf(i as f64 / 400.0);
                for p in [a, -a] {
                    let s = self.fsecond(p);
                    let lo = g.c_minus * a.powf(-g.beta_minus);
                    let hi = g.c_plus * a.powf(-g.beta_plus);
                    if s < lo * (1.0 - 1e-12) || s > hi * (1.0 + 1e-12) {
                        return Err(Error::Assumption(format!("growth bound fails at p = {p}")));
                    }
                }
            }
        }
        if let Some((a, b)) = self.fprime_limits {
            if !(a < b) {
                return Err(Error::Assumption("f' limits need a < b".into()));
            }
            let span = b - a;
            if (self.fprime(-1e6) - a).abs() > 1e-6 * span || (self.fprime(1e6) - b).abs() > 1e-6 * span {
                return Err(Error::Assumption("f' does not approach its declared limits".into()));
            }
        }
        Ok(())
    }

    /// `(f')^{-1}(v)` by bracket doubling, bisection and a Newton polish.
    pub fn invert_fprime(&self, v: f64) -> Result<f64> {
        let (a, b) = self.fprime_range();
        let range_err = Error::Range { v, lo: a, hi: b };
        if !(v > a && v < b) || !v.is_finite() {
            return Err(range_err);
        }
        let fp = |p: f64| self.fprime(p);
        let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
        while fp(lo) > v {
            lo *= 2.0;
            if lo < -1e300 {
                return Err(range_err);
            }
        }
        while fp(hi) < v {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(range_err);
            }
        }
        for _ in 0..2200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if fp(mid) < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut p = 0.5 * (lo + hi);
        for _ in 0..4 {
            let d = self.fsecond(p);
            if !(d > 0.0) {
                break;
            }
            let q = p - (fp(p) - v) / d;
            if !(q >= lo && q <= hi) {
                break;
            }
            p = q;
        }
        let tol = 1e-12 * v.abs().max(1.0);
        if (fp(p) - v).abs() > tol {
            // Bisection endpoint may be closer than the polished point.
            let best = [lo, hi, p]
                .into_iter()
                .min_by(|x, y| (fp(*x) - v).abs().total_cmp(&(fp(*y) - v).abs()))
                .unwrap();
            if (fp(best) - v).abs() > tol {
                return Err(Error::Assumption(format!(
                    "f' inversion at v = {v} did not reach tolerance"
                )));
            }
            p = best;
        }
        Ok(p)
    }

    /// ψ(p) = v p - f(p).
    pub fn drift_phase(&self, v: f64) -> Phase {
        self.signed_drift_phase(v, 1.0)
    }

    /// ψ(p) = v p + f(p), the drift phase of the symbol -f.
    pub fn reversed_drift_phase(&self, v: f64) -> Phase {
        self.signed_drift_phase(v, -1.0)
    }

    fn signed_drift_phase(&self, v: f64, sigma: f64) -> Phase {
        let (f, fp, fpp) = (self.f.clone(), self.fprime.clone(), self.fsecond.clone());
        let eval: RealFn = Arc::new(move |p| v * p - sigma * f(p));
        let fp1 = fp.clone();
        let deriv: RealFn = Arc::new(move |p| v - sigma * fp1(p));
        let (a, b) = self.fprime_range();
        let limits = (v - sigma * a, v - sigma * b);
        let label = format!(
            "drift {} v={v}{}",
            self.name,
            if sigma < 0.0 { " reversed" } else { "" }
        );
        let target = sigma * v;
        match self.invert_fprime(target) {
            Ok(p0) => {
                let window = 1e-6 * p0.abs().max(1.0);
                let fpp0 = fpp(p0);
                let factor: RealFn = Arc::new(move |p| {
                    let d = p - p0;
                    if d.abs() > window {
                        (v - sigma * fp(p)) / d.abs()
                    } else if d == 0.0 {
                        -sigma * fpp0
                    } else {
                        -sigma * d.signum() * fpp(0.5 * (p + p0))
                    }
                });
                let st = Stationary {
                    p0,
                    rho: 2.0,
                    left_factor: sigma * fpp0,
                    right_factor: -sigma * fpp0,
                };
                let mut ph = Phase::from_parts(eval, deriv, Some(factor), Some(st)).with_label(label);
                ph.dpsi_limits = Some(limits);
                ph
            }
            Err(_) => {
                let floor = if target <= a {
                    a - target
                } else if target >= b {
                    target - b
                } else {
                    0.0
                };
                let mut ph = Phase::from_parts(eval, deriv, None, None).with_label(label);
                ph.dpsi_limits = Some(limits);
                ph.dpsi_floor = Some(floor);
                ph
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schrodinger_inversion() {
        let s = Symbol::schrodinger();
        assert_eq!(s.invert_fprime(3.0).unwrap(), 1.5);
        assert_eq!(s.drift_phase(2.0).p0(), Some(1.0));
    }

    #[test]
    fn klein_gordon_inversion_and_range() {
        let s = Symbol::klein_gordon(1.0).unwrap();
        s.validate().unwrap();
        assert_eq!(s.invert_fprime(0.0).unwrap(), 0.0);
        assert!((s.invert_fprime(0.6).unwrap() - 0.75).abs() < 1e-12);
        let p0 = s.drift_phase(0.5f64.sqrt()).p0().unwrap();
        assert!((p0 - 1.0).abs() < 1e-12);
        assert!(matches!(s.invert_fprime(2.0), Err(Error::Range { .. })));
        let ph = s.drift_phase(2.0);
        assert!(ph.stationary.is_none());
        assert_eq!(ph.dpsi_floor, Some(1.0));
    }

    #[test]
    fn drift_factor_is_continuous_across_window() {
        let s = Symbol::klein_gordon(1.0).unwrap();
        let ph = s.drift_phase(0.3);
        let st = ph.stationary.unwrap();
        assert!(st.left_factor > 0.0 && st.right_factor < 0.0);
        let p0 = st.p0;
        for &d in &[1e-3, 1e-5, 5e-7, 1e-8] {
            let r = ph.nonvanishing_factor(p0 + d);
            let l = ph.nonvanishing_factor(p0 - d);
            assert!((r - st.right_factor).abs() < 2e-3, "{d}: {r}");
            assert!((l - st.left_factor).abs() < 2e-3, "{d}: {l}");
        }
        ph.validate_on(p0 - 3.0, p0 + 3.0, 1000).unwrap();
    }

    #[test]
    fn reversed_drift_has_opposite_curvature() {
        let s = Symbol::schrodinger();
        let ph = s.reversed_drift_phase(2.0);
        assert_eq!(ph.p0(), Some(-1.0));
        assert_eq!(ph.eval(1.0), 3.0);
        let st = ph.stationary.unwrap();
        assert_eq!((st.left_factor, st.right_factor), (-2.0, 2.0));
    }

    #[test]
    fn polynomial_symbol() {
        let s = Symbol::polynomial(vec![0.0, 0.0, 0.5, 0.0, 1.0 / 12.0]).unwrap();
        assert!((s.fsecond(1.0) - 2.0).abs() < 1e-15);
        let p = s.invert_fprime(10.0).unwrap();
        assert!((s.fprime(p) - 10.0).abs() < 1e-11);
        assert!(Symbol::polynomial(vec![0.0, 0.0, -1.0]).is_err());
    }
}

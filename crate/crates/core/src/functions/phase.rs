use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::factor::RealFn;

/// Stationary point data: `ψ'(p) = |p - p0|^(rho-1) ψ̃(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationary {
    pub p0: f64,
    pub rho: f64,
    /// Limit of ψ̃ from the left of `p0`.
    pub left_factor: f64,
    /// Limit of ψ̃ from the right of `p0`.
    pub right_factor: f64,
}

/// A real phase ψ with its derivative and, when it has one, its stationary
/// point and non-vanishing factor ψ̃.
#[derive(Clone)]
pub struct Phase {
    eval: RealFn,
    deriv: RealFn,
    factor: Option<RealFn>,
    pub stationary: Option<Stationary>,
    /// Open interval on which the phase is defined.
    pub domain: (f64, f64),
    /// Limits of ψ' at -∞ and +∞, when known. Used for tail control of
    /// improper integrals, which also assumes ψ' is monotone on each tail.
    pub dpsi_limits: Option<(f64, f64)>,
    /// Known lower bound on |ψ'| when there is no stationary point.
    pub dpsi_floor: Option<f64>,
    /// Set when |ψ̃| is constant, so min |ψ̃| needs no sampling.
    pub factor_modulus: Option<f64>,
    label: String,
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Phase")
            .field("label", &self.label)
            .field("stationary", &self.stationary)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

const WHOLE_LINE: (f64, f64) = (f64::NEG_INFINITY, f64::INFINITY);

impl Phase {
    /// Phase with a stationary point, from explicit callables.
    pub fn with_stationary(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        factor: impl Fn(f64) -> f64 + Send + Sync + 'static,
        p0: f64,
        rho: f64,
        domain: (f64, f64),
    ) -> Result<Self> {
        if !(rho > 1.0) {
            return Err(Error::Parameter(format!("phase order needs rho > 1, got {rho}")));
        }
        let factor: RealFn = Arc::new(factor);
        let h = 1e-9 * p0.abs().max(1.0);
        let st = Stationary {
            p0,
            rho,
            left_factor: factor(p0 - h),
            right_factor: factor(p0 + h),
        };
        Ok(Phase {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            factor: Some(factor),
            stationary: Some(st),
            domain,
            dpsi_limits: None,
            dpsi_floor: None,
            factor_modulus: None,
            label: "custom".into(),
        })
    }

    /// Phase without a stationary point on its domain.
    pub fn without_stationary(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
    ) -> Self {
        Phase {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            factor: None,
            stationary: None,
            domain,
            dpsi_limits: None,
            dpsi_floor: None,
            factor_modulus: None,
            label: "custom".into(),
        }
    }

    /// `scale·|p-p0|^rho/rho` when `even`, otherwise `scale·sgn(p-p0)|p-p0|^rho/rho`.
    ///
    /// The even variant has ψ̃ = ±scale, switching sign at `p0`; the odd one has ψ̃ ≡ scale.
    pub fn power(p0: f64, rho: f64, even: bool, scale: f64) -> Result<Self> {
        if !(rho > 1.0) || !(scale != 0.0) || !scale.is_finite() {
            return Err(Error::Parameter(format!(
                "power phase needs rho > 1 and nonzero scale, got rho={rho}, scale={scale}"
            )));
        }
        let sgn = move |p: f64| if p >= p0 { 1.0 } else { -1.0 };
        let mut ph = if even {
            Phase::with_stationary(
                move |p| scale * (p - p0).abs().powf(rho) / rho,
                move |p| scale * sgn(p) * (p - p0).abs().powf(rho - 1.0),
                move |p| scale * sgn(p),
                p0,
                rho,
                WHOLE_LINE,
            )?
        } else {
            Phase::with_stationary(
                move |p| scale * sgn(p) * (p - p0).abs().powf(rho) / rho,
                move |p| scale * (p - p0).abs().powf(rho - 1.0),
                move |_| scale,
                p0,
                rho,
                WHOLE_LINE,
            )?
        };
        ph.dpsi_limits = Some(if even {
            (-scale * f64::INFINITY, scale * f64::INFINITY)
        } else {
            (scale * f64::INFINITY, scale * f64::INFINITY)
        });
        ph.factor_modulus = Some(scale.abs());
        ph.label = format!(
            "power p0={p0} rho={rho}{}{}",
            if even { "" } else { " odd" },
            if scale == 1.0 {
                String::new()
            } else {
                format!(" scale={scale}")
            }
        );
        Ok(ph)
    }

    /// `a0 + a1 p + a2 p^2`; a linear phase when `a2 = 0`.
    pub fn quadratic(a0: f64, a1: f64, a2: f64) -> Result<Self> {
        if a2 == 0.0 {
            return Phase::linear(a0, a1);
        }
        let p0 = -a1 / (2.0 * a2);
        let mut ph = Phase::with_stationary(
            move |p| a0 + p * (a1 + a2 * p),
            move |p| a1 + 2.0 * a2 * p,
            move |p| if p >= p0 { 2.0 * a2 } else { -2.0 * a2 },
            p0,
            2.0,
            WHOLE_LINE,
        )?;
        ph.dpsi_limits = Some((-a2 * f64::INFINITY, a2 * f64::INFINITY));
        ph.factor_modulus = Some(2.0 * a2.abs());
        ph.label = format!("quadratic {a0} {a1} {a2}");
        Ok(ph)
    }

    /// `offset + slope·p`. A zero slope gives a constant phase.
    pub fn linear(offset: f64, slope: f64) -> Result<Self> {
        if !slope.is_finite() || !offset.is_finite() {
            return Err(Error::Parameter("linear phase needs finite coefficients".into()));
        }
        let mut ph = Phase::without_stationary(move |p| offset + slope * p, move |_| slope, WHOLE_LINE);
        ph.dpsi_limits = Some((slope, slope));
        ph.dpsi_floor = Some(slope.abs());
        ph.label = format!("linear {offset} {slope}");
        Ok(ph)
    }

    pub(crate) fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub(crate) fn from_parts(
        eval: RealFn,
        deriv: RealFn,
        factor: Option<RealFn>,
        stationary: Option<Stationary>,
    ) -> Self {
        Phase {
            eval,
            deriv,
            factor,
            stationary,
            domain: WHOLE_LINE,
            dpsi_limits: None,
            dpsi_floor: None,
            factor_modulus: None,
            label: "custom".into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, p: f64) -> f64 {
        (self.eval)(p)
    }

    #[inline]
    pub fn deriv(&self, p: f64) -> f64 {
        (self.deriv)(p)
    }

    /// ψ̃(p). Phases without a stationary point return ψ'(p).
    #[inline]
    pub fn nonvanishing_factor(&self, p: f64) -> f64 {
        match &self.factor {
            Some(g) => g(p),
            None => self.deriv(p),
        }
    }

    pub fn p0(&self) -> Option<f64> {
        self.stationary.map(|s| s.p0)
    }

    pub fn eval_fn(&self) -> RealFn {
        self.eval.clone()
    }

    pub fn deriv_fn(&self) -> RealFn {
        self.deriv.clone()
    }

    /// The phase `-ψ`.
    pub fn negated(&self) -> Self {
        let (e, d) = (self.eval.clone(), self.deriv.clone());
        Phase {
            eval: Arc::new(move |p| -e(p)),
            deriv: Arc::new(move |p| -d(p)),
            factor: self.factor.clone().map(|g| -> RealFn { Arc::new(move |p| -g(p)) }),
            stationary: self.stationary.map(|s| Stationary {
                left_factor: -s.left_factor,
                right_factor: -s.right_factor,
                ..s
            }),
            domain: self.domain,
            dpsi_limits: self.dpsi_limits.map(|(a, b)| (-a, -b)),
            dpsi_floor: self.dpsi_floor,
            factor_modulus: self.factor_modulus,
            label: format!("-({})", self.label),
        }
    }

    /// The phase `ψ + c`.
    pub fn shifted(&self, c: f64) -> Self {
        let e = self.eval.clone();
        Phase {
            eval: Arc::new(move |p| e(p) + c),
            label: format!("({}) + {c}", self.label),
            ..self.clone()
        }
    }

    /// Sampled check of the structural invariants on `[lo, hi]`.
    pub fn validate_on(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        if !(lo < hi) || lo < self.domain.0 || hi > self.domain.1 {
            return Err(Error::Parameter(format!(
                "interval [{lo}, {hi}] is not inside the phase domain"
            )));
        }
        let n = samples.max(3);
        let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        if let Some(st) = self.stationary {
            for &p in &grid {
                let g = self.nonvanishing_factor(p);
                if !(g.abs() > 0.0) || !g.is_finite() {
                    return Err(Error::Assumption(format!("ψ̃ vanishes at p = {p}")));
                }
                if p == st.p0 {
                    continue;
                }
                let want = self.deriv(p);
                let got = (p - st.p0).abs().powf(st.rho - 1.0) * g;
                if (want - got).abs() > 1e-8 * want.abs().max(got.abs()).max(f64::MIN_POSITIVE) {
                    return Err(Error::Assumption(format!(
                        "ψ' = |p-p0|^(rho-1) ψ̃ fails at p = {p}: {want} vs {got}"
                    )));
                }
            }
        }
        // ψ' monotone on each side of p0.
        let split = self.p0().unwrap_or(f64::NEG_INFINITY);
        let left: Vec<f64> = grid.iter().copied().filter(|&p| p < split).collect();
        let right: Vec<f64> = grid.iter().copied().filter(|&p| p > split).collect();
        for pts in [left, right] {
            let diffs: Vec<f64> = pts
                .windows(2)
                .map(|w| self.deriv(w[1]) - self.deriv(w[0]))
                .filter(|d| d.abs() > 1e-13)
                .collect();
            if diffs.iter().any(|&d| d > 0.0) && diffs.iter().any(|&d| d < 0.0) {
                return Err(Error::Assumption("ψ' is not monotone on one side of p0".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_power_has_sign_switching_factor() {
        let ph = Phase::power(0.5, 2.0, true, 1.0).unwrap();
        let st = ph.stationary.unwrap();
        assert_eq!(st.left_factor, -1.0);
        assert_eq!(st.right_factor, 1.0);
        assert_eq!(ph.nonvanishing_factor(0.5), 1.0);
        assert!((ph.deriv(0.2) + 0.3).abs() < 1e-15);
        ph.validate_on(-1.0, 2.0, 1000).unwrap();
    }

    #[test]
    fn odd_power_is_monotone_through_p0() {
        let ph = Phase::power(0.0, 3.0, false, 1.0).unwrap();
        assert!((ph.eval(-2.0) + 8.0 / 3.0).abs() < 1e-14);
        assert_eq!(ph.nonvanishing_factor(-1.0), 1.0);
        ph.validate_on(-1.0, 1.0, 1000).unwrap();
    }

    #[test]
    fn quadratic_stationary_point() {
        let ph = Phase::quadratic(0.0, 4.0, -1.0).unwrap();
        let st = ph.stationary.unwrap();
        assert_eq!(st.p0, 2.0);
        assert_eq!(ph.deriv(0.0), 4.0);
        assert_eq!(ph.nonvanishing_factor(0.0), 2.0);
        ph.validate_on(0.0, 1.0, 1000).unwrap();
    }

    #[test]
    fn negation_and_shift() {
        let ph = Phase::power(0.0, 2.0, true, 1.0).unwrap();
        let n = ph.negated();
        assert_eq!(n.eval(2.0), -2.0);
        assert_eq!(n.stationary.unwrap().right_factor, -1.0);
        let s = ph.shifted(3.0);
        assert_eq!(s.eval(2.0), 5.0);
        assert_eq!(s.deriv(2.0), 2.0);
    }

    #[test]
    fn validation_rejects_broken_factorization() {
        let ph = Phase::with_stationary(|p| p * p, |p| 2.0 * p, |_| 1.0, 0.0, 2.0, WHOLE_LINE).unwrap();
        assert!(matches!(ph.validate_on(0.0, 1.0, 100), Err(Error::Assumption(_))));
    }
}

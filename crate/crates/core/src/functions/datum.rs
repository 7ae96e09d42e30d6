use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::norms;

use super::amplitude::Amplitude;
use super::factor::RegularFactor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DatumKind {
    C1,
    C2,
    C3,
}

/// Decay majorant `|ũ(p)| <= M (1 + (p - ps)^2)^(-alpha/2)` and
/// `||ũ'||_L1(n, n+1) <= M' |n|^-alpha` for `|n| >= r`, with `ps` the
/// singular point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub alpha: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "Mprime")]
    pub m_prime: f64,
    pub r: f64,
}

/// Interval on the frequency axis; bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Support {
    pub const LINE: Support = Support {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub fn closed(lo: f64, hi: f64) -> Self {
        Support {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        (p > self.lo || (self.lo_closed && p == self.lo)) && (p < self.hi || (self.hi_closed && p == self.hi))
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn intersect(&self, other: &Support) -> Option<Support> {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        if lo < hi || (lo == hi && lo_closed && hi_closed) {
            Some(Support {
                lo,
                hi,
                lo_closed,
                hi_closed,
            })
        } else {
            None
        }
    }
}

/// Frequency-side initial datum `Fu0(p) = |p - ps|^(mu-1) ũ(p)` restricted to a support.
#[derive(Debug, Clone)]
pub struct InitialDatum {
    pub kind: DatumKind,
    pub singular_point: f64,
    pub mu: f64,
    pub factor: RegularFactor,
    pub decay: Option<DecayParams>,
    pub support: Support,
    label: String,
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("mu must lie in (0, 1], got {mu}")))
    }
}

impl InitialDatum {
    /// Datum supported on the band `[p1, p2]`, singular at `p1`.
    pub fn c1(p1: f64, p2: f64, mu: f64, factor: RegularFactor) -> Result<Self> {
        check_mu(mu)?;
        Amplitude::new(p1, p2, mu, factor.clone())?;
        Ok(InitialDatum {
            kind: DatumKind::C1,
            singular_point: p1,
            mu,
            factor,
            decay: None,
            support: Support::closed(p1, p2),
            label: format!("C1 band=[{p1}, {p2}] mu={mu}"),
        })
    }

    /// Indicator of `[lo, hi]`.
    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        let mut d = InitialDatum::c1(lo, hi, 1.0, RegularFactor::constant(1.0))?;
        d.label = format!("indicator [{lo}, {hi}]");
        Ok(d)
    }

    /// Datum on ℝ singular at `p1` with `0 < mu < 1`.
    pub fn c2(p1: f64, mu: f64, factor: RegularFactor, decay: Option<DecayParams>) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::Parameter(format!("C2 needs 0 < mu < 1, got {mu}")));
        }
        if let Some(dp) = decay {
            check_decay(&dp, mu)?;
        }
        Ok(InitialDatum {
            kind: DatumKind::C2,
            singular_point: p1,
            mu,
            factor,
            decay,
            support: Support::LINE,
            label: format!("C2 p1={p1} mu={mu}"),
        })
    }

    /// Datum on ℝ singular at 0 with an algebraic decay majorant.
    pub fn c3(mu: f64, factor: RegularFactor, params: DecayParams) -> Result<Self> {
        check_mu(mu)?;
        check_decay(&params, mu)?;
        Ok(InitialDatum {
            kind: DatumKind::C3,
            singular_point: 0.0,
            mu,
            factor,
            decay: Some(params),
            support: Support::LINE,
            label: format!("C3 mu={mu} alpha={}", params.alpha),
        })
    }

    /// `|p|^(mu-1) (1 + p^2)^(-alpha/2)`, with `M = 1`, `M' = 2^alpha`, `r = 2`.
    pub fn c3_example(mu: f64, alpha: f64) -> Result<Self> {
        use super::factor::FactorSpec;
        let factor = RegularFactor::from_spec(FactorSpec::InversePower { alpha, center: 0.0 })?;
        let mut d = InitialDatum::c3(
            mu,
            factor,
            DecayParams {
                alpha,
                m: 1.0,
                m_prime: 2f64.powf(alpha),
                r: 2.0,
            },
        )?;
        d.label = format!("c3-example mu={mu} alpha={alpha}");
        Ok(d)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The band `[p1, p2]` when the support is bounded.
    pub fn band(&self) -> Option<(f64, f64)> {
        self.support.is_bounded().then_some((self.support.lo, self.support.hi))
    }

    #[inline]
    pub(crate) fn weight(&self, p: f64) -> f64 {
        if self.mu == 1.0 {
            1.0
        } else {
            (p - self.singular_point).abs().powf(self.mu - 1.0)
        }
    }

    /// Fu0(p); zero off the support.
    pub fn eval(&self, p: f64) -> Result<Complex64> {
        if !self.support.contains(p) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if p == self.singular_point && self.mu < 1.0 {
            return Err(Error::SingularPoint(p));
        }
        Ok(self.weight(p) * self.factor.eval(p))
    }

    pub fn conj(&self) -> Self {
        InitialDatum {
            factor: self.factor.conj(),
            label: format!("conj({})", self.label),
            ..self.clone()
        }
    }

    /// `λ Fu0`; `M` and `M'` scale by `|λ|`.
    pub fn scaled(&self, lambda: Complex64) -> Self {
        let r = lambda.norm();
        InitialDatum {
            factor: self.factor.scaled(lambda),
            decay: self.decay.map(|d| DecayParams {
                m: d.m * r,
                m_prime: d.m_prime * r,
                ..d
            }),
            ..self.clone()
        }
    }

    /// The datum multiplied by the indicator of `s`; `None` when the pieces do not meet.
    pub fn restricted(&self, s: Support) -> Option<Self> {
        self.support.intersect(&s).map(|support| InitialDatum {
            support,
            label: format!("{} on {}", self.label, fmt_support(&support)),
            ..self.clone()
        })
    }

    /// Sampled check of the condition named by `kind`.
    pub fn validate(&self) -> Result<()> {
        check_mu(self.mu)?;
        match self.kind {
            DatumKind::C1 => {
                let (p1, p2) = self
                    .band()
                    .ok_or_else(|| Error::Assumption("C1 datum needs a bounded band".into()))?;
                if self.singular_point != p1 {
                    return Err(Error::Assumption(
                        "C1 singular point must be the band's left end".into(),
                    ));
                }
                if self.mu != 1.0 && !(self.factor.eval(p1).norm() > 0.0) {
                    return Err(Error::Assumption("C1 factor vanishes at p1".into()));
                }
                for i in 0..=1000 {
                    let p = p1 + (p2 - p1) * i as f64 / 1000.0;
                    if !self.factor.eval(p).norm().is_finite() || !self.factor.deriv(p).norm().is_finite() {
                        return Err(Error::Assumption(format!("C1 factor not finite at {p}")));
                    }
                }
                Ok(())
            }
            DatumKind::C2 => {
                if self.mu >= 1.0 {
                    return Err(Error::Assumption("C2 needs mu < 1".into()));
                }
                let c = self.singular_point;
                for i in 0..=20_000 {
                    let p = c - 1000.0 + 0.1 * i as f64;
                    if !self.factor.eval(p).norm().is_finite() {
                        return Err(Error::Assumption(format!("C2 factor not finite at {p}")));
                    }
                }
                if let Some(dp) = self.decay {
                    self.check_majorant(&dp)?;
                }
                Ok(())
            }
            DatumKind::C3 => {
                let dp = self.decay.ok_or(Error::MissingMajorant)?;
                if self.singular_point != 0.0 {
                    return Err(Error::Assumption("C3 singular point is 0".into()));
                }
                self.check_majorant(&dp)
            }
        }
    }

    fn check_majorant(&self, dp: &DecayParams) -> Result<()> {
        check_decay(dp, self.mu)?;
        let c = self.singular_point;
        for i in 0..=20_000 {
            let q = -1000.0 + 0.1 * i as f64;
            let bound = dp.m * (1.0 + q * q).powf(-dp.alpha / 2.0);
            if self.factor.eval(c + q).norm() > bound * (1.0 + 1e-12) {
                return Err(Error::Assumption(format!("|ũ| exceeds its majorant at p = {}", c + q)));
            }
        }
        let n0 = dp.r.max(1.0).ceil() as i64;
        for n in n0..=200 {
            for k in [n, -n] {
                let lo = c + k as f64;
                let (l1, _) = norms::l1_norm(&|p| self.factor.deriv(p).norm(), lo, lo + 1.0);
                let bound = dp.m_prime * (k.unsigned_abs() as f64).powf(-dp.alpha);
                if l1 > bound * (1.0 + 1e-8) {
                    return Err(Error::Assumption(format!(
                        "||ũ'|| on [{lo}, {}] exceeds M'|n|^-alpha",
                        lo + 1.0
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_decay(dp: &DecayParams, mu: f64) -> Result<()> {
    if !(dp.alpha > mu) || !(dp.m >= 0.0) || !(dp.m_prime >= 0.0) || !(dp.r >= 0.0) {
        return Err(Error::Parameter(format!(
            "decay majorant needs alpha > mu and nonnegative M, M', r; got {dp:?}"
        )));
    }
    Ok(())
}

pub(crate) fn fmt_support(s: &Support) -> String {
    format!(
        "{}{}, {}{}",
        if s.lo_closed { '[' } else { '(' },
        s.lo,
        s.hi,
        if s.hi_closed { ']' } else { ')' }
    )
}

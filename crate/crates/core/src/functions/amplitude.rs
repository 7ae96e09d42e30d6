use num_complex::Complex64;

use crate::error::{Error, Result};

use super::factor::RegularFactor;

/// `U(p) = (p - p1)^(mu-1) ũ(p)` on the bounded interval `(p1, p2]`.
#[derive(Debug, Clone)]
pub struct Amplitude {
    pub p1: f64,
    pub p2: f64,
    pub mu: f64,
    pub factor: RegularFactor,
}

impl Amplitude {
    pub fn new(p1: f64, p2: f64, mu: f64, factor: RegularFactor) -> Result<Self> {
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(Error::Parameter(format!("mu must lie in (0, 1], got {mu}")));
        }
        if !(p1 < p2) || !p1.is_finite() || !p2.is_finite() {
            return Err(Error::Parameter(format!(
                "amplitude needs finite p1 < p2, got [{p1}, {p2}]"
            )));
        }
        if mu != 1.0 && !(factor.eval(p1).norm() > 0.0) {
            return Err(Error::Assumption(
                "regular factor vanishes at the singular point".into(),
            ));
        }
        Ok(Amplitude { p1, p2, mu, factor })
    }

    /// Same as [`Amplitude::new`] without the `ũ(p1) != 0` requirement.
    pub fn new_unchecked_factor(p1: f64, p2: f64, mu: f64, factor: RegularFactor) -> Result<Self> {
        let a = Amplitude::new(p1, p2, 1.0, factor)?;
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(Error::Parameter(format!("mu must lie in (0, 1], got {mu}")));
        }
        Ok(Amplitude { mu, ..a })
    }

    pub fn eval(&self, p: f64) -> Result<Complex64> {
        if p == self.p1 {
            if self.mu < 1.0 {
                return Err(Error::SingularPoint(p));
            }
            return Ok(self.factor.eval(p));
        }
        if !(p > self.p1 && p <= self.p2) {
            return Err(Error::Domain {
                p,
                lo: self.p1,
                hi: self.p2,
            });
        }
        Ok(self.weight(p) * self.factor.eval(p))
    }

    #[inline]
    pub(crate) fn weight(&self, p: f64) -> f64 {
        if self.mu == 1.0 {
            1.0
        } else {
            (p - self.p1).powf(self.mu - 1.0)
        }
    }

    pub fn conj(&self) -> Self {
        Amplitude {
            factor: self.factor.conj(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, lambda: Complex64) -> Self {
        Amplitude {
            factor: self.factor.scaled(lambda),
            ..self.clone()
        }
    }
}

use serde::{Deserialize, Serialize};

use crate::bounds::Regime;
use crate::error::{Error, Result};
use crate::functions::Symbol;
use crate::quadrature::norms;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// The open space-time cone `{(t, x) : t > 0, v_min < x/t < v_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    pub v_min: f64,
    pub v_max: f64,
    pub label: String,
}

impl ConeSpec {
    pub fn new(v_min: f64, v_max: f64, label: impl Into<String>) -> Result<Self> {
        if !(v_min < v_max) {
            return Err(Error::Parameter(format!(
                "cone needs v_min < v_max, got ({v_min}, {v_max})"
            )));
        }
        Ok(ConeSpec {
            v_min,
            v_max,
            label: label.into(),
        })
    }

    pub fn classify_velocity(&self, v: f64) -> Membership {
        if v > self.v_min && v < self.v_max {
            Membership::Inside
        } else if v == self.v_min || v == self.v_max {
            Membership::Boundary
        } else {
            Membership::Outside
        }
    }

    /// Points with `t <= 0` are outside every cone.
    pub fn classify(&self, t: f64, x: f64) -> Membership {
        if !(t > 0.0) {
            return Membership::Outside;
        }
        self.classify_velocity(x / t)
    }

    pub fn contains(&self, t: f64, x: f64) -> bool {
        self.classify(t, x) == Membership::Inside
    }

    pub fn regime(&self) -> Regime {
        Regime::cone(self.v_min, self.v_max)
    }

    pub fn complement_regime(&self) -> Regime {
        Regime::complement(self.v_min, self.v_max)
    }
}

/// The cone with velocities `(f'(a), f'(b))`; infinite ends use the limits of f'.
pub fn cone(s: &Symbol, a: f64, b: f64) -> Result<ConeSpec> {
    if !(a < b) {
        return Err(Error::Parameter(format!("cone needs a < b, got ({a}, {b})")));
    }
    let v = |p: f64| {
        if p.is_finite() {
            Ok(s.fprime(p))
        } else {
            fprime_at_infinity(s, p.signum())
        }
    };
    ConeSpec::new(v(a)?, v(b)?, format!("c({a}, {b})"))
}

/// Stored limits, else `f'(0) ± ∫_0^∞ f''(±q) dq` when the growth condition
/// makes f'' integrable.
fn fprime_at_infinity(s: &Symbol, sign: f64) -> Result<f64> {
    if let Some((lo, hi)) = s.fprime_limits {
        return Ok(if sign < 0.0 { lo } else { hi });
    }
    let g = s.growth.ok_or(Error::MissingMetadata)?;
    if !(g.beta_plus > 1.0) {
        return Err(Error::MissingMetadata);
    }
    let (area, ok) = norms::l1_norm(&|q| s.fsecond(sign * q), 0.0, f64::INFINITY);
    if !ok {
        return Err(Error::Assumption("integral of f'' did not converge".into()));
    }
    Ok(s.fprime(0.0) + sign * area)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schrodinger_band() {
        let c = cone(&Symbol::schrodinger(), 0.0, 1.0).unwrap();
        assert_eq!((c.v_min, c.v_max), (0.0, 2.0));
        let c = cone(&Symbol::schrodinger(), 1.0, 2.0).unwrap();
        assert!(c.contains(1.0, 3.0));
        assert_eq!(c.classify(1.0, 4.0), Membership::Boundary);
        assert_eq!(c.classify(2.0, 8.0), Membership::Boundary);
        assert_eq!(c.classify(1.0, 5.0), Membership::Outside);
        assert!(!c.complement_regime().contains(1.0, 3.0));
        assert!(c.complement_regime().contains(1.0, 4.0));
    }

    #[test]
    fn light_cone() {
        let s = Symbol::klein_gordon(1.0).unwrap();
        let c = cone(&s, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!((c.v_min, c.v_max), (-1.0, 1.0));
    }

    #[test]
    fn limits_from_growth() {
        let mut s = Symbol::klein_gordon(2.0).unwrap();
        s.fprime_limits = None;
        let c = cone(&s, f64::NEG_INFINITY, 0.0).unwrap();
        assert!((c.v_min + 2.0).abs() < 1e-8, "{}", c.v_min);
        assert_eq!(c.v_max, 0.0);
        s.growth = None;
        assert_eq!(cone(&s, 0.0, f64::INFINITY).unwrap_err(), Error::MissingMetadata);
        assert_eq!(
            cone(&Symbol::schrodinger(), f64::NEG_INFINITY, 0.0).unwrap_err(),
            Error::MissingMetadata
        );
    }

    #[test]
    fn rejects_empty() {
        assert!(cone(&Symbol::schrodinger(), 1.0, 1.0).is_err());
        assert!(ConeSpec::new(2.0, 1.0, "x").is_err());
    }
}

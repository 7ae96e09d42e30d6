use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which estimate a certificate instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremTag {
    #[serde(rename = "T3.3")]
    T3_3,
    #[serde(rename = "T3.6")]
    T3_6,
    #[serde(rename = "T3.8")]
    T3_8,
    #[serde(rename = "T3.12")]
    T3_12,
    #[serde(rename = "T4.3-in")]
    T4_3In,
    #[serde(rename = "T4.3-out")]
    T4_3Out,
    #[serde(rename = "T4.4")]
    T4_4,
    #[serde(rename = "T4.7")]
    T4_7,
    #[serde(rename = "T4.8")]
    T4_8,
    #[serde(rename = "T5.4-in")]
    T5_4In,
    #[serde(rename = "T5.4-out")]
    T5_4Out,
}

impl TheoremTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::T3_3 => "T3.3",
            TheoremTag::T3_6 => "T3.6",
            TheoremTag::T3_8 => "T3.8",
            TheoremTag::T3_12 => "T3.12",
            TheoremTag::T4_3In => "T4.3-in",
            TheoremTag::T4_3Out => "T4.3-out",
            TheoremTag::T4_4 => "T4.4",
            TheoremTag::T4_7 => "T4.7",
            TheoremTag::T4_8 => "T4.8",
            TheoremTag::T5_4In => "T5.4-in",
            TheoremTag::T5_4Out => "T5.4-out",
        }
    }

    /// Decay exponents of the terms this estimate is made of.
    pub fn exponents(self, mu: f64, rho: f64) -> Vec<f64> {
        match self {
            TheoremTag::T3_3 | TheoremTag::T3_6 | TheoremTag::T3_8 => vec![-mu / rho],
            TheoremTag::T3_12 => vec![-mu],
            TheoremTag::T4_3In => vec![-mu / 2.0],
            TheoremTag::T4_3Out => vec![-mu],
            TheoremTag::T4_4 => vec![-mu / 2.0, -mu],
            TheoremTag::T4_7 => vec![-mu / 2.0, -1.0],
            TheoremTag::T4_8 => vec![-0.5, -mu, -1.0],
            TheoremTag::T5_4In => vec![-mu / 2.0, -0.5],
            TheoremTag::T5_4Out => vec![-mu, -1.0],
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a certificate holds. Velocities are `x/t`; a missing bound is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// Every ω > 0, or every (t, x) with t > 0.
    Everywhere,
    /// The open cone `v_min < x/t < v_max`.
    Cone { v_min: Option<f64>, v_max: Option<f64> },
    /// Complement of that cone, boundary included.
    Complement { v_min: Option<f64>, v_max: Option<f64> },
    /// Every x, for `t >= t_min`.
    LateTime { t_min: f64 },
}

fn opt(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl Regime {
    pub fn cone(v_min: f64, v_max: f64) -> Self {
        Regime::Cone {
            v_min: opt(v_min),
            v_max: opt(v_max),
        }
    }

    pub fn complement(v_min: f64, v_max: f64) -> Self {
        Regime::Complement {
            v_min: opt(v_min),
            v_max: opt(v_max),
        }
    }

    /// Whether the point `(t, x)` lies in the regime.
    pub fn contains(&self, t: f64, x: f64) -> bool {
        let inside = |lo: &Option<f64>, hi: &Option<f64>| {
            let v = x / t;
            lo.is_none_or(|a| v > a) && hi.is_none_or(|b| v < b)
        };
        match self {
            Regime::Everywhere => t > 0.0,
            Regime::Cone { v_min, v_max } => t > 0.0 && inside(v_min, v_max),
            Regime::Complement { v_min, v_max } => t > 0.0 && !inside(v_min, v_max),
            Regime::LateTime { t_min } => t >= *t_min,
        }
    }
}

/// One term `constant · x^decay_exponent` of an explicit estimate.
///
/// Multi-term estimates are returned as several certificates sharing a tag
/// and regime; their bound is the sum of the terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub theorem_tag: TheoremTag,
    pub constant: f64,
    pub decay_exponent: f64,
    pub regime: Regime,
    pub ingredients: BTreeMap<String, f64>,
}

impl BoundCertificate {
    pub(crate) fn new(
        tag: TheoremTag,
        constant: f64,
        decay_exponent: f64,
        regime: Regime,
        ingredients: &[(&str, f64)],
    ) -> Result<Self> {
        if !(constant >= 0.0) || !constant.is_finite() {
            return Err(Error::Assumption(format!("{tag} constant is {constant}")));
        }
        if !(decay_exponent < 0.0) {
            return Err(Error::Parameter(format!(
                "{tag} exponent {decay_exponent} is not negative"
            )));
        }
        let mut map = BTreeMap::new();
        for &(k, v) in ingredients {
            if !v.is_finite() {
                return Err(Error::Assumption(format!("{tag} ingredient {k} = {v}")));
            }
            map.insert(k.to_string(), v);
        }
        Ok(BoundCertificate {
            theorem_tag: tag,
            constant,
            decay_exponent,
            regime,
            ingredients: map,
        })
    }

    /// `constant · x^decay_exponent`.
    pub fn value(&self, x: f64) -> f64 {
        self.constant * x.powf(self.decay_exponent)
    }
}

/// Sum of the certificates' terms at `x`.
pub fn bound_value(certs: &[BoundCertificate], x: f64) -> f64 {
    certs.iter().map(|c| c.value(x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_with_exact_field_names() {
        let c = BoundCertificate::new(
            TheoremTag::T4_3In,
            1.5,
            -0.25,
            Regime::cone(-2.0, f64::INFINITY),
            &[("m", 2.0)],
        )
        .unwrap();
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["theorem_tag"], "T4.3-in");
        assert_eq!(j["regime"]["kind"], "cone");
        assert!(j["regime"]["v_max"].is_null());
        assert_eq!(j["ingredients"]["m"], 2.0);
        let back: BoundCertificate = serde_json::from_value(j).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn regime_membership_is_open_inside() {
        let r = Regime::cone(2.0, 4.0);
        assert!(r.contains(1.0, 3.0));
        assert!(!r.contains(1.0, 4.0));
        assert!(Regime::complement(2.0, 4.0).contains(1.0, 4.0));
        assert!(Regime::LateTime { t_min: 1.0 }.contains(1.0, -7.0));
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(BoundCertificate::new(TheoremTag::T3_3, f64::NAN, -0.5, Regime::Everywhere, &[]).is_err());
        assert!(BoundCertificate::new(TheoremTag::T3_3, 1.0, 0.0, Regime::Everywhere, &[]).is_err());
    }
}

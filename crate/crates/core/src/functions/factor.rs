use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A complex number written either as a bare real or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CValue {
    Real(f64),
    Pair([f64; 2]),
}

impl CValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            CValue::Real(x) => Complex64::new(x, 0.0),
            CValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<f64> for CValue {
    fn from(x: f64) -> Self {
        CValue::Real(x)
    }
}

/// Declarative description of a regular factor, as it appears in config files.
///
/// Polynomial coefficients are in increasing powers. Piecewise pieces are
/// expanded around their left break and vanish outside `[breaks[0], breaks[k]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorSpec {
    Constant {
        value: CValue,
    },
    Polynomial {
        coeffs: Vec<f64>,
    },
    PiecewisePolynomial {
        breaks: Vec<f64>,
        pieces: Vec<Vec<f64>>,
    },
    Gaussian {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `(1 + (p - center)^2)^(-alpha/2)`
    InversePower {
        alpha: f64,
        center: f64,
    },
    Sum {
        terms: Vec<FactorSpec>,
    },
    Product {
        factors: Vec<FactorSpec>,
    },
    Scaled {
        scale: CValue,
        factor: Box<FactorSpec>,
    },
    Conjugate {
        factor: Box<FactorSpec>,
    },
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn horner_deriv(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * x + c * k as f64;
    }
    acc
}

/// Exact sup and total variation of a unimodal bump peaked at `center`.
fn bump_norms(g: impl Fn(f64) -> f64, center: f64, lo: f64, hi: f64) -> (f64, f64) {
    let at = |p: f64| if p.is_infinite() { 0.0 } else { g(p) };
    if center <= lo {
        (at(lo), at(lo) - at(hi))
    } else if center >= hi {
        (at(hi), at(hi) - at(lo))
    } else {
        let peak = g(center);
        (peak, 2.0 * peak - at(lo) - at(hi))
    }
}

impl FactorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FactorSpec::Constant { .. } => Ok(()),
            FactorSpec::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return param("polynomial needs at least one coefficient");
                }
                Ok(())
            }
            FactorSpec::PiecewisePolynomial { breaks, pieces } => {
                if breaks.len() != pieces.len() + 1 || pieces.is_empty() {
                    return param("piecewise polynomial needs k pieces and k+1 breaks");
                }
                if breaks.windows(2).any(|w| !(w[0] < w[1])) {
                    return param("piecewise breaks must increase strictly");
                }
                Ok(())
            }
            FactorSpec::Gaussian { width, .. } => {
                if !(*width > 0.0) {
                    return param("gaussian width must be positive");
                }
                Ok(())
            }
            FactorSpec::InversePower { alpha, .. } => {
                if !(*alpha >= 0.0) {
                    return param("inverse power needs alpha >= 0");
                }
                Ok(())
            }
            FactorSpec::Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
            FactorSpec::Product { factors } => factors.iter().try_for_each(|t| t.validate()),
            FactorSpec::Scaled { factor, .. } | FactorSpec::Conjugate { factor } => factor.validate(),
        }
    }

    pub fn eval(&self, p: f64) -> Complex64 {
        match self {
            FactorSpec::Constant { value } => value.to_complex(),
            FactorSpec::Polynomial { coeffs } => horner(coeffs, p).into(),
            FactorSpec::PiecewisePolynomial { breaks, pieces } => match piece_index(breaks, p) {
                Some(i) => horner(&pieces[i], p - breaks[i]).into(),
                None => Complex64::new(0.0, 0.0),
            },
            FactorSpec::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let z = (p - center) / width;
                (amplitude * (-z * z).exp()).into()
            }
            FactorSpec::InversePower { alpha, center } => {
                let z = p - center;
                (1.0 + z * z).powf(-alpha / 2.0).into()
            }
            FactorSpec::Sum { terms } => terms.iter().map(|t| t.eval(p)).sum(),
            FactorSpec::Product { factors } => factors.iter().map(|t| t.eval(p)).product(),
            FactorSpec::Scaled { scale, factor } => scale.to_complex() * factor.eval(p),
            FactorSpec::Conjugate { factor } => factor.eval(p).conj(),
        }
    }

    pub fn deriv(&self, p: f64) -> Complex64 {
        match self {
            FactorSpec::Constant { .. } => Complex64::new(0.0, 0.0),
            FactorSpec::Polynomial { coeffs } => horner_deriv(coeffs, p).into(),
            FactorSpec::PiecewisePolynomial { breaks, pieces } => match piece_index(breaks, p) {
                Some(i) => horner_deriv(&pieces[i], p - breaks[i]).into(),
                None => Complex64::new(0.0, 0.0),
            },
            FactorSpec::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let z = (p - center) / width;
                (-2.0 * z / width * amplitude * (-z * z).exp()).into()
            }
            FactorSpec::InversePower { alpha, center } => {
                let z = p - center;
                (-alpha * z * (1.0 + z * z).powf(-alpha / 2.0 - 1.0)).into()
            }
            FactorSpec::Sum { terms } => terms.iter().map(|t| t.deriv(p)).sum(),
            FactorSpec::Product { factors } => {
                let mut total = Complex64::new(0.0, 0.0);
                for i in 0..factors.len() {
                    let mut term = factors[i].deriv(p);
                    for (j, g) in factors.iter().enumerate() {
                        if j != i {
                            term *= g.eval(p);
                        }
                    }
                    total += term;
                }
                total
            }
            FactorSpec::Scaled { scale, factor } => scale.to_complex() * factor.deriv(p),
            FactorSpec::Conjugate { factor } => factor.deriv(p).conj(),
        }
    }

    /// Closed-form `(sup |g|, ||g'||_L1)` on `[lo, hi]` when one is known.
    /// Endpoints may be infinite.
    pub fn exact_norms(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        match self {
            FactorSpec::Constant { value } => Some((value.to_complex().norm(), 0.0)),
            FactorSpec::Polynomial { coeffs } if coeffs.iter().skip(1).all(|&c| c == 0.0) => {
                Some((coeffs[0].abs(), 0.0))
            }
            FactorSpec::Polynomial { coeffs } if coeffs.len() == 2 && lo.is_finite() && hi.is_finite() => {
                let a = horner(coeffs, lo);
                let b = horner(coeffs, hi);
                let sup = a.abs().max(b.abs());
                Some((sup, (b - a).abs()))
            }
            FactorSpec::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let (s, v) = bump_norms(
                    |p| {
                        let z = (p - center) / width;
                        (-z * z).exp()
                    },
                    *center,
                    lo,
                    hi,
                );
                Some((s * amplitude.abs(), v * amplitude.abs()))
            }
            FactorSpec::InversePower { alpha, center } => Some(bump_norms(
                |p| (1.0 + (p - center) * (p - center)).powf(-alpha / 2.0),
                *center,
                lo,
                hi,
            )),
            FactorSpec::Scaled { scale, factor } => factor
                .exact_norms(lo, hi)
                .map(|(s, v)| (s * scale.to_complex().norm(), v * scale.to_complex().norm())),
            FactorSpec::Conjugate { factor } => factor.exact_norms(lo, hi),
            _ => None,
        }
    }
}

fn piece_index(breaks: &[f64], p: f64) -> Option<usize> {
    let k = breaks.len() - 1;
    if p < breaks[0] || p > breaks[k] {
        return None;
    }
    // Last piece is closed on the right.
    let i = breaks.partition_point(|&b| b <= p);
    Some(i.saturating_sub(1).min(k - 1))
}

/// The smooth factor ũ of an amplitude, with its derivative.
#[derive(Clone)]
pub struct RegularFactor {
    eval: ComplexFn,
    deriv: ComplexFn,
    spec: Option<FactorSpec>,
    /// Exact `sup |ũ|` over the interval the factor is used on.
    pub analytic_sup: Option<f64>,
    /// Exact `||ũ'||_L1` over the interval the factor is used on.
    pub analytic_l1_deriv: Option<f64>,
}

impl fmt::Debug for RegularFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegularFactor")
            .field("spec", &self.spec)
            .field("analytic_sup", &self.analytic_sup)
            .field("analytic_l1_deriv", &self.analytic_l1_deriv)
            .finish_non_exhaustive()
    }
}

impl RegularFactor {
    pub fn new(
        eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        RegularFactor {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            spec: None,
            analytic_sup: None,
            analytic_l1_deriv: None,
        }
    }

    pub fn from_spec(spec: FactorSpec) -> Result<Self> {
        spec.validate()?;
        let a = spec.clone();
        let b = spec.clone();
        Ok(RegularFactor {
            eval: Arc::new(move |p| a.eval(p)),
            deriv: Arc::new(move |p| b.deriv(p)),
            spec: Some(spec),
            analytic_sup: None,
            analytic_l1_deriv: None,
        })
    }

    pub fn constant(value: f64) -> Self {
        Self::from_spec(FactorSpec::Constant { value: value.into() }).expect("constant is valid")
    }

    pub fn with_analytic_norms(mut self, sup: Option<f64>, l1_deriv: Option<f64>) -> Self {
        self.analytic_sup = sup;
        self.analytic_l1_deriv = l1_deriv;
        self
    }

    #[inline]
    pub fn eval(&self, p: f64) -> Complex64 {
        (self.eval)(p)
    }

    #[inline]
    pub fn deriv(&self, p: f64) -> Complex64 {
        (self.deriv)(p)
    }

    pub fn spec(&self) -> Option<&FactorSpec> {
        self.spec.as_ref()
    }

    pub fn eval_fn(&self) -> ComplexFn {
        self.eval.clone()
    }

    pub fn deriv_fn(&self) -> ComplexFn {
        self.deriv.clone()
    }

    /// `λ·ũ`; analytic norms scale by `|λ|`.
    pub fn scaled(&self, lambda: Complex64) -> Self {
        let r = lambda.norm();
        let e = self.eval.clone();
        let d = self.deriv.clone();
        RegularFactor {
            eval: Arc::new(move |p| lambda * e(p)),
            deriv: Arc::new(move |p| lambda * d(p)),
            spec: self.spec.clone().map(|s| FactorSpec::Scaled {
                scale: CValue::Pair([lambda.re, lambda.im]),
                factor: Box::new(s),
            }),
            analytic_sup: self.analytic_sup.map(|s| s * r),
            analytic_l1_deriv: self.analytic_l1_deriv.map(|s| s * r),
        }
    }

    pub fn conj(&self) -> Self {
        let e = self.eval.clone();
        let d = self.deriv.clone();
        RegularFactor {
            eval: Arc::new(move |p| e(p).conj()),
            deriv: Arc::new(move |p| d(p).conj()),
            spec: self.spec.clone().map(|s| FactorSpec::Conjugate { factor: Box::new(s) }),
            analytic_sup: self.analytic_sup,
            analytic_l1_deriv: self.analytic_l1_deriv,
        }
    }

    /// `self + other`. Analytic norms are dropped, spec kept when both have one.
    pub fn plus(&self, other: &RegularFactor) -> Self {
        let (e1, d1, e2, d2) = (
            self.eval.clone(),
            self.deriv.clone(),
            other.eval.clone(),
            other.deriv.clone(),
        );
        RegularFactor {
            eval: Arc::new(move |p| e1(p) + e2(p)),
            deriv: Arc::new(move |p| d1(p) + d2(p)),
            spec: match (&self.spec, &other.spec) {
                (Some(a), Some(b)) => Some(FactorSpec::Sum {
                    terms: vec![a.clone(), b.clone()],
                }),
                _ => None,
            },
            analytic_sup: None,
            analytic_l1_deriv: None,
        }
    }

    /// Closed-form norms on `[lo, hi]` from the spec, if available.
    pub fn exact_norms(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        self.spec.as_ref().and_then(|s| s.exact_norms(lo, hi))
    }
}

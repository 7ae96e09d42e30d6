//! Config-level descriptions that resolve to built-ins or inline definitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{lookup, Amplitude, CatalogItem, DecayParams, FactorSpec, InitialDatum, Phase, RegularFactor, Symbol};

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolDef {
    Schrodinger,
    KleinGordon { c: f64 },
    Polynomial { coeffs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolSpec {
    Builtin { builtin: String },
    Inline(SymbolDef),
}

impl SymbolSpec {
    pub fn build(&self) -> Result<Symbol> {
        match self {
            SymbolSpec::Builtin { builtin } => match lookup(builtin)? {
                CatalogItem::Symbol(s) => Ok(s),
                _ => Err(Error::Parameter(format!("`{builtin}` is not a symbol"))),
            },
            SymbolSpec::Inline(SymbolDef::Schrodinger) => Ok(Symbol::schrodinger()),
            SymbolSpec::Inline(SymbolDef::KleinGordon { c }) => Symbol::klein_gordon(*c),
            SymbolSpec::Inline(SymbolDef::Polynomial { coeffs }) => Symbol::polynomial(coeffs.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseDef {
    Power {
        p0: f64,
        rho: f64,
        #[serde(default = "yes")]
        even: bool,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `c[0] + c[1] p + c[2] p^2`
    Quadratic {
        coeffs: [f64; 3],
    },
    Linear {
        slope: f64,
        #[serde(default)]
        offset: f64,
    },
    Drift {
        symbol: SymbolSpec,
        v: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhaseSpec {
    Builtin { builtin: String },
    Inline(PhaseDef),
}

impl PhaseSpec {
    pub fn build(&self) -> Result<Phase> {
        match self {
            PhaseSpec::Builtin { builtin } => match lookup(builtin)? {
                CatalogItem::Phase(p) => Ok(p),
                _ => Err(Error::Parameter(format!("`{builtin}` is not a phase"))),
            },
            PhaseSpec::Inline(d) => match d {
                PhaseDef::Power { p0, rho, even, scale } => Phase::power(*p0, *rho, *even, *scale),
                PhaseDef::Quadratic { coeffs } => Phase::quadratic(coeffs[0], coeffs[1], coeffs[2]),
                PhaseDef::Linear { slope, offset } => Phase::linear(*offset, *slope),
                PhaseDef::Drift { symbol, v } => Ok(symbol.build()?.drift_phase(*v)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorDef {
    #[serde(flatten)]
    pub spec: FactorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_sup: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_l1_deriv: Option<f64>,
}

impl FactorDef {
    pub fn build(&self) -> Result<RegularFactor> {
        let f =
            RegularFactor::from_spec(self.spec.clone())?.with_analytic_norms(self.analytic_sup, self.analytic_l1_deriv);
        if let Some(s) = self.analytic_sup {
            if !(s >= 0.0) {
                return Err(Error::Parameter("analytic_sup must be nonnegative".into()));
            }
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeDef {
    pub p1: f64,
    pub p2: f64,
    pub mu: f64,
    pub factor: FactorDef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AmplitudeSpec {
    Builtin { builtin: String },
    Inline(AmplitudeDef),
}

impl AmplitudeSpec {
    pub fn build(&self) -> Result<Amplitude> {
        match self {
            AmplitudeSpec::Builtin { builtin } => match lookup(builtin)? {
                CatalogItem::Amplitude(a) => Ok(a),
                _ => Err(Error::Parameter(format!("`{builtin}` is not an amplitude"))),
            },
            AmplitudeSpec::Inline(d) => Amplitude::new(d.p1, d.p2, d.mu, d.factor.build()?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DatumDef {
    C1 {
        band: [f64; 2],
        mu: f64,
        factor: FactorDef,
    },
    C2 {
        p1: f64,
        mu: f64,
        factor: FactorDef,
        #[serde(default)]
        decay: Option<DecayParams>,
    },
    C3 {
        mu: f64,
        factor: FactorDef,
        params: DecayParams,
    },
    #[serde(rename = "indicator")]
    Indicator {
        band: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatumSpec {
    Builtin { builtin: String },
    Inline(DatumDef),
}

impl DatumSpec {
    pub fn build(&self) -> Result<InitialDatum> {
        let d = match self {
            DatumSpec::Builtin { builtin } => match lookup(builtin)? {
                CatalogItem::Datum(d) => d,
                _ => return Err(Error::Parameter(format!("`{builtin}` is not a datum"))),
            },
            DatumSpec::Inline(DatumDef::C1 { band, mu, factor }) => {
                InitialDatum::c1(band[0], band[1], *mu, factor.build()?)?
            }
            DatumSpec::Inline(DatumDef::C2 { p1, mu, factor, decay }) => {
                InitialDatum::c2(*p1, *mu, factor.build()?, *decay)?
            }
            DatumSpec::Inline(DatumDef::C3 { mu, factor, params }) => InitialDatum::c3(*mu, factor.build()?, *params)?,
            DatumSpec::Inline(DatumDef::Indicator { band }) => InitialDatum::indicator(band[0], band[1])?,
        };
        Ok(d)
    }
}

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{Amplitude, DecayParams, FactorSpec, InitialDatum, Phase, RegularFactor, Symbol};

/// One built-in instance.
#[derive(Debug, Clone)]
pub enum CatalogItem {
    Phase(Phase),
    Amplitude(Amplitude),
    Symbol(Symbol),
    Datum(InitialDatum),
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub item: CatalogItem,
}

const DEFAULT_NAMES: &[&str] = &[
    "schrodinger",
    "klein-gordon c=1",
    "square",
    "power p0=0 rho=2",
    "power p0=0 rho=3",
    "quadratic 4p-p^2",
    "linear",
    "unit mu=0.5",
    "unit mu=1",
    "indicator [-1,1]",
    "band [0,1] mu=0.5",
    "c2-example mu=0.5 alpha=4",
    "c3-example μ=0.5 α=4",
];

/// Built-in phases, amplitudes, symbols and data with their default parameters.
///
/// Parametrised families accept other values through [`lookup`], e.g.
/// `"klein-gordon c=2"` or `"power p0=0.5 rho=3 odd"`.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    DEFAULT_NAMES
        .iter()
        .map(|n| CatalogEntry {
            name: (*n).to_string(),
            item: lookup(n).expect("default catalog entries build"),
        })
        .collect()
}

fn normalize_key(k: &str) -> String {
    match k {
        "μ" => "mu".into(),
        "α" => "alpha".into(),
        "ρ" => "rho".into(),
        other => other.to_string(),
    }
}

struct Args {
    head: String,
    kv: BTreeMap<String, f64>,
    flags: Vec<String>,
    rest: Vec<String>,
}

fn parse(name: &str) -> Result<Args> {
    let mut it = name.split_whitespace();
    let head = it.next().ok_or_else(|| Error::UnknownName(name.into()))?.to_string();
    let mut kv = BTreeMap::new();
    let mut flags = Vec::new();
    let mut rest = Vec::new();
    for tok in it {
        if let Some((k, v)) = tok.split_once('=') {
            let v: f64 = v.parse().map_err(|_| Error::UnknownName(name.into()))?;
            kv.insert(normalize_key(k), v);
        } else if tok.starts_with('[') {
            rest.push(tok.to_string());
        } else {
            flags.push(tok.to_string());
        }
    }
    Ok(Args { head, kv, flags, rest })
}

fn interval(tok: &str) -> Option<(f64, f64)> {
    let inner = tok.strip_prefix('[')?.strip_suffix(']')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Resolves a built-in by name.
pub fn lookup(name: &str) -> Result<CatalogItem> {
    let unknown = || Error::UnknownName(name.to_string());
    let a = parse(name)?;
    let get = |k: &str, default: Option<f64>| a.kv.get(k).copied().or(default).ok_or_else(unknown);
    let item = match a.head.as_str() {
        "schrodinger" => CatalogItem::Symbol(Symbol::schrodinger()),
        "klein-gordon" => CatalogItem::Symbol(Symbol::klein_gordon(get("c", Some(1.0))?)?),
        "square" => CatalogItem::Phase(Phase::power(0.0, 2.0, true, 2.0)?.with_label("square")),
        "power" => {
            let odd = a.flags.iter().any(|f| f == "odd");
            CatalogItem::Phase(Phase::power(
                get("p0", Some(0.0))?,
                get("rho", Some(2.0))?,
                !odd,
                get("scale", Some(1.0))?,
            )?)
        }
        "quadratic" if a.flags.iter().any(|f| f == "4p-p^2") => {
            CatalogItem::Phase(Phase::quadratic(0.0, 4.0, -1.0)?.with_label("quadratic 4p-p^2"))
        }
        "linear" => CatalogItem::Phase(Phase::linear(0.0, get("slope", Some(1.0))?)?),
        "unit" => CatalogItem::Amplitude(Amplitude::new(
            get("p1", Some(0.0))?,
            get("p2", Some(1.0))?,
            get("mu", Some(1.0))?,
            RegularFactor::constant(1.0),
        )?),
        "indicator" => {
            let (lo, hi) = a.rest.first().and_then(|t| interval(t)).ok_or_else(unknown)?;
            CatalogItem::Datum(InitialDatum::indicator(lo, hi)?)
        }
        "band" => {
            let (lo, hi) = a.rest.first().and_then(|t| interval(t)).ok_or_else(unknown)?;
            CatalogItem::Datum(
                InitialDatum::c1(lo, hi, get("mu", Some(0.5))?, RegularFactor::constant(1.0))?.with_label(name),
            )
        }
        "c2-example" => {
            let alpha = get("alpha", Some(4.0))?;
            let factor = RegularFactor::from_spec(FactorSpec::InversePower { alpha, center: 0.0 })?;
            let dp = DecayParams {
                alpha,
                m: 1.0,
                m_prime: 2f64.powf(alpha),
                r: 2.0,
            };
            CatalogItem::Datum(InitialDatum::c2(0.0, get("mu", Some(0.5))?, factor, Some(dp))?.with_label(name))
        }
        "c3-example" => CatalogItem::Datum(
            InitialDatum::c3_example(get("mu", Some(0.5))?, get("alpha", Some(4.0))?)?.with_label(name),
        ),
        _ => return Err(unknown()),
    };
    Ok(item)
}

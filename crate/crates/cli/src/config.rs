//! The `RunConfig` document read by every command.

use std::path::{Path, PathBuf};

use oscibound::functions::spec::{AmplitudeSpec, DatumSpec, PhaseSpec, SymbolSpec};
use oscibound::propagator::KgDemoParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::Failure;

pub const SCHEMA: u32 = 1;

fn default_tol() -> f64 {
    1e-10
}

fn default_slack() -> f64 {
    oscibound::bounds::DEFAULT_SLACK
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

/// An ω or t grid: explicit values, geometric spacing, or `n` log-uniform
/// draws from the run seed (sorted).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Geometric { geometric: GridRange },
    Random { random: GridRange },
}

impl Grid {
    pub fn points(&self, seed: u64) -> Result<Vec<f64>, Failure> {
        let check = |r: &GridRange| {
            if !(r.lo > 0.0 && r.hi >= r.lo && r.hi.is_finite()) {
                return Err(Failure::config(format!(
                    "grid range [{}, {}] must satisfy 0 < lo <= hi",
                    r.lo, r.hi
                )));
            }
            Ok(())
        };
        let pts = match self {
            Grid::Values(v) => v.clone(),
            Grid::Geometric { geometric: r } => {
                check(r)?;
                oscibound::asymptotics::geometric_grid(r.lo, r.hi, r.n)
            }
            Grid::Random { random: r } => {
                check(r)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (a, b) = (r.lo.ln(), r.hi.ln());
                let mut v: Vec<f64> = (0..r.n).map(|_| rng.gen_range(a..=b).exp()).collect();
                v.sort_by(f64::total_cmp);
                v
            }
        };
        if let Some(x) = pts.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
            return Err(Failure::config(format!("grid point {x} must be positive and finite")));
        }
        if pts.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Failure::config("grid points must be strictly increasing"));
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Interior,
    Exterior,
    Combined,
    Nostationary,
}

/// One JSON document; each command reads the fields it needs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,

    #[serde(default)]
    pub amplitude: Option<AmplitudeSpec>,
    #[serde(default)]
    pub phase: Option<PhaseSpec>,
    #[serde(default)]
    pub omega: Option<Grid>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Certificates for `bound` and `verify`; chosen from the phase when absent.
    #[serde(default)]
    pub bounds: Option<Vec<BoundKind>>,
    /// Multiplies every certificate constant before verification.
    #[serde(default = "one")]
    pub constant_scale: f64,
    #[serde(default = "default_slack")]
    pub slack: f64,
    #[serde(default)]
    pub fit_window: Option<(f64, f64)>,

    #[serde(default)]
    pub symbol: Option<SymbolSpec>,
    #[serde(default)]
    pub datum: Option<DatumSpec>,
    #[serde(default)]
    pub rays: Option<Vec<f64>>,
    #[serde(default)]
    pub t: Option<Grid>,
    /// Cones as frequency pairs `[p̃1, p̃2]`.
    #[serde(default)]
    pub cones: Option<Vec<(f64, f64)>>,
    #[serde(default)]
    pub eta: Option<f64>,
    /// x points for the uniform-in-x check of `localize`; skipped when absent.
    #[serde(default)]
    pub linf_x: Option<Vec<f64>>,

    #[serde(default)]
    pub kg: Option<KgDemoParams>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::config(format!("cannot parse {}: {e}", path.display())))?;
        if cfg.schema != SCHEMA {
            return Err(Failure::config(format!(
                "unsupported schema {}, expected {SCHEMA}",
                cfg.schema
            )));
        }
        oscibound::quadrature::check_tol(cfg.tol).map_err(Failure::from)?;
        if !(cfg.slack >= 0.0) || !(cfg.constant_scale > 0.0) {
            return Err(Failure::config("slack must be >= 0 and constant_scale > 0"));
        }
        Ok(cfg)
    }

    pub fn require<'a, T>(&self, v: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
        v.as_ref()
            .ok_or_else(|| Failure::config(format!("config needs `{name}` for this command")))
    }
}

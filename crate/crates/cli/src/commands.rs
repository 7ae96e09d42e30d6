use oscibound::asymptotics::{envelope, fit_decay};
use oscibound::bounds::{
    nostationary_constant, vdc_combined_constant, vdc_exterior_constant, vdc_interior_constant, verify_bound,
    BoundCertificate,
};
use oscibound::functions::{Amplitude, Phase};
use oscibound::propagator::{cone, kg_demo, linf_checks, localize_with_sweeps, ray_sweep, LocalizeOptions, RaySample};
use oscibound::quadrature::{oscillatory_integral, QuadResult};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{BoundKind, RunConfig};
use crate::output::{document, num, Csv, Diagnostics, OutDir};
use crate::Failure;

pub struct Ctx {
    pub command: &'static str,
    pub seed: u64,
    pub out: OutDir,
    pub diag: Diagnostics,
}

impl Ctx {
    fn json(&mut self, name: &str, result: impl serde::Serialize) -> Result<(), Failure> {
        let text = document(self.command, self.seed, result)?;
        Ok(self.out.write(name, &text)?)
    }

    /// Writes the diagnostics block and reports non-convergence, if any.
    pub fn finish(mut self) -> Result<OutDir, Failure> {
        if self.diag.is_empty() {
            return Ok(self.out);
        }
        let text = self.diag.render(self.command, self.seed)?;
        eprint!("{text}");
        self.out.write("diagnostics.json", &text)?;
        Err(Failure::NonConvergence(self.diag.len()))
    }
}

fn problem(cfg: &RunConfig) -> Result<(Amplitude, Phase), Failure> {
    let a = cfg.require(&cfg.amplitude, "amplitude")?.build()?;
    let ph = cfg.require(&cfg.phase, "phase")?.build()?;
    Ok((a, ph))
}

fn omega_values(cfg: &RunConfig, ctx: &mut Ctx, a: &Amplitude, ph: &Phase) -> Result<Vec<(f64, QuadResult)>, Failure> {
    let grid = cfg.require(&cfg.omega, "omega")?.points(ctx.seed)?;
    let values = grid
        .par_iter()
        .map(|&w| oscillatory_integral(a, ph, w, cfg.tol).map(|r| (w, r)))
        .collect::<oscibound::Result<Vec<_>>>()?;
    for (w, r) in &values {
        if !r.converged {
            ctx.diag.unconverged("omega", *w, r.abs_error_estimate);
        }
    }
    Ok(values)
}

pub fn integrate(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), Failure> {
    let (a, ph) = problem(cfg)?;
    let values = omega_values(cfg, ctx, &a, &ph)?;
    let mut csv = Csv::new("omega,re,im,abs,err_est,converged");
    for (w, r) in values {
        csv.row(&[
            num(w),
            num(r.value.re),
            num(r.value.im),
            num(r.value.norm()),
            num(r.abs_error_estimate),
            r.converged.to_string(),
        ]);
    }
    Ok(ctx.out.write("integrate.csv", &csv.into_string())?)
}

fn certificates(cfg: &RunConfig, a: &Amplitude, ph: &Phase) -> Result<Vec<(BoundKind, BoundCertificate)>, Failure> {
    let kinds = match &cfg.bounds {
        Some(k) => k.clone(),
        None => match ph.p0() {
            Some(p0) if a.p1 <= p0 && p0 <= a.p2 => vec![BoundKind::Interior, BoundKind::Combined],
            Some(_) => vec![BoundKind::Exterior, BoundKind::Combined],
            None => vec![BoundKind::Nostationary],
        },
    };
    kinds
        .into_iter()
        .map(|k| {
            let c = match k {
                BoundKind::Interior => vdc_interior_constant(a, ph),
                BoundKind::Exterior => vdc_exterior_constant(a, ph),
                BoundKind::Combined => vdc_combined_constant(a, ph),
                BoundKind::Nostationary => nostationary_constant(a, ph),
            }?;
            Ok((k, c))
        })
        .collect()
}

pub fn bound(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), Failure> {
    let (a, ph) = problem(cfg)?;
    let certs: Vec<_> = certificates(cfg, &a, &ph)?
        .into_iter()
        .map(|(k, c)| json!({ "kind": k_name(k), "certificate": c }))
        .collect();
    ctx.json("bound.json", json!({ "phase": ph.label(), "certificates": certs }))
}

fn k_name(k: BoundKind) -> &'static str {
    match k {
        BoundKind::Interior => "interior",
        BoundKind::Exterior => "exterior",
        BoundKind::Combined => "combined",
        BoundKind::Nostationary => "nostationary",
    }
}

pub fn verify(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), Failure> {
    let (a, ph) = problem(cfg)?;
    let certs = certificates(cfg, &a, &ph)?;
    let values = omega_values(cfg, ctx, &a, &ph)?;
    let grid: Vec<f64> = values.iter().map(|v| v.0).collect();
    let truth = |w: f64| {
        let i = grid.iter().position(|&g| g == w).expect("grid point");
        Ok(values[i].1)
    };
    let mut results = Vec::new();
    let mut all = true;
    for (k, mut c) in certs {
        c.constant *= cfg.constant_scale;
        let rep = if grid.is_empty() {
            None
        } else {
            Some(verify_bound(std::slice::from_ref(&c), truth, &grid, cfg.slack)?)
        };
        all &= rep.as_ref().is_none_or(|r| r.all_dominated);
        results.push(json!({ "kind": k_name(k), "certificate": c, "report": rep }));
    }
    ctx.json(
        "verify.json",
        json!({ "phase": ph.label(), "constant_scale": cfg.constant_scale, "dominated": all, "checks": results }),
    )
}

pub fn decay(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), Failure> {
    let (a, ph) = problem(cfg)?;
    let values = omega_values(cfg, ctx, &a, &ph)?;
    let samples: Vec<(f64, f64)> = values
        .iter()
        .filter(|(w, r)| r.converged && cfg.fit_window.is_none_or(|(lo, hi)| (lo..=hi).contains(w)))
        .map(|(w, r)| (*w, r.value.norm()))
        .collect();
    let fit = fit_decay(&samples)?;
    let mut csv = Csv::new("x,y");
    for (x, y) in envelope(&samples) {
        csv.row(&[num(x), num(y)]);
    }
    ctx.out.write("envelope.csv", &csv.into_string())?;
    ctx.json(
        "decay.json",
        json!({ "phase": ph.label(), "fit": fit, "samples": samples.len() }),
    )
}

fn ray_csvs(ctx: &mut Ctx, sweeps: &[RaySample]) -> Result<(), Failure> {
    for (i, s) in sweeps.iter().enumerate() {
        let mut csv = Csv::new("v,t,re,im,abs");
        for (k, &t) in s.times.iter().enumerate() {
            let u = s.values[k];
            csv.row(&[num(s.v), num(t), num(u.re), num(u.im), num(u.norm())]);
            if !s.converged[k] {
                ctx.diag.unconverged(&format!("ray v={}", s.v), t, s.errors[k]);
            }
        }
        ctx.out.write(&format!("ray_{i}.csv"), &csv.into_string())?;
    }
    Ok(())
}

pub fn propagate(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), Failure> {
    let s = cfg.require(&cfg.symbol, "symbol")?.build()?;
    let d = cfg.require(&cfg.datum, "datum")?.build()?;
    let times = cfg.require(&cfg.t, "t")?.points(ctx.seed)?;
    let sweeps = cfg
        .require(&cfg.rays, "rays")?
        .iter()
        .map(|&v| ray_sweep(&s, &d, v, &times, cfg.tol))
        .collect::<oscibound::Result<Vec<_>>>()?;
    ray_csvs(ctx, &sweeps)
}

pub fn localize(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), Failure> {
    let s = cfg.require(&cfg.symbol, "symbol")?.build()?;
    let d = cfg.require(&cfg.datum, "datum")?.build()?;
    let times = cfg.require(&cfg.t, "t")?.points(ctx.seed)?;
    let cones = cfg
        .cones
        .iter()
        .flatten()
        .map(|&(a, b)| cone(&s, a, b))
        .collect::<oscibound::Result<Vec<_>>>()?;
    let opts = LocalizeOptions {
        tol: cfg.tol,
        fit_window: cfg.fit_window,
        eta: cfg.eta,
    };
    let (report, sweeps) = localize_with_sweeps(&s, &d, &cones, cfg.require(&cfg.rays, "rays")?, &times, &opts)?;
    ray_csvs(ctx, &sweeps)?;
    if let Some(xs) = &cfg.linf_x {
        let checks = linf_checks(&s, &d, &cones, &times, xs, &opts)?;
        ctx.json("linf.json", json!({ "x": xs, "checks": checks }))?;
    }
    ctx.json("localize.json", report)
}

pub fn kg(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), Failure> {
    let params = cfg.kg.clone().unwrap_or_default();
    let (report, sweeps) = kg_demo(&params)?;
    ray_csvs(ctx, &sweeps)?;
    ctx.json("kg_demo.json", report)
}

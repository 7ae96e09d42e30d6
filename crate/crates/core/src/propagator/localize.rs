use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::asymptotics::fit_decay;
use crate::bounds::{
    cone_constants_C1, limited_growth_constants, linf_constants_C1, offaxis_constants, singular_direction_constants,
    verify_bound, BoundCertificate, Regime, TheoremTag, DEFAULT_SLACK,
};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::{DatumKind, InitialDatum, Symbol};
use crate::quadrature::QuadResult;

use super::cone::{ConeSpec, Membership};
use super::solution::{check_times, ray_sweep, solution_eval, RaySample};

/// Certificate terms sharing a tag and regime, summed into one bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateGroup {
    pub theorem_tag: TheoremTag,
    pub regime: Regime,
    /// Label of the cone the group was built from, if any.
    pub cone: Option<String>,
    pub terms: Vec<BoundCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupCheck {
    pub theorem_tag: TheoremTag,
    pub regime: Regime,
    pub cone: Option<String>,
    pub max_ratio: f64,
    pub dominated: bool,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayReport {
    pub v: f64,
    pub slope: Option<f64>,
    pub r2: Option<f64>,
    /// Cones whose open interior contains the ray.
    pub cone_labels: Vec<String>,
    /// Cones having the ray on their boundary; their interior bounds do not apply.
    pub boundary_labels: Vec<String>,
    /// Whether every applicable group dominated; `None` when none applied.
    pub dominated: Option<bool>,
    pub checks: Vec<GroupCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub symbol: String,
    pub datum: String,
    pub rays: Vec<RayReport>,
    /// Cones for which no certificate could be built, with the reason.
    pub skipped: Vec<String>,
}

fn group(terms: Vec<BoundCertificate>, cone: Option<&str>, out: &mut Vec<CertificateGroup>) {
    for c in terms {
        let cone = cone.map(str::to_string);
        match out
            .iter_mut()
            .find(|g| g.theorem_tag == c.theorem_tag && g.regime == c.regime && g.cone == cone)
        {
            Some(g) => g.terms.push(c),
            None => out.push(CertificateGroup {
                theorem_tag: c.theorem_tag,
                regime: c.regime,
                cone,
                terms: vec![c],
            }),
        }
    }
}

/// Frequencies `(p̃1, p̃2)` with `f'(p̃i)` the cone's velocities.
fn frequencies(s: &Symbol, c: &ConeSpec) -> Result<(f64, f64)> {
    Ok((s.invert_fprime(c.v_min)?, s.invert_fprime(c.v_max)?))
}

/// Certificates available for the datum's kind, grouped per estimate.
///
/// Band data get the cone and uniform estimates of each cone; C2 data the
/// singular-direction estimate when a cone is centred on the singular
/// frequency and the off-axis one when it avoids it; C3 data the
/// limited-growth pair, which ignores `cones`. `eta` overrides the default
/// η of the C2 estimates.
pub fn certificate_groups(
    s: &Symbol,
    d: &InitialDatum,
    cones: &[ConeSpec],
    eta: Option<f64>,
) -> (Vec<CertificateGroup>, Vec<String>) {
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    let mut note = |label: &str, e: String| skipped.push(format!("{label}: {e}"));
    match d.kind {
        DatumKind::C1 => {
            for c in cones {
                let built = frequencies(s, c).and_then(|t| {
                    let (i, o) = cone_constants_C1(d, s, t)?;
                    let (terms, late) = linf_constants_C1(d, s, t)?;
                    Ok((i, o, terms, late))
                });
                match built {
                    Ok((i, o, terms, late)) => {
                        group(vec![i, o], Some(&c.label), &mut out);
                        group(terms, Some(&c.label), &mut out);
                        group(vec![late], Some(&c.label), &mut out);
                    }
                    Err(e) => note(&c.label, e.to_string()),
                }
            }
        }
        DatumKind::C2 => {
            let p1 = d.singular_point;
            for c in cones {
                let built = frequencies(s, c).and_then(|(t1, t2)| {
                    let mid = 0.5 * (t1 + t2);
                    if (mid - p1).abs() <= 1e-9 * (1.0 + p1.abs()) {
                        singular_direction_constants(d, s, 0.5 * (t2 - t1), eta)
                    } else {
                        offaxis_constants(d, s, (t1, t2), eta)
                    }
                });
                match built {
                    Ok(terms) => group(terms, Some(&c.label), &mut out),
                    Err(e) => note(&c.label, e.to_string()),
                }
            }
        }
        DatumKind::C3 => match limited_growth_constants(d, s) {
            Ok(terms) => group(terms, None, &mut out),
            Err(e) => note("limited growth", e.to_string()),
        },
    }
    (out, skipped)
}

/// Checks one group against a sweep on the sample times inside its regime.
pub fn check_group(g: &CertificateGroup, sweep: &RaySample) -> Result<Option<GroupCheck>> {
    let v = sweep.v;
    let grid: Vec<f64> = sweep
        .times
        .iter()
        .copied()
        .filter(|&t| g.regime.contains(t, v * t))
        .collect();
    if grid.is_empty() {
        return Ok(None);
    }
    let truth = |t: f64| {
        let i = sweep
            .times
            .binary_search_by(|s| s.partial_cmp(&t).unwrap_or(Ordering::Less))
            .expect("grid point taken from the sweep");
        Ok(sweep.result_at(i))
    };
    let rep = verify_bound(&g.terms, truth, &grid, DEFAULT_SLACK)?;
    Ok(Some(GroupCheck {
        theorem_tag: g.theorem_tag,
        regime: g.regime,
        cone: g.cone.clone(),
        max_ratio: rep.max_ratio,
        dominated: rep.all_dominated,
        points: rep.samples.len(),
    }))
}

/// Quadrature tolerance and the time window used for the decay fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizeOptions {
    pub tol: f64,
    /// Fit only samples with `t` in this window; all samples when `None`.
    pub fit_window: Option<(f64, f64)>,
    /// η for the C2 estimates; their defaults when `None`.
    #[serde(default)]
    pub eta: Option<f64>,
}

impl Default for LocalizeOptions {
    fn default() -> Self {
        LocalizeOptions {
            tol: 1e-8,
            fit_window: None,
            eta: None,
        }
    }
}

pub(crate) fn ray_report(
    sweep: &RaySample,
    groups: &[CertificateGroup],
    cones: &[ConeSpec],
    fit_window: Option<(f64, f64)>,
) -> Result<RayReport> {
    let v = sweep.v;
    let samples: Vec<(f64, f64)> = sweep
        .moduli()
        .into_iter()
        .filter(|&(t, _)| fit_window.is_none_or(|(lo, hi)| (lo..=hi).contains(&t)))
        .collect();
    let fit = fit_decay(&samples).ok();
    let mut checks = Vec::new();
    for g in groups {
        if let Some(c) = check_group(g, sweep)? {
            checks.push(c);
        }
    }
    let labels = |m: Membership| {
        cones
            .iter()
            .filter(|c| c.classify_velocity(v) == m)
            .map(|c| c.label.clone())
            .collect::<Vec<_>>()
    };
    Ok(RayReport {
        v,
        slope: fit.map(|f| f.slope),
        r2: fit.map(|f| f.r_squared),
        cone_labels: labels(Membership::Inside),
        boundary_labels: labels(Membership::Boundary),
        dominated: (!checks.is_empty()).then(|| checks.iter().all(|c| c.dominated)),
        checks,
    })
}

/// Sweeps each ray, fits its decay and checks every applicable certificate.
pub fn localization_report(
    s: &Symbol,
    d: &InitialDatum,
    cones: &[ConeSpec],
    rays: &[f64],
    times: &[f64],
    opts: &LocalizeOptions,
) -> Result<LocalizationReport> {
    Ok(localize_with_sweeps(s, d, cones, rays, times, opts)?.0)
}

/// [`localization_report`] together with the sweeps it was computed from.
pub fn localize_with_sweeps(
    s: &Symbol,
    d: &InitialDatum,
    cones: &[ConeSpec],
    rays: &[f64],
    times: &[f64],
    opts: &LocalizeOptions,
) -> Result<(LocalizationReport, Vec<RaySample>)> {
    check_times(times)?;
    let (groups, skipped) = certificate_groups(s, d, cones, opts.eta);
    let sweeps = rays
        .iter()
        .map(|&v| ray_sweep(s, d, v, times, opts.tol))
        .collect::<Result<Vec<_>>>()?;
    let rays = sweeps
        .iter()
        .map(|w| ray_report(w, &groups, cones, opts.fit_window))
        .collect::<Result<_>>()?;
    let report = LocalizationReport {
        symbol: s.name().to_string(),
        datum: d.label().to_string(),
        rays,
        skipped,
    };
    Ok((report, sweeps))
}

/// `max_x |u(t, x)|` over the sample points `xs`, one result per time.
///
/// The value is the one of largest modulus; the error estimate is the
/// largest over `xs`.
pub fn sup_over_x(s: &Symbol, d: &InitialDatum, times: &[f64], xs: &[f64], tol: f64) -> Result<Vec<QuadResult>> {
    check_times(times)?;
    if xs.is_empty() {
        return Err(Error::Parameter("sup over x needs at least one sample point".into()));
    }
    let pairs: Vec<(f64, f64)> = times.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).collect();
    let vals = pairs
        .par_iter()
        .map(|&(t, x)| solution_eval(s, d, t, x, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(vals
        .chunks(xs.len())
        .map(|row| {
            let best = row
                .iter()
                .max_by(|a, b| a.value.norm().total_cmp(&b.value.norm()))
                .unwrap();
            QuadResult {
                value: best.value,
                abs_error_estimate: row.iter().map(|r| r.abs_error_estimate).fold(0.0, f64::max),
                panels_used: row.iter().map(|r| r.panels_used).sum(),
                converged: row.iter().all(|r| r.converged),
            }
        })
        .collect())
}

/// Checks the uniform-in-x estimates of each cone against [`sup_over_x`].
///
/// The sup is only taken over `xs`, so the check is as good as the grid:
/// it should cover the cones with some margin.
pub fn linf_checks(
    s: &Symbol,
    d: &InitialDatum,
    cones: &[ConeSpec],
    times: &[f64],
    xs: &[f64],
    opts: &LocalizeOptions,
) -> Result<Vec<GroupCheck>> {
    let (groups, _) = certificate_groups(s, d, cones, opts.eta);
    let groups: Vec<_> = groups
        .into_iter()
        .filter(|g| g.theorem_tag == TheoremTag::T4_4)
        .collect();
    if groups.is_empty() {
        return Ok(Vec::new());
    }
    let sups = sup_over_x(s, d, times, xs, opts.tol)?;
    let mut out = Vec::new();
    for g in &groups {
        let grid: Vec<f64> = times.iter().copied().filter(|&t| g.regime.contains(t, 0.0)).collect();
        if grid.is_empty() {
            continue;
        }
        let truth = |t: f64| Ok(sups[times.iter().position(|&x| x == t).expect("time from the grid")]);
        let rep = verify_bound(&g.terms, truth, &grid, DEFAULT_SLACK)?;
        out.push(GroupCheck {
            theorem_tag: g.theorem_tag,
            regime: g.regime,
            cone: g.cone.clone(),
            max_ratio: rep.max_ratio,
            dominated: rep.all_dominated,
            points: rep.samples.len(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::geometric_grid;
    use crate::functions::RegularFactor;
    use crate::propagator::cone;

    #[test]
    fn empty_rays() {
        let s = Symbol::schrodinger();
        let d = InitialDatum::c1(0.0, 1.0, 0.5, RegularFactor::constant(1.0)).unwrap();
        let r = localization_report(&s, &d, &[], &[], &[1.0, 2.0], &LocalizeOptions::default()).unwrap();
        assert!(r.rays.is_empty());
    }

    #[test]
    fn band_groups_and_boundary() {
        let s = Symbol::schrodinger();
        let d = InitialDatum::c1(0.0, 1.0, 0.5, RegularFactor::constant(1.0)).unwrap();
        let c = cone(&s, -1.0, 2.0).unwrap();
        let (groups, skipped) = certificate_groups(&s, &d, std::slice::from_ref(&c), None);
        assert!(skipped.is_empty());
        let tags: Vec<_> = groups.iter().map(|g| g.theorem_tag).collect();
        assert_eq!(
            tags,
            vec![
                TheoremTag::T4_3In,
                TheoremTag::T4_3Out,
                TheoremTag::T4_4,
                TheoremTag::T4_4
            ]
        );
        let times = geometric_grid(1.0, 100.0, 17);
        let r = localization_report(
            &s,
            &d,
            &[c],
            &[4.0],
            &times,
            &LocalizeOptions {
                tol: 1e-9,
                ..Default::default()
            },
        )
        .unwrap();
        let ray = &r.rays[0];
        assert_eq!(ray.boundary_labels, vec!["c(-1, 2)".to_string()]);
        assert!(ray.cone_labels.is_empty());
        assert!(ray.checks.iter().all(|c| c.theorem_tag != TheoremTag::T4_3In));
        assert!(ray.checks.iter().any(|c| c.theorem_tag == TheoremTag::T4_3Out));
        assert_eq!(ray.dominated, Some(true));
    }

    #[test]
    fn cone_missing_the_band_is_skipped() {
        let s = Symbol::schrodinger();
        let d = InitialDatum::c1(0.0, 1.0, 0.5, RegularFactor::constant(1.0)).unwrap();
        let (groups, skipped) = certificate_groups(&s, &d, &[cone(&s, 0.5, 2.0).unwrap()], None);
        assert!(groups.is_empty());
        assert_eq!(skipped.len(), 1);
    }

    #[test]
    fn uniform_bound_over_x_grid() {
        let s = Symbol::schrodinger();
        let d = InitialDatum::c1(0.0, 1.0, 0.5, RegularFactor::constant(1.0)).unwrap();
        let c = cone(&s, -1.0, 2.0).unwrap();
        let times = geometric_grid(1.0, 100.0, 9);
        let xs: Vec<f64> = (0..41).map(|k| -10.0 + k as f64).collect();
        let opts = LocalizeOptions {
            tol: 1e-9,
            ..Default::default()
        };
        let checks = linf_checks(&s, &d, &[c], &times, &xs, &opts).unwrap();
        assert_eq!(checks.len(), 2);
        assert!(checks.iter().all(|c| c.dominated && c.points > 0));
        assert!(matches!(
            sup_over_x(&s, &d, &times, &[], 1e-9),
            Err(Error::Parameter(_))
        ));
    }
}

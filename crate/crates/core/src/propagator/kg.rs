//! Klein-Gordon `∂t² u + c²(D² + c²) u = 0` as two first-order branches
//! `u = F⁻¹(e^{-itf} a₊) + F⁻¹(e^{itf} a₋)`, `f = sqrt(c⁴ + c²p²)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{limited_growth_constants, BoundCertificate, Regime};
use crate::error::{Error, Result};
use crate::functions::{DecayParams, InitialDatum, RegularFactor, Symbol};
use crate::quadrature::QuadResult;

use super::cone::{cone, ConeSpec};
use super::localize::{ray_report, CertificateGroup, LocalizationReport, LocalizeOptions};
use super::solution::{check_times, reversed_solution_eval, solution_eval, RaySample};

/// The two branches of one Klein-Gordon problem.
#[derive(Debug, Clone)]
pub struct KleinGordon {
    pub symbol: Symbol,
    pub a_plus: InitialDatum,
    pub a_minus: InitialDatum,
}

/// Majorant of `½(ũ ± i ṽ/f)` from those of ũ and ṽ.
///
/// With `f >= c²` and `|(1/f)'| <= 1/c³`, the derivative picks up
/// `sup |ṽ| / c³` on each unit interval; that sup is at most `2^α M_v |n|^-α`
/// once `|n| >= 2`.
fn combined_decay(u: Option<DecayParams>, v: Option<DecayParams>, c: f64) -> Option<DecayParams> {
    let (u, v) = (u?, v?);
    let c2 = c * c;
    Some(DecayParams {
        alpha: u.alpha.min(v.alpha),
        m: 0.5 * (u.m + v.m / c2),
        m_prime: 0.5 * (u.m_prime + v.m_prime / c2 + 2f64.powf(v.alpha) * v.m / (c2 * c)),
        r: u.r.max(v.r).max(2.0),
    })
}

/// `a± = ½(Fu0 ± i Fv0 / f)`, returned as `(a₊, a₋)`.
///
/// Both data must share their kind, singular point, μ and support.
pub fn kg_coefficients(u0: &InitialDatum, v0: &InitialDatum, c: f64) -> Result<(InitialDatum, InitialDatum)> {
    let s = Symbol::klein_gordon(c)?;
    if u0.kind != v0.kind || u0.singular_point != v0.singular_point || u0.mu != v0.mu || u0.support != v0.support {
        return Err(Error::Parameter(
            "u0 and v0 need the same kind, singular point, mu and support".into(),
        ));
    }
    let (e, e1, d) = (v0.factor.eval_fn(), v0.factor.eval_fn(), v0.factor.deriv_fn());
    let (f, fp) = (s.clone(), s.clone());
    let over_f = RegularFactor::new(
        move |p| e(p) / f.f(p),
        move |p| {
            let q = fp.f(p);
            d(p) / q - e1(p) * (fp.fprime(p) / (q * q))
        },
    );
    let decay = combined_decay(u0.decay, v0.decay, c);
    let half = u0.factor.scaled(Complex64::new(0.5, 0.0));
    let branch = |sign: f64, name: &str| {
        let mut a = u0.clone();
        a.factor = half.plus(&over_f.scaled(Complex64::new(0.0, 0.5 * sign)));
        a.decay = decay;
        a.with_label(format!("{name}({}, {})", u0.label(), v0.label()))
    };
    Ok((branch(1.0, "a+"), branch(-1.0, "a-")))
}

impl KleinGordon {
    pub fn new(u0: &InitialDatum, v0: &InitialDatum, c: f64) -> Result<Self> {
        let (a_plus, a_minus) = kg_coefficients(u0, v0, c)?;
        Ok(KleinGordon {
            symbol: Symbol::klein_gordon(c)?,
            a_plus,
            a_minus,
        })
    }

    /// `u₊(t, x) + u₋(t, x)`, the minus branch by conjugation.
    pub fn eval(&self, t: f64, x: f64, tol: f64) -> Result<QuadResult> {
        let plus = solution_eval(&self.symbol, &self.a_plus, t, x, tol)?;
        let minus = reversed_solution_eval(&self.symbol, &self.a_minus, t, x, tol)?;
        Ok(plus.combine(minus))
    }

    /// The minus branch by direct quadrature of `e^{itf}`, i.e. at `-t`.
    pub fn minus_branch_direct(&self, t: f64, x: f64, tol: f64) -> Result<QuadResult> {
        solution_eval(&self.symbol, &self.a_minus, -t, x, tol)
    }
}

/// The regime seen by the minus branch after `x -> -x`.
fn reflected(r: Regime) -> Regime {
    let flip = |v: Option<f64>| v.map(|a| -a);
    match r {
        Regime::Cone { v_min, v_max } => Regime::Cone {
            v_min: flip(v_max),
            v_max: flip(v_min),
        },
        Regime::Complement { v_min, v_max } => Regime::Complement {
            v_min: flip(v_max),
            v_max: flip(v_min),
        },
        other => other,
    }
}

impl KleinGordon {
    /// Limited-growth terms of both branches, constants of matching terms added.
    ///
    /// The minus branch is `conj(u_f[conj a₋](t, -x))`, so its estimate is the
    /// one of `conj a₋` on the reflected cone.
    pub fn certificates(&self) -> Result<Vec<BoundCertificate>> {
        let plus = limited_growth_constants(&self.a_plus, &self.symbol)?;
        let minus = limited_growth_constants(&self.a_minus.conj(), &self.symbol)?;
        plus.iter()
            .zip(&minus)
            .map(|(p, m)| {
                if reflected(m.regime) != p.regime {
                    return Err(Error::Precondition("the limits of f' are not symmetric".into()));
                }
                BoundCertificate::new(
                    p.theorem_tag,
                    p.constant + m.constant,
                    p.decay_exponent,
                    p.regime,
                    &[("plus_branch", p.constant), ("minus_branch", m.constant)],
                )
            })
            .collect()
    }

    pub fn light_cone(&self) -> Result<ConeSpec> {
        let mut c = cone(&self.symbol, f64::NEG_INFINITY, f64::INFINITY)?;
        c.label = "light cone".into();
        Ok(c)
    }

    pub fn ray_sweep(&self, v: f64, times: &[f64], tol: f64) -> Result<RaySample> {
        check_times(times)?;
        let results: Vec<QuadResult> = times
            .par_iter()
            .map(|&t| self.eval(t, v * t, tol))
            .collect::<Result<_>>()?;
        Ok(RaySample {
            v,
            times: times.to_vec(),
            values: results.iter().map(|r| r.value).collect(),
            errors: results.iter().map(|r| r.abs_error_estimate).collect(),
            converged: results.iter().map(|r| r.converged).collect(),
        })
    }

    /// Sweeps, fits and checks the summed certificates along each ray.
    pub fn localization_report(
        &self,
        rays: &[f64],
        times: &[f64],
        opts: &LocalizeOptions,
    ) -> Result<(LocalizationReport, Vec<RaySample>)> {
        let cones = [self.light_cone()?];
        let mut groups: Vec<CertificateGroup> = Vec::new();
        for c in self.certificates()? {
            match groups
                .iter_mut()
                .find(|g| g.theorem_tag == c.theorem_tag && g.regime == c.regime)
            {
                Some(g) => g.terms.push(c),
                None => groups.push(CertificateGroup {
                    theorem_tag: c.theorem_tag,
                    regime: c.regime,
                    cone: Some(cones[0].label.clone()),
                    terms: vec![c],
                }),
            }
        }
        let mut reports = Vec::with_capacity(rays.len());
        let mut sweeps = Vec::with_capacity(rays.len());
        for &v in rays {
            let sweep = self.ray_sweep(v, times, opts.tol)?;
            reports.push(ray_report(&sweep, &groups, &cones, opts.fit_window)?);
            sweeps.push(sweep);
        }
        let report = LocalizationReport {
            symbol: self.symbol.name().to_string(),
            datum: format!("{} + {}", self.a_plus.label(), self.a_minus.label()),
            rays: reports,
            skipped: Vec::new(),
        };
        Ok((report, sweeps))
    }
}

/// Parameters of the light-cone experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KgDemoParams {
    pub c: f64,
    pub mu: f64,
    pub alpha: f64,
    /// `Fv0 = v0_scale · Fu0`.
    pub v0_scale: f64,
    pub inside_ray: f64,
    pub outside_ray: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points_per_decade: usize,
    pub fit_window: (f64, f64),
    /// Quadrature tolerance of the ray sweeps.
    pub tol: f64,
    /// Quadrature tolerance of the `t = 0` reconstruction.
    pub reconstruction_tol: f64,
    /// Points where `u(0, x)` is compared with the inverse transform of Fu0.
    pub reconstruction_x: Vec<f64>,
}

impl Default for KgDemoParams {
    fn default() -> Self {
        KgDemoParams {
            c: 1.0,
            mu: 0.5,
            alpha: 4.0,
            v0_scale: 0.0,
            inside_ray: 0.5,
            outside_ray: 1.5,
            t_min: 1.0,
            t_max: 1e5,
            points_per_decade: 24,
            fit_window: (1e2, 1e5),
            tol: 1e-8,
            reconstruction_tol: 1e-10,
            reconstruction_x: vec![-7.0, -3.5, -1.0, -0.25, 0.0, 0.4, 1.3, 2.0, 4.5, 9.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KgDemoReport {
    pub params: KgDemoParams,
    pub light_cone: (f64, f64),
    pub certificates: Vec<BoundCertificate>,
    pub inside_slope: Option<f64>,
    pub outside_slope: Option<f64>,
    pub all_dominated: bool,
    pub reconstruction_max_error: f64,
    pub localization: LocalizationReport,
}

/// The light-cone experiment for `u0 = |p|^(μ-1) (1 + p²)^(-α/2)`.
pub fn kg_demo(params: &KgDemoParams) -> Result<(KgDemoReport, Vec<RaySample>)> {
    use crate::asymptotics::geometric_grid;
    let p = params;
    if p.points_per_decade == 0 || !(p.t_min > 0.0 && p.t_max > p.t_min) {
        return Err(Error::Parameter(
            "kg demo needs 0 < t_min < t_max and a positive grid density".into(),
        ));
    }
    let u0 = InitialDatum::c3_example(p.mu, p.alpha)?;
    let v0 = u0
        .scaled(Complex64::new(p.v0_scale, 0.0))
        .with_label(format!("{} x {}", p.v0_scale, u0.label()));
    let kg = KleinGordon::new(&u0, &v0, p.c)?;
    let n = ((p.t_max / p.t_min).log10() * p.points_per_decade as f64).round() as usize + 1;
    let times = geometric_grid(p.t_min, p.t_max, n.max(2));
    let opts = LocalizeOptions {
        tol: p.tol,
        fit_window: Some(p.fit_window),
        eta: None,
    };
    let (localization, sweeps) = kg.localization_report(&[p.inside_ray, p.outside_ray], &times, &opts)?;
    let errors: Vec<f64> = p
        .reconstruction_x
        .par_iter()
        .map(|&x| {
            let u = kg.eval(0.0, x, p.reconstruction_tol)?;
            let want = solution_eval(&kg.symbol, &u0, 0.0, x, p.reconstruction_tol)?;
            Ok((u.value - want.value).norm())
        })
        .collect::<Result<_>>()?;
    let cone = kg.light_cone()?;
    let report = KgDemoReport {
        params: p.clone(),
        light_cone: (cone.v_min, cone.v_max),
        certificates: kg.certificates()?,
        inside_slope: localization.rays[0].slope,
        outside_slope: localization.rays[1].slope,
        all_dominated: localization.rays.iter().all(|r| r.dominated == Some(true)),
        reconstruction_max_error: errors.iter().copied().fold(0.0, f64::max),
        localization,
    };
    Ok((report, sweeps))
}

pub fn kg_solution_eval(u0: &InitialDatum, v0: &InitialDatum, c: f64, t: f64, x: f64, tol: f64) -> Result<QuadResult> {
    KleinGordon::new(u0, v0, c)?.eval(t, x, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::FactorSpec;

    fn datum(scale: f64) -> InitialDatum {
        let f = RegularFactor::from_spec(FactorSpec::InversePower {
            alpha: 4.0,
            center: 0.0,
        })
        .unwrap();
        InitialDatum::c3(
            0.5,
            f.scaled(Complex64::new(scale, 0.0)),
            DecayParams {
                alpha: 4.0,
                m: scale,
                m_prime: 16.0 * scale,
                r: 2.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let (ap, am) = kg_coefficients(&datum(1.0), &datum(0.0), 1.0).unwrap();
        for p in [-3.0, 0.5, 2.0] {
            let want = 0.5 * datum(1.0).eval(p).unwrap();
            assert!((ap.eval(p).unwrap() - want).norm() < 1e-15);
            assert!((am.eval(p).unwrap() - want).norm() < 1e-15);
        }
        // Fu0(0) = 2 and Fv0(0) = 2 with f(0) = 1.
        let two = |_: f64| Complex64::new(2.0, 0.0);
        let u = InitialDatum::c1(-1.0, 1.0, 1.0, RegularFactor::new(two, |_| Complex64::new(0.0, 0.0))).unwrap();
        let (ap, am) = kg_coefficients(&u, &u, 1.0).unwrap();
        assert!((ap.eval(0.0).unwrap() - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert!((am.eval(0.0).unwrap() - Complex64::new(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn pure_velocity_datum() {
        // Fv0 = f g gives a± = ±(i/2) g.
        let s = Symbol::klein_gordon(1.0).unwrap();
        let g = |p: f64| Complex64::new((-p * p).exp(), 0.0);
        let sv = s.clone();
        let sd = s.clone();
        let fv = RegularFactor::new(
            move |p| g(p) * sv.f(p),
            move |p| Complex64::new((-p * p).exp(), 0.0) * (sd.fprime(p) - 2.0 * p * sd.f(p)),
        );
        let v = InitialDatum::c1(-2.0, 2.0, 1.0, fv).unwrap();
        let zero = InitialDatum::c1(-2.0, 2.0, 1.0, RegularFactor::constant(0.0)).unwrap();
        let (ap, am) = kg_coefficients(&zero, &v, 1.0).unwrap();
        for p in [-1.5, 0.0, 0.7] {
            let want = Complex64::new(0.0, 0.5) * g(p);
            assert!((ap.eval(p).unwrap() - want).norm() < 1e-15);
            assert!((am.eval(p).unwrap() + want).norm() < 1e-15);
        }
    }

    #[test]
    fn mismatched_data() {
        let a = datum(1.0);
        let b = InitialDatum::c3_example(0.25, 4.0).unwrap();
        assert!(kg_coefficients(&a, &b, 1.0).is_err());
        assert!(kg_coefficients(&a, &a, 0.0).is_err());
    }

    #[test]
    fn majorant_dominates() {
        let (ap, _) = kg_coefficients(&datum(1.0), &datum(1.0), 1.0).unwrap();
        let dp = ap.decay.unwrap();
        for i in 0..400 {
            let p = -20.0 + 0.1 * i as f64;
            let bound = dp.m * (1.0 + p * p).powf(-dp.alpha / 2.0);
            assert!(ap.factor.eval(p).norm() <= bound * (1.0 + 1e-12));
        }
    }
}

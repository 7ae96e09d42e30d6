//! Constants for solutions `u(t, x) = (1/2π) ∫ Fu0(p) e^{-itf(p) + ixp} dp`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::functions::{DatumKind, InitialDatum, Symbol};

use super::certificate::{BoundCertificate, Regime, TheoremTag};
use super::ingredients::{factor_norms, min_fsecond};

fn require(d: &InitialDatum, kind: DatumKind) -> Result<()> {
    if d.kind == kind {
        Ok(())
    } else {
        Err(Error::Parameter(format!("expected a {kind:?} datum, got {:?}", d.kind)))
    }
}

/// `(1/2π)(3/μ)N + (1/π)(4N + D)/m`, one half-interval of a stationary estimate.
fn stationary_piece(mu: f64, sup: f64, l1d: f64, m: f64) -> f64 {
    3.0 / (2.0 * PI * mu) * sup + (4.0 * sup + l1d) / (PI * m)
}

/// `(1/2π)(1/μ)N + (1/2π)(4N + D)/m`.
fn nonstationary_piece(mu: f64, sup: f64, l1d: f64, m: f64) -> f64 {
    (sup / mu + (4.0 * sup + l1d) / m) / (2.0 * PI)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Assumption(format!("{name} = {v} must be positive")))
    }
}

#[allow(non_snake_case)]
/// Band datum: inside the cone over `(p̃1, p̃2)` and in its complement.
pub fn cone_constants_C1(
    d: &InitialDatum,
    s: &Symbol,
    tilde: (f64, f64),
) -> Result<(BoundCertificate, BoundCertificate)> {
    require(d, DatumKind::C1)?;
    let (p1, p2) = d
        .band()
        .ok_or_else(|| Error::Parameter("C1 datum without a band".into()))?;
    let (t1, t2) = tilde;
    if !(t1 < p1 && p2 < t2) {
        return Err(Error::Parameter(format!(
            "need p̃1 < p1 < p2 < p̃2, got {t1}, [{p1}, {p2}], {t2}"
        )));
    }
    let mu = d.mu;
    let (sup, l1d) = factor_norms(&d.factor, p1, p2)?;
    let m = positive("min f''", min_fsecond(s, p1, p2))?;
    let (v1, v2) = (s.fprime(t1), s.fprime(t2));
    let inside = BoundCertificate::new(
        TheoremTag::T4_3In,
        stationary_piece(mu, sup, l1d, m),
        -mu / 2.0,
        Regime::cone(v1, v2),
        &[("sup_u", sup), ("l1_du", l1d), ("min_fsecond", m), ("mu", mu)],
    )?;
    let m2 = positive("f'(p̃2) - f'(p2)", v2 - s.fprime(p2))?;
    let m1 = positive("f'(p1) - f'(p̃1)", s.fprime(p1) - v1)?;
    let outside = BoundCertificate::new(
        TheoremTag::T4_3Out,
        nonstationary_piece(mu, sup, l1d, m2) + nonstationary_piece(mu, sup, l1d, m1),
        -mu,
        Regime::complement(v1, v2),
        &[
            ("sup_u", sup),
            ("l1_du", l1d),
            ("m_tilde_p1", m1),
            ("m_tilde_p2", m2),
            ("mu", mu),
        ],
    )?;
    Ok((inside, outside))
}

#[allow(non_snake_case)]
/// Uniform-in-x estimate for a band datum: the terms `c t^{-μ/2} + c_Ĩ t^{-μ}`
/// valid for every t > 0, and their merged form `(c + c_Ĩ) t^{-μ/2}` for t ≥ 1.
pub fn linf_constants_C1(
    d: &InitialDatum,
    s: &Symbol,
    tilde: (f64, f64),
) -> Result<(Vec<BoundCertificate>, BoundCertificate)> {
    let (inside, outside) = cone_constants_C1(d, s, tilde)?;
    let mu = d.mu;
    let mut ing: Vec<(&str, f64)> = vec![("c_inside", inside.constant), ("c_outside", outside.constant)];
    let terms = vec![
        BoundCertificate::new(TheoremTag::T4_4, inside.constant, -mu / 2.0, Regime::Everywhere, &ing)?,
        BoundCertificate::new(TheoremTag::T4_4, outside.constant, -mu, Regime::Everywhere, &ing)?,
    ];
    ing.push(("t_min", 1.0));
    let late = BoundCertificate::new(
        TheoremTag::T4_4,
        inside.constant + outside.constant,
        -mu / 2.0,
        Regime::LateTime { t_min: 1.0 },
        &ing,
    )?;
    Ok((terms, late))
}

/// Narrow cone around the singular direction `x/t = f'(p1)`: terms
/// `c^(1) t^{-μ/2}` and `c_ε^(2) t^{-1}`. η defaults to `ε + 1`.
pub fn singular_direction_constants(
    d: &InitialDatum,
    s: &Symbol,
    epsilon: f64,
    eta: Option<f64>,
) -> Result<Vec<BoundCertificate>> {
    require(d, DatumKind::C2)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let eta = eta.unwrap_or(epsilon + 1.0);
    if !(eta > epsilon) || !eta.is_finite() {
        return Err(Error::Parameter(format!("eta = {eta} must exceed epsilon = {epsilon}")));
    }
    let (p1, mu) = (d.singular_point, d.mu);
    let (sl, dl) = factor_norms(&d.factor, p1 - eta, p1)?;
    let (sr, dr) = factor_norms(&d.factor, p1, p1 + eta)?;
    let m1 = positive("min f'' left", min_fsecond(s, p1 - eta, p1))?;
    let m2 = positive("min f'' right", min_fsecond(s, p1, p1 + eta))?;
    let c1 = stationary_piece(mu, sl, dl, m1) + stationary_piece(mu, sr, dr, m2);

    let (sup, l1d) = factor_norms(&d.factor, f64::NEG_INFINITY, f64::INFINITY)?;
    let mt1 = positive("f'(p1+η) - f'(p1+ε)", s.fprime(p1 + eta) - s.fprime(p1 + epsilon))?;
    let mt2 = positive("f'(p1-ε) - f'(p1-η)", s.fprime(p1 - epsilon) - s.fprime(p1 - eta))?;
    let tail = eta.powf(mu - 1.0) * (4.0 * sup + l1d) / (2.0 * PI);
    let c2 = tail / mt1 + tail / mt2;

    let regime = Regime::cone(s.fprime(p1 - epsilon), s.fprime(p1 + epsilon));
    let ing = [
        ("epsilon", epsilon),
        ("eta", eta),
        ("sup_u_left", sl),
        ("l1_du_left", dl),
        ("sup_u_right", sr),
        ("l1_du_right", dr),
        ("m_1_eta", m1),
        ("m_2_eta", m2),
        ("sup_u", sup),
        ("l1_du", l1d),
        ("m_tilde_1", mt1),
        ("m_tilde_2", mt2),
        ("mu", mu),
    ];
    Ok(vec![
        BoundCertificate::new(TheoremTag::T4_7, c1, -mu / 2.0, regime, &ing)?,
        BoundCertificate::new(TheoremTag::T4_7, c2, -1.0, regime, &ing)?,
    ])
}

/// Cone over `(p̃1, p̃2)` away from the singular frequency: terms
/// `c^(1) t^{-1/2} + c^(2) t^{-μ} + c^(3) t^{-1}`. η defaults to half the
/// distance from `p1` to the nearer endpoint.
pub fn offaxis_constants(
    d: &InitialDatum,
    s: &Symbol,
    tilde: (f64, f64),
    eta: Option<f64>,
) -> Result<Vec<BoundCertificate>> {
    require(d, DatumKind::C2)?;
    let (t1, t2) = tilde;
    let (p1, mu) = (d.singular_point, d.mu);
    if !(t1 < t2) {
        return Err(Error::Parameter(format!("need p̃1 < p̃2, got {t1}, {t2}")));
    }
    if p1 >= t1 && p1 <= t2 {
        return Err(Error::Parameter(format!("p1 = {p1} lies in [{t1}, {t2}]")));
    }
    let gap = (t1 - p1).abs().min((t2 - p1).abs());
    let eta = eta.unwrap_or(0.5 * gap);
    if !(eta > 0.0 && eta < gap) {
        return Err(Error::Parameter(format!("eta = {eta} must lie in (0, {gap})")));
    }
    let (sup, l1d) = factor_norms(&d.factor, f64::NEG_INFINITY, f64::INFINITY)?;
    let m1 = positive("min f''", min_fsecond(s, t1 - eta, t2 + eta))?;
    let mt2 = positive("f'(p̃1) - f'(p̃1-η)", s.fprime(t1) - s.fprime(t1 - eta))?;
    let mt3 = positive("f'(p̃2+η) - f'(p̃2)", s.fprime(t2 + eta) - s.fprime(t2))?;
    let k = 4.0 * sup + l1d;
    let (near, far, m_near, m_far) = if p1 < t1 {
        (t1 - eta - p1, t2 + eta - p1, mt2, mt3)
    } else {
        (p1 - t2 - eta, p1 - t1 + eta, mt3, mt2)
    };
    let c1 = near.powf(mu - 1.0) / PI * (sup + k / m1);
    let c2 = (sup / mu + k / m_near) / PI;
    let c3 = far.powf(mu - 1.0) / (2.0 * PI) * k / m_far;
    let regime = Regime::cone(s.fprime(t1), s.fprime(t2));
    let ing = [
        ("eta", eta),
        ("sup_u", sup),
        ("l1_du", l1d),
        ("m_1", m1),
        ("m_tilde_2", mt2),
        ("m_tilde_3", mt3),
        ("mu", mu),
    ];
    Ok(vec![
        BoundCertificate::new(TheoremTag::T4_8, c1, -0.5, regime, &ing)?,
        BoundCertificate::new(TheoremTag::T4_8, c2, -mu, regime, &ing)?,
        BoundCertificate::new(TheoremTag::T4_8, c3, -1.0, regime, &ing)?,
    ])
}

/// The series-summed closed form `2^{2-μ+α}M/π · (α+1-μ)/(α-μ)` and
/// `2^{2-μ+β}(2^{α+2}M + M')/(π c) · (α+1-μ-β)/(α-μ-β)`.
pub fn limited_growth_series_inside(mu: f64, alpha: f64, m: f64, mp: f64, beta: f64, c_minus: f64) -> (f64, f64) {
    let a = 2f64.powf(2.0 - mu + alpha) * m / PI * (alpha + 1.0 - mu) / (alpha - mu);
    let b = 2f64.powf(2.0 - mu + beta) * (2f64.powf(alpha + 2.0) * m + mp) / (PI * c_minus) * (alpha + 1.0 - mu - beta)
        / (alpha - mu - beta);
    (a, b)
}

/// `(β-1)/(π c) · (3·2^{α+β-μ}M + 2^{β-μ}(2^α M + M')) · (α+2-μ-β)/(α+1-μ-β)`.
pub fn limited_growth_series_outside(mu: f64, alpha: f64, m: f64, mp: f64, beta: f64, c_minus: f64) -> f64 {
    (beta - 1.0) / (PI * c_minus)
        * (3.0 * 2f64.powf(-mu + alpha + beta) * m + 2f64.powf(-mu + beta) * (2f64.powf(alpha) * m + mp))
        * (alpha + 2.0 - mu - beta)
        / (alpha + 1.0 - mu - beta)
}

/// Symbol with limited growth and a decaying datum: terms
/// `c^(1) t^{-μ/2} + c^(2) t^{-1/2}` inside the asymptotic cone and
/// `c_c^(1) t^{-μ} + c_c^(2) t^{-1}` outside.
///
/// The datum's `r` needs `r <= N = ⌈R⌉ + 1` so that every unit interval of
/// the series carries the derivative majorant.
pub fn limited_growth_constants(d: &InitialDatum, s: &Symbol) -> Result<Vec<BoundCertificate>> {
    require(d, DatumKind::C3)?;
    let g = s.growth.ok_or(Error::MissingMetadata)?;
    let (a, b) = s.fprime_limits.ok_or(Error::MissingMetadata)?;
    let dp = d.decay.ok_or(Error::MissingMajorant)?;
    let mu = d.mu;
    let beta = g.beta_minus;
    if !(dp.alpha - mu > beta) {
        return Err(Error::Convergence {
            alpha: dp.alpha,
            mu,
            beta_minus: beta,
        });
    }
    let n = g.r.ceil() + 1.0;
    if dp.r > n {
        return Err(Error::Precondition(format!("datum r = {} exceeds N = {n}", dp.r)));
    }
    let ps = d.singular_point;
    let (sl, dl) = factor_norms(&d.factor, ps - n, ps)?;
    let (sr, dr) = factor_norms(&d.factor, ps, ps + n)?;
    let mminus = positive("min f'' on [-N, 0]", min_fsecond(s, ps - n, ps))?;
    let mplus = positive("min f'' on [0, N]", min_fsecond(s, ps, ps + n))?;
    let c1 = stationary_piece(mu, sl, dl, mminus) + stationary_piece(mu, sr, dr, mplus);
    let (s1, s2) = limited_growth_series_inside(mu, dp.alpha, dp.m, dp.m_prime, beta, g.c_minus);
    let c2 = s1 + s2;

    let mt_minus = positive("m̃_-N", (s.fprime(ps - n) - a).min(b - s.fprime(ps)))?;
    let mt_plus = positive("m̃_+N", (s.fprime(ps) - a).min(b - s.fprime(ps + n)))?;
    let cc1 = nonstationary_piece(mu, sl, dl, mt_minus) + nonstationary_piece(mu, sr, dr, mt_plus);
    let cc2 = limited_growth_series_outside(mu, dp.alpha, dp.m, dp.m_prime, beta, g.c_minus);

    let ing = [
        ("N", n),
        ("alpha", dp.alpha),
        ("M", dp.m),
        ("Mprime", dp.m_prime),
        ("beta_minus", beta),
        ("c_minus", g.c_minus),
        ("sup_u_minus", sl),
        ("l1_du_minus", dl),
        ("sup_u_plus", sr),
        ("l1_du_plus", dr),
        ("m_minus_N", mminus),
        ("m_plus_N", mplus),
        ("m_tilde_minus_N", mt_minus),
        ("m_tilde_plus_N", mt_plus),
        ("series_u", s1),
        ("series_du", s2),
        ("mu", mu),
    ];
    let inside = Regime::cone(a, b);
    let outside = Regime::complement(a, b);
    Ok(vec![
        BoundCertificate::new(TheoremTag::T5_4In, c1, -mu / 2.0, inside, &ing)?,
        BoundCertificate::new(TheoremTag::T5_4In, c2, -0.5, inside, &ing)?,
        BoundCertificate::new(TheoremTag::T5_4Out, cc1, -mu, outside, &ing)?,
        BoundCertificate::new(TheoremTag::T5_4Out, cc2, -1.0, outside, &ing)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{FactorSpec, RegularFactor};

    fn band() -> InitialDatum {
        InitialDatum::c1(0.0, 1.0, 0.5, RegularFactor::constant(1.0)).unwrap()
    }

    fn c2_datum() -> InitialDatum {
        let f = RegularFactor::from_spec(FactorSpec::InversePower {
            alpha: 4.0,
            center: 0.0,
        })
        .unwrap();
        InitialDatum::c2(0.0, 0.5, f, None).unwrap()
    }

    #[test]
    fn schrodinger_band_constants() {
        let s = Symbol::schrodinger();
        let (i, o) = cone_constants_C1(&band(), &s, (-1.0, 2.0)).unwrap();
        assert!((i.constant - 5.0 / PI).abs() < 1e-14);
        assert!((o.constant - 4.0 / PI).abs() < 1e-14);
        assert_eq!(i.regime, Regime::cone(-2.0, 4.0));
        assert_eq!(o.ingredients["m_tilde_p1"], 2.0);
        assert!(cone_constants_C1(&band(), &s, (0.0, 2.0)).is_err());
        let (terms, late) = linf_constants_C1(&band(), &s, (-1.0, 2.0)).unwrap();
        assert_eq!(terms.len(), 2);
        assert!((late.constant - 9.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn singular_direction_example() {
        let s = Symbol::schrodinger();
        let c = singular_direction_constants(&c2_datum(), &s, 1.0, None).unwrap();
        assert_eq!(c[0].ingredients["eta"], 2.0);
        assert_eq!(c[0].ingredients["m_tilde_1"], 2.0);
        assert_eq!((c[0].decay_exponent, c[1].decay_exponent), (-0.25, -1.0));
        // Halves: sup = 1, ||ũ'|| on [0, 2] = 1 - 5^{-2}.
        let half = 1.0 - 1.0 / 25.0;
        let want = 2.0 * (6.0 / (2.0 * PI) + (4.0 + half) / (2.0 * PI));
        assert!((c[0].constant - want).abs() < 1e-13, "{} vs {want}", c[0].constant);
        let want2 = 2.0 * 2f64.powf(-0.5) * (4.0 + 2.0) / (2.0 * PI * 2.0);
        assert!((c[1].constant - want2).abs() < 1e-13);
    }

    #[test]
    fn offaxis_example() {
        let s = Symbol::schrodinger();
        let c = offaxis_constants(&c2_datum(), &s, (1.0, 2.0), None).unwrap();
        assert_eq!(c[0].ingredients["eta"], 0.5);
        assert_eq!(c[0].ingredients["m_tilde_2"], 1.0);
        assert_eq!(c[0].ingredients["m_tilde_3"], 1.0);
        let want = 2f64.sqrt() / PI * (1.0 + 6.0 / 2.0);
        assert!((c[0].constant - want).abs() < 1e-13);
        let ex: Vec<f64> = c.iter().map(|c| c.decay_exponent).collect();
        assert_eq!(ex, vec![-0.5, -0.5, -1.0]);
        assert!(offaxis_constants(&c2_datum(), &s, (-1.0, 2.0), None).is_err());
        let mirrored = offaxis_constants(&c2_datum(), &s, (-2.0, -1.0), None).unwrap();
        for (a, b) in c.iter().zip(&mirrored) {
            assert!((a.constant - b.constant).abs() < 1e-13);
        }
    }

    #[test]
    fn klein_gordon_example() {
        let s = Symbol::klein_gordon(1.0).unwrap();
        let d = InitialDatum::c3_example(0.5, 4.0).unwrap();
        let c = limited_growth_constants(&d, &s).unwrap();
        assert_eq!(c[0].ingredients["N"], 2.0);
        let want = 2f64.powf(5.5) / PI * (4.5 / 3.5) + 2f64.powf(4.5) * 80.0 / (PI * 2f64.powf(-1.5)) * 3.0;
        assert!((c[1].constant - want).abs() < 1e-11 * want);
        assert_eq!(c[0].regime, Regime::cone(-1.0, 1.0));
        let ex: Vec<f64> = c.iter().map(|c| c.decay_exponent).collect();
        assert_eq!(ex, vec![-0.25, -0.5, -0.5, -1.0]);
        let slow = InitialDatum::c3_example(0.5, 3.0).unwrap();
        assert!(matches!(
            limited_growth_constants(&slow, &s),
            Err(Error::Convergence { .. })
        ));
        assert_eq!(
            limited_growth_constants(&d, &Symbol::schrodinger()).unwrap_err(),
            Error::MissingMetadata
        );
    }
}

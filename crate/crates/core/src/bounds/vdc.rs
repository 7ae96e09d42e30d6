//! Van der Corput type constants for `∫ U e^{iωψ}` on a bounded interval.

use crate::error::{Error, Result};
use crate::functions::{Amplitude, Phase};

use super::certificate::{BoundCertificate, Regime, TheoremTag};
use super::ingredients::{factor_norms, min_factor};

/// `(3/μ)N + (8N + 2D)/m`, or `2N + (6N + 2D)/m` for μ = 1.
pub fn interior_formula(mu: f64, sup: f64, l1d: f64, m: f64) -> f64 {
    if mu == 1.0 {
        2.0 * sup + (6.0 * sup + 2.0 * l1d) / m
    } else {
        3.0 / mu * sup + (8.0 * sup + 2.0 * l1d) / m
    }
}

/// `(2/μ)N + (4N + D)/m`, or `2N + (3N + D)/m` for μ = 1.
pub fn exterior_formula(mu: f64, sup: f64, l1d: f64, m: f64) -> f64 {
    if mu == 1.0 {
        2.0 * sup + (3.0 * sup + l1d) / m
    } else {
        2.0 / mu * sup + (4.0 * sup + l1d) / m
    }
}

/// `(1/μ)N + (4N + D)/m`, or `(3N + D)/m` for μ = 1.
pub fn nostationary_formula(mu: f64, sup: f64, l1d: f64, m: f64) -> f64 {
    if mu == 1.0 {
        (3.0 * sup + l1d) / m
    } else {
        sup / mu + (4.0 * sup + l1d) / m
    }
}

fn stationary(ph: &Phase) -> Result<(f64, f64)> {
    let st = ph
        .stationary
        .ok_or_else(|| Error::Precondition("phase has no stationary point".into()))?;
    Ok((st.p0, st.rho))
}

fn with_factor_floor(
    a: &Amplitude,
    ph: &Phase,
    tag: TheoremTag,
    formula: fn(f64, f64, f64, f64) -> f64,
) -> Result<BoundCertificate> {
    let (p0, rho) = stationary(ph)?;
    let (sup, l1d) = factor_norms(&a.factor, a.p1, a.p2)?;
    let m = min_factor(ph, a.p1, a.p2);
    if !(m > 0.0) {
        return Err(Error::Assumption(format!("min |ψ̃| on [{}, {}] is {m}", a.p1, a.p2)));
    }
    BoundCertificate::new(
        tag,
        formula(a.mu, sup, l1d, m),
        -a.mu / rho,
        Regime::Everywhere,
        &[
            ("sup_u", sup),
            ("l1_du", l1d),
            ("min_factor", m),
            ("mu", a.mu),
            ("rho", rho),
            ("p0", p0),
        ],
    )
}

/// Stationary point inside `[p1, p2]`.
pub fn vdc_interior_constant(a: &Amplitude, ph: &Phase) -> Result<BoundCertificate> {
    let (p0, _) = stationary(ph)?;
    if !(p0 >= a.p1 && p0 <= a.p2) {
        return Err(Error::Precondition(format!(
            "p0 = {p0} is outside [{}, {}]",
            a.p1, a.p2
        )));
    }
    with_factor_floor(a, ph, TheoremTag::T3_3, interior_formula)
}

/// Stationary point outside `[p1, p2]`.
pub fn vdc_exterior_constant(a: &Amplitude, ph: &Phase) -> Result<BoundCertificate> {
    let (p0, _) = stationary(ph)?;
    if p0 >= a.p1 && p0 <= a.p2 {
        return Err(Error::Precondition(format!(
            "p0 = {p0} lies inside [{}, {}]",
            a.p1, a.p2
        )));
    }
    with_factor_floor(a, ph, TheoremTag::T3_6, exterior_formula)
}

/// The interior constant, valid wherever the stationary point is.
pub fn vdc_combined_constant(a: &Amplitude, ph: &Phase) -> Result<BoundCertificate> {
    with_factor_floor(a, ph, TheoremTag::T3_8, interior_formula)
}

/// ψ' of one sign and monotone on `[p1, p2]`.
pub fn nostationary_constant(a: &Amplitude, ph: &Phase) -> Result<BoundCertificate> {
    if let Some(p0) = ph.p0() {
        if p0 >= a.p1 && p0 <= a.p2 {
            return Err(Error::Precondition(format!("ψ' vanishes at {p0} inside the interval")));
        }
    }
    let (d1, d2) = (ph.deriv(a.p1), ph.deriv(a.p2));
    if !(d1 * d2 > 0.0) {
        return Err(Error::Assumption(format!(
            "ψ' changes sign or vanishes on [{}, {}]",
            a.p1, a.p2
        )));
    }
    // Monotone ψ' attains its smallest modulus at an endpoint.
    let m = d1.abs().min(d2.abs());
    let (sup, l1d) = factor_norms(&a.factor, a.p1, a.p2)?;
    BoundCertificate::new(
        TheoremTag::T3_12,
        nostationary_formula(a.mu, sup, l1d, m),
        -a.mu,
        Regime::Everywhere,
        &[("sup_u", sup), ("l1_du", l1d), ("min_dpsi", m), ("mu", a.mu)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{FactorSpec, RegularFactor};

    fn amp(p1: f64, p2: f64, mu: f64, c: f64) -> Amplitude {
        Amplitude::new_unchecked_factor(p1, p2, mu, RegularFactor::constant(c)).unwrap()
    }

    fn square() -> Phase {
        Phase::power(0.0, 2.0, true, 2.0).unwrap()
    }

    #[test]
    fn interior_examples() {
        let c = vdc_interior_constant(&amp(0.0, 1.0, 0.5, 1.0), &square()).unwrap();
        assert_eq!((c.constant, c.decay_exponent), (10.0, -0.25));
        let c = vdc_interior_constant(&amp(0.0, 1.0, 1.0, 1.0), &square()).unwrap();
        assert_eq!((c.constant, c.decay_exponent), (5.0, -0.5));
        let c = vdc_interior_constant(&amp(0.0, 1.0, 0.5, 2.0), &square()).unwrap();
        assert_eq!(c.constant, 20.0);
        let off = Phase::power(-0.5, 2.0, true, 1.0).unwrap();
        assert!(matches!(
            vdc_interior_constant(&amp(0.0, 1.0, 0.5, 1.0), &off),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exterior_examples() {
        let c = vdc_exterior_constant(&amp(1.0, 2.0, 0.5, 1.0), &square()).unwrap();
        assert_eq!(c.constant, 6.0);
        // 2 + 3/2 for a regular amplitude.
        let c = vdc_exterior_constant(&amp(1.0, 2.0, 1.0, 1.0), &square()).unwrap();
        assert_eq!(c.constant, 3.5);
        let i = vdc_combined_constant(&amp(1.0, 2.0, 0.5, 1.0), &square()).unwrap();
        assert!(c.constant <= i.constant);
        assert_eq!(i.theorem_tag, TheoremTag::T3_8);
    }

    #[test]
    fn combined_matches_interior_formula_everywhere() {
        let a = amp(0.0, 1.0, 0.5, 1.0);
        for p0 in [0.0, 0.5, 1.0, -0.5] {
            let ph = Phase::power(p0, 2.0, true, 2.0).unwrap();
            assert_eq!(vdc_combined_constant(&a, &ph).unwrap().constant, 10.0);
        }
    }

    #[test]
    fn nostationary_examples() {
        let ph = Phase::quadratic(0.0, 4.0, -1.0).unwrap();
        let c = nostationary_constant(&amp(0.0, 1.0, 0.5, 1.0), &ph).unwrap();
        assert_eq!((c.constant, c.decay_exponent), (4.0, -0.5));
        let c = nostationary_constant(&amp(0.0, 1.0, 1.0, 1.0), &ph).unwrap();
        assert_eq!((c.constant, c.decay_exponent), (1.5, -1.0));
        let c = nostationary_constant(&amp(0.0, 1.0, 1.0, 0.0), &ph).unwrap();
        assert_eq!(c.constant, 0.0);
        assert!(nostationary_constant(&amp(0.0, 1.0, 1.0, 1.0), &square()).is_err());
    }

    #[test]
    fn sampled_norms_feed_the_formula() {
        let f = RegularFactor::from_spec(FactorSpec::Polynomial { coeffs: vec![1.0, 1.0] }).unwrap();
        let a = Amplitude::new(0.0, 1.0, 0.5, f).unwrap();
        let c = vdc_interior_constant(&a, &square()).unwrap();
        // sup = 2, ||ũ'|| = 1, m = 2
        assert_eq!(c.constant, 6.0 * 2.0 + (16.0 + 2.0) / 2.0);
    }
}

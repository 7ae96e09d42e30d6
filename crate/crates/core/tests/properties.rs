//! Invariants checked on random inputs with a fixed seed.

use num_complex::Complex64;
use oscibound::bounds::{vdc_combined_constant, vdc_exterior_constant, vdc_interior_constant};
use oscibound::functions::{Amplitude, FactorSpec, Phase, RegularFactor, Symbol};
use oscibound::quadrature::oscillatory_integral;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x05c1_b0d5),
        failure_persistence: None,
        ..Config::default()
    }
}

fn amplitude(lo: f64, len: f64, mu: f64, c: f64, slope: f64) -> Amplitude {
    let f = RegularFactor::from_spec(FactorSpec::Polynomial { coeffs: vec![c, slope] }).unwrap();
    Amplitude::new(lo, lo + len, mu, f).unwrap()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

proptest! {
    #![proptest_config(config(10_000))]

    #[test]
    fn power_difference_is_subadditive(y in 0.0f64..100.0, d in 0.0f64..100.0, mu in 1e-6f64..=1.0) {
        let x = y + d;
        prop_assert!(x.powf(mu) - y.powf(mu) <= d.powf(mu) * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn unit_interval_comparable_to_left_end(k in 1i64..100_000, negative: bool, s in 0.0f64..=1.0) {
        let n = if negative { -(k as f64) - 1.0 } else { k as f64 };
        let p = n + s;
        prop_assert!(0.5 * n.abs() <= p.abs() && p.abs() <= 2.0 * n.abs());
    }

    #[test]
    fn klein_gordon_velocity_inverts(c in 0.1f64..10.0, p in -1e3f64..1e3) {
        let s = Symbol::klein_gordon(c).unwrap();
        let back = s.invert_fprime(s.fprime(p)).unwrap();
        prop_assert!((back - p).abs() <= 1e-6 * (1.0 + p.abs()), "p {p} back {back}");
    }

    #[test]
    fn polynomial_velocity_inverts(a in 0.1f64..3.0, b in 0.01f64..1.0, p in -20.0f64..20.0) {
        // f = a p^2 + b p^4 has a strictly increasing derivative.
        let s = Symbol::polynomial(vec![0.0, 0.0, a, 0.0, b]).unwrap();
        let back = s.invert_fprime(s.fprime(p)).unwrap();
        prop_assert!((back - p).abs() <= 1e-7 * (1.0 + p.abs()), "p {p} back {back}");
    }

    #[test]
    fn exterior_constant_below_interior(
        lo in 0.05f64..3.0, len in 0.1f64..3.0, mu in 0.05f64..=1.0,
        c in 0.1f64..5.0, slope in -0.5f64..0.5, rho in 1.1f64..4.0, scale in 0.1f64..4.0,
    ) {
        // The stationary point 0 lies left of the support, so the interior
        // formula is reached through the combined constant.
        let a = amplitude(lo, len, mu, c, slope);
        let ph = Phase::power(0.0, rho, true, scale).unwrap();
        let ext = vdc_exterior_constant(&a, &ph).unwrap().constant;
        let int = vdc_combined_constant(&a, &ph).unwrap().constant;
        prop_assert!(ext <= int, "exterior {ext} interior {int}");
    }

    #[test]
    fn constants_scale_with_amplitude(
        len in 0.1f64..3.0, mu in 0.05f64..=1.0, c in 0.1f64..5.0, lam in 0.01f64..100.0, p0 in 0.0f64..1.0,
    ) {
        let a = amplitude(0.0, len, mu, c, 0.0);
        let ph = Phase::power(p0 * len, 2.0, true, 1.0).unwrap();
        let base = vdc_interior_constant(&a, &ph).unwrap().constant;
        let scaled = vdc_interior_constant(&a.scaled(Complex64::new(lam, 0.0)), &ph).unwrap().constant;
        prop_assert!((scaled - lam * base).abs() <= 1e-9 * lam * base);
    }
}

proptest! {
    #![proptest_config(config(10_000))]

    #[test]
    fn quadrature_invariances(
        mu in 0.1f64..=1.0, c in 0.2f64..3.0, slope in -0.5f64..0.5, p0 in -0.5f64..1.5,
        log_w in -1.0f64..2.0, re in -2.0f64..2.0, im in -2.0f64..2.0, shift in -3.0f64..3.0,
    ) {
        let a = amplitude(0.0, 1.0, mu, c, slope);
        let ph = Phase::power(p0, 2.0, true, 1.0).unwrap();
        let w = 10f64.powf(log_w);
        let lam = Complex64::new(re, im);
        let tol = 1e-11;
        let base = oscillatory_integral(&a, &ph, w, tol).unwrap().value;
        let conj = oscillatory_integral(&a.conj(), &ph.negated(), w, tol).unwrap().value;
        prop_assert!(close(conj, base.conj(), 1e-9), "conjugation {conj} vs {base}");
        let lin = oscillatory_integral(&a.scaled(lam), &ph, w, tol).unwrap().value;
        prop_assert!(close(lin, lam * base, 1e-9), "linearity {lin} vs {}", lam * base);
        let sh = oscillatory_integral(&a, &ph.shifted(shift), w, tol).unwrap().value;
        let want = base * Complex64::from_polar(1.0, w * shift);
        prop_assert!(close(sh, want, 1e-9), "shift {sh} vs {want}");
    }

    #[test]
    fn frequency_homogeneity(mu in 0.1f64..=1.0, p0 in 0.0f64..1.0, lam in 0.1f64..10.0, log_w in -1.0f64..1.5) {
        // (λψ, ω) and (ψ, λω) give the same integral.
        let a = amplitude(0.0, 1.0, mu, 1.0, 0.0);
        let w = 10f64.powf(log_w);
        let scaled = Phase::power(p0, 3.0, true, lam).unwrap();
        let plain = Phase::power(p0, 3.0, true, 1.0).unwrap();
        let x = oscillatory_integral(&a, &scaled, w, 1e-11).unwrap().value;
        let y = oscillatory_integral(&a, &plain, lam * w, 1e-11).unwrap().value;
        prop_assert!(close(x, y, 1e-9), "{x} vs {y}");
    }
}

#[test]
fn zeta_bound() {
    // ζ(σ) ≤ σ/(σ-1): partial sum to 10^7 plus the integral bound on the tail.
    let n = 10_000_000u64;
    for sigma in [1.5f64, 2.0, 3.0] {
        let partial: f64 = (1..=n).rev().map(|k| (k as f64).powf(-sigma)).sum();
        let tail = (n as f64).powf(1.0 - sigma) / (sigma - 1.0);
        assert!(
            partial + tail <= sigma / (sigma - 1.0),
            "sigma {sigma}: {}",
            partial + tail
        );
    }
}

//! Results checked against independent computations.

use num_complex::Complex64;
use oscibound::functions::{Amplitude, FactorSpec, InitialDatum, Phase, RegularFactor, Symbol};
use oscibound::propagator::{band_decompose, reversed_solution_eval, solution_eval, KleinGordon};
use oscibound::quadrature::oscillatory_integral;

/// Composite Simpson on `[0, 1]` with `n` (even) panels.
fn simpson(g: impl Fn(f64) -> Complex64, n: usize) -> Complex64 {
    let h = 1.0 / n as f64;
    let mut sum = g(0.0) + g(1.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g(k as f64 * h);
    }
    sum * (h / 3.0)
}

#[test]
fn quadrature_matches_composite_rule() {
    // p = s^{1/μ} removes the endpoint singularity: the integral becomes
    // (1/μ) ∫_0^1 ũ(p(s)) e^{iωψ(p(s))} ds.
    let cases = [(0.5, 0.4, 50.0), (0.3, 0.0, 20.0), (1.0, 0.7, 80.0), (0.75, -0.5, 30.0)];
    for (mu, p0, omega) in cases {
        let f = RegularFactor::from_spec(FactorSpec::Polynomial { coeffs: vec![1.0, 1.0] }).unwrap();
        let a = Amplitude::new(0.0, 1.0, mu, f).unwrap();
        let ph = Phase::power(p0, 2.0, true, 1.0).unwrap();
        let got = oscillatory_integral(&a, &ph, omega, 1e-12).unwrap().value;
        let want = simpson(
            |s: f64| {
                let p = s.powf(1.0 / mu);
                Complex64::from_polar(1.0 + p, omega * ph.eval(p))
            },
            10_000_000,
        ) / mu;
        assert!(
            (got - want).norm() < 1e-9,
            "mu {mu} p0 {p0} omega {omega}: {got} vs {want}"
        );
    }
}

#[test]
fn free_schrodinger_fresnel_value() {
    // u(1, 0) = (1/π) ∫_0^1 e^{-ip²} dp, summed from the power series of the exponential.
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..60 {
        sum += term / (2 * n + 1) as f64;
        term *= Complex64::new(0.0, -1.0) / (n + 1) as f64;
    }
    let want = sum / std::f64::consts::PI;
    let d = InitialDatum::indicator(-1.0, 1.0).unwrap();
    let got = solution_eval(&Symbol::schrodinger(), &d, 1.0, 0.0, 1e-12)
        .unwrap()
        .value;
    assert!((got - want).norm() < 1e-8, "{got} vs {want}");
}

fn kg_pair() -> KleinGordon {
    let u0 = InitialDatum::c3_example(0.5, 4.0).unwrap();
    let v0 = u0.scaled(Complex64::new(0.7, 0.0));
    KleinGordon::new(&u0, &v0, 1.0).unwrap()
}

#[test]
fn klein_gordon_initial_data_are_recovered() {
    let kg = kg_pair();
    let u0 = InitialDatum::c3_example(0.5, 4.0).unwrap();
    let v0 = u0.scaled(Complex64::new(0.7, 0.0));
    let s = Symbol::klein_gordon(1.0).unwrap();
    let h = 1e-4;
    for x in [-2.0, 0.0, 0.3, 5.0] {
        let u = kg.eval(0.0, x, 1e-11).unwrap().value;
        let want_u = solution_eval(&s, &u0, 0.0, x, 1e-11).unwrap().value;
        assert!((u - want_u).norm() < 1e-8, "u(0, {x}): {u} vs {want_u}");
        let ut = (kg.eval(h, x, 1e-11).unwrap().value - kg.eval(-h, x, 1e-11).unwrap().value) / (2.0 * h);
        let want_v = solution_eval(&s, &v0, 0.0, x, 1e-11).unwrap().value;
        assert!((ut - want_v).norm() < 1e-4, "u_t(0, {x}): {ut} vs {want_v}");
    }
}

#[test]
fn reversed_branch_matches_direct_evaluation() {
    let kg = kg_pair();
    for (t, x) in [(1.0, 0.5), (3.0, -2.0), (10.0, 4.0)] {
        let a = reversed_solution_eval(&kg.symbol, &kg.a_minus, t, x, 1e-10)
            .unwrap()
            .value;
        let b = kg.minus_branch_direct(t, x, 1e-10).unwrap().value;
        assert!((a - b).norm() < 1e-9, "({t}, {x}): {a} vs {b}");
    }
}

#[test]
fn band_pieces_sum_to_the_whole() {
    let s = Symbol::schrodinger();
    let f = RegularFactor::from_spec(FactorSpec::Gaussian {
        amplitude: 1.0,
        center: 0.5,
        width: 1.0,
    })
    .unwrap();
    let d = InitialDatum::c1(0.0, 2.0, 0.5, f).unwrap();
    let pieces = band_decompose(&d, &[0.5, 1.2]).unwrap();
    for (t, x) in [(0.5, 0.0), (2.0, 1.5), (4.0, -3.0)] {
        let whole = solution_eval(&s, &d, t, x, 1e-11).unwrap().value;
        let sum: Complex64 = pieces
            .iter()
            .map(|p| solution_eval(&s, p, t, x, 1e-11).unwrap().value)
            .sum();
        assert!((whole - sum).norm() < 1e-8, "({t}, {x}): {whole} vs {sum}");
    }
}

#[test]
fn frequency_shift_moves_with_group_velocity() {
    // Shifting Fu0 by q translates |u(t, ·)| by f'(q) t = 2qt.
    let s = Symbol::schrodinger();
    let q = 0.75;
    let d = InitialDatum::c1(0.0, 1.0, 0.5, RegularFactor::constant(1.0)).unwrap();
    let dq = InitialDatum::c1(q, 1.0 + q, 0.5, RegularFactor::constant(1.0)).unwrap();
    for (t, x) in [(1.0, 0.0), (5.0, 2.0), (20.0, -7.0), (100.0, 30.0)] {
        let a = solution_eval(&s, &d, t, x, 1e-11).unwrap().value.norm();
        let b = solution_eval(&s, &dq, t, x + 2.0 * q * t, 1e-11).unwrap().value.norm();
        assert!((a - b).abs() < 1e-9, "({t}, {x}): {a} vs {b}");
    }
}

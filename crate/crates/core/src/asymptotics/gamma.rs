//! Gamma function by the Lanczos approximation (g = 7, 9 terms).

use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x`, using reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x.fract() == 0.0 && x <= 171.0 {
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-12 * PI.sqrt());
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(0.25) - 3.625_609_908_221_908_3).abs() < 1e-12 * 3.63);
        assert!((gamma(5.0) - 24.0).abs() < 1e-11);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-12 * 3.6);
    }

    #[test]
    fn recurrence() {
        for &n in &[0.25, 0.5, 1.0, 1.5, 1.0 / 3.0, 0.125] {
            let lhs = gamma(n + 1.0);
            let rhs = n * gamma(n);
            assert!((lhs - rhs).abs() < 1e-13 * rhs.abs(), "{n}: {lhs} vs {rhs}");
        }
    }
}

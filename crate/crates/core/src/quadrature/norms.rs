//! Sampled norm estimators for the ingredients of the explicit constants.

use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::rules::gk15;
use super::HeapItem;

const SAMPLES: usize = 1025;
const CANDIDATES: usize = 5;
const GOLDEN_STEPS: usize = 80;

/// Maps `x` in `[-1, 1]` onto `[lo, hi]`, which may be infinite.
fn map_to(lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi) + 0.5 * (hi - lo) * x,
        (true, false) => {
            let y = 0.5 * (x + 1.0);
            lo + y / (1.0 - y)
        }
        (false, true) => {
            let y = 0.5 * (1.0 - x);
            hi - y / (1.0 - y)
        }
        (false, false) => x / (1.0 - x * x),
    }
}

fn chebyshev_points(lo: f64, hi: f64) -> Vec<f64> {
    let map = map_to(lo, hi);
    (0..SAMPLES)
        .map(|k| {
            let x = -(std::f64::consts::PI * k as f64 / (SAMPLES - 1) as f64).cos();
            map(x)
        })
        .filter(|p| p.is_finite())
        .collect()
}

/// Golden-section search for the maximum of `g` on `[a, b]`.
fn golden_max(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut best = gc.max(gd);
    for _ in 0..GOLDEN_STEPS {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
        best = best.max(gc).max(gd);
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
    }
    best
}

fn refined_extremum(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let pts = chebyshev_points(lo, hi);
    let vals: Vec<f64> = pts.iter().map(|&p| g(p)).collect();
    let mut best = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    for &k in order.iter().take(CANDIDATES) {
        let a = pts[k.saturating_sub(1)];
        let b = pts[(k + 1).min(pts.len() - 1)];
        if a < b {
            best = best.max(golden_max(g, a, b));
        }
    }
    best
}

/// Estimate of `sup |g|` on `[lo, hi]`, inflated by `1 + 1e-6`.
pub fn sup_norm(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let abs = |p: f64| g(p).abs();
    refined_extremum(&abs, lo, hi) * (1.0 + 1e-6)
}

/// Estimate of `min |g|` on `[lo, hi]`, deflated by `1 - 1e-6`.
pub fn min_abs(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let neg = |p: f64| -g(p).abs();
    -refined_extremum(&neg, lo, hi) * (1.0 - 1e-6)
}

/// Sup of a complex-valued function's modulus.
pub fn sup_norm_complex(g: &(dyn Fn(f64) -> Complex64 + Sync), lo: f64, hi: f64) -> f64 {
    sup_norm(&|p| g(p).norm(), lo, hi)
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// `∫ |g|` over `[lo, hi]` (possibly infinite), to relative accuracy `1e-8`.
/// Returns the value and whether the requested accuracy was reached.
pub fn l1_norm(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, bool) {
    if !(lo < hi) {
        return (0.0, true);
    }
    let map = map_to(lo, hi);
    let finite = lo.is_finite() && hi.is_finite();
    let jac = move |x: f64| -> f64 {
        if finite {
            0.5 * (hi - lo)
        } else if lo.is_finite() || hi.is_finite() {
            let y = if lo.is_finite() {
                0.5 * (1.0 + x)
            } else {
                0.5 * (1.0 - x)
            };
            0.5 / ((1.0 - y) * (1.0 - y))
        } else {
            (1.0 + x * x) / ((1.0 - x * x) * (1.0 - x * x))
        }
    };
    let h = |x: f64| {
        let p = map(x);
        if !p.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let v = g(p).abs() * jac(x);
        Complex64::new(if v.is_finite() { v } else { 0.0 }, 0.0)
    };
    let eval = |a: f64, b: f64| {
        let r = gk15(&h, a, b);
        Interval {
            a,
            b,
            value: r.value.re,
            error: r.error,
        }
    };
    // Start from 16 pieces so narrow features are seen.
    let mut items: Vec<Interval> = (0..16)
        .map(|k| eval(-1.0 + k as f64 / 8.0, -1.0 + (k + 1) as f64 / 8.0))
        .collect();
    let mut heap: BinaryHeap<HeapItem> = items
        .iter()
        .enumerate()
        .map(|(i, it)| HeapItem {
            error: it.error,
            index: i,
        })
        .collect();
    let mut total: f64 = items.iter().map(|i| i.value).sum();
    let mut err: f64 = items.iter().map(|i| i.error).sum();
    let mut steps = 0;
    while err > 1e-8 * total.abs() && err > 1e-300 && steps < 5000 {
        let Some(top) = heap.pop() else { break };
        let it = items[top.index];
        let mid = 0.5 * (it.a + it.b);
        if !(mid > it.a && mid < it.b) {
            continue;
        }
        let (l, r) = (eval(it.a, mid), eval(mid, it.b));
        total += l.value + r.value - it.value;
        err += l.error + r.error - it.error;
        items[top.index] = l;
        heap.push(HeapItem {
            error: l.error,
            index: top.index,
        });
        items.push(r);
        heap.push(HeapItem {
            error: r.error,
            index: items.len() - 1,
        });
        steps += 1;
    }
    let total: f64 = items.iter().map(|i| i.value).sum();
    let err: f64 = items.iter().map(|i| i.error).sum();
    (total, err <= 1e-8 * total.abs() || err <= 1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_examples() {
        let s = sup_norm(&|p| p, 0.0, 1.0);
        assert!((1.0..=1.0 + 2e-6).contains(&s));
        let s = sup_norm(&|p: f64| (10.0 * p).sin(), 0.0, 1.0);
        assert!((s - 1.0).abs() <= 1e-6 + 1e-12);
        let s = sup_norm(&|p: f64| (1.0 + p * p).powi(-2), -3.0, 3.0);
        assert!((1.0..=1.0 + 2e-6).contains(&s));
    }

    #[test]
    fn min_examples() {
        let m = min_abs(&|_| 2.0, 0.0, 1.0);
        assert!((2.0 * (1.0 - 2e-6)..=2.0).contains(&m));
        let kg = |p: f64| (1.0 + p * p).powf(-1.5);
        let m = min_abs(&kg, 0.0, 1.0);
        assert!((m - 2f64.powf(-1.5)).abs() < 1e-6);
        assert!(m <= 2f64.powf(-1.5));
    }

    #[test]
    fn sup_on_half_line_and_line() {
        let g = |p: f64| (1.0 + (p - 3.0) * (p - 3.0)).recip();
        let s = sup_norm(&g, f64::NEG_INFINITY, f64::INFINITY);
        assert!((s - 1.0).abs() < 2e-6);
        let s = sup_norm(&g, 5.0, f64::INFINITY);
        assert!((s - 0.2).abs() < 1e-6);
    }

    #[test]
    fn l1_examples() {
        let (v, ok) = l1_norm(&|_| 1.0, 0.0, 1.0);
        assert!(ok && (v - 1.0).abs() < 1e-14);
        let (v, ok) = l1_norm(&|p| 2.0 * p, 0.0, 1.0);
        assert!(ok && (v - 1.0).abs() < 1e-14);
        let dg = |p: f64| -2.0 * p / ((1.0 + p * p) * (1.0 + p * p));
        let (v, ok) = l1_norm(&dg, -10.0, 10.0);
        assert!(ok && (v - 2.0 * (1.0 - 1.0 / 101.0)).abs() < 1e-8);
        let (v, ok) = l1_norm(&dg, f64::NEG_INFINITY, f64::INFINITY);
        assert!(ok && (v - 2.0).abs() < 1e-8);
        let (v, ok) = l1_norm(&dg, 1.0, f64::INFINITY);
        assert!(ok && (v - 0.5).abs() < 1e-8);
        let (v, ok) = l1_norm(&dg, f64::NEG_INFINITY, -1.0);
        assert!(ok && (v - 0.5).abs() < 1e-8);
    }

    #[test]
    fn l1_brute_force_cross_check() {
        let dg = |p: f64| -2.0 * p / ((1.0 + p * p) * (1.0 + p * p));
        let n = 2_000_000;
        let h = 20.0 / n as f64;
        let brute: f64 = (0..n).map(|i| dg(-10.0 + (i as f64 + 0.5) * h).abs() * h).sum();
        let (v, _) = l1_norm(&dg, -10.0, 10.0);
        assert!((v - brute).abs() < 1e-9);
    }
}

use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{Amplitude, Phase};

use super::rules::gk15;
use super::{check_tol, pairwise_sum, HeapItem, QuadOptions, QuadResult};

/// `|p - singular_point|^(mu-1) factor(p) e^{iωψ(p)}`, integrated by
/// [`integrate_weighted`].
pub struct WeightedIntegrand<'a> {
    pub factor: &'a (dyn Fn(f64) -> Complex64 + Sync),
    pub singular_point: f64,
    pub mu: f64,
    pub phase: &'a (dyn Fn(f64) -> f64 + Sync),
    pub dphase: &'a (dyn Fn(f64) -> f64 + Sync),
    pub omega: f64,
    /// Point where ψ' vanishes, if any; the partition breaks there.
    pub stationary: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Linear,
    /// `p = anchor + s^(1/mu)`
    SingularLo(f64),
    /// `p = anchor - s^(1/mu)`
    SingularHi(f64),
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    map: Map,
    value: Complex64,
    error: f64,
}

impl WeightedIntegrand<'_> {
    #[inline]
    fn wave(&self, p: f64) -> Complex64 {
        let (s, c) = (self.omega * (self.phase)(p)).sin_cos();
        (self.factor)(p) * Complex64::new(c, s)
    }

    fn panel(&self, a: f64, b: f64, map: Map) -> Panel {
        let r = match map {
            Map::Linear => {
                if self.mu == 1.0 {
                    gk15(&|p| self.wave(p), a, b)
                } else {
                    let (ps, e) = (self.singular_point, self.mu - 1.0);
                    gk15(&|p| self.wave(p) * (p - ps).abs().powf(e), a, b)
                }
            }
            Map::SingularLo(anchor) => {
                let (k, inv) = (1.0 / self.mu, 1.0 / self.mu);
                gk15(&|s: f64| self.wave(anchor + s.powf(k)) * inv, a, b)
            }
            Map::SingularHi(anchor) => {
                let (k, inv) = (1.0 / self.mu, 1.0 / self.mu);
                gk15(&|s: f64| self.wave(anchor - s.powf(k)) * inv, a, b)
            }
        };
        Panel {
            a,
            b,
            map,
            value: r.value,
            error: r.error,
        }
    }

    /// Base partition edges of a monotone piece `[l, r]`: each panel carries
    /// a phase variation of at most `max_phase`.
    fn march(&self, l: f64, r: f64, max_phase: f64, limit: usize, edges: &mut Vec<f64>) -> bool {
        let w = self.omega.abs();
        edges.push(l);
        let mut x = l;
        while x < r {
            let d = w * (self.dphase)(x).abs();
            let mut h = if d > 0.0 { max_phase / d } else { r - x };
            if !(h < r - x) {
                h = r - x;
            }
            loop {
                let var = w * ((self.phase)(x + h) - (self.phase)(x)).abs();
                if !(var > max_phase * (1.0 + 1e-9)) {
                    break;
                }
                h *= (0.98 * max_phase / var).clamp(0.05, 0.98);
            }
            let mut next = x + h;
            if !(next > x) {
                return false;
            }
            if next >= r || r - next < 1e-12 * (r - l) {
                next = r;
            }
            edges.push(next);
            x = next;
            if edges.len() > limit {
                return false;
            }
        }
        true
    }
}

fn failed(panels: usize) -> QuadResult {
    QuadResult {
        value: Complex64::new(f64::NAN, f64::NAN),
        abs_error_estimate: f64::INFINITY,
        panels_used: panels,
        converged: false,
    }
}

/// Integrates `job` over the bounded interval `[a, b]` to `tol·(1 + |value|)`.
pub fn integrate_weighted(job: &WeightedIntegrand, a: f64, b: f64, opts: &QuadOptions) -> QuadResult {
    if !(a < b) {
        return QuadResult::zero();
    }
    let singular = job.mu < 1.0;
    let mut cuts = vec![a, b];
    for p in [Some(job.singular_point), job.stationary].into_iter().flatten() {
        if p > a && p < b {
            cuts.push(p);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let w = job.omega.abs();
    let estimate: f64 = cuts
        .windows(2)
        .map(|c| w * ((job.phase)(c[1]) - (job.phase)(c[0])).abs() / opts.max_phase_per_panel + 1.0)
        .sum();
    if !(estimate <= opts.max_base_panels as f64) {
        return failed(0);
    }
    let settle = 0.25 * opts.tol / (1.5 * estimate + 16.0);

    let mut settled: Vec<Complex64> = Vec::new();
    let mut settled_err = 0.0;
    let mut open: Vec<Panel> = Vec::new();
    let mut edges = Vec::new();
    let mut base = 0usize;
    for c in cuts.windows(2) {
        let (l, r) = (c[0], c[1]);
        edges.clear();
        if !job.march(l, r, opts.max_phase_per_panel, opts.max_base_panels, &mut edges) {
            return failed(base);
        }
        let n = edges.len() - 1;
        base += n;
        if base > opts.max_base_panels {
            return failed(base);
        }
        for (i, e) in edges.windows(2).enumerate() {
            let (x0, x1) = (e[0], e[1]);
            let pan = if singular && i == 0 && l == job.singular_point {
                job.panel(0.0, (x1 - l).powf(job.mu), Map::SingularLo(l))
            } else if singular && i == n - 1 && r == job.singular_point {
                job.panel(0.0, (r - x0).powf(job.mu), Map::SingularHi(r))
            } else {
                job.panel(x0, x1, Map::Linear)
            };
            if pan.error <= settle {
                settled.push(pan.value);
                settled_err += pan.error;
            } else {
                open.push(pan);
            }
        }
    }

    let mut heap: BinaryHeap<HeapItem> = open
        .iter()
        .enumerate()
        .map(|(i, p)| HeapItem {
            error: p.error,
            index: i,
        })
        .collect();
    let mut open_value: Complex64 = pairwise_sum(&open.iter().map(|p| p.value).collect::<Vec<_>>());
    let mut open_err: f64 = open.iter().map(|p| p.error).sum();
    let settled_value = pairwise_sum(&settled);
    let mut refinements = 0usize;
    let mut stuck = false;
    loop {
        let total = settled_value + open_value;
        let target = opts.tol * (1.0 + total.norm());
        if settled_err + open_err <= target {
            break;
        }
        if refinements >= opts.max_panels {
            break;
        }
        let Some(top) = heap.pop() else { break };
        let pan = open[top.index];
        let mid = 0.5 * (pan.a + pan.b);
        if !(mid > pan.a && mid < pan.b) {
            stuck = true;
            continue;
        }
        let left = job.panel(pan.a, mid, pan.map);
        let right = job.panel(mid, pan.b, pan.map);
        open_value += left.value + right.value - pan.value;
        open_err += left.error + right.error - pan.error;
        open[top.index] = left;
        heap.push(HeapItem {
            error: left.error,
            index: top.index,
        });
        open.push(right);
        heap.push(HeapItem {
            error: right.error,
            index: open.len() - 1,
        });
        refinements += 1;
        // Resynchronise running sums now and then.
        if refinements.is_multiple_of(4096) {
            open_value = pairwise_sum(&open.iter().map(|p| p.value).collect::<Vec<_>>());
            open_err = open.iter().map(|p| p.error).sum();
        }
    }
    open.sort_by(|x, y| x.a.total_cmp(&y.a));
    let open_value = pairwise_sum(&open.iter().map(|p| p.value).collect::<Vec<_>>());
    let open_err: f64 = open.iter().map(|p| p.error).sum();
    let value = settled_value + open_value;
    let error = settled_err + open_err;
    let converged = !stuck && value.re.is_finite() && value.im.is_finite() && error <= opts.tol * (1.0 + value.norm());
    QuadResult {
        value,
        abs_error_estimate: error,
        panels_used: base + refinements,
        converged,
    }
}

/// `∫_{p1}^{p2} U(p) e^{iωψ(p)} dp` with the default panel budget.
pub fn oscillatory_integral(a: &Amplitude, ph: &Phase, omega: f64, tol: f64) -> Result<QuadResult> {
    oscillatory_integral_with(a, ph, omega, &QuadOptions::with_tol(tol))
}

pub fn oscillatory_integral_with(a: &Amplitude, ph: &Phase, omega: f64, opts: &QuadOptions) -> Result<QuadResult> {
    opts.validate()?;
    check_tol(opts.tol)?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Parameter(format!(
            "omega must be positive and finite, got {omega}"
        )));
    }
    if a.p1 < ph.domain.0 || a.p2 > ph.domain.1 {
        return Err(Error::Domain {
            p: a.p1,
            lo: ph.domain.0,
            hi: ph.domain.1,
        });
    }
    let factor = |p: f64| a.factor.eval(p);
    let psi = |p: f64| ph.eval(p);
    let dpsi = |p: f64| ph.deriv(p);
    let job = WeightedIntegrand {
        factor: &factor,
        singular_point: a.p1,
        mu: a.mu,
        phase: &psi,
        dphase: &dpsi,
        omega,
        stationary: ph.p0(),
    };
    Ok(integrate_weighted(&job, a.p1, a.p2, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::RegularFactor;
    use std::f64::consts::PI;

    fn amp(mu: f64) -> Amplitude {
        Amplitude::new(0.0, 1.0, mu, RegularFactor::constant(1.0)).unwrap()
    }

    #[test]
    fn linear_phase_closed_form() {
        let ph = Phase::linear(0.0, 1.0).unwrap();
        let r = oscillatory_integral(&amp(1.0), &ph, PI, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - Complex64::new(0.0, 2.0 / PI)).norm() < 1e-13);
        assert!((r.value.norm() - std::f64::consts::FRAC_2_PI).abs() < 1e-6);
    }

    #[test]
    fn small_omega_singular_limit() {
        let ph = Phase::power(0.0, 2.0, true, 1.0).unwrap();
        let r = oscillatory_integral(&amp(0.5), &ph, 1e-9, 1e-12).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9);
    }

    #[test]
    fn singular_amplitude_with_closed_form() {
        // ∫_0^1 p^{mu-1} dp = 1/mu for mu = 0.25
        let ph = Phase::linear(0.0, 1.0).unwrap();
        let r = oscillatory_integral(&amp(0.25), &ph, 1e-12, 1e-12).unwrap();
        assert!((r.value.re - 4.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_arguments() {
        let ph = Phase::linear(0.0, 1.0).unwrap();
        assert!(oscillatory_integral(&amp(1.0), &ph, 1.0, 1.0).is_err());
        assert!(oscillatory_integral(&amp(1.0), &ph, 0.0, 1e-8).is_err());
    }

    #[test]
    fn large_omega_is_resolved() {
        // ∫_0^1 e^{iωp} dp at ω = 1e6
        let ph = Phase::linear(0.0, 1.0).unwrap();
        let w = 1e6;
        let r = oscillatory_integral(&amp(1.0), &ph, w, 1e-10).unwrap();
        let exact = (Complex64::from_polar(1.0, w) - 1.0) / Complex64::new(0.0, w);
        assert!(r.converged);
        assert!((r.value - exact).norm() < 1e-11, "{:?} vs {exact}", r.value);
    }

    #[test]
    fn panel_budget_exhaustion_is_reported() {
        let ph = Phase::linear(0.0, 1.0).unwrap();
        let opts = QuadOptions {
            max_base_panels: 10,
            ..QuadOptions::with_tol(1e-10)
        };
        let r = oscillatory_integral_with(&amp(1.0), &ph, 1e4, &opts).unwrap();
        assert!(!r.converged);
    }
}

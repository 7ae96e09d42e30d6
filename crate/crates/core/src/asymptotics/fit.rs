use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `(log10 x, log10 y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points_used: usize,
    /// Samples with `y = 0` that were left out.
    pub dropped_zeros: usize,
}

fn clean(samples: &[(f64, f64)]) -> Result<(Vec<(f64, f64)>, usize)> {
    let mut kept = Vec::with_capacity(samples.len());
    let mut zeros = 0;
    for &(x, y) in samples {
        if !(x > 0.0) || !x.is_finite() || !(y >= 0.0) || !y.is_finite() {
            return Err(Error::Parameter(format!("bad decay sample ({x}, {y})")));
        }
        if y == 0.0 {
            zeros += 1;
        } else {
            kept.push((x, y));
        }
    }
    kept.sort_by(|a, b| a.0.total_cmp(&b.0));
    if kept.len() < 8 {
        return Err(Error::Parameter(format!(
            "decay fit needs at least 8 nonzero samples, got {} ({zeros} zeros dropped)",
            kept.len()
        )));
    }
    let span = (kept[kept.len() - 1].0 / kept[0].0).log10();
    if span < 2.0 - 1e-12 {
        return Err(Error::Parameter(format!(
            "decay fit needs 2 decades, samples span {span:.3}"
        )));
    }
    Ok((kept, zeros))
}

fn line(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r2 = if ss_tot <= f64::EPSILON * f64::EPSILON * n {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    (slope, intercept, r2)
}

/// Per-decade maxima of the samples, decades counted from the smallest x.
///
/// A lone point at the end of the grid (typically `x_max = 10^k x_min`) is
/// merged into the previous decade rather than forming its own.
pub fn envelope(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = samples.iter().copied().filter(|p| p.0 > 0.0).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let Some(&(x0, _)) = pts.first() else {
        return Vec::new();
    };
    let decade = |x: f64| ((x / x0).log10() + 1e-9).floor() as i64;
    let mut groups: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current = i64::MIN;
    for p in pts {
        let d = decade(p.0);
        if d != current {
            groups.push(Vec::new());
            current = d;
        }
        groups.last_mut().unwrap().push(p);
    }
    if groups.len() > 1 && groups.last().map(|g| g.len()) == Some(1) {
        let tail = groups.pop().unwrap();
        groups.last_mut().unwrap().extend(tail);
    }
    groups
        .into_iter()
        .map(|g| g.into_iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap())
        .collect()
}

/// Empirical decay exponent from the per-decade envelope.
pub fn fit_decay(samples: &[(f64, f64)]) -> Result<DecayFit> {
    let (kept, zeros) = clean(samples)?;
    let env = envelope(&kept);
    let (slope, intercept, r_squared) = line(&env);
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
        window: (kept[0].0, kept[kept.len() - 1].0),
        points_used: env.len(),
        dropped_zeros: zeros,
    })
}

/// Fit through every nonzero sample, without the envelope.
pub fn fit_raw(samples: &[(f64, f64)]) -> Result<DecayFit> {
    let (kept, zeros) = clean(samples)?;
    let (slope, intercept, r_squared) = line(&kept);
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
        window: (kept[0].0, kept[kept.len() - 1].0),
        points_used: kept.len(),
        dropped_zeros: zeros,
    })
}

/// `n` geometric points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let r = (hi / lo).ln();
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo * (r * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_power_law_is_exact() {
        let s: Vec<(f64, f64)> = geometric_grid(1.0, 1e4, 20)
            .into_iter()
            .map(|x| (x, 5.0 * x.powf(-0.25)))
            .collect();
        let f = fit_decay(&s).unwrap();
        assert!((f.slope + 0.25).abs() < 1e-12, "{f:?}");
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!((10f64.powf(f.intercept) - 5.0).abs() < 1e-10);
        let r = fit_raw(&s).unwrap();
        assert!((r.slope + 0.25).abs() < 1e-12);
    }

    #[test]
    fn constant_has_zero_slope() {
        let s: Vec<(f64, f64)> = geometric_grid(1.0, 1e3, 12).into_iter().map(|x| (x, 3.0)).collect();
        let f = fit_decay(&s).unwrap();
        assert!(f.slope.abs() < 1e-12);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn oscillating_envelope() {
        let s: Vec<(f64, f64)> = geometric_grid(1e2, 1e6, 97)
            .into_iter()
            .map(|x| (x, 2.0 * (0.5 * x).sin().abs() / x))
            .collect();
        let f = fit_decay(&s).unwrap();
        assert!((f.slope + 1.0).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn envelope_merges_trailing_point() {
        let g = geometric_grid(1.0, 100.0, 9);
        let env = envelope(&g.iter().map(|&x| (x, 1.0 / x)).collect::<Vec<_>>());
        assert_eq!(env.len(), 2);
    }

    #[test]
    fn rejects_short_or_narrow_input() {
        let few: Vec<(f64, f64)> = geometric_grid(1.0, 1e3, 7).into_iter().map(|x| (x, x)).collect();
        assert!(matches!(fit_decay(&few), Err(Error::Parameter(_))));
        let narrow: Vec<(f64, f64)> = geometric_grid(1.0, 50.0, 20).into_iter().map(|x| (x, x)).collect();
        assert!(matches!(fit_decay(&narrow), Err(Error::Parameter(_))));
        let mut zeros: Vec<(f64, f64)> = geometric_grid(1.0, 1e3, 10).into_iter().map(|x| (x, 1.0 / x)).collect();
        zeros[3].1 = 0.0;
        let f = fit_decay(&zeros).unwrap();
        assert_eq!(f.dropped_zeros, 1);
        zeros[4].1 = 0.0;
        zeros[5].1 = 0.0;
        assert!(fit_decay(&zeros).is_err());
    }
}

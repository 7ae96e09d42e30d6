use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadResult;

use super::certificate::{bound_value, BoundCertificate};

/// Default allowance for quadrature error in the domination test.
pub const DEFAULT_SLACK: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub parameter: f64,
    pub truth_abs: f64,
    pub bound_value: f64,
}

impl Sample {
    pub fn ratio(&self) -> f64 {
        if self.truth_abs == 0.0 {
            0.0
        } else {
            self.truth_abs / self.bound_value
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub samples: Vec<Sample>,
    pub max_ratio: f64,
    pub all_dominated: bool,
    pub quadrature_slack: f64,
    /// Parameter with the largest ratio.
    pub worst_parameter: Option<f64>,
    /// Grid points whose quadrature did not converge; left out of the ratio.
    pub excluded: Vec<f64>,
}

/// Compares `|truth(x)|` with the summed certificate terms at each grid point.
pub fn verify_bound<F>(certs: &[BoundCertificate], truth: F, grid: &[f64], slack: f64) -> Result<VerificationReport>
where
    F: Fn(f64) -> Result<QuadResult> + Sync,
{
    if certs.is_empty() {
        return Err(Error::Parameter("no certificate to verify".into()));
    }
    if !(slack >= 0.0) {
        return Err(Error::Parameter(format!("slack must be nonnegative, got {slack}")));
    }
    if let Some(&x) = grid.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Parameter(format!("grid point {x} is not positive")));
    }
    let evaluated: Vec<(f64, QuadResult)> = grid
        .par_iter()
        .map(|&x| truth(x).map(|r| (x, r)))
        .collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(grid.len());
    let mut excluded = Vec::new();
    for (x, r) in evaluated {
        if !r.converged {
            excluded.push(x);
            continue;
        }
        samples.push(Sample {
            parameter: x,
            truth_abs: r.value.norm(),
            bound_value: bound_value(certs, x),
        });
    }
    let mut max_ratio = 0.0;
    let mut worst = None;
    for s in &samples {
        let r = s.ratio();
        if r > max_ratio || r.is_nan() {
            max_ratio = if r.is_nan() { f64::INFINITY } else { r };
            worst = Some(s.parameter);
        }
    }
    Ok(VerificationReport {
        all_dominated: max_ratio <= 1.0 + slack,
        samples,
        max_ratio,
        quadrature_slack: slack,
        worst_parameter: worst,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::geometric_grid;
    use crate::bounds::{vdc_interior_constant, Regime, TheoremTag};
    use crate::functions::{Amplitude, Phase, RegularFactor};
    use crate::quadrature::oscillatory_integral;

    #[test]
    fn interior_example_dominates_and_halving_fails() {
        let a = Amplitude::new(0.0, 1.0, 0.5, RegularFactor::constant(1.0)).unwrap();
        let ph = Phase::power(0.0, 2.0, true, 2.0).unwrap();
        let cert = vdc_interior_constant(&a, &ph).unwrap();
        let grid = geometric_grid(1e-2, 1e6, 60);
        let truth = |w: f64| oscillatory_integral(&a, &ph, w, 1e-10);
        let rep = verify_bound(std::slice::from_ref(&cert), truth, &grid, DEFAULT_SLACK).unwrap();
        assert!(rep.all_dominated, "{}", rep.max_ratio);
        assert!(rep.excluded.is_empty());

        let mut tight = cert.clone();
        tight.constant = 1.0;
        let rep = verify_bound(&[tight], truth, &grid, DEFAULT_SLACK).unwrap();
        assert!(!rep.all_dominated);
        assert!(rep.worst_parameter.is_some());
    }

    #[test]
    fn zero_truth() {
        let c = BoundCertificate::new(TheoremTag::T3_3, 1.0, -0.5, Regime::Everywhere, &[]).unwrap();
        let rep = verify_bound(&[c], |_| Ok(QuadResult::zero()), &[1.0, 2.0], DEFAULT_SLACK).unwrap();
        assert_eq!(rep.max_ratio, 0.0);
        assert!(rep.all_dominated);
    }

    #[test]
    fn flags_unconverged_points() {
        let c = BoundCertificate::new(TheoremTag::T3_3, 1.0, -0.5, Regime::Everywhere, &[]).unwrap();
        let truth = |x: f64| {
            let mut r = QuadResult::zero();
            r.converged = x < 5.0;
            Ok(r)
        };
        let rep = verify_bound(&[c], truth, &[1.0, 10.0], DEFAULT_SLACK).unwrap();
        assert_eq!(rep.excluded, vec![10.0]);
        assert_eq!(rep.samples.len(), 1);
    }
}

//! Monte-Carlo checks of the exponential martingale identity and of the
//! `2 sinh` bound on `E|1 − R|`.

use rayon::prelude::*;
use serde::Serialize;

use crate::grid::discretize;
use crate::harness::McEstimate;
use crate::interval::Region;
use crate::likelihood::{LogDensity, Numerator, RatioSplit};
use crate::measures::MeasureSpec;
use crate::simulate::{JumpSampler, RandomStream};
use crate::{Error, Result};

/// Stream-index offset separating the paths drawn under `ν` from those drawn
/// under `ν̃`.
pub const NU_STREAM_OFFSET: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub m: u32,
    pub horizon: f64,
    pub region: Region,
    pub replications: usize,
    pub seed: u64,
    /// `∫_region |ρ − ρ̄_m| dν̃`.
    pub discrepancy: f64,
    /// `E_{ν̃}[e^{U}]`, target 1.
    pub martingale: McEstimate,
    /// Paths under `ν̃` with a jump where `ρ = 0`; they contribute `e^U = 0`.
    pub singular_paths: usize,
    /// `E_ν|1 − R|`.
    pub abs_deviation: McEstimate,
    /// `2 sinh(T·discrepancy)`.
    pub sinh_bound: f64,
    /// `E_ν[e^{A⁺} − e^{A⁻}]`, target `sinh_bound`.
    pub sinh_identity: McEstimate,
    pub martingale_pass: bool,
    pub bound_pass: bool,
    pub identity_pass: bool,
    pub passed: bool,
}

/// Runs both Monte-Carlo experiments with `replications` paths each.
/// `region` must carry finite `ν` and `ν̃` mass.
#[allow(clippy::too_many_arguments)]
pub fn lemma_checks(
    spec: &MeasureSpec,
    m: u32,
    horizon: f64,
    region: &Region,
    replications: usize,
    seed: u64,
    resolution: usize,
    tol: f64,
) -> Result<LemmaReport> {
    if replications == 0 {
        return Err(Error::invalid("replications must be positive"));
    }
    let disc = discretize(spec, m, tol)?;
    let dominating = spec.dominating_spec();

    let log_density = LogDensity::new(Numerator::Measure(spec), &spec.dominating, region, tol)?;
    let under_dominating = JumpSampler::new(&dominating, region, resolution)?;
    let exp_u: Vec<Option<f64>> = (0..replications as u64)
        .into_par_iter()
        .map(|i| {
            let path = under_dominating.simulate_path(horizon, 0.0, RandomStream::new(seed, i))?;
            match log_density.eval(&path) {
                Ok(u) => Ok(Some(u.exp())),
                Err(Error::SingularRatio { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let singular_paths = exp_u.iter().filter(|v| v.is_none()).count();
    let exp_u: Vec<f64> = exp_u.into_iter().map(|v| v.unwrap_or(0.0)).collect();
    let martingale = McEstimate::from_samples(&exp_u);

    let split = RatioSplit::new(spec, &disc, region, tol)?;
    let under_nu = JumpSampler::new(spec, region, resolution)?;
    let pairs: Vec<(f64, f64)> = (0..replications as u64)
        .into_par_iter()
        .map(|i| {
            let path = under_nu.simulate_path(horizon, 0.0, RandomStream::new(seed, NU_STREAM_OFFSET + i))?;
            let rep = split.report(&path)?;
            Ok(((1.0 - rep.ratio).abs(), rep.a_plus.exp() - rep.a_minus.exp()))
        })
        .collect::<Result<_>>()?;
    let (dev, ident): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let abs_deviation = McEstimate::from_samples(&dev);
    let sinh_identity = McEstimate::from_samples(&ident);
    let discrepancy = split.discrepancy();
    let sinh_bound = 2.0 * (horizon * discrepancy).sinh();

    let martingale_pass = martingale.matches(1.0);
    let bound_pass = abs_deviation.at_most(sinh_bound);
    let identity_pass = sinh_identity.matches(sinh_bound);
    Ok(LemmaReport {
        m,
        horizon,
        region: region.clone(),
        replications,
        seed,
        discrepancy,
        martingale,
        singular_paths,
        abs_deviation,
        sinh_bound,
        sinh_identity,
        martingale_pass,
        bound_pass,
        identity_pass,
        passed: martingale_pass && bound_pass && identity_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::measures::{DominatingMeasure, Ratio};
    use crate::numerics::BOUND_TOL;

    #[test]
    fn equal_measures_are_exact() {
        let spec = MeasureSpec::custom(DominatingMeasure::gaussian(1.0).unwrap(), Ratio::One).unwrap();
        let r = lemma_checks(&spec, 3, 1.0, &Region::outside(1.0 / 3.0), 500, 4, 1024, BOUND_TOL).unwrap();
        assert_eq!(r.martingale.mean, 1.0);
        assert_eq!(r.abs_deviation.mean, 0.0);
        assert_eq!(r.sinh_bound, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn linear_example() {
        let spec = MeasureSpec::custom(
            DominatingMeasure::lebesgue(0.0, 1.0).unwrap(),
            Ratio::Linear {
                intercept: 0.0,
                slope: 1.0,
            },
        )
        .unwrap();
        let region = Region::single(Interval::new(0.5, 1.0));
        let r = lemma_checks(&spec, 2, 1.0, &region, 20_000, 17, 1024, BOUND_TOL).unwrap();
        assert!((r.sinh_bound - 2.0 * (1.0f64 / 16.0).sinh()).abs() < 1e-12);
        assert!((r.sinh_bound - 0.125081).abs() < 1e-6);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn sinh_oracle() {
        // series 2(x + x³/6 + x⁵/120 + x⁷/5040 + x⁹/362880) at x = 0.4375
        let x: f64 = 0.4375;
        let series = 2.0 * (x + x.powi(3) / 6.0 + x.powi(5) / 120.0 + x.powi(7) / 5040.0 + x.powi(9) / 362880.0);
        assert!((2.0 * x.sinh() - series).abs() < 1e-9);
        assert!((series - 0.9032).abs() < 1e-4);
    }
}

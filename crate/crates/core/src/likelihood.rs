//! Log-likelihood of a jump path under a change of jump measure, restricted
//! to a region of finite activity.
//!
//! For a path `x` on `[0, T]` whose jumps all lie in the region `R`,
//!
//! ```text
//! U_T(x) = Σ ln ρ(Δx_r) − T ∫_R (ρ − 1) dν̃
//! ```
//!
//! is the log-density of the law with jump measure `ρ·ν̃` against the law with
//! jump measure `ν̃`, both restricted to `R`.

use serde::Serialize;

use crate::grid::DiscretizedMeasure;
use crate::interval::Region;
use crate::measures::{DominatingMeasure, Estimate, MeasureSpec};
use crate::simulate::JumpPath;
use crate::{Error, Result};

/// The density ratio in the numerator: either the original `ρ` or the
/// grid-constant `ρ̄_m`.
#[derive(Debug, Clone, Copy)]
pub enum Numerator<'a> {
    Measure(&'a MeasureSpec),
    Discretized(&'a DiscretizedMeasure),
}

impl Numerator<'_> {
    fn eval(&self, y: f64) -> Result<f64> {
        match self {
            Numerator::Measure(spec) => spec.ratio_eval(y),
            Numerator::Discretized(disc) => Ok(disc.ratio_at(y)),
        }
    }

    /// `∫_region (ρ − 1) dν̃`.
    fn compensator(&self, dominating: &DominatingMeasure, region: &Region, tol: f64) -> Result<Estimate> {
        match self {
            Numerator::Measure(spec) => {
                let per_tol = tol / region.parts().len().max(1) as f64;
                region
                    .parts()
                    .iter()
                    .map(|&iv| {
                        dominating
                            .integrate(|y| spec.ratio.eval(y) - 1.0, iv, per_tol)
                            .or_divergent(|| format!("compensator on {iv}"))
                    })
                    .sum()
            }
            Numerator::Discretized(disc) => {
                let pieces = disc.pieces(region);
                let per_tol = tol / pieces.len().max(1) as f64;
                pieces
                    .into_iter()
                    .filter(|&(_, rbar)| rbar != 1.0)
                    .map(|(iv, rbar)| {
                        let mass = dominating
                            .mass(iv, per_tol)
                            .or_divergent(|| format!("dominating mass of {iv}"))?;
                        Ok(Estimate {
                            value: (rbar - 1.0) * mass.value,
                            error: (rbar - 1.0).abs() * mass.error,
                        })
                    })
                    .sum()
            }
        }
    }
}

fn check_region(path: &JumpPath, region: &Region) -> Result<()> {
    match path.sizes().find(|&y| !region.contains(y)) {
        Some(y) => Err(Error::invalid(format!(
            "jump of size {y} lies outside the likelihood region"
        ))),
        None => Ok(()),
    }
}

/// Flat record of one likelihood evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LikelihoodReport {
    /// `jump_sum − compensator`.
    pub u_value: f64,
    /// `T ∫_R (ρ − 1) dν̃`.
    pub compensator: f64,
    /// `Σ ln ρ(Δx_r)`.
    pub jump_sum: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    /// `exp(a_plus + a_minus)`.
    pub ratio: f64,
}

/// `U_T` with the compensator integral computed once, for repeated use
/// across many paths.
#[derive(Debug, Clone)]
pub struct LogDensity<'a> {
    numerator: Numerator<'a>,
    region: Region,
    /// `∫_R (ρ − 1) dν̃`, per unit time.
    rate: Estimate,
    floor: Option<f64>,
}

impl<'a> LogDensity<'a> {
    pub fn new(numerator: Numerator<'a>, dominating: &DominatingMeasure, region: &Region, tol: f64) -> Result<Self> {
        let rate = numerator.compensator(dominating, region, tol)?;
        Ok(LogDensity {
            numerator,
            region: region.clone(),
            rate,
            floor: None,
        })
    }

    /// Replace `ρ(y)` by `max(ρ(y), floor)` at jumps instead of reporting a
    /// singular ratio.
    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = Some(floor);
        self
    }

    pub fn compensator_rate(&self) -> Estimate {
        self.rate
    }

    /// `(jump_sum, compensator)` for `path`.
    pub fn terms(&self, path: &JumpPath) -> Result<(f64, f64)> {
        check_region(path, &self.region)?;
        let mut jump_sum = 0.0;
        for y in path.sizes() {
            let mut r = self.numerator.eval(y)?;
            if let Some(floor) = self.floor {
                r = r.max(floor);
            }
            if !(r > 0.0) {
                return Err(Error::SingularRatio { size: y });
            }
            jump_sum += r.ln();
        }
        Ok((jump_sum, path.horizon * self.rate.value))
    }

    pub fn eval(&self, path: &JumpPath) -> Result<f64> {
        let (jump_sum, compensator) = self.terms(path)?;
        Ok(jump_sum - compensator)
    }
}

/// One-shot `U_T(path)`; prefer [`LogDensity`] inside loops.
pub fn log_density_u(
    path: &JumpPath,
    numerator: Numerator<'_>,
    dominating: &DominatingMeasure,
    region: &Region,
    tol: f64,
) -> Result<f64> {
    LogDensity::new(numerator, dominating, region, tol)?.eval(path)
}

/// Split of `ln(dP^{ν̄_m}/dP^ν)` into a nonnegative and a nonpositive part.
///
/// With `f⁺ = (ρ̄/ρ)` where `ρ̄ ≥ ρ` (1 elsewhere) and `f⁻ = (ρ̄/ρ)` where
/// `ρ̄ < ρ`,
///
/// ```text
/// A⁺ = Σ ln f⁺(Δx_r) + T ∫_R (1 − f⁻) dν
/// A⁻ = Σ ln f⁻(Δx_r) − T ∫_R (f⁺ − 1) dν
/// ```
///
/// so each part is compensated by the integral of the opposite factor. The
/// sum `A⁺ + A⁻` is the full log-ratio either way.
#[derive(Debug, Clone)]
pub struct RatioSplit<'a> {
    spec: &'a MeasureSpec,
    disc: &'a DiscretizedMeasure,
    region: Region,
    /// `∫_R (ρ̄ − ρ)⁺ dν̃`, per unit time.
    pub excess: Estimate,
    /// `∫_R (ρ − ρ̄)⁺ dν̃`, per unit time.
    pub deficit: Estimate,
    /// `∫_R (ρ − 1) dν̃`, per unit time.
    rate: Estimate,
}

impl<'a> RatioSplit<'a> {
    pub fn new(spec: &'a MeasureSpec, disc: &'a DiscretizedMeasure, region: &Region, tol: f64) -> Result<Self> {
        let pieces = disc.pieces(region);
        let per_tol = tol / (2 * pieces.len()).max(1) as f64;
        let mut excess = Estimate::exact(0.0);
        let mut deficit = Estimate::exact(0.0);
        for &(iv, rbar) in &pieces {
            excess = excess
                + spec
                    .dominating
                    .integrate(|y| (rbar - spec.ratio.eval(y)).max(0.0), iv, per_tol)
                    .or_divergent(|| format!("positive part of the discretization error on {iv}"))?;
            deficit = deficit
                + spec
                    .dominating
                    .integrate(|y| (spec.ratio.eval(y) - rbar).max(0.0), iv, per_tol)
                    .or_divergent(|| format!("negative part of the discretization error on {iv}"))?;
        }
        let rate = Numerator::Measure(spec).compensator(&spec.dominating, region, tol)?;
        let rate_bar = Numerator::Discretized(disc).compensator(&spec.dominating, region, tol)?;
        // Pin deficit − excess to the difference of the two compensators so that
        // exp(A+ + A−) reproduces exp(U[ρ̄] − U[ρ]) to rounding; the quadrature
        // residual is split evenly and never drives either part below zero.
        let residual = (rate.value - rate_bar.value) - (deficit.value - excess.value);
        let mut d = deficit.value + residual / 2.0;
        let mut e = excess.value - residual / 2.0;
        if d < 0.0 {
            e -= d;
            d = 0.0;
        }
        if e < 0.0 {
            d -= e;
            e = 0.0;
        }
        let slack = residual.abs() / 2.0 + rate.error + rate_bar.error;
        let excess = Estimate {
            value: e,
            error: excess.error + slack,
        };
        let deficit = Estimate {
            value: d,
            error: deficit.error + slack,
        };
        Ok(RatioSplit {
            spec,
            disc,
            region: region.clone(),
            excess,
            deficit,
            rate,
        })
    }

    /// `∫_R |ρ − ρ̄_m| dν̃`.
    pub fn discrepancy(&self) -> f64 {
        self.excess.value + self.deficit.value
    }

    pub fn report(&self, path: &JumpPath) -> Result<LikelihoodReport> {
        check_region(path, &self.region)?;
        let t = path.horizon;
        let mut jump_sum = 0.0;
        let mut log_f_plus = 0.0;
        let mut log_f_minus = 0.0;
        for y in path.sizes() {
            let rho = self.spec.ratio_eval(y)?;
            let rbar = self.disc.ratio_at(y);
            if !(rho > 0.0) || !(rbar > 0.0) {
                return Err(Error::SingularRatio { size: y });
            }
            jump_sum += rho.ln();
            let log_q = (rbar / rho).ln();
            if rbar >= rho {
                log_f_plus += log_q;
            } else {
                log_f_minus += log_q;
            }
        }
        let a_plus = log_f_plus + t * self.deficit.value;
        let a_minus = log_f_minus - t * self.excess.value;
        let compensator = t * self.rate.value;
        Ok(LikelihoodReport {
            u_value: jump_sum - compensator,
            compensator,
            jump_sum,
            a_plus,
            a_minus,
            ratio: (a_plus + a_minus).exp(),
        })
    }
}

/// One-shot split; prefer [`RatioSplit`] inside loops.
pub fn ratio_split(
    path: &JumpPath,
    spec: &MeasureSpec,
    disc: &DiscretizedMeasure,
    region: &Region,
    tol: f64,
) -> Result<LikelihoodReport> {
    RatioSplit::new(spec, disc, region, tol)?.report(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::discretize;
    use crate::interval::Interval;
    use crate::measures::Ratio;
    use crate::numerics::BOUND_TOL;

    fn lebesgue_spec(ratio: Ratio) -> MeasureSpec {
        MeasureSpec::custom(DominatingMeasure::lebesgue(0.0, 1.0).unwrap(), ratio).unwrap()
    }

    fn linear() -> MeasureSpec {
        lebesgue_spec(Ratio::Linear {
            intercept: 0.0,
            slope: 1.0,
        })
    }

    fn upper_half() -> Region {
        Region::single(Interval::new(0.5, 1.0))
    }

    #[test]
    fn identity_ratio_gives_zero() {
        let spec = lebesgue_spec(Ratio::One);
        let path = JumpPath::new(2.0, 0.0, vec![(0.3, 0.2), (1.1, 0.9)]).unwrap();
        let u = log_density_u(
            &path,
            Numerator::Measure(&spec),
            &spec.dominating,
            &Region::real_line(),
            BOUND_TOL,
        )
        .unwrap();
        assert_eq!(u, 0.0);
    }

    #[test]
    fn empty_path() {
        let spec = linear();
        let path = JumpPath::empty(1.0, 0.0).unwrap();
        let u = log_density_u(
            &path,
            Numerator::Measure(&spec),
            &spec.dominating,
            &upper_half(),
            BOUND_TOL,
        )
        .unwrap();
        // ∫_{1/2}^1 (y − 1) dy = −1/8
        assert!((u - 0.125).abs() < 1e-12, "{u}");
    }

    #[test]
    fn single_jump() {
        // ρ = 0.6 + 1.4y on ]0,1]: ∫(ρ − 1) = 0.3, ρ(1) = 2
        let spec = lebesgue_spec(Ratio::Linear {
            intercept: 0.6,
            slope: 1.4,
        });
        let path = JumpPath::new(1.0, 0.0, vec![(0.5, 1.0)]).unwrap();
        let u = log_density_u(
            &path,
            Numerator::Measure(&spec),
            &spec.dominating,
            &Region::real_line(),
            BOUND_TOL,
        )
        .unwrap();
        assert!((u - (2f64.ln() - 0.3)).abs() < 1e-12);
        assert!((u - 0.3931471805599453).abs() < 1e-12);
    }

    #[test]
    fn zero_ratio_is_singular() {
        let spec = linear();
        let path = JumpPath::new(1.0, 0.0, vec![(0.5, 1e-300), (0.6, 0.5)]).unwrap();
        let region = Region::single(Interval::new(0.0, 1.0));
        let ld = LogDensity::new(Numerator::Measure(&spec), &spec.dominating, &region, BOUND_TOL).unwrap();
        let zero = JumpPath::new(1.0, 0.0, vec![(0.5, 0.0f64.next_up())]).unwrap();
        assert!(ld.eval(&path).is_ok());
        let flat = lebesgue_spec(Ratio::Linear {
            intercept: 0.0,
            slope: 0.0,
        });
        let ld0 = LogDensity::new(Numerator::Measure(&flat), &flat.dominating, &region, BOUND_TOL).unwrap();
        assert!(matches!(ld0.eval(&zero), Err(Error::SingularRatio { .. })));
        let clamped = ld0.with_floor(1e-3).eval(&zero).unwrap();
        assert!((clamped - (1e-3f64.ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn jumps_outside_region_rejected() {
        let spec = linear();
        let path = JumpPath::new(1.0, 0.0, vec![(0.5, 0.25)]).unwrap();
        let r = log_density_u(
            &path,
            Numerator::Measure(&spec),
            &spec.dominating,
            &upper_half(),
            BOUND_TOL,
        );
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn linear_split_closed_form() {
        let spec = linear();
        let disc = discretize(&spec, 2, BOUND_TOL).unwrap();
        let split = RatioSplit::new(&spec, &disc, &upper_half(), BOUND_TOL).unwrap();
        assert!((split.excess.value - 1.0 / 32.0).abs() < 1e-12);
        assert!((split.deficit.value - 1.0 / 32.0).abs() < 1e-12);
        assert!((split.discrepancy() - 1.0 / 16.0).abs() < 1e-12);

        let path = JumpPath::new(1.0, 0.0, vec![(0.2, 0.6), (0.7, 0.9)]).unwrap();
        let rep = split.report(&path).unwrap();
        let a_plus = (0.75f64 / 0.6).ln() + 1.0 / 32.0;
        let a_minus = (0.75f64 / 0.9).ln() - 1.0 / 32.0;
        assert!((rep.a_plus - a_plus).abs() < 1e-12);
        assert!((rep.a_minus - a_minus).abs() < 1e-12);
        assert!(rep.a_plus >= 0.0 && rep.a_minus <= 0.0);
        assert!((rep.u_value - (rep.jump_sum - rep.compensator)).abs() < 1e-15);
        // compensator: ∫_{1/2}^1 (y − 1) dy = −1/8
        assert!((rep.compensator + 0.125).abs() < 1e-12);
    }

    #[test]
    fn empty_path_ratio() {
        let spec = linear();
        let disc = discretize(&spec, 2, BOUND_TOL).unwrap();
        let path = JumpPath::empty(1.5, 0.0).unwrap();
        let rep = ratio_split(&path, &spec, &disc, &upper_half(), BOUND_TOL).unwrap();
        // ∫ (ρ̄ − ρ) dν̃ over ]1/2, 1] vanishes by mass preservation
        assert!((rep.ratio - 1.0).abs() < 1e-12);
        assert!((rep.a_plus - 1.5 / 32.0).abs() < 1e-12);
    }

    #[test]
    fn piecewise_constant_measure_is_fixed() {
        let spec = lebesgue_spec(Ratio::Custom(std::sync::Arc::new(|y| if y > 0.5 { 2.0 } else { 0.5 })));
        let disc = discretize(&spec, 2, BOUND_TOL).unwrap();
        let path = JumpPath::new(1.0, 0.0, vec![(0.2, 0.6), (0.7, 0.9)]).unwrap();
        let rep = ratio_split(&path, &spec, &disc, &upper_half(), BOUND_TOL).unwrap();
        assert!(rep.a_plus.abs() < 1e-12 && rep.a_minus.abs() < 1e-12);
        assert!((rep.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_matches_log_density_difference() {
        let dom = DominatingMeasure::gaussian(1.0).unwrap();
        let spec = MeasureSpec::example1(
            1.0,
            1.0,
            dom,
            Ratio::Sine {
                level: 2.0 / 3.0,
                amplitude: 1.0 / 3.0,
                frequency: 3.0,
                phase: 0.0,
            },
        )
        .unwrap();
        let disc = discretize(&spec, 4, BOUND_TOL).unwrap();
        let region = Region::outside(0.25);
        let split = RatioSplit::new(&spec, &disc, &region, BOUND_TOL).unwrap();
        let num = LogDensity::new(Numerator::Discretized(&disc), &spec.dominating, &region, BOUND_TOL).unwrap();
        let den = LogDensity::new(Numerator::Measure(&spec), &spec.dominating, &region, BOUND_TOL).unwrap();
        let path = JumpPath::new(
            2.0,
            0.0,
            vec![(0.1, -2.3), (0.4, 0.3), (0.9, 1.7), (1.3, -0.6), (1.9, 5.0)],
        )
        .unwrap();
        let rep = split.report(&path).unwrap();
        let expected = (num.eval(&path).unwrap() - den.eval(&path).unwrap()).exp();
        assert!(
            (rep.ratio / expected - 1.0).abs() < 1e-12,
            "{} vs {expected}",
            rep.ratio
        );
    }
}

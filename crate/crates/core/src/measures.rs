//! Lévy measures written as a density ratio against a dominating measure.
//!
//! A measure is always a pair `(ν̃, ρ)` with `ν = ρ·ν̃`, so absolute
//! continuity with respect to the dominating measure holds by construction.
//! The three parametric families used throughout the crate have dedicated
//! constructors that fill in support, singularity and tail metadata.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::interval::Interval;
use crate::numerics::{integrate, Hints, TailDecay};
use crate::{Error, Result};

/// Number of points in the deterministic spot-check sample.
pub const SAMPLE_POINTS: usize = 1000;
const LIPSCHITZ_SLACK: f64 = 1e-12;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Density of the dominating measure with respect to Lebesgue measure.
#[derive(Clone)]
pub enum Density {
    /// Constant density 1 on the support interval.
    Lebesgue,
    /// Centered normal density with standard deviation `sigma`.
    Gaussian {
        sigma: f64,
    },
    /// `|y|^{-2}`.
    InverseSquare,
    /// `c_neg |y|^{-1-α} e^{-decay_neg |y|}` for `y < 0`, `c_pos y^{-1-α} e^{-decay_pos y}` for `y > 0`.
    TemperedStable {
        alpha: f64,
        c_neg: f64,
        c_pos: f64,
        decay_neg: f64,
        decay_pos: f64,
    },
    Custom(RealFn),
}

impl Density {
    fn eval(&self, y: f64) -> f64 {
        match *self {
            Density::Lebesgue => 1.0,
            Density::Gaussian { sigma } => {
                let z = y / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            Density::InverseSquare => 1.0 / (y * y),
            Density::TemperedStable {
                alpha,
                c_neg,
                c_pos,
                decay_neg,
                decay_pos,
            } => {
                if y < 0.0 {
                    c_neg * (-y).powf(-1.0 - alpha) * (decay_neg * y).exp()
                } else if y > 0.0 {
                    c_pos * y.powf(-1.0 - alpha) * (-decay_pos * y).exp()
                } else {
                    f64::INFINITY
                }
            }
            Density::Custom(ref f) => f(y),
        }
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Lebesgue => write!(f, "Lebesgue"),
            Density::Gaussian { sigma } => write!(f, "Gaussian {{ sigma: {sigma} }}"),
            Density::InverseSquare => write!(f, "InverseSquare"),
            Density::TemperedStable {
                alpha,
                c_neg,
                c_pos,
                decay_neg,
                decay_pos,
            } => write!(
                f,
                "TemperedStable {{ alpha: {alpha}, c_neg: {c_neg}, c_pos: {c_pos}, decay_neg: {decay_neg}, decay_pos: {decay_pos} }}"
            ),
            Density::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Where the dominating measure lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Interval(Interval),
    /// `ℝ \ {0}`, i.e. the union of the two half-lines.
    PuncturedLine,
}

impl Support {
    pub fn intersect(&self, iv: &Interval) -> Option<Interval> {
        match self {
            Support::Interval(s) => s.intersect(iv),
            Support::PuncturedLine => (!iv.is_empty()).then_some(*iv),
        }
    }

    pub fn contains(&self, y: f64) -> bool {
        match self {
            Support::Interval(s) => s.contains(y),
            Support::PuncturedLine => y != 0.0,
        }
    }
}

/// The reference Lévy measure `ν̃`.
#[derive(Debug, Clone)]
pub struct DominatingMeasure {
    pub density: Density,
    pub support: Support,
    /// `p` such that the density behaves like `|y|^{-p}` near 0.
    pub singularity_order: f64,
    pub tail: TailDecay,
}

impl DominatingMeasure {
    /// Lebesgue measure restricted to `]lo, hi]`.
    pub fn lebesgue(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!(
                "lebesgue support ]{lo}, {hi}] must be bounded and nonempty"
            )));
        }
        Ok(DominatingMeasure {
            density: Density::Lebesgue,
            support: Support::Interval(Interval::new(lo, hi)),
            singularity_order: 0.0,
            tail: TailDecay::Compact,
        })
    }

    /// Normal density with standard deviation `sigma` (total mass 1).
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::invalid(format!("gaussian sigma must be positive, got {sigma}")));
        }
        Ok(DominatingMeasure {
            density: Density::Gaussian { sigma },
            support: Support::Interval(Interval::real_line()),
            singularity_order: 0.0,
            tail: TailDecay::Gaussian,
        })
    }

    /// `|y|^{-2} dy` on `ℝ \ {0}`.
    pub fn inverse_square() -> Self {
        DominatingMeasure {
            density: Density::InverseSquare,
            support: Support::PuncturedLine,
            singularity_order: 2.0,
            tail: TailDecay::Polynomial,
        }
    }

    pub fn tempered_stable(alpha: f64, c_neg: f64, c_pos: f64, decay_neg: f64, decay_pos: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::invalid(format!(
                "tempered stable alpha must lie in ]0, 2[, got {alpha}"
            )));
        }
        for (name, v) in [
            ("c_neg", c_neg),
            ("c_pos", c_pos),
            ("decay_neg", decay_neg),
            ("decay_pos", decay_pos),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!(
                    "tempered stable {name} must be positive, got {v}"
                )));
            }
        }
        Ok(DominatingMeasure {
            density: Density::TemperedStable {
                alpha,
                c_neg,
                c_pos,
                decay_neg,
                decay_pos,
            },
            support: Support::PuncturedLine,
            singularity_order: 1.0 + alpha,
            tail: TailDecay::Exponential,
        })
    }

    pub fn custom(density: RealFn, support: Support, singularity_order: f64, tail: TailDecay) -> Result<Self> {
        if !(singularity_order >= 0.0) {
            return Err(Error::invalid("singularity order must be nonnegative"));
        }
        let m = DominatingMeasure {
            density: Density::Custom(density),
            support,
            singularity_order,
            tail,
        };
        for y in sample_points(&support) {
            let d = m.density(y);
            if !(d >= 0.0) {
                return Err(Error::invalid(format!(
                    "dominating density is negative or NaN at {y}: {d}"
                )));
            }
        }
        Ok(m)
    }

    pub fn density(&self, y: f64) -> f64 {
        if !self.support.contains(y) {
            return 0.0;
        }
        self.density.eval(y)
    }

    pub fn is_singular(&self) -> bool {
        self.singularity_order > 0.0
    }

    pub fn hints(&self) -> Hints {
        Hints {
            // integrals are always cut at 0; it is flagged singular only when needed
            singular_points: if self.is_singular() { vec![0.0] } else { Vec::new() },
            tail: self.tail,
        }
    }

    /// `∫_interval g(y) ν̃(dy)`; `Divergent` if the quadrature detects divergence.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, interval: Interval, tol: f64) -> Integral {
        let Some(iv) = self.support.intersect(&interval) else {
            return Integral::Finite(Estimate::exact(0.0));
        };
        let hints = self.hints();
        let mut value = 0.0;
        let mut error = 0.0;
        let parts = iv.split_at(&[0.0]);
        let part_tol = tol / parts.len() as f64;
        for part in parts {
            let r = integrate(
                |y| {
                    let d = self.density(y);
                    if d == 0.0 {
                        0.0
                    } else {
                        g(y) * d
                    }
                },
                part,
                &hints,
                part_tol,
            );
            if r.diverged || !r.value.is_finite() {
                return Integral::Divergent;
            }
            value += r.value;
            error += r.error_estimate;
        }
        Integral::Finite(Estimate { value, error })
    }

    /// `ν̃(interval)`.
    pub fn mass(&self, interval: Interval, tol: f64) -> Integral {
        self.integrate(|_| 1.0, interval, tol)
    }
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

impl std::iter::Sum for Estimate {
    fn sum<I: Iterator<Item = Estimate>>(iter: I) -> Self {
        iter.fold(Estimate::exact(0.0), |a, b| a + b)
    }
}

/// Outcome of an integral that may diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integral {
    Finite(Estimate),
    Divergent,
}

impl Integral {
    pub fn finite(self) -> Option<Estimate> {
        match self {
            Integral::Finite(e) => Some(e),
            Integral::Divergent => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Integral::Finite(_))
    }

    pub fn or_divergent(self, what: impl FnOnce() -> String) -> Result<Estimate> {
        self.finite().ok_or_else(|| Error::divergent(what()))
    }
}

/// Density ratio `ρ = dν/dν̃`.
#[derive(Clone)]
pub enum Ratio {
    One,
    /// `intercept + slope·y`.
    Linear {
        intercept: f64,
        slope: f64,
    },
    /// `level + amplitude·sin(frequency·y + phase)`.
    Sine {
        level: f64,
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// `e^{-λ y²}`.
    GaussianTilt {
        lambda: f64,
    },
    /// `e^{-neg·|y|}` for `y < 0`, `e^{-pos·y}` for `y > 0`.
    ExponentialTilt {
        neg: f64,
        pos: f64,
    },
    Custom(RealFn),
}

impl Ratio {
    pub fn eval(&self, y: f64) -> f64 {
        match *self {
            Ratio::One => 1.0,
            Ratio::Linear { intercept, slope } => intercept + slope * y,
            Ratio::Sine {
                level,
                amplitude,
                frequency,
                phase,
            } => level + amplitude * (frequency * y + phase).sin(),
            Ratio::GaussianTilt { lambda } => (-lambda * y * y).exp(),
            Ratio::ExponentialTilt { neg, pos } => {
                if y < 0.0 {
                    (neg * y).exp()
                } else {
                    (-pos * y).exp()
                }
            }
            Ratio::Custom(ref f) => f(y),
        }
    }

    /// Sup of `|ρ'|` when it is known in closed form.
    pub fn lipschitz_constant(&self) -> Option<f64> {
        match *self {
            Ratio::One => Some(0.0),
            Ratio::Linear { slope, .. } => Some(slope.abs()),
            Ratio::Sine {
                amplitude, frequency, ..
            } => Some((amplitude * frequency).abs()),
            Ratio::GaussianTilt { lambda } => Some((2.0 * lambda).sqrt() * (-0.5_f64).exp()),
            Ratio::ExponentialTilt { neg, pos } => Some(neg.abs().max(pos.abs())),
            Ratio::Custom(_) => None,
        }
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::One => write!(f, "One"),
            Ratio::Linear { intercept, slope } => write!(f, "Linear {{ intercept: {intercept}, slope: {slope} }}"),
            Ratio::Sine {
                level,
                amplitude,
                frequency,
                phase,
            } => write!(
                f,
                "Sine {{ level: {level}, amplitude: {amplitude}, frequency: {frequency}, phase: {phase} }}"
            ),
            Ratio::GaussianTilt { lambda } => write!(f, "GaussianTilt {{ lambda: {lambda} }}"),
            Ratio::ExponentialTilt { neg, pos } => write!(f, "ExponentialTilt {{ neg: {neg}, pos: {pos} }}"),
            Ratio::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Which parametric family a measure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassTag {
    /// Finite `ν̃`, `L`-Lipschitz ratio with `|ρ(0)| ≤ K`.
    Example1 {
        l: f64,
        k: f64,
    },
    /// `ν(dy) = e^{-λ y²} y^{-2} dy`, `ε ≤ λ ≤ M`.
    Example2 {
        lambda: f64,
        eps: f64,
        big_m: f64,
    },
    /// Tempered stable with indices `α < 1` and decays `ε ≤ λ_j ≤ M`.
    Example3 {
        alpha: f64,
        c1: f64,
        c2: f64,
        lambda1: f64,
        lambda2: f64,
        eps: f64,
        big_m: f64,
    },
    Custom,
}

/// A Lévy measure `ν = ρ·ν̃` plus its family tag.
#[derive(Debug, Clone)]
pub struct MeasureSpec {
    pub dominating: DominatingMeasure,
    pub ratio: Ratio,
    pub class: ClassTag,
}

impl MeasureSpec {
    /// Any measure given by a nonnegative ratio against `dominating`.
    pub fn custom(dominating: DominatingMeasure, ratio: Ratio) -> Result<Self> {
        let spec = MeasureSpec {
            dominating,
            ratio,
            class: ClassTag::Custom,
        };
        spec.check_nonnegative()?;
        Ok(spec)
    }

    /// Member of the finite Lipschitz class: `ν̃` must be finite and `ρ`
    /// `L`-Lipschitz with `|ρ(0)| ≤ K` (both checked on the sample grid).
    pub fn example1(l: f64, k: f64, dominating: DominatingMeasure, ratio: Ratio) -> Result<Self> {
        if !(l > 0.0) || !(k > 0.0) {
            return Err(Error::invalid(format!(
                "example1 needs positive L and K, got L={l}, K={k}"
            )));
        }
        if dominating.is_singular() {
            return Err(Error::invalid("example1 needs a finite dominating measure"));
        }
        let spec = MeasureSpec {
            dominating,
            ratio,
            class: ClassTag::Example1 { l, k },
        };
        spec.check_nonnegative()?;
        let at_zero = spec.ratio.eval(0.0);
        if at_zero.abs() > k {
            return Err(Error::invalid(format!(
                "example1 requires |rho(0)| <= K: rho(0)={at_zero}, K={k}"
            )));
        }
        let worst = spec.sampled_lipschitz();
        if worst > l * (1.0 + LIPSCHITZ_SLACK) + LIPSCHITZ_SLACK {
            return Err(Error::invalid(format!(
                "example1 ratio is not {l}-Lipschitz on the sample grid (slope {worst})"
            )));
        }
        Ok(spec)
    }

    /// `ν(dy) = e^{-λ y²} y^{-2} dy` written against `ν̃(dy) = y^{-2} dy`.
    pub fn example2(lambda: f64, eps: f64, big_m: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= lambda && lambda <= big_m) {
            return Err(Error::invalid(format!(
                "example2 requires 0 < eps <= lambda <= M, got eps={eps}, lambda={lambda}, M={big_m}"
            )));
        }
        Ok(MeasureSpec {
            dominating: DominatingMeasure::inverse_square(),
            ratio: Ratio::GaussianTilt { lambda },
            class: ClassTag::Example2 { lambda, eps, big_m },
        })
    }

    /// Tempered stable `ν` written against the tempered stable `ν̃` with both
    /// decays equal to `eps`, so `ρ(y) = e^{-(λ_j − ε)|y|}`.
    #[allow(clippy::too_many_arguments)]
    pub fn example3(alpha: f64, c1: f64, c2: f64, lambda1: f64, lambda2: f64, eps: f64, big_m: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(format!("example3 requires 0 < alpha < 1, got {alpha}")));
        }
        for (name, lam) in [("lambda1", lambda1), ("lambda2", lambda2)] {
            if !(eps > 0.0 && eps <= lam && lam <= big_m) {
                return Err(Error::invalid(format!(
                    "example3 requires 0 < eps <= {name} <= M, got eps={eps}, {name}={lam}, M={big_m}"
                )));
            }
        }
        let dominating = DominatingMeasure::tempered_stable(alpha, c1, c2, eps, eps)?;
        Ok(MeasureSpec {
            dominating,
            ratio: Ratio::ExponentialTilt {
                neg: lambda1 - eps,
                pos: lambda2 - eps,
            },
            class: ClassTag::Example3 {
                alpha,
                c1,
                c2,
                lambda1,
                lambda2,
                eps,
                big_m,
            },
        })
    }

    /// The measure `ν̃` itself, as a spec with `ρ ≡ 1`.
    pub fn dominating_spec(&self) -> MeasureSpec {
        MeasureSpec {
            dominating: self.dominating.clone(),
            ratio: Ratio::One,
            class: ClassTag::Custom,
        }
    }

    fn check_nonnegative(&self) -> Result<()> {
        for y in sample_points(&self.dominating.support) {
            let r = self.ratio.eval(y);
            if !(r >= 0.0) {
                return Err(Error::invalid(format!("density ratio is negative or NaN at {y}: {r}")));
            }
        }
        Ok(())
    }

    /// Largest difference quotient over the deterministic sample pairs.
    pub fn sampled_lipschitz(&self) -> f64 {
        let pts = sample_points(&self.dominating.support);
        sample_pairs(pts.len())
            .map(|(i, j)| {
                let (a, b) = (pts[i], pts[j]);
                (self.ratio.eval(a) - self.ratio.eval(b)).abs() / (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `ρ(y)`, rejecting points outside the support and the origin for
    /// singular dominating measures.
    pub fn ratio_eval(&self, y: f64) -> Result<f64> {
        if y == 0.0 && self.dominating.is_singular() {
            return Err(Error::Domain(
                "ratio evaluated at 0 for a dominating measure singular at 0".into(),
            ));
        }
        if y != 0.0 && !self.dominating.support.contains(y) {
            return Err(Error::Domain(format!(
                "{y} lies outside the support of the dominating measure"
            )));
        }
        Ok(self.ratio.eval(y))
    }

    /// Lévy density `ρ·dν̃/dy` at `y` (0 outside the support).
    pub fn levy_density(&self, y: f64) -> f64 {
        let d = self.dominating.density(y);
        if d == 0.0 {
            0.0
        } else {
            self.ratio.eval(y) * d
        }
    }

    /// `ν(interval)` with error estimate; divergence is an error.
    pub fn interval_mass(&self, interval: Interval, tol: f64) -> Result<Estimate> {
        self.dominating
            .integrate(|y| self.ratio.eval(y), interval, tol)
            .or_divergent(|| format!("nu-mass of {interval}"))
    }

    /// `∫_interval g dν`.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, interval: Interval, tol: f64) -> Integral {
        self.dominating.integrate(|y| g(y) * self.ratio.eval(y), interval, tol)
    }

    /// The scalar functionals `η_ν`, `γ^ν`, the Hellinger-type integral and the
    /// small-jump first moment.
    pub fn functionals(&self, tol: f64) -> Result<Functionals> {
        let unit = Interval::new(-1.0, 1.0);
        let hellinger = self
            .dominating
            .integrate(
                |y| {
                    let s = self.ratio.eval(y).sqrt() - 1.0;
                    s * s
                },
                Interval::real_line(),
                tol,
            )
            .finite()
            .ok_or(Error::ConditionViolated {
                condition: "M2",
                detail: "the integral of (sqrt(rho) - 1)^2 against the dominating measure diverges".into(),
            })?;
        Ok(Functionals {
            eta: self.integrate(|y| y, Interval::real_line(), tol),
            gamma_star: self.dominating.integrate(|y| y * (self.ratio.eval(y) - 1.0), unit, tol),
            hellinger,
            m4_moment: self.integrate(f64::abs, unit, tol),
        })
    }
}

/// Scalar functionals of a measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Functionals {
    /// `∫ y ν(dy)`.
    pub eta: Integral,
    /// `∫_{|y|≤1} y (ν − ν̃)(dy)`.
    pub gamma_star: Integral,
    /// `∫ (√ρ − 1)² dν̃`.
    pub hellinger: Estimate,
    /// `∫_{|y|≤1} |y| ν(dy)`; `Divergent` stands for +∞.
    pub m4_moment: Integral,
}

/// Deterministic spot-check points inside `support`.
///
/// Bounded supports use the midpoints of `SAMPLE_POINTS` equal cells. Other
/// supports use `±10^s` for `s` evenly spaced in `[-3, 2]`, half per sign,
/// clipped to the support.
pub fn sample_points(support: &Support) -> Vec<f64> {
    let n = SAMPLE_POINTS;
    match support {
        Support::Interval(iv) if iv.is_bounded() => (0..n)
            .map(|i| iv.lo + iv.width() * (i as f64 + 0.5) / n as f64)
            .collect(),
        _ => {
            let half = n / 2;
            let mut pts: Vec<f64> = (0..half)
                .flat_map(|i| {
                    let y = 10f64.powf(-3.0 + 5.0 * i as f64 / (half - 1) as f64);
                    [-y, y]
                })
                .filter(|&y| support.contains(y))
                .collect();
            pts.sort_by(f64::total_cmp);
            pts
        }
    }
}

/// `SAMPLE_POINTS` deterministic index pairs over `n` points.
fn sample_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..SAMPLE_POINTS).filter_map(move |i| {
        let a = i % n;
        let b = (i * 37 + 11) % n;
        let b = if a == b { (b + 1) % n } else { b };
        (a != b).then_some((a, b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BOUND_TOL;

    fn linear() -> MeasureSpec {
        MeasureSpec::custom(
            DominatingMeasure::lebesgue(0.0, 1.0).unwrap(),
            Ratio::Linear {
                intercept: 0.0,
                slope: 1.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn ratio_closed_forms() {
        let ex2 = MeasureSpec::example2(1.0, 0.5, 2.0).unwrap();
        assert!((ex2.ratio_eval(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        let ex3 = MeasureSpec::example3(0.5, 1.0, 1.0, 0.7, 0.7, 0.7, 2.0).unwrap();
        for y in [-3.0, -0.1, 0.2, 5.0] {
            assert_eq!(ex3.ratio_eval(y).unwrap(), 1.0);
        }
        let ex1 = MeasureSpec::example1(
            1.0,
            1.0,
            DominatingMeasure::lebesgue(0.0, 1.0).unwrap(),
            Ratio::Linear {
                intercept: 0.0,
                slope: 1.0,
            },
        )
        .unwrap();
        assert_eq!(ex1.ratio_eval(0.75).unwrap(), 0.75);
    }

    #[test]
    fn ratio_at_zero_for_singular_measure_is_domain_error() {
        let ex2 = MeasureSpec::example2(1.0, 0.5, 2.0).unwrap();
        assert!(matches!(ex2.ratio_eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(linear().ratio_eval(2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn interval_masses() {
        let uniform = linear().dominating_spec();
        let m = uniform.interval_mass(Interval::new(0.5, 1.0), BOUND_TOL).unwrap();
        assert!((m.value - 0.5).abs() < 1e-12);
        let ex2 = MeasureSpec::example2(1.0, 0.5, 2.0).unwrap();
        let m = ex2.interval_mass(Interval::new(1.0, f64::INFINITY), 1e-11).unwrap();
        // e^{-1} - sqrt(pi)·erfc(1), evaluated in 30-digit arithmetic
        assert!((m.value - 0.089_073_855_890_780_35).abs() < 1e-10, "{m:?}");
    }

    #[test]
    fn mass_near_zero_diverges_for_infinite_activity() {
        let ex3 = MeasureSpec::example3(0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        let r = ex3.interval_mass(Interval::new(0.0, 1.0), BOUND_TOL);
        assert!(matches!(r, Err(Error::Divergent { .. })), "{r:?}");
    }

    #[test]
    fn functionals_of_identity_ratio() {
        let uniform = linear().dominating_spec();
        let f = uniform.functionals(BOUND_TOL).unwrap();
        assert_eq!(f.gamma_star.finite().unwrap().value, 0.0);
        assert_eq!(f.hellinger.value, 0.0);
        assert!((f.eta.finite().unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn example2_fails_small_jump_moment() {
        let ex2 = MeasureSpec::example2(1.0, 0.5, 2.0).unwrap();
        let f = ex2.functionals(BOUND_TOL).unwrap();
        assert_eq!(f.m4_moment, Integral::Divergent);
        assert!(f.gamma_star.is_finite());
        assert!(f.hellinger.value > 0.0);
    }

    #[test]
    fn example3_hellinger_converges_below_one() {
        for alpha in [0.25, 0.5, 0.75] {
            let ex3 = MeasureSpec::example3(alpha, 1.0, 1.0, 2.0, 1.5, 1.0, 2.0).unwrap();
            let f = ex3.functionals(BOUND_TOL).unwrap();
            assert!(f.hellinger.value > 0.0);
            assert!(f.m4_moment.is_finite());
        }
    }

    #[test]
    fn gamma_star_is_difference_of_restricted_etas() {
        let ex3 = MeasureSpec::example3(0.5, 1.0, 2.0, 2.0, 1.5, 1.0, 2.0).unwrap();
        let unit = Interval::new(-1.0, 1.0);
        let f = ex3.functionals(1e-10).unwrap();
        let eta_nu = ex3.integrate(|y| y, unit, 1e-10).finite().unwrap();
        let eta_dom = ex3.dominating.integrate(|y| y, unit, 1e-10).finite().unwrap();
        let g = f.gamma_star.finite().unwrap();
        assert!((g.value - (eta_nu.value - eta_dom.value)).abs() < 1e-8);
    }

    #[test]
    fn class_constraints_enforced() {
        assert!(MeasureSpec::example2(3.0, 0.5, 2.0).is_err());
        assert!(MeasureSpec::example3(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0).is_err());
        let steep = Ratio::Linear {
            intercept: 0.5,
            slope: 3.0,
        };
        assert!(MeasureSpec::example1(1.0, 1.0, DominatingMeasure::gaussian(1.0).unwrap(), steep).is_err());
        let high = Ratio::Linear {
            intercept: 2.0,
            slope: 0.0,
        };
        assert!(MeasureSpec::example1(1.0, 1.0, DominatingMeasure::gaussian(1.0).unwrap(), high).is_err());
        let negative = Ratio::Linear {
            intercept: -1.0,
            slope: 0.0,
        };
        assert!(MeasureSpec::custom(DominatingMeasure::gaussian(1.0).unwrap(), negative).is_err());
    }
}

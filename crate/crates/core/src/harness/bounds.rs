//! Closed-form envelopes of `∫ |ρ − ρ̄_m| dν̃` for the three parametric
//! classes, split by region of the line.

use serde::Serialize;

use crate::interval::{Interval, Region};
use crate::measures::{ClassTag, MeasureSpec};
use crate::{Error, Result};

/// Which part of the discretization error a term controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// `]−1/m, 1/m]`.
    Identity,
    /// `]−m, −1/m] ∪ ]1/m, m]`.
    FiniteBins,
    /// `|y| > m`.
    Tails,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundTerm {
    pub name: &'static str,
    pub component: Component,
    /// Value of the printed expression.
    pub value: f64,
    /// How many copies enter the total (2 for one-sided expressions).
    pub multiplicity: u32,
    /// Whether the expression is a valid upper bound. Unproven terms are
    /// reported as envelopes only.
    pub proven: bool,
}

impl BoundTerm {
    pub fn total(&self) -> f64 {
        self.value * self.multiplicity as f64
    }
}

/// Sum of the terms for `component`, if all of them are proven.
pub fn component_bound(terms: &[BoundTerm], component: Component) -> Option<f64> {
    let mut sum = 0.0;
    for t in terms.iter().filter(|t| t.component == component) {
        if !t.proven {
            return None;
        }
        sum += t.total();
    }
    Some(sum)
}

/// Sum of all terms and whether every term is proven.
pub fn total_bound(terms: &[BoundTerm]) -> (f64, bool) {
    (terms.iter().map(BoundTerm::total).sum(), terms.iter().all(|t| t.proven))
}

/// `C = √(1/(3ε))`: beyond it `ρ'` is monotone for the Gaussian tilt.
pub fn example2_cutoff(eps: f64) -> f64 {
    (1.0 / (3.0 * eps)).sqrt()
}

fn mass_of(spec: &MeasureSpec, region: &Region, g: impl Fn(f64) -> f64 + Copy, tol: f64) -> Result<f64> {
    let per_tol = tol / region.parts().len().max(1) as f64;
    let mut acc = 0.0;
    for &iv in region.parts() {
        acc += spec
            .dominating
            .integrate(g, iv, per_tol)
            .or_divergent(|| format!("bound term integral on {iv}"))?
            .value;
    }
    Ok(acc)
}

/// Evaluates each closed-form term of the class envelope at grid size `m`.
pub fn example_bound_terms(spec: &MeasureSpec, m: u32, tol: f64) -> Result<Vec<BoundTerm>> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    let mf = m as f64;
    let inv = 1.0 / mf;
    let term = |name, component, value, multiplicity, proven| BoundTerm {
        name,
        component,
        value,
        multiplicity,
        proven,
    };
    match spec.class {
        ClassTag::Example1 { l, k } => {
            let mid = Region::new(vec![Interval::new(-mf, -inv), Interval::new(inv, mf)])?;
            let tails = Region::outside(mf);
            let identity = Region::single(Interval::new(-inv, inv));
            Ok(vec![
                term(
                    "lipschitz_bins",
                    Component::FiniteBins,
                    l / mf * mass_of(spec, &mid, |_| 1.0, tol)?,
                    1,
                    true,
                ),
                term(
                    "tails",
                    Component::Tails,
                    2.0 * mass_of(spec, &tails, |y| k + l * y.abs(), tol)?,
                    1,
                    true,
                ),
                term(
                    "identity",
                    Component::Identity,
                    mass_of(spec, &identity, |y| k + l * y.abs() + 1.0, tol)?,
                    1,
                    true,
                ),
            ])
        }
        ClassTag::Example2 { eps, big_m, .. } => {
            let c = example2_cutoff(eps);
            let ceil_cm = (c * mf).ceil().max(1.0);
            let mid_low = 2.0 * big_m * c / mf * (1.0 - mf / ceil_cm);
            let mid_high = (2.0 * big_m).sqrt() * (-0.5f64).exp() / mf * (1.0 / c - inv).max(0.0);
            Ok(vec![
                term("identity", Component::Identity, big_m / mf, 2, true),
                term("mid_low", Component::FiniteBins, mid_low, 2, false),
                term("mid_high", Component::FiniteBins, mid_high, 2, true),
                term("tail", Component::Tails, 2.0 / mf, 2, true),
            ])
        }
        ClassTag::Example3 {
            alpha,
            c1,
            c2,
            eps,
            big_m,
            ..
        } => {
            let c = c1.max(c2);
            let mid = c * (big_m - eps) * (mf.powf(alpha - 1.0) / alpha - 1.0 / (alpha * mf.powf(alpha + 1.0)));
            let identity = c * (big_m - eps) * mf.powf(alpha - 1.0) / (1.0 - alpha);
            let tails = 2.0 * mass_of(spec, &Region::outside(mf), |_| 1.0, tol)?;
            Ok(vec![
                term("identity", Component::Identity, identity, 2, true),
                term("mid", Component::FiniteBins, mid, 2, true),
                term("tails", Component::Tails, tails, 1, true),
            ])
        }
        ClassTag::Custom => Err(Error::invalid(
            "closed-form bound terms exist only for the example classes",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::discretization_error_for;
    use crate::numerics::BOUND_TOL;

    #[test]
    fn example2_terms() {
        assert!((example2_cutoff(1.0 / 3.0) - 1.0).abs() < 1e-15);
        let spec = MeasureSpec::example2(2.0, 0.5, 2.0).unwrap();
        let terms = example_bound_terms(&spec, 10, BOUND_TOL).unwrap();
        let id = terms.iter().find(|t| t.name == "identity").unwrap();
        assert!((id.value - 0.2).abs() < 1e-15);
        assert!(!total_bound(&terms).1);
        assert!(component_bound(&terms, Component::FiniteBins).is_none());
        assert_eq!(component_bound(&terms, Component::Tails), Some(0.4));
    }

    #[test]
    fn example3_mid_term() {
        let spec = MeasureSpec::example3(0.5, 1.0, 1.0, 2.0, 2.0, 1.0, 2.0).unwrap();
        let terms = example_bound_terms(&spec, 4, BOUND_TOL).unwrap();
        let mid = terms.iter().find(|t| t.name == "mid").unwrap();
        assert!((mid.value - 0.75).abs() < 1e-15);
    }

    #[test]
    fn custom_has_no_terms() {
        let spec = MeasureSpec::custom(
            crate::measures::DominatingMeasure::lebesgue(0.0, 1.0).unwrap(),
            crate::measures::Ratio::One,
        )
        .unwrap();
        assert!(example_bound_terms(&spec, 4, BOUND_TOL).is_err());
    }

    #[test]
    fn proven_components_hold() {
        let specs = [
            crate::harness::sweep::example1_sine(1.0, 1.0, 3.0).unwrap(),
            MeasureSpec::example2(2.0, 0.5, 2.0).unwrap(),
            MeasureSpec::example3(0.5, 1.0, 1.0, 2.0, 1.5, 1.0, 2.0).unwrap(),
        ];
        for spec in &specs {
            for m in [2, 4, 8] {
                let d = discretization_error_for(spec, m, BOUND_TOL).unwrap();
                let terms = example_bound_terms(spec, m, BOUND_TOL).unwrap();
                for (comp, val) in [
                    (Component::Identity, d.identity),
                    (Component::FiniteBins, d.finite_bins),
                    (Component::Tails, d.tails),
                ] {
                    if let Some(b) = component_bound(&terms, comp) {
                        assert!(
                            val.value <= b + 1e-9,
                            "{:?} m={m} {comp:?}: {} > {b}",
                            spec.class,
                            val.value
                        );
                    }
                }
            }
        }
    }
}

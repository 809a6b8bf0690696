//! Report on the four structural conditions for a single measure.

use serde::Serialize;

use crate::grid::discretization_error_for;
use crate::interval::Interval;
use crate::measures::{Estimate, Integral, MeasureSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HellingerEntry {
    /// `∫ (√ρ − 1)² dν̃`; `None` when the integral diverges.
    pub value: Option<Estimate>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretizationRow {
    pub m: u32,
    /// `None` marks a divergent cell.
    pub d_m: Option<Estimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallJumpEntry {
    /// `∫_{|y|≤1} |y| ν(dy)`.
    pub nu: Integral,
    pub nu_finite: bool,
    /// `∫_{|y|≤1} |y| ν̃(dy)`.
    pub dominating: Integral,
    pub dominating_finite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    /// Absolute continuity holds for every `ν = ρ·ν̃`.
    pub m1_by_construction: bool,
    pub m2: HellingerEntry,
    pub m3: Vec<DiscretizationRow>,
    /// Whether the finite `d_m` entries are nonincreasing within twice their
    /// combined error.
    pub m3_nonincreasing: bool,
    pub m4: SmallJumpEntry,
}

/// Whether `rows` is nonincreasing up to `2·max(tol, err_a + err_b)`.
pub(crate) fn nonincreasing(rows: &[Estimate], tol: f64) -> bool {
    rows.windows(2)
        .all(|w| w[1].value <= w[0].value + 2.0 * tol.max(w[0].error + w[1].error))
}

pub fn check_conditions(spec: &MeasureSpec, m_list: &[u32], tol: f64) -> Result<ConditionReport> {
    let hellinger = spec.dominating.integrate(
        |y| {
            let s = spec.ratio.eval(y).sqrt() - 1.0;
            s * s
        },
        Interval::real_line(),
        tol,
    );
    let mut m3 = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let d_m = match discretization_error_for(spec, m, tol) {
            Ok(d) => Some(d.total),
            Err(Error::Divergent { .. }) => None,
            Err(e) => return Err(e),
        };
        m3.push(DiscretizationRow { m, d_m });
    }
    let finite: Vec<Estimate> = m3.iter().filter_map(|r| r.d_m).collect();
    let unit = Interval::new(-1.0, 1.0);
    let nu = spec.integrate(f64::abs, unit, tol);
    let dominating = spec.dominating.integrate(f64::abs, unit, tol);
    Ok(ConditionReport {
        m1_by_construction: true,
        m2: HellingerEntry {
            value: hellinger.finite(),
            converged: hellinger.is_finite(),
        },
        m3_nonincreasing: nonincreasing(&finite, tol),
        m3,
        m4: SmallJumpEntry {
            nu,
            nu_finite: nu.is_finite(),
            dominating,
            dominating_finite: dominating.is_finite(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sweep::example1_sine;
    use crate::measures::{DominatingMeasure, Ratio};
    use crate::numerics::BOUND_TOL;

    #[test]
    fn identity_ratio() {
        let spec = MeasureSpec::custom(DominatingMeasure::gaussian(1.0).unwrap(), Ratio::One).unwrap();
        let r = check_conditions(&spec, &[1, 2, 4], BOUND_TOL).unwrap();
        assert_eq!(r.m2.value.unwrap().value, 0.0);
        assert!(r.m3.iter().all(|row| row.d_m.unwrap().value == 0.0));
        assert!(r.m4.dominating_finite);
        // E|Y| 1{|Y|≤1} for a standard normal
        let expected = (2.0 / std::f64::consts::PI).sqrt() * (1.0 - (-0.5f64).exp());
        assert!((r.m4.dominating.finite().unwrap().value - expected).abs() < 1e-9);
    }

    #[test]
    fn classification() {
        let ex2 = check_conditions(&MeasureSpec::example2(1.0, 0.5, 2.0).unwrap(), &[4], BOUND_TOL).unwrap();
        assert!(!ex2.m4.nu_finite && !ex2.m4.dominating_finite);
        assert!(ex2.m2.converged);
        let ex1 = check_conditions(&example1_sine(1.0, 1.0, 3.0).unwrap(), &[4, 8], BOUND_TOL).unwrap();
        assert!(ex1.m4.nu_finite && ex1.m3_nonincreasing);
        for alpha in [0.25, 0.5, 0.75] {
            let spec = MeasureSpec::example3(alpha, 1.0, 1.0, 2.0, 1.5, 1.0, 2.0).unwrap();
            let r = check_conditions(&spec, &[4], BOUND_TOL).unwrap();
            assert!(r.m4.nu_finite && r.m2.converged, "alpha={alpha}");
        }
    }
}

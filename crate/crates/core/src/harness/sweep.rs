//! Discretization error over a finite parameter grid and a list of `m`,
//! with the worst case over the grid as the finite surrogate of a supremum
//! over the class.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::discretization_error_for;
use crate::harness::bounds::{component_bound, example_bound_terms, total_bound, Component};
use crate::harness::conditions::nonincreasing;
use crate::harness::log_space;
use crate::measures::{ClassTag, DominatingMeasure, Estimate, MeasureSpec, Ratio};
use crate::{Error, Result};

/// Points per parameter axis of the default grids.
pub const GRID_POINTS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleClass {
    Example1,
    Example2,
    Example3,
}

/// `ρ(y) = K(2 + sin ωy)/3` against a standard Gaussian `ν̃`; `L`-Lipschitz
/// as long as `ω ≤ 3L/K`.
pub fn example1_sine(l: f64, k: f64, omega: f64) -> Result<MeasureSpec> {
    MeasureSpec::example1(
        l,
        k,
        DominatingMeasure::gaussian(1.0)?,
        Ratio::Sine {
            level: 2.0 * k / 3.0,
            amplitude: k / 3.0,
            frequency: omega,
            phase: 0.0,
        },
    )
}

/// The default parameter grids:
///
/// * Example 1, `L = K = 1`: `ω` log-spaced over `[0.3, 3]`.
/// * Example 2, `ε = 0.5`, `M = 2`: `λ` log-spaced over `[ε, M]`.
/// * Example 3, `α = 0.5`, `C₁ = C₂ = 1`, `ε = 1`, `M = 2`: `(λ₁, λ₂)` on the
///   product of two log-spaced axes over `[ε, M]`.
pub fn default_grid(class: ExampleClass) -> Result<Vec<MeasureSpec>> {
    match class {
        ExampleClass::Example1 => {
            let (l, k) = (1.0, 1.0);
            let top = 3.0 * l / k;
            log_space(top / 10.0, top, GRID_POINTS)
                .into_iter()
                .map(|w| example1_sine(l, k, w))
                .collect()
        }
        ExampleClass::Example2 => log_space(0.5, 2.0, GRID_POINTS)
            .into_iter()
            .map(|lam| MeasureSpec::example2(lam, 0.5, 2.0))
            .collect(),
        ExampleClass::Example3 => {
            let axis = log_space(1.0, 2.0, GRID_POINTS);
            let mut out = Vec::with_capacity(axis.len() * axis.len());
            for &l1 in &axis {
                for &l2 in &axis {
                    out.push(MeasureSpec::example3(0.5, 1.0, 1.0, l1, l2, 1.0, 2.0)?);
                }
            }
            Ok(out)
        }
    }
}

pub fn grid_description(class: ExampleClass) -> &'static str {
    match class {
        ExampleClass::Example1 => {
            "L=K=1, standard Gaussian dominating measure, rho=(2+sin(w y))/3, 9 log-spaced w in [0.3,3]"
        }
        ExampleClass::Example2 => "eps=0.5, M=2, 9 log-spaced lambda in [0.5,2]",
        ExampleClass::Example3 => "alpha=0.5, C1=C2=1, eps=1, M=2, 9x9 log-spaced (lambda1,lambda2) in [1,2]^2",
    }
}

/// The closed-form check of one component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentCheck {
    pub component: Component,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub point: usize,
    pub m: u32,
    /// `false` marks a divergent cell; the value fields are then absent.
    pub finite: bool,
    pub d_m: Option<Estimate>,
    pub identity: Option<Estimate>,
    pub finite_bins: Option<Estimate>,
    pub tails: Option<Estimate>,
    /// Sum of all closed-form terms.
    pub bound: Option<f64>,
    pub bound_proven: bool,
    pub within_bound: Option<bool>,
    /// Component checks where every contributing term is proven.
    pub checks: Vec<ComponentCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCase {
    pub m: u32,
    pub d_m: Estimate,
    /// Grid point attaining the maximum.
    pub argmax: usize,
    /// Worst finite-bin component, maximized separately.
    pub finite_bins: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub class: String,
    pub grid: String,
    pub points: Vec<ClassTag>,
    pub m_list: Vec<u32>,
    pub cells: Vec<SweepCell>,
    pub worst_case: Vec<WorstCase>,
    pub worst_case_nonincreasing: bool,
    /// Every proven component check holds.
    pub proven_bounds_hold: bool,
}

impl SweepResult {
    /// `worst finite-bin(m_{i+1}) / worst finite-bin(m_i)`.
    pub fn finite_bin_ratios(&self) -> Vec<(u32, u32, f64)> {
        self.worst_case
            .windows(2)
            .map(|w| (w[0].m, w[1].m, w[1].finite_bins.value / w[0].finite_bins.value))
            .collect()
    }
}

fn sweep_cell(spec: &MeasureSpec, point: usize, m: u32, tol: f64) -> Result<SweepCell> {
    let d = match discretization_error_for(spec, m, tol) {
        Ok(d) => d,
        Err(Error::Divergent { .. }) => {
            return Ok(SweepCell {
                point,
                m,
                finite: false,
                d_m: None,
                identity: None,
                finite_bins: None,
                tails: None,
                bound: None,
                bound_proven: false,
                within_bound: None,
                checks: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let terms = match spec.class {
        ClassTag::Custom => None,
        _ => Some(example_bound_terms(spec, m, tol)?),
    };
    let mut checks = Vec::new();
    let (mut bound, mut bound_proven, mut within_bound) = (None, false, None);
    if let Some(terms) = &terms {
        for (component, est) in [
            (Component::Identity, d.identity),
            (Component::FiniteBins, d.finite_bins),
            (Component::Tails, d.tails),
        ] {
            if let Some(b) = component_bound(terms, component) {
                checks.push(ComponentCheck {
                    component,
                    value: est.value,
                    bound: b,
                    holds: est.value <= b + est.error + tol,
                });
            }
        }
        let (total, proven) = total_bound(terms);
        bound = Some(total);
        bound_proven = proven;
        within_bound = Some(d.total.value <= total + d.total.error + tol);
    }
    Ok(SweepCell {
        point,
        m,
        finite: true,
        d_m: Some(d.total),
        identity: Some(d.identity),
        finite_bins: Some(d.finite_bins),
        tails: Some(d.tails),
        bound,
        bound_proven,
        within_bound,
        checks,
    })
}

/// Computes every `(point, m)` cell in parallel; divergent cells are marked
/// and skipped by the worst-case column.
pub fn m3_sweep(class: &str, grid: &[MeasureSpec], m_list: &[u32], tol: f64) -> Result<SweepResult> {
    if grid.is_empty() || m_list.is_empty() {
        return Err(Error::invalid("sweep needs a nonempty parameter grid and m list"));
    }
    let jobs: Vec<(usize, u32)> = (0..grid.len())
        .flat_map(|p| m_list.iter().map(move |&m| (p, m)))
        .collect();
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|&(p, m)| sweep_cell(&grid[p], p, m, tol))
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<_>>()?;

    let mut worst_case = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let mut worst: Option<WorstCase> = None;
        for c in cells.iter().filter(|c| c.m == m && c.finite) {
            let (d, fb) = (c.d_m.unwrap(), c.finite_bins.unwrap());
            let w = worst.get_or_insert(WorstCase {
                m,
                d_m: d,
                argmax: c.point,
                finite_bins: fb,
            });
            if d.value > w.d_m.value {
                w.d_m = d;
                w.argmax = c.point;
            }
            if fb.value > w.finite_bins.value {
                w.finite_bins = fb;
            }
        }
        if let Some(w) = worst {
            worst_case.push(w);
        }
    }
    let column: Vec<Estimate> = worst_case.iter().map(|w| w.d_m).collect();
    Ok(SweepResult {
        class: class.to_string(),
        grid: format!("{} grid points", grid.len()),
        points: grid.iter().map(|s| s.class).collect(),
        m_list: m_list.to_vec(),
        worst_case_nonincreasing: nonincreasing(&column, tol),
        proven_bounds_hold: cells.iter().flat_map(|c| &c.checks).all(|c| c.holds),
        cells,
        worst_case,
    })
}

/// [`m3_sweep`] on the default grid of `class`.
pub fn default_sweep(class: ExampleClass, m_list: &[u32], tol: f64) -> Result<SweepResult> {
    let grid = default_grid(class)?;
    let mut r = m3_sweep(&format!("{class:?}").to_lowercase(), &grid, m_list, tol)?;
    r.grid = grid_description(class).to_string();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BOUND_TOL;

    #[test]
    fn default_grids() {
        assert_eq!(default_grid(ExampleClass::Example1).unwrap().len(), 9);
        assert_eq!(default_grid(ExampleClass::Example2).unwrap().len(), 9);
        assert_eq!(default_grid(ExampleClass::Example3).unwrap().len(), 81);
    }

    #[test]
    fn trivial_sweep() {
        let spec = MeasureSpec::custom(DominatingMeasure::lebesgue(-1.0, 3.0).unwrap(), Ratio::One).unwrap();
        let r = m3_sweep("custom", &[spec], &[1, 2, 4], BOUND_TOL).unwrap();
        assert!(r.cells.iter().all(|c| c.d_m.unwrap().value == 0.0));
        assert!(r.worst_case_nonincreasing);
    }

    #[test]
    fn example2_sweep_decreases() {
        let r = default_sweep(ExampleClass::Example2, &[4, 8], BOUND_TOL).unwrap();
        assert!(r.worst_case_nonincreasing, "{:?}", r.worst_case);
        assert!(r.proven_bounds_hold);
        assert!(r.cells.iter().all(|c| !c.bound_proven));
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(m3_sweep("x", &[], &[4], BOUND_TOL).is_err());
    }
}

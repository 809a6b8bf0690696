//! Experiments: condition reports, discretization-error sweeps with their
//! closed-form envelopes, count-law tests and Monte-Carlo likelihood checks.

pub mod bounds;
pub mod conditions;
pub mod gof;
pub mod lemma;
pub mod sweep;

pub use bounds::{example2_cutoff, example_bound_terms, BoundTerm, Component};
pub use conditions::{check_conditions, ConditionReport};
pub use gof::{count_law_check, sample_count_vectors, CountSource, GofOptions, GofReport};
pub use lemma::{lemma_checks, LemmaReport};
pub use sweep::{default_grid, m3_sweep, ExampleClass, SweepResult};

use serde::Serialize;

/// Gate width, in standard errors, for every Monte-Carlo comparison.
pub const SE_GATE: f64 = 4.0;

/// A Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

impl McEstimate {
    /// Mean and standard error of `xs`, summed in order.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return McEstimate {
                mean: f64::NAN,
                se: f64::NAN,
                n,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean,
            se: (var / n as f64).sqrt(),
            n,
        }
    }

    /// `|mean − target| ≤ 4 SE`, with an absolute floor for exact samples.
    pub fn matches(&self, target: f64) -> bool {
        (self.mean - target).abs() <= SE_GATE * self.se + 1e-12 * target.abs().max(1.0)
    }

    /// `mean ≤ bound + 4 SE`.
    pub fn at_most(&self, bound: f64) -> bool {
        self.mean <= bound + SE_GATE * self.se + 1e-12 * bound.abs().max(1.0)
    }
}

/// `n` points spaced evenly in log scale from `lo` to `hi`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

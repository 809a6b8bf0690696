//! The `2m²` interval system and the piecewise-constant discretization of a
//! density ratio on it.
//!
//! Finite bins are `]k + (j−1)/m, k + j/m]` for `j = 1..m`, `k = −m..m−1`,
//! without `(1, 0)` and `(m, −1)`; together with the tails `]−∞, −m]` and
//! `]m, ∞[` they cover `ℝ \ ]−1/m, 1/m]`. Bins are ordered by left endpoint.
//! Every grid point is the rational `n/m`, so membership is decided by an
//! exact comparison of `y·m` against integers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::interval::{Interval, Region};
use crate::measures::{Estimate, MeasureSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BinTag {
    NegTail,
    Finite { j: u32, k: i32 },
    PosTail,
}

impl std::fmt::Display for BinTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BinTag::NegTail => write!(f, "neg_tail"),
            BinTag::Finite { j, k } => write!(f, "J({j},{k})"),
            BinTag::PosTail => write!(f, "pos_tail"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub tag: BinTag,
    pub interval: Interval,
}

/// Largest supported grid size.
pub const MAX_M: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridLayout {
    m: u32,
    bins: Vec<Bin>,
}

impl GridLayout {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("grid size m must be at least 1"));
        }
        if m > MAX_M {
            return Err(Error::invalid(format!("grid size m = {m} exceeds {MAX_M}")));
        }
        let mi = m as i64;
        let mf = m as f64;
        let m2 = mi * mi;
        let mut bins = Vec::with_capacity(2 * m2 as usize);
        bins.push(Bin {
            tag: BinTag::NegTail,
            interval: Interval::new(f64::NEG_INFINITY, -mf),
        });
        for n in (-m2..=-2).chain(1..m2) {
            bins.push(Bin {
                tag: finite_tag(n, mi),
                interval: Interval::new(n as f64 / mf, (n + 1) as f64 / mf),
            });
        }
        bins.push(Bin {
            tag: BinTag::PosTail,
            interval: Interval::new(mf, f64::INFINITY),
        });
        Ok(GridLayout { m, bins })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    /// `]−1/m, 1/m]`, where the discretized ratio is fixed to 1.
    pub fn identity_region(&self) -> Interval {
        let r = 1.0 / self.m as f64;
        Interval::new(-r, r)
    }

    /// Position of the bin containing `y`, or `None` inside the identity region.
    pub fn bin_index(&self, y: f64) -> Option<usize> {
        if y.is_nan() {
            return None;
        }
        let mi = self.m as i64;
        let m2 = mi * mi;
        if y == f64::INFINITY {
            return Some(self.bins.len() - 1);
        }
        if y == f64::NEG_INFINITY {
            return Some(0);
        }
        // n with n < y·m ≤ n + 1
        let n = cell_of(y, self.m);
        if n < -m2 {
            Some(0)
        } else if n >= m2 {
            Some(self.bins.len() - 1)
        } else if n == -1 || n == 0 {
            None
        } else if n <= -2 {
            Some((n + m2 + 1) as usize)
        } else {
            Some((n + m2 - 1) as usize)
        }
    }

    pub fn bin_of(&self, y: f64) -> Option<BinTag> {
        self.bin_index(y).map(|i| self.bins[i].tag)
    }

    /// The identity region and every bin as consecutive segments of ℝ, with
    /// the bin index (`None` for the identity region).
    pub fn segments(&self) -> impl Iterator<Item = (Option<usize>, Interval)> + '_ {
        let split = (self.bins.len()) / 2;
        self.bins[..split]
            .iter()
            .enumerate()
            .map(|(i, b)| (Some(i), b.interval))
            .chain(std::iter::once((None, self.identity_region())))
            .chain(
                self.bins[split..]
                    .iter()
                    .enumerate()
                    .map(move |(i, b)| (Some(i + split), b.interval)),
            )
    }
}

fn finite_tag(n: i64, m: i64) -> BinTag {
    let k = n.div_euclid(m);
    let j = n - k * m + 1;
    BinTag::Finite {
        j: j as u32,
        k: k as i32,
    }
}

/// The integer `n` with `fl(n/m) < y ≤ fl((n+1)/m)`, where `fl` is the
/// correctly rounded quotient stored as a bin endpoint. Lookup therefore agrees
/// with `Interval::contains` on the stored bins, even where the rounded
/// endpoint and the exact rational `n/m` straddle `y`.
fn cell_of(y: f64, m: u32) -> i64 {
    let mf = m as f64;
    let limit = (m as i64) * (m as i64) + 1;
    let mut n = ((y * mf).ceil() as i64 - 1).clamp(-limit, limit);
    // one step either way covers the rounding of y·m
    while n > -limit && y <= n as f64 / mf {
        n -= 1;
    }
    while n < limit && y > (n + 1) as f64 / mf {
        n += 1;
    }
    n
}

/// Piecewise-constant ratio that preserves the `ν`-mass of every bin and
/// equals 1 on the identity region.
#[derive(Debug, Clone, Serialize)]
pub struct DiscretizedMeasure {
    pub layout: GridLayout,
    /// `ν(J)/ν̃(J)` per bin; 1 where `ν̃(J) = 0`.
    pub ratios: Vec<f64>,
    pub nu_mass: Vec<Estimate>,
    pub dominating_mass: Vec<Estimate>,
}

impl DiscretizedMeasure {
    pub fn m(&self) -> u32 {
        self.layout.m()
    }

    /// `ρ̄_m(y)`.
    pub fn ratio_at(&self, y: f64) -> f64 {
        match self.layout.bin_index(y) {
            Some(i) => self.ratios[i],
            None => 1.0,
        }
    }

    /// `ν̄_m(J) = ρ̄_m(J)·ν̃(J)` for bin `i`.
    pub fn discretized_mass(&self, i: usize) -> f64 {
        self.ratios[i] * self.dominating_mass[i].value
    }

    /// Splits `region` along the grid, returning the pieces with the constant
    /// value of `ρ̄_m` on each.
    pub fn pieces(&self, region: &Region) -> Vec<(Interval, f64)> {
        let mut out = Vec::new();
        for part in region.parts() {
            for (idx, seg) in self.layout.segments() {
                if let Some(iv) = seg.intersect(part) {
                    out.push((iv, idx.map_or(1.0, |i| self.ratios[i])));
                }
            }
        }
        out
    }
}

/// Builds `ρ̄_m` for `spec`. Requires every bin, tails included, to carry
/// finite `ν̃`-mass.
pub fn discretize(spec: &MeasureSpec, m: u32, tol: f64) -> Result<DiscretizedMeasure> {
    let layout = GridLayout::new(m)?;
    let per_bin_tol = tol / layout.len() as f64;
    let masses: Vec<Result<(Estimate, Estimate)>> = layout
        .bins()
        .par_iter()
        .map(|bin| {
            let dom = spec
                .dominating
                .mass(bin.interval, per_bin_tol)
                .or_divergent(|| format!("dominating mass of bin {} {}", bin.tag, bin.interval))?;
            let nu = spec.interval_mass(bin.interval, per_bin_tol)?;
            Ok((nu, dom))
        })
        .collect();
    let mut ratios = Vec::with_capacity(layout.len());
    let mut nu_mass = Vec::with_capacity(layout.len());
    let mut dominating_mass = Vec::with_capacity(layout.len());
    for r in masses {
        let (nu, dom) = r?;
        ratios.push(if dom.value > 0.0 { nu.value / dom.value } else { 1.0 });
        nu_mass.push(nu);
        dominating_mass.push(dom);
    }
    Ok(DiscretizedMeasure {
        layout,
        ratios,
        nu_mass,
        dominating_mass,
    })
}

/// `∫ |ρ − ρ̄_m| dν̃`, split into the identity region, the finite bins and
/// the two tails.
#[derive(Debug, Clone, Serialize)]
pub struct DiscretizationError {
    pub m: u32,
    pub identity: Estimate,
    pub finite_bins: Estimate,
    pub tails: Estimate,
    pub total: Estimate,
    /// Per-bin contributions in grid order.
    pub per_bin: Vec<Estimate>,
}

pub fn discretization_error(spec: &MeasureSpec, disc: &DiscretizedMeasure, tol: f64) -> Result<DiscretizationError> {
    let layout = &disc.layout;
    let per_tol = tol / (layout.len() + 1) as f64;
    let per_bin: Vec<Result<Estimate>> = layout
        .bins()
        .par_iter()
        .zip(disc.ratios.par_iter())
        .map(|(bin, &rbar)| {
            spec.dominating
                .integrate(|y| (spec.ratio.eval(y) - rbar).abs(), bin.interval, per_tol)
                .or_divergent(|| format!("discretization error on bin {}", bin.tag))
        })
        .collect();
    let per_bin: Vec<Estimate> = per_bin.into_iter().collect::<Result<_>>()?;
    let identity = spec
        .dominating
        .integrate(|y| (spec.ratio.eval(y) - 1.0).abs(), layout.identity_region(), per_tol)
        .or_divergent(|| {
            format!(
                "discretization error on the identity region {}",
                layout.identity_region()
            )
        })?;
    let last = per_bin.len() - 1;
    let tails = per_bin[0] + per_bin[last];
    let finite_bins: Estimate = per_bin[1..last].iter().copied().sum();
    Ok(DiscretizationError {
        m: layout.m(),
        identity,
        finite_bins,
        tails,
        total: identity + finite_bins + tails,
        per_bin,
    })
}

/// `∫_region |ρ − ρ̄_m| dν̃`.
pub fn restricted_discretization_error(
    spec: &MeasureSpec,
    disc: &DiscretizedMeasure,
    region: &Region,
    tol: f64,
) -> Result<Estimate> {
    let pieces = disc.pieces(region);
    let per_tol = tol / pieces.len().max(1) as f64;
    pieces
        .into_iter()
        .map(|(iv, rbar)| {
            spec.dominating
                .integrate(|y| (spec.ratio.eval(y) - rbar).abs(), iv, per_tol)
                .or_divergent(|| format!("discretization error on {iv}"))
        })
        .sum()
}

/// Convenience: discretize and measure the error in one step.
pub fn discretization_error_for(spec: &MeasureSpec, m: u32, tol: f64) -> Result<DiscretizationError> {
    let disc = discretize(spec, m, tol)?;
    discretization_error(spec, &disc, tol)
}

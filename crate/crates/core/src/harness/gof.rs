//! Goodness of fit of simulated count vectors against the product-Poisson
//! law, bin by bin, plus pairwise covariance tests for independence.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

use crate::grid::GridLayout;
use crate::harness::SE_GATE;
use crate::interval::Region;
use crate::measures::MeasureSpec;
use crate::numerics::{BOUND_TOL, DEFAULT_RESOLUTION};
use crate::simulate::{bin_means, extract_statistic, sample_counts_from_means, CountVector, JumpSampler, RandomStream};
use crate::Result;

/// Where the count vectors come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountSource {
    /// Bin the jumps of simulated paths.
    #[default]
    Paths,
    /// Draw the counts directly from independent Poissons.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GofOptions {
    /// Family-wise significance level, split over the tested bins.
    pub level: f64,
    /// Cells with smaller expected counts are pooled with their neighbours.
    pub min_expected: f64,
    pub source: CountSource,
    pub resolution: usize,
}

impl Default for GofOptions {
    fn default() -> Self {
        GofOptions {
            level: 1e-3,
            min_expected: 5.0,
            source: CountSource::Paths,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinTest {
    pub index: usize,
    pub tag: String,
    pub expected_mean: f64,
    pub empirical_mean: f64,
    pub chi_square: f64,
    pub df: usize,
    pub p_value: f64,
    /// Too few pooled cells for a test.
    pub vacuous: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub m: u32,
    pub horizon: f64,
    pub replications: usize,
    pub seed: u64,
    pub source: CountSource,
    pub level: f64,
    /// `level` divided by the number of non-vacuous bins.
    pub per_bin_level: f64,
    pub bins: Vec<BinTest>,
    /// Bins with nonzero sample variance, the rows of `covariance`.
    pub covariance_bins: Vec<usize>,
    pub covariance: Vec<Vec<f64>>,
    /// Largest `|cov| / SE` over the tested pairs.
    pub max_covariance_z: f64,
    /// Distinct pairs with enough expected co-occurrences to be tested.
    pub covariance_pairs_tested: usize,
    pub bins_pass: bool,
    pub covariance_pass: bool,
    pub passed: bool,
}

/// Pools Poisson cells `0, 1, …` until each has expected count at least
/// `min_expected`; the last cell absorbs the upper tail.
fn pooled_cells(mean: f64, n: f64, min_expected: f64) -> Vec<(u64, f64)> {
    let dist = Poisson::new(mean).expect("positive mean");
    let mut cells: Vec<(u64, f64)> = Vec::new();
    let mut acc = 0.0;
    let mut k = 0u64;
    loop {
        acc += dist.pmf(k) * n;
        let tail = dist.sf(k) * n;
        if acc >= min_expected && tail >= min_expected {
            cells.push((k, acc));
            acc = 0.0;
        } else if tail < min_expected {
            let total = acc + tail;
            match cells.last_mut() {
                Some(last) if total < min_expected => last.1 += total,
                _ => cells.push((k, total)),
            }
            // the final cell is open to the right
            if let Some(last) = cells.last_mut() {
                last.0 = u64::MAX;
            }
            return cells;
        }
        k += 1;
    }
}

fn bin_test(index: usize, tag: String, mean: f64, counts: &[u64], opts: &GofOptions) -> BinTest {
    let n = counts.len() as f64;
    let empirical_mean = counts.iter().sum::<u64>() as f64 / n;
    let mut t = BinTest {
        index,
        tag,
        expected_mean: mean,
        empirical_mean,
        chi_square: 0.0,
        df: 0,
        p_value: 1.0,
        vacuous: true,
        passed: true,
    };
    if mean <= 0.0 {
        if counts.iter().any(|&c| c > 0) {
            t.vacuous = false;
            t.p_value = 0.0;
            t.passed = false;
        }
        return t;
    }
    let cells = pooled_cells(mean, n, opts.min_expected);
    if cells.len() < 2 {
        return t;
    }
    // Upper edges are inclusive; the last is `u64::MAX`.
    let mut observed = vec![0u64; cells.len()];
    for &c in counts {
        let idx = cells.partition_point(|&(hi, _)| hi < c);
        observed[idx] += 1;
    }
    let chi: f64 = cells
        .iter()
        .zip(&observed)
        .map(|(&(_, e), &o)| (o as f64 - e) * (o as f64 - e) / e)
        .sum();
    let df = cells.len() - 1;
    t.chi_square = chi;
    t.df = df;
    t.p_value = ChiSquared::new(df as f64).expect("positive df").sf(chi).clamp(0.0, 1.0);
    t.vacuous = false;
    t
}

struct CovarianceSummary {
    bins: Vec<usize>,
    matrix: Vec<Vec<f64>>,
    max_z: f64,
    pairs_tested: usize,
}

/// Sample covariances over the bins with nonzero variance, accumulated in
/// replication order. A pair is z-tested only when its expected number of
/// co-occurrences `n·x̄·ȳ` reaches `min_expected`; below that the normal
/// approximation of the covariance fails.
fn covariances(samples: &[CountVector], nbins: usize, min_expected: f64) -> CovarianceSummary {
    let n = samples.len() as f64;
    let mut sums = vec![0.0; nbins];
    for s in samples {
        for (i, &c) in s.counts.iter().enumerate() {
            sums[i] += c as f64;
        }
    }
    let means: Vec<f64> = sums.iter().map(|s| s / n).collect();
    let mut sq = vec![0.0; nbins];
    for s in samples {
        for (i, &c) in s.counts.iter().enumerate() {
            let d = c as f64 - means[i];
            sq[i] += d * d;
        }
    }
    let active: Vec<usize> = (0..nbins).filter(|&i| sq[i] > 0.0).collect();
    let k = active.len();
    let mut cross = vec![vec![0.0; k]; k];
    let mut nz: Vec<(usize, f64)> = Vec::new();
    for s in samples {
        nz.clear();
        for (a, &i) in active.iter().enumerate() {
            let c = s.counts[i];
            if c > 0 {
                nz.push((a, c as f64));
            }
        }
        for &(a, x) in &nz {
            for &(b, y) in &nz {
                cross[a][b] += x * y;
            }
        }
    }
    let denom = (samples.len().max(2) - 1) as f64;
    let mut cov = vec![vec![0.0; k]; k];
    let mut max_z: f64 = 0.0;
    let mut pairs_tested = 0;
    for a in 0..k {
        for b in 0..k {
            let (i, j) = (active[a], active[b]);
            let c = (cross[a][b] - n * means[i] * means[j]) / denom;
            cov[a][b] = c;
            if a < b && n * means[i] * means[j] >= min_expected {
                pairs_tested += 1;
                let se = (sq[i] / denom * sq[j] / denom / n).sqrt();
                max_z = max_z.max(c.abs() / se);
            }
        }
    }
    // Enforce exact symmetry against rounding in the cross sums.
    #[allow(clippy::needless_range_loop)]
    for a in 0..k {
        for b in (a + 1)..k {
            let avg = 0.5 * (cov[a][b] + cov[b][a]);
            cov[a][b] = avg;
            cov[b][a] = avg;
        }
    }
    CovarianceSummary {
        bins: active,
        matrix: cov,
        max_z,
        pairs_tested,
    }
}

/// Per-bin Poisson means `T·ν(J)` and `replications` count vectors, either
/// binned from paths restricted to `{|y| > 1/m}` or drawn directly.
/// Replication `i` uses stream `(seed, i)`.
pub fn sample_count_vectors(
    spec: &MeasureSpec,
    layout: &GridLayout,
    horizon: f64,
    replications: usize,
    seed: u64,
    opts: &GofOptions,
) -> Result<(Vec<f64>, Vec<CountVector>)> {
    let m = layout.m();
    let means = bin_means(spec, layout, horizon, BOUND_TOL)?;
    let samples: Vec<CountVector> = match opts.source {
        CountSource::Paths => {
            let region = Region::outside(1.0 / m as f64);
            let sampler = JumpSampler::new(spec, &region, opts.resolution)?;
            (0..replications as u64)
                .into_par_iter()
                .map(|i| {
                    sampler
                        .simulate_path(horizon, 0.0, RandomStream::new(seed, i))
                        .map(|p| extract_statistic(&p, layout))
                })
                .collect::<Result<Vec<_>>>()?
        }
        CountSource::Direct => (0..replications as u64)
            .into_par_iter()
            .map(|i| sample_counts_from_means(m, &means, RandomStream::new(seed, i)))
            .collect(),
    };
    Ok((means, samples))
}

/// Simulates `replications` count vectors (paths restricted to
/// `{|y| > 1/m}`, or direct Poisson draws) and tests them against
/// independent Poisson(`T·ν(J)`) laws.
pub fn count_law_check(
    spec: &MeasureSpec,
    m: u32,
    horizon: f64,
    replications: usize,
    seed: u64,
    opts: &GofOptions,
) -> Result<GofReport> {
    let layout = GridLayout::new(m)?;
    let (means, samples) = sample_count_vectors(spec, &layout, horizon, replications, seed, opts)?;
    let mut bins: Vec<BinTest> = layout
        .bins()
        .par_iter()
        .enumerate()
        .map(|(i, bin)| {
            let column: Vec<u64> = samples.iter().map(|s| s.counts[i]).collect();
            bin_test(i, bin.tag.to_string(), means[i], &column, opts)
        })
        .collect();
    let tested = bins.iter().filter(|b| !b.vacuous).count().max(1);
    let per_bin_level = opts.level / tested as f64;
    for b in bins.iter_mut().filter(|b| !b.vacuous) {
        b.passed = b.p_value > per_bin_level;
    }
    let cov = covariances(&samples, layout.len(), opts.min_expected);
    let bins_pass = bins.iter().all(|b| b.passed);
    let covariance_pass = cov.max_z <= SE_GATE;
    Ok(GofReport {
        m,
        horizon,
        replications,
        seed,
        source: opts.source,
        level: opts.level,
        per_bin_level,
        bins,
        covariance_bins: cov.bins,
        covariance: cov.matrix,
        max_covariance_z: cov.max_z,
        covariance_pairs_tested: cov.pairs_tested,
        bins_pass,
        covariance_pass,
        passed: bins_pass && covariance_pass,
    })
}

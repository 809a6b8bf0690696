//! Finite-activity jump paths, the two path kernels, and the count statistic.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::grid::GridLayout;
use crate::interval::Region;
use crate::measures::MeasureSpec;
use crate::numerics::{QuantileTable, DEFAULT_RESOLUTION, MONTE_CARLO_TOL};
use crate::{Error, Result};

/// A reproducible random stream: `(seed, index)` pins every draw, distinct
/// indices give independent ChaCha streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomStream {
    pub seed: u64,
    pub index: u64,
}

impl RandomStream {
    pub fn new(seed: u64, index: u64) -> Self {
        RandomStream { seed, index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        rng
    }
}

/// A pure-jump-plus-drift trajectory on `[0, T]`: `x_t = drift·t + Σ_{r ≤ t} Δx_r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpPath {
    pub horizon: f64,
    pub drift: f64,
    /// `(time, size)` with strictly increasing times in `]0, T]`.
    jumps: Vec<(f64, f64)>,
}

impl JumpPath {
    pub fn new(horizon: f64, drift: f64, jumps: Vec<(f64, f64)>) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::invalid(format!("horizon must be positive, got {horizon}")));
        }
        let mut last = 0.0;
        for &(t, y) in &jumps {
            if !(t > last && t <= horizon) {
                return Err(Error::invalid(format!(
                    "jump times must be strictly increasing in ]0, {horizon}], got {t} after {last}"
                )));
            }
            if y == 0.0 || !y.is_finite() {
                return Err(Error::invalid(format!("jump size must be finite and nonzero, got {y}")));
            }
            last = t;
        }
        Ok(JumpPath { horizon, drift, jumps })
    }

    pub fn empty(horizon: f64, drift: f64) -> Result<Self> {
        JumpPath::new(horizon, drift, Vec::new())
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn sizes(&self) -> impl Iterator<Item = f64> + '_ {
        self.jumps.iter().map(|&(_, y)| y)
    }

    /// `x_t`.
    pub fn value_at(&self, t: f64) -> f64 {
        self.drift * t
            + self
                .jumps
                .iter()
                .take_while(|&&(s, _)| s <= t)
                .map(|&(_, y)| y)
                .sum::<f64>()
    }

    /// Header line, `time,size` header, then one row per jump.
    pub fn write_table<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# horizon={},drift={}", self.horizon, self.drift)?;
        writeln!(w, "time,size")?;
        for (t, y) in &self.jumps {
            writeln!(w, "{t},{y}")?;
        }
        Ok(())
    }
}

/// Keeps only the jump part: `x ↦ x^d`.
pub fn kernel_pi1(path: &JumpPath) -> JumpPath {
    JumpPath {
        drift: 0.0,
        ..path.clone()
    }
}

/// Removes the compensating drift: `x ↦ (x_t − t·η̃)_t`.
pub fn kernel_pi2(path: &JumpPath, eta_tilde: f64) -> JumpPath {
    JumpPath {
        drift: path.drift - eta_tilde,
        ..path.clone()
    }
}

/// Jump counts per grid bin, in grid order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    pub m: u32,
    pub counts: Vec<u64>,
}

impl CountVector {
    pub fn zeros(layout: &GridLayout) -> Self {
        CountVector {
            m: layout.m(),
            counts: vec![0; layout.len()],
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// One row per bin: `index,tag,count`, with the tag quoted.
    pub fn write_table<W: Write>(&self, layout: &GridLayout, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,tag,count")?;
        for (i, (bin, c)) in layout.bins().iter().zip(&self.counts).enumerate() {
            writeln!(w, "{i},\"{}\",{c}", bin.tag)?;
        }
        Ok(())
    }
}

/// Bins the jump sizes of `path`; jumps in the identity region are dropped.
pub fn extract_statistic(path: &JumpPath, layout: &GridLayout) -> CountVector {
    let mut cv = CountVector::zeros(layout);
    for y in path.sizes() {
        if let Some(i) = layout.bin_index(y) {
            cv.counts[i] += 1;
        }
    }
    cv
}

fn poisson_draw<R: Rng>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("finite positive Poisson mean");
    dist.sample(rng) as u64
}

/// Compound-Poisson sampler for `ν` restricted to a finite-mass region.
#[derive(Debug, Clone)]
pub struct JumpSampler {
    region: Region,
    tables: Vec<QuantileTable>,
    /// Cumulative masses of `tables`, last entry is the total intensity.
    cumulative: Vec<f64>,
}

impl JumpSampler {
    pub fn new(spec: &MeasureSpec, region: &Region, resolution: usize) -> Result<Self> {
        let hints = spec.dominating.hints();
        let mut tables = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for part in region.parts() {
            let Some(iv) = spec.dominating.support.intersect(part) else {
                continue;
            };
            let mass = spec.interval_mass(iv, MONTE_CARLO_TOL).map_err(|_| {
                Error::invalid(format!(
                    "jump intensity on {iv} is infinite; restrict the region away from 0, e.g. to {{|y| > 1/m}}"
                ))
            })?;
            if mass.value <= 0.0 {
                continue;
            }
            let mut table = QuantileTable::build(|y| spec.levy_density(y), iv, &hints, resolution)?;
            table.mass = mass.value;
            acc += mass.value;
            tables.push(table);
            cumulative.push(acc);
        }
        Ok(JumpSampler {
            region: region.clone(),
            tables,
            cumulative,
        })
    }

    pub fn with_default_resolution(spec: &MeasureSpec, region: &Region) -> Result<Self> {
        JumpSampler::new(spec, region, DEFAULT_RESOLUTION)
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Total jump intensity `ν(region)`.
    pub fn intensity(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    fn sample_size<R: Rng>(&self, rng: &mut R) -> f64 {
        let pick = rng.random::<f64>() * self.intensity();
        let idx = self
            .cumulative
            .partition_point(|&c| c <= pick)
            .min(self.tables.len() - 1);
        self.tables[idx].sample_from_uniform(rng.random::<f64>())
    }

    pub fn simulate_path(&self, horizon: f64, drift: f64, stream: RandomStream) -> Result<JumpPath> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::invalid(format!("horizon must be positive, got {horizon}")));
        }
        let mut rng = stream.rng();
        let n = poisson_draw(horizon * self.intensity(), &mut rng) as usize;
        let mut times: Vec<f64> = (0..n).map(|_| horizon * (1.0 - rng.random::<f64>())).collect();
        times.sort_by(f64::total_cmp);
        for i in 1..times.len() {
            if times[i] <= times[i - 1] {
                times[i] = times[i - 1].next_up();
            }
        }
        let jumps = times
            .into_iter()
            .map(|t| (t.min(horizon), self.sample_size(&mut rng)))
            .collect();
        JumpPath::new(horizon, drift, jumps)
    }
}

/// One compound-Poisson path of `ν` restricted to `region`.
///
/// Builds the sampling tables on every call; reuse a [`JumpSampler`] for
/// many replications.
pub fn simulate_path(
    spec: &MeasureSpec,
    region: &Region,
    horizon: f64,
    drift: f64,
    stream: RandomStream,
) -> Result<JumpPath> {
    JumpSampler::with_default_resolution(spec, region)?.simulate_path(horizon, drift, stream)
}

/// Independent Poisson counts with the given per-bin means.
pub fn sample_counts_from_means(m: u32, means: &[f64], stream: RandomStream) -> CountVector {
    let mut rng = stream.rng();
    CountVector {
        m,
        counts: means.iter().map(|&mu| poisson_draw(mu, &mut rng)).collect(),
    }
}

/// Per-bin Poisson means `T·ν(J)`.
pub fn bin_means(spec: &MeasureSpec, layout: &GridLayout, horizon: f64, tol: f64) -> Result<Vec<f64>> {
    let per_tol = tol / layout.len() as f64;
    layout
        .bins()
        .iter()
        .map(|b| spec.interval_mass(b.interval, per_tol).map(|e| horizon * e.value))
        .collect()
}

/// A draw from the product-Poisson count experiment.
pub fn sample_counts_direct(
    spec: &MeasureSpec,
    layout: &GridLayout,
    horizon: f64,
    stream: RandomStream,
) -> Result<CountVector> {
    let means = bin_means(spec, layout, horizon, MONTE_CARLO_TOL)?;
    Ok(sample_counts_from_means(layout.m(), &means, stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::measures::{DominatingMeasure, Ratio};

    fn uniform(lo: f64, hi: f64) -> MeasureSpec {
        MeasureSpec::custom(DominatingMeasure::lebesgue(lo, hi).unwrap(), Ratio::One).unwrap()
    }

    #[test]
    fn empty_region_gives_no_jumps() {
        let spec = uniform(0.0, 1.0);
        let region = Region::single(Interval::new(2.0, 3.0));
        let path = simulate_path(&spec, &region, 5.0, 0.1, RandomStream::new(1, 0)).unwrap();
        assert!(path.jumps().is_empty());
        assert_eq!(path.drift, 0.1);
    }

    #[test]
    fn streams_are_reproducible() {
        let spec = uniform(0.0, 1.0);
        let sampler = JumpSampler::new(&spec, &Region::real_line(), 1024).unwrap();
        let a = sampler.simulate_path(3.0, 0.0, RandomStream::new(7, 3)).unwrap();
        let b = sampler.simulate_path(3.0, 0.0, RandomStream::new(7, 3)).unwrap();
        let c = sampler.simulate_path(3.0, 0.0, RandomStream::new(7, 4)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn infinite_intensity_is_rejected() {
        let spec = MeasureSpec::example3(0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        let r = JumpSampler::new(&spec, &Region::single(Interval::new(0.0, 1.0)), 256);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn mean_jump_count() {
        let spec = uniform(0.0, 1.0);
        let sampler = JumpSampler::new(&spec, &Region::real_line(), 1024).unwrap();
        let n = 100_000u64;
        let total: usize = (0..n)
            .map(|i| {
                sampler
                    .simulate_path(1.0, 0.0, RandomStream::new(2024, i))
                    .unwrap()
                    .jumps()
                    .len()
            })
            .sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn kernels() {
        let p = JumpPath::new(2.0, 0.3, vec![(0.5, 1.0)]).unwrap();
        let q = kernel_pi1(&p);
        assert_eq!(q.drift, 0.0);
        assert_eq!(q.jumps(), p.jumps());
        assert_eq!(kernel_pi1(&q), q);
        let z = kernel_pi1(&JumpPath::empty(1.0, 0.7).unwrap());
        assert_eq!(z.value_at(1.0), 0.0);
        let s = kernel_pi2(&p, 0.1);
        assert!((s.drift - 0.2).abs() < 1e-15);
        assert_eq!(kernel_pi2(&p, 0.0), p);
        assert_eq!(kernel_pi2(&kernel_pi2(&p, 0.25), -0.25), p);
    }

    #[test]
    fn statistic_bins_sizes() {
        let layout = GridLayout::new(2).unwrap();
        let p = JumpPath::new(1.0, 0.0, vec![(0.1, 0.75), (0.2, -1.7), (0.3, 3.2), (0.4, 0.4)]).unwrap();
        let cv = extract_statistic(&p, &layout);
        let mut expected = vec![0; 8];
        expected[4] = 1; // ]0.5, 1]
        expected[1] = 1; // ]-2, -1.5]
        expected[7] = 1; // ]2, ∞[
        assert_eq!(cv.counts, expected);
        assert_eq!(
            extract_statistic(&JumpPath::empty(1.0, 0.0).unwrap(), &layout).total(),
            0
        );
    }

    #[test]
    fn direct_counts() {
        let layout = GridLayout::new(2).unwrap();
        let cv = sample_counts_from_means(2, &[0.0; 8], RandomStream::new(3, 0));
        assert_eq!(cv.total(), 0);
        let mut means = vec![0.0; 8];
        means[4] = 2.0;
        let n = 100_000u64;
        let sum: u64 = (0..n)
            .map(|i| sample_counts_from_means(2, &means, RandomStream::new(11, i)).counts[4])
            .sum();
        assert!((sum as f64 / n as f64 - 2.0).abs() < 0.03);
        let spec = uniform(0.5, 1.0);
        let a = sample_counts_direct(&spec, &layout, 2.0, RandomStream::new(5, 9)).unwrap();
        let b = sample_counts_direct(&spec, &layout, 2.0, RandomStream::new(5, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn path_rejects_bad_jumps() {
        assert!(JumpPath::new(1.0, 0.0, vec![(0.5, 1.0), (0.5, 2.0)]).is_err());
        assert!(JumpPath::new(1.0, 0.0, vec![(1.5, 1.0)]).is_err());
        assert!(JumpPath::new(1.0, 0.0, vec![(0.5, 0.0)]).is_err());
    }
}

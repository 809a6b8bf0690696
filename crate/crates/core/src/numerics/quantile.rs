//! Numeric inverse-CDF tables for sampling from a density restricted to an
//! interval.

use serde::Serialize;

use super::quadrature::{adaptive, panel, pieces, Hints, Map, Piece};
use crate::interval::Interval;
use crate::{Error, Result};

/// Default number of probability steps in a table.
pub const DEFAULT_RESOLUTION: usize = 1 << 14;

const CELLS_PER_REGULAR_PIECE: usize = 64;
const CELLS_PER_PANEL: usize = 16;
const MAX_PANELS: usize = 120;
const CELL_TOL: f64 = 1e-14;
const NEGLIGIBLE_MASS: f64 = 1e-15;
const MAX_REFINE_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy)]
struct Cell {
    map: Map,
    /// `t` at the lower-`y` end.
    t_from: f64,
    /// `t` at the upper-`y` end.
    t_to: f64,
    y_lo: f64,
    y_hi: f64,
    mass: f64,
}

/// Cumulative mass on a mesh of cells, with exact in-cell inversion.
struct CdfMesh<F> {
    density: F,
    cells: Vec<Cell>,
    /// `cumulative[i]` is the mass strictly below cell `i`.
    cumulative: Vec<f64>,
    total: f64,
}

impl<F: Fn(f64) -> f64> CdfMesh<F> {
    fn build(density: F, region: Interval, hints: &Hints) -> Self {
        let mut cells = Vec::new();
        for piece in pieces(region, hints) {
            match piece {
                Piece::Regular { a, b } => {
                    let map = Map::Linear { origin: a, dir: 1.0 };
                    let h = (b - a) / CELLS_PER_REGULAR_PIECE as f64;
                    for i in 0..CELLS_PER_REGULAR_PIECE {
                        let t0 = h * i as f64;
                        let t1 = if i + 1 == CELLS_PER_REGULAR_PIECE {
                            b - a
                        } else {
                            h * (i + 1) as f64
                        };
                        cells.push(make_cell(&density, map, t0, t1));
                    }
                }
                Piece::Graded { map, t_max } => {
                    let mut masses: Vec<f64> = Vec::new();
                    let mut running = 0.0;
                    for k in 0..MAX_PANELS {
                        let (lo, hi) = panel(t_max, k);
                        let h = (hi - lo) / CELLS_PER_PANEL as f64;
                        let mut panel_mass = 0.0;
                        for i in 0..CELLS_PER_PANEL {
                            let t0 = lo + h * i as f64;
                            let t1 = if i + 1 == CELLS_PER_PANEL { hi } else { t0 + h };
                            let cell = make_cell(&density, map, t0, t1);
                            panel_mass += cell.mass;
                            cells.push(cell);
                        }
                        running += panel_mass;
                        masses.push(panel_mass);
                        if k >= 2 {
                            let prev = masses[k - 1];
                            if panel_mass == 0.0 && prev == 0.0 {
                                break;
                            }
                            if panel_mass < prev {
                                let q = panel_mass / prev;
                                if panel_mass * q / (1.0 - q) <= NEGLIGIBLE_MASS * running {
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        }
        cells.retain(|c| c.mass > 0.0 && c.y_lo < c.y_hi);
        cells.sort_by(|a, b| a.y_lo.total_cmp(&b.y_lo));
        let mut cumulative = Vec::with_capacity(cells.len());
        let mut acc = 0.0;
        for c in &cells {
            cumulative.push(acc);
            acc += c.mass;
        }
        CdfMesh {
            density,
            cells,
            cumulative,
            total: acc,
        }
    }

    fn integrand(&self, map: Map, t: f64) -> f64 {
        let v = (self.density)(map.y(t));
        if v == 0.0 {
            0.0
        } else {
            v * map.jacobian(t)
        }
    }

    /// Mass of `cell` between its lower end and parameter `s ∈ [0, 1]`.
    fn partial(&self, cell: &Cell, s: f64) -> f64 {
        let tau = cell.t_from + s * (cell.t_to - cell.t_from);
        let (a, b) = if cell.t_from < tau {
            (cell.t_from, tau)
        } else {
            (tau, cell.t_from)
        };
        let g = |t: f64| self.integrand(cell.map, t);
        adaptive(&g, a, b, CELL_TOL, 200).value
    }

    fn invert_in_cell(&self, idx: usize, target: f64) -> f64 {
        let cell = &self.cells[idx];
        let target = target.clamp(0.0, cell.mass);
        let span = (cell.t_to - cell.t_from).abs();
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut s = target / cell.mass;
        for _ in 0..80 {
            let p = self.partial(cell, s);
            let diff = p - target;
            if diff.abs() <= 1e-13 * cell.mass {
                break;
            }
            if diff > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            if hi - lo < 1e-15 {
                break;
            }
            let tau = cell.t_from + s * (cell.t_to - cell.t_from);
            let slope = self.integrand(cell.map, tau) * span;
            let newton = if slope > 0.0 { s - diff / slope } else { f64::NAN };
            s = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        let tau = cell.t_from + s * (cell.t_to - cell.t_from);
        cell.map.y(tau).clamp(cell.y_lo, cell.y_hi)
    }

    /// Smallest `y` with normalized CDF ≥ `u`.
    fn quantile(&self, u: f64) -> f64 {
        let target = u * self.total;
        let idx = self.cumulative.partition_point(|&c| c <= target).saturating_sub(1);
        self.invert_in_cell(idx, target - self.cumulative[idx])
    }

    fn cdf(&self, y: f64) -> f64 {
        let idx = self.cells.partition_point(|c| c.y_lo < y);
        if idx == 0 {
            return 0.0;
        }
        let idx = idx - 1;
        let cell = &self.cells[idx];
        if y >= cell.y_hi {
            return (self.cumulative[idx] + cell.mass) / self.total;
        }
        let t = t_of(cell.map, y);
        let s = ((t - cell.t_from) / (cell.t_to - cell.t_from)).clamp(0.0, 1.0);
        (self.cumulative[idx] + self.partial(cell, s)) / self.total
    }
}

fn make_cell<F: Fn(f64) -> f64>(density: &F, map: Map, t0: f64, t1: f64) -> Cell {
    let g = |t: f64| {
        let v = density(map.y(t));
        if v == 0.0 {
            0.0
        } else {
            v * map.jacobian(t)
        }
    };
    let mass = adaptive(&g, t0, t1, CELL_TOL, 200).value.max(0.0);
    let (t_from, t_to) = if map.increasing() { (t0, t1) } else { (t1, t0) };
    let (ya, yb) = (map.y(t_from), map.y(t_to));
    Cell {
        map,
        t_from,
        t_to,
        y_lo: ya.min(yb),
        y_hi: ya.max(yb),
        mass,
    }
}

fn t_of(map: Map, y: f64) -> f64 {
    match map {
        Map::Linear { origin, dir } => (y - origin) / dir,
        Map::Reciprocal { origin, dir, scale } => 1.0 / (1.0 + (y - origin) / (dir * scale)),
        Map::Log { origin, dir, scale } => (-(y - origin) / (dir * scale)).exp(),
    }
}

/// Monotone `(u, y)` pairs approximating the quantile function of a density
/// restricted to `region`, normalized by its mass.
#[derive(Debug, Clone, Serialize)]
pub struct QuantileTable {
    pub region: Interval,
    /// Mass of the region (the normalization constant).
    pub mass: f64,
    probabilities: Vec<f64>,
    sizes: Vec<f64>,
    resolution: usize,
}

impl QuantileTable {
    /// Tabulates the quantile function of `density` on `region`.
    ///
    /// The table starts from a uniform grid of `resolution` steps in `u` and
    /// refines any step whose midpoint interpolation misses the CDF by more
    /// than `1/(8·resolution)`.
    pub fn build<F>(density: F, region: Interval, hints: &Hints, resolution: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        if resolution < 2 {
            return Err(Error::invalid("quantile table resolution must be at least 2"));
        }
        if region.is_empty() {
            return Err(Error::invalid(format!("empty region {region}")));
        }
        let mesh = CdfMesh::build(density, region, hints);
        if !(mesh.total > 0.0) || !mesh.total.is_finite() {
            return Err(Error::invalid(format!(
                "region {region} carries no finite positive mass (got {})",
                mesh.total
            )));
        }
        let y_first = mesh.cells.first().map(|c| c.y_lo).unwrap_or(region.lo);
        let y_last = mesh.cells.last().map(|c| c.y_hi).unwrap_or(region.hi);
        let lo_end = if region.lo.is_finite() { region.lo } else { y_first };
        let hi_end = if region.hi.is_finite() { region.hi } else { y_last };

        let mut us = Vec::with_capacity(resolution + 1);
        let mut ys = Vec::with_capacity(resolution + 1);
        us.push(0.0);
        ys.push(lo_end.max(y_first));
        for i in 1..resolution {
            let u = i as f64 / resolution as f64;
            us.push(u);
            ys.push(mesh.quantile(u));
        }
        us.push(1.0);
        ys.push(hi_end.min(y_last));

        let threshold = 1.0 / (8.0 * resolution as f64);
        let mut probabilities = Vec::with_capacity(resolution + 1);
        let mut sizes = Vec::with_capacity(resolution + 1);
        probabilities.push(us[0]);
        sizes.push(ys[0]);
        for i in 0..resolution {
            refine(
                &mesh,
                (us[i], ys[i]),
                (us[i + 1], ys[i + 1]),
                threshold,
                0,
                &mut probabilities,
                &mut sizes,
            );
        }
        Ok(QuantileTable {
            region,
            mass: mesh.total,
            probabilities,
            sizes,
            resolution,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.probabilities.iter().copied().zip(self.sizes.iter().copied())
    }

    /// Linear interpolation of the tabulated quantile function.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let idx = self.probabilities.partition_point(|&p| p <= u);
        if idx == 0 {
            return self.sizes[0];
        }
        if idx >= self.probabilities.len() {
            return *self.sizes.last().expect("non-empty table");
        }
        let (u0, u1) = (self.probabilities[idx - 1], self.probabilities[idx]);
        let (y0, y1) = (self.sizes[idx - 1], self.sizes[idx]);
        y0 + (y1 - y0) * (u - u0) / (u1 - u0)
    }

    /// Draws a value inside `]region.lo, region.hi]` from a uniform `u ∈ [0, 1)`.
    pub fn sample_from_uniform(&self, u: f64) -> f64 {
        let y = self.quantile(u);
        if y <= self.region.lo {
            self.region.lo.next_up()
        } else if y > self.region.hi {
            self.region.hi
        } else {
            y
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    mesh: &CdfMesh<F>,
    left: (f64, f64),
    right: (f64, f64),
    threshold: f64,
    depth: u32,
    us: &mut Vec<f64>,
    ys: &mut Vec<f64>,
) {
    let gap = right.0 - left.0;
    if gap > threshold && depth < MAX_REFINE_DEPTH && right.1 > left.1 {
        let u_mid = 0.5 * (left.0 + right.0);
        let y_lin = 0.5 * (left.1 + right.1);
        if (mesh.cdf(y_lin) - u_mid).abs() > threshold {
            let y_mid = mesh.quantile(u_mid);
            if y_mid > left.1 && y_mid < right.1 {
                refine(mesh, left, (u_mid, y_mid), threshold, depth + 1, us, ys);
                refine(mesh, (u_mid, y_mid), right, threshold, depth + 1, us, ys);
                return;
            }
        }
    }
    if right.1 > *ys.last().expect("seeded") {
        us.push(right.0);
        ys.push(right.1);
    } else {
        // collapsed point: keep the larger probability for the same size
        *us.last_mut().expect("seeded") = right.0;
    }
}

use serde::{Deserialize, Serialize};

/// A left-open, right-closed interval `]lo, hi]`.
///
/// Infinite endpoints are allowed; `hi = +inf` makes the interval open on the
/// right as well, which matches the positive tail `]m, ∞[`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub const fn real_line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, y: f64) -> bool {
        self.lo < y && y <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let iv = Interval::new(self.lo.max(other.lo), self.hi.min(other.hi));
        (!iv.is_empty()).then_some(iv)
    }

    /// Splits at every cut point lying strictly inside the interval.
    pub fn split_at(&self, cuts: &[f64]) -> Vec<Interval> {
        let mut points: Vec<f64> = cuts.iter().copied().filter(|c| *c > self.lo && *c < self.hi).collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let mut out = Vec::with_capacity(points.len() + 1);
        let mut lo = self.lo;
        for p in points {
            out.push(Interval::new(lo, p));
            lo = p;
        }
        out.push(Interval::new(lo, self.hi));
        out
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let close = if self.hi.is_finite() { ']' } else { '[' };
        write!(f, "]{}, {}{}", self.lo, self.hi, close)
    }
}

/// A finite union of disjoint intervals, kept in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    parts: Vec<Interval>,
}

impl Region {
    /// Builds a region; parts must be pairwise disjoint.
    pub fn new(parts: Vec<Interval>) -> crate::Result<Self> {
        let mut parts: Vec<Interval> = parts.into_iter().filter(|p| !p.is_empty()).collect();
        parts.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for w in parts.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(crate::Error::invalid(format!(
                    "region parts {} and {} overlap",
                    w[0], w[1]
                )));
            }
        }
        Ok(Region { parts })
    }

    pub fn single(iv: Interval) -> Self {
        Region {
            parts: if iv.is_empty() { vec![] } else { vec![iv] },
        }
    }

    pub fn real_line() -> Self {
        Region::single(Interval::real_line())
    }

    /// `{|y| > r}` in the half-open convention: `]-∞, -r] ∪ ]r, ∞[`.
    pub fn outside(r: f64) -> Self {
        Region {
            parts: vec![Interval::new(f64::NEG_INFINITY, -r), Interval::new(r, f64::INFINITY)],
        }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, y: f64) -> bool {
        self.parts.iter().any(|p| p.contains(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_open_membership() {
        let iv = Interval::new(0.5, 1.0);
        assert!(!iv.contains(0.5));
        assert!(iv.contains(1.0));
        let tail = Interval::new(2.0, f64::INFINITY);
        assert!(!tail.contains(2.0));
        assert!(tail.contains(1e300));
    }

    #[test]
    fn split_and_intersect() {
        let iv = Interval::new(-1.0, 2.0);
        let parts = iv.split_at(&[0.0, 5.0, 1.0, 0.0]);
        assert_eq!(
            parts,
            vec![
                Interval::new(-1.0, 0.0),
                Interval::new(0.0, 1.0),
                Interval::new(1.0, 2.0)
            ]
        );
        assert_eq!(iv.intersect(&Interval::new(3.0, 4.0)), None);
    }

    #[test]
    fn overlapping_region_rejected() {
        let r = Region::new(vec![Interval::new(0.0, 2.0), Interval::new(1.0, 3.0)]);
        assert!(r.is_err());
        let r = Region::outside(0.25);
        assert!(r.contains(-0.25) && !r.contains(0.25) && r.contains(0.3));
    }
}

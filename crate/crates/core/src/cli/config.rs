//! The run configuration document.

use serde::{Deserialize, Serialize};

use crate::grid::MAX_M;
use crate::harness::gof::{CountSource, GofOptions};
use crate::harness::sweep::{example1_sine, ExampleClass};
use crate::interval::{Interval, Region};
use crate::measures::{DominatingMeasure, MeasureSpec, Ratio};
use crate::numerics::{BOUND_TOL, DEFAULT_RESOLUTION};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DominatingConfig {
    Lebesgue {
        lo: f64,
        hi: f64,
    },
    Gaussian {
        sigma: f64,
    },
    InverseSquare,
    TemperedStable {
        alpha: f64,
        c_neg: f64,
        c_pos: f64,
        decay_neg: f64,
        decay_pos: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RatioConfig {
    One,
    Linear {
        intercept: f64,
        slope: f64,
    },
    Sine {
        level: f64,
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    GaussianTilt {
        lambda: f64,
    },
    ExponentialTilt {
        neg: f64,
        pos: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn three() -> f64 {
    3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureConfig {
    /// `ρ = K(2 + sin ωy)/3` against `N(0, σ²)`.
    Example1 {
        #[serde(default = "one")]
        l: f64,
        #[serde(default = "one")]
        k: f64,
        #[serde(default = "three")]
        omega: f64,
    },
    Example2 {
        lambda: f64,
        eps: f64,
        big_m: f64,
    },
    Example3 {
        alpha: f64,
        c1: f64,
        c2: f64,
        lambda1: f64,
        lambda2: f64,
        eps: f64,
        big_m: f64,
    },
    Custom {
        dominating: DominatingConfig,
        ratio: RatioConfig,
    },
}

impl MeasureConfig {
    pub fn build(&self) -> Result<MeasureSpec> {
        let spec = match self {
            MeasureConfig::Example1 { l, k, omega } => example1_sine(*l, *k, *omega),
            MeasureConfig::Example2 { lambda, eps, big_m } => MeasureSpec::example2(*lambda, *eps, *big_m),
            MeasureConfig::Example3 {
                alpha,
                c1,
                c2,
                lambda1,
                lambda2,
                eps,
                big_m,
            } => MeasureSpec::example3(*alpha, *c1, *c2, *lambda1, *lambda2, *eps, *big_m),
            MeasureConfig::Custom { dominating, ratio } => {
                let dom = match *dominating {
                    DominatingConfig::Lebesgue { lo, hi } => DominatingMeasure::lebesgue(lo, hi),
                    DominatingConfig::Gaussian { sigma } => DominatingMeasure::gaussian(sigma),
                    DominatingConfig::InverseSquare => Ok(DominatingMeasure::inverse_square()),
                    DominatingConfig::TemperedStable {
                        alpha,
                        c_neg,
                        c_pos,
                        decay_neg,
                        decay_pos,
                    } => DominatingMeasure::tempered_stable(alpha, c_neg, c_pos, decay_neg, decay_pos),
                }
                .map_err(|e| field_error("measure.dominating", e))?;
                let ratio = match *ratio {
                    RatioConfig::One => Ratio::One,
                    RatioConfig::Linear { intercept, slope } => Ratio::Linear { intercept, slope },
                    RatioConfig::Sine {
                        level,
                        amplitude,
                        frequency,
                        phase,
                    } => Ratio::Sine {
                        level,
                        amplitude,
                        frequency,
                        phase,
                    },
                    RatioConfig::GaussianTilt { lambda } => Ratio::GaussianTilt { lambda },
                    RatioConfig::ExponentialTilt { neg, pos } => Ratio::ExponentialTilt { neg, pos },
                };
                MeasureSpec::custom(dom, ratio)
            }
        };
        spec.map_err(|e| field_error("measure", e))
    }

    pub fn example_class(&self) -> Option<ExampleClass> {
        match self {
            MeasureConfig::Example1 { .. } => Some(ExampleClass::Example1),
            MeasureConfig::Example2 { .. } => Some(ExampleClass::Example2),
            MeasureConfig::Example3 { .. } => Some(ExampleClass::Example3),
            MeasureConfig::Custom { .. } => None,
        }
    }
}

fn field_error(field: &str, e: Error) -> Error {
    match e {
        Error::InvalidArgument(msg) | Error::Config(msg) => Error::Config(format!("field `{field}`: {msg}")),
        other => other,
    }
}

/// Where likelihood computations and path simulation take place.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionPolicy {
    /// `{|y| > 1/m}`.
    #[default]
    OutsideIdentity,
    FullLine,
    /// Explicit `]lo, hi]` parts.
    Intervals {
        parts: Vec<(f64, f64)>,
    },
}

impl RegionPolicy {
    pub fn region(&self, m: u32) -> Result<Region> {
        match self {
            RegionPolicy::OutsideIdentity => Ok(Region::outside(1.0 / m as f64)),
            RegionPolicy::FullLine => Ok(Region::real_line()),
            RegionPolicy::Intervals { parts } => {
                Region::new(parts.iter().map(|&(lo, hi)| Interval::new(lo, hi)).collect())
                    .map_err(|e| field_error("region.parts", e))
            }
        }
    }
}

fn default_horizon() -> f64 {
    1.0
}
fn default_replications() -> usize {
    10_000
}
fn default_paths() -> usize {
    10
}
fn default_tol() -> f64 {
    BOUND_TOL
}
fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}
fn default_level() -> f64 {
    1e-3
}
fn default_min_expected() -> f64 {
    5.0
}

pub const DEFAULT_M_LIST: [u32; 4] = [4, 8, 16, 32];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub measure: MeasureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<u32>>,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub drift: f64,
    #[serde(default)]
    pub region: RegionPolicy,
    /// Monte-Carlo replications for `counts` and `verify`.
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Number of paths written by `simulate`.
    #[serde(default = "default_paths")]
    pub paths: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub count_source: CountSource,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_min_expected")]
    pub min_expected: f64,
    /// Not embedded in reports, so outputs do not depend on where they go.
    #[serde(default, skip_serializing)]
    pub output_dir: Option<String>,
}

fn config_error(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("field `{field}`: {msg}"))
}

fn check_m(field: &str, m: u32) -> Result<()> {
    if m == 0 || m > MAX_M {
        return Err(config_error(
            field,
            format!("must be an integer in [1, {MAX_M}], got {m}"),
        ));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks ranges and fills `m_list` from `m` (or the default list), so
    /// the serialized form is fully resolved.
    pub fn validate(&self) -> Result<()> {
        if let Some(m) = self.m {
            check_m("m", m)?;
        }
        if let Some(list) = &self.m_list {
            if list.is_empty() {
                return Err(config_error("m_list", "must not be empty"));
            }
            for (i, &m) in list.iter().enumerate() {
                check_m(&format!("m_list[{i}]"), m)?;
            }
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(config_error(
                "horizon",
                format!("must be positive and finite, got {}", self.horizon),
            ));
        }
        if !self.drift.is_finite() {
            return Err(config_error("drift", "must be finite"));
        }
        if self.replications == 0 {
            return Err(config_error("replications", "must be positive"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(config_error("tol", format!("must lie in ]0, 1[, got {}", self.tol)));
        }
        if self.resolution < 2 {
            return Err(config_error(
                "resolution",
                format!("must be at least 2, got {}", self.resolution),
            ));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(config_error("level", format!("must lie in ]0, 1[, got {}", self.level)));
        }
        if !(self.min_expected > 0.0) {
            return Err(config_error("min_expected", "must be positive"));
        }
        if let RegionPolicy::Intervals { parts } = &self.region {
            if parts.is_empty() {
                return Err(config_error("region.parts", "must not be empty"));
            }
            self.region.region(1)?;
        }
        self.measure.build()?;
        Ok(())
    }

    pub fn resolve(mut self) -> Self {
        if self.m_list.is_none() {
            self.m_list = Some(self.m.map_or_else(|| DEFAULT_M_LIST.to_vec(), |m| vec![m]));
        }
        self.m = None;
        self
    }

    pub fn m_values(&self) -> Vec<u32> {
        self.m_list
            .clone()
            .unwrap_or_else(|| self.m.map_or_else(|| DEFAULT_M_LIST.to_vec(), |m| vec![m]))
    }

    pub fn gof_options(&self) -> GofOptions {
        GofOptions {
            level: self.level,
            min_expected: self.min_expected,
            source: self.count_source,
            resolution: self.resolution,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg =
            RunConfig::from_json(r#"{"measure": {"class": "example2", "lambda": 1, "eps": 0.5, "big_m": 2}, "m": 4}"#)
                .unwrap()
                .resolve();
        assert_eq!(cfg.m_values(), vec![4]);
        assert_eq!(cfg.horizon, 1.0);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn field_named_in_errors() {
        let err = RunConfig::from_json(r#"{"measure": {"class": "example1"}, "m": 0}"#).unwrap_err();
        assert!(matches!(&err, Error::Config(msg) if msg.contains("`m`")), "{err}");
        let err = RunConfig::from_json(r#"{"measure": {"class": "example1"}, "m_list": [4, 0]}"#).unwrap_err();
        assert!(err.to_string().contains("m_list[1]"));
        let err = RunConfig::from_json(r#"{"measure": {"class": "example1"}, "horizon": -1}"#).unwrap_err();
        assert!(err.to_string().contains("horizon"));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(RunConfig::from_json(r#"{"measure": {"class": "example1"}, "mm": 3}"#).is_err());
        assert!(RunConfig::from_json(r#"{"measure": {"class": "example1", "x": 1}}"#).is_err());
    }

    #[test]
    fn class_constraints_reported() {
        let err = RunConfig::from_json(r#"{"measure": {"class": "example2", "lambda": 3, "eps": 0.5, "big_m": 2}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("measure"));
    }
}

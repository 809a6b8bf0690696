//! Quadrature and inverse-CDF machinery shared by the measure, grid and
//! simulation modules.

pub mod quadrature;
pub mod quantile;

pub use quadrature::{integrate, Hints, QuadratureResult, TailDecay, BOUND_TOL, MONTE_CARLO_TOL};
pub use quantile::{QuantileTable, DEFAULT_RESOLUTION};

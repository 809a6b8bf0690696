//! Grid discretization of Lévy measures that have a density against a
//! reference measure, and the machinery to check what the discretization
//! costs. It covers bin counts of simulated jump paths, likelihood ratios
//! between the original and discretized measures, and Monte-Carlo and
//! goodness-of-fit harnesses around them.
//!
//! Start with [`grid::discretize`] and [`measures::MeasureSpec`]. The
//! `jumpcount` binary wraps everything in [`cli`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod interval;
pub mod numerics;

pub use error::{Error, Result};
pub use interval::{Interval, Region};
pub mod cli;
pub mod grid;
pub mod harness;
pub mod likelihood;
pub mod measures;
pub mod simulate;

//! Log-likelihood of a fixed path, the A± split of the discretized ratio, and
//! the Monte-Carlo checks built on them.

use jumpcount::grid::discretize;
use jumpcount::harness::lemma::lemma_checks;
use jumpcount::likelihood::{log_density_u, Numerator, RatioSplit};
use jumpcount::measures::{DominatingMeasure, MeasureSpec, Ratio};
use jumpcount::numerics::BOUND_TOL;
use jumpcount::simulate::JumpPath;
use jumpcount::{Interval, Region};

fn main() -> jumpcount::Result<()> {
    let spec = MeasureSpec::custom(
        DominatingMeasure::lebesgue(0.0, 1.0)?,
        Ratio::Linear {
            intercept: 0.0,
            slope: 1.0,
        },
    )?;
    let region = Region::single(Interval::new(0.5, 1.0));
    let path = JumpPath::new(1.0, 0.0, vec![(0.2, 0.6), (0.7, 0.9)])?;

    let u = log_density_u(&path, Numerator::Measure(&spec), &spec.dominating, &region, BOUND_TOL)?;
    println!("U_T = {u:.6}");

    let disc = discretize(&spec, 2, BOUND_TOL)?;
    let split = RatioSplit::new(&spec, &disc, &region, BOUND_TOL)?;
    let rep = split.report(&path)?;
    println!("A+ = {:.6}, A- = {:.6}, R = {:.6}", rep.a_plus, rep.a_minus, rep.ratio);

    let checks = lemma_checks(&spec, 2, 1.0, &region, 50_000, 3, 4096, BOUND_TOL)?;
    println!(
        "E[e^U] = {:.4} ± {:.4}\nE|1-R| = {:.5} ± {:.5} <= 2 sinh(T D) = {:.5}\nE[e^A+ - e^A-] = {:.5} ± {:.5}",
        checks.martingale.mean,
        checks.martingale.se,
        checks.abs_deviation.mean,
        checks.abs_deviation.se,
        checks.sinh_bound,
        checks.sinh_identity.mean,
        checks.sinh_identity.se
    );
    Ok(())
}

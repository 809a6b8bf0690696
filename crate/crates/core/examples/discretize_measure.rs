//! Discretizes a Lipschitz ratio against a Gaussian reference measure and
//! shows how the error splits as m doubles.

use jumpcount::grid::{discretization_error, discretize};
use jumpcount::harness::sweep::example1_sine;
use jumpcount::numerics::BOUND_TOL;

fn main() -> jumpcount::Result<()> {
    let spec = example1_sine(1.0, 1.0, 3.0)?;
    println!(
        "{:>4} {:>12} {:>12} {:>12} {:>12}",
        "m", "identity", "bins", "tails", "total"
    );
    for m in [2, 4, 8, 16] {
        let disc = discretize(&spec, m, BOUND_TOL)?;
        let err = discretization_error(&spec, &disc, BOUND_TOL)?;
        println!(
            "{m:>4} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            err.identity.value, err.finite_bins.value, err.tails.value, err.total.value
        );
    }
    let disc = discretize(&spec, 2, BOUND_TOL)?;
    println!("\nm = 2 bin ratios:");
    for (bin, r) in disc.layout.bins().iter().zip(&disc.ratios) {
        println!("  {:<8} {r:.6}", bin.tag.to_string());
    }
    Ok(())
}

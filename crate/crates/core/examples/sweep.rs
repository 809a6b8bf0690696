//! Worst-case discretization error over the default Example 2 parameter grid,
//! with the closed-form envelope terms at each m.

use jumpcount::harness::bounds::example_bound_terms;
use jumpcount::harness::sweep::{default_grid, default_sweep, ExampleClass};
use jumpcount::numerics::BOUND_TOL;

fn main() -> jumpcount::Result<()> {
    let m_list = [4, 8, 16, 32];
    let result = default_sweep(ExampleClass::Example2, &m_list, BOUND_TOL)?;
    println!("grid: {}", result.grid);
    for w in &result.worst_case {
        println!("m = {:>2}: worst D_m = {:.5} (point {})", w.m, w.d_m.value, w.argmax);
    }
    println!("nonincreasing: {}", result.worst_case_nonincreasing);

    let spec = &default_grid(ExampleClass::Example2)?[8];
    for t in example_bound_terms(spec, 16, BOUND_TOL)? {
        println!(
            "  {:<9} {:.5} x{} {}",
            t.name,
            t.value,
            t.multiplicity,
            if t.proven { "" } else { "(envelope)" }
        );
    }
    Ok(())
}

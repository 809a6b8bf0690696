//! Condition report for one member of each parametric class.

use jumpcount::harness::conditions::check_conditions;
use jumpcount::harness::sweep::example1_sine;
use jumpcount::measures::MeasureSpec;
use jumpcount::numerics::BOUND_TOL;

fn main() -> jumpcount::Result<()> {
    let specs = [
        ("example 1", example1_sine(1.0, 1.0, 3.0)?),
        ("example 2", MeasureSpec::example2(1.0, 0.5, 2.0)?),
        ("example 3", MeasureSpec::example3(0.5, 1.0, 1.0, 2.0, 1.5, 1.0, 2.0)?),
    ];
    for (name, spec) in &specs {
        let r = check_conditions(spec, &[4, 8, 16], BOUND_TOL)?;
        println!("{name}:");
        match r.m2.value {
            Some(h) => println!("  hellinger integral {:.6}", h.value),
            None => println!("  hellinger integral diverges"),
        }
        for row in &r.m3 {
            println!(
                "  m = {:>2}: D_m = {}",
                row.m,
                row.d_m.map_or("divergent".into(), |d| format!("{:.6}", d.value))
            );
        }
        println!(
            "  small-jump moment finite: nu {}, reference {}",
            r.m4.nu_finite, r.m4.dominating_finite
        );
    }
    Ok(())
}

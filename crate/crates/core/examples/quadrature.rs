//! Improper integrals with endpoint singularities, and divergence detection.

use jumpcount::numerics::{integrate, Hints, TailDecay};
use jumpcount::Interval;

type Case = (&'static str, Box<dyn Fn(f64) -> f64>, Interval, Hints);

fn main() {
    let cases: [Case; 4] = [
        (
            "y^-1/2 on ]0,1]",
            Box::new(|y: f64| y.powf(-0.5)),
            Interval::new(0.0, 1.0),
            Hints::singular_at_zero(TailDecay::Compact),
        ),
        (
            "e^-y² y^-2 on ]1,∞[",
            Box::new(|y: f64| (-y * y).exp() / (y * y)),
            Interval::new(1.0, f64::INFINITY),
            Hints::smooth().with_tail(TailDecay::Gaussian),
        ),
        (
            "y^-1.5 e^-y on ]0,∞[",
            Box::new(|y: f64| y.powf(-1.5) * (-y).exp()),
            Interval::new(0.0, f64::INFINITY),
            Hints::singular_at_zero(TailDecay::Exponential),
        ),
        (
            "1/y on ]1,∞[",
            Box::new(|y: f64| 1.0 / y),
            Interval::new(1.0, f64::INFINITY),
            Hints::smooth().with_tail(TailDecay::Polynomial),
        ),
    ];
    for (name, f, iv, hints) in cases {
        let r = integrate(f, iv, &hints, 1e-10);
        if r.diverged {
            println!("{name:<24} diverges");
        } else {
            println!("{name:<24} {:.15} (error {:.1e})", r.value, r.error_estimate);
        }
    }
}

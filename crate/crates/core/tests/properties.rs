use jumpcount::grid::{discretize, GridLayout};
use jumpcount::likelihood::{LogDensity, Numerator, RatioSplit};
use jumpcount::measures::{DominatingMeasure, MeasureSpec, Ratio};
use jumpcount::numerics::{integrate, Hints, QuantileTable, TailDecay, BOUND_TOL};
use jumpcount::simulate::{kernel_pi1, kernel_pi2, JumpPath};
use jumpcount::{Interval, Region};
use proptest::prelude::*;

fn example3() -> MeasureSpec {
    MeasureSpec::example3(0.5, 1.0, 2.0, 1.7, 1.2, 1.0, 2.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mass_is_additive(a in -5.0f64..5.0, w1 in 0.01f64..3.0, w2 in 0.01f64..3.0) {
        let spec = example3();
        let (b, c) = (a + w1, a + w1 + w2);
        prop_assume!(!(a < 0.0 && c >= 0.0));
        let whole = spec.interval_mass(Interval::new(a, c), BOUND_TOL).unwrap().value;
        let left = spec.interval_mass(Interval::new(a, b), BOUND_TOL).unwrap().value;
        let right = spec.interval_mass(Interval::new(b, c), BOUND_TOL).unwrap().value;
        prop_assert!((whole - left - right).abs() < 1e-8 * whole.max(1.0));
    }

    #[test]
    fn quadrature_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, s in 0.2f64..3.0) {
        let f = |y: f64| (-y * y / s).exp();
        let g = |y: f64| 1.0 / (1.0 + y * y);
        let hints = Hints::smooth().with_tail(TailDecay::Polynomial);
        let iv = Interval::real_line();
        let lhs = integrate(|y| alpha * f(y) + beta * g(y), iv, &hints, 1e-10).value;
        let rhs = alpha * integrate(f, iv, &hints, 1e-10).value + beta * integrate(g, iv, &hints, 1e-10).value;
        prop_assert!((lhs - rhs).abs() < 1e-8);
    }

    #[test]
    fn quantile_round_trip(u in 0.001f64..0.999) {
        let spec = example3();
        let region = Interval::new(0.5, f64::INFINITY);
        let table = QuantileTable::build(|y| spec.levy_density(y), region, &spec.dominating.hints(), 4096).unwrap();
        let q = table.quantile(u);
        let below = spec.interval_mass(Interval::new(0.5, q), 1e-12).unwrap().value;
        prop_assert!((below / table.mass - u).abs() < 1e-4, "u={} q={} cdf={}", u, q, below / table.mass);
    }

    #[test]
    fn bin_lookup_agrees_with_intervals(m in 1u32..40, y in -50.0f64..50.0) {
        let layout = GridLayout::new(m).unwrap();
        match layout.bin_index(y) {
            Some(i) => prop_assert!(layout.bins()[i].interval.contains(y)),
            None => prop_assert!(layout.identity_region().contains(y)),
        }
    }

    #[test]
    fn grid_points_close_their_bin(m in 1u32..40, n in -1600i64..1600) {
        let layout = GridLayout::new(m).unwrap();
        let y = n as f64 / m as f64;
        prop_assume!(n.abs() > 1);
        let i = layout.bin_index(y).unwrap();
        prop_assert_eq!(layout.bins()[i].interval.hi.min(y), y);
        prop_assert!(layout.bins()[i].interval.contains(y));
    }

    #[test]
    fn kernels_commute_with_shift(drift in -2.0f64..2.0, eta in -2.0f64..2.0) {
        let p = JumpPath::new(1.0, drift, vec![(0.25, 0.5), (0.75, -1.25)]).unwrap();
        let shifted = kernel_pi2(&p, eta);
        prop_assert_eq!(shifted.jumps(), p.jumps());
        prop_assert_eq!(kernel_pi1(&shifted), kernel_pi1(&p));
    }

    #[test]
    fn ratio_equals_exp_of_log_density_difference(
        sizes in proptest::collection::vec(0.26f64..6.0, 0..8),
        signs in proptest::collection::vec(any::<bool>(), 8),
        horizon in 0.1f64..3.0,
    ) {
        let spec = example3();
        let disc = discretize(&spec, 4, BOUND_TOL).unwrap();
        let region = Region::outside(0.25);
        let n = sizes.len();
        let jumps: Vec<(f64, f64)> = sizes
            .iter()
            .zip(&signs)
            .enumerate()
            .map(|(i, (&y, &s))| (horizon * (i + 1) as f64 / (n + 1) as f64, if s { y } else { -y }))
            .collect();
        let path = JumpPath::new(horizon, 0.0, jumps).unwrap();
        let split = RatioSplit::new(&spec, &disc, &region, BOUND_TOL).unwrap();
        let rep = split.report(&path).unwrap();
        let num = LogDensity::new(Numerator::Discretized(&disc), &spec.dominating, &region, BOUND_TOL).unwrap();
        let den = LogDensity::new(Numerator::Measure(&spec), &spec.dominating, &region, BOUND_TOL).unwrap();
        let expected = (num.eval(&path).unwrap() - den.eval(&path).unwrap()).exp();
        prop_assert!(rep.a_plus >= 0.0 && rep.a_minus <= 0.0);
        prop_assert!((rep.ratio / expected - 1.0).abs() < 1e-12);
    }
}

#[test]
fn discretization_preserves_bin_mass() {
    let spec = MeasureSpec::custom(
        DominatingMeasure::gaussian(1.5).unwrap(),
        Ratio::Sine {
            level: 1.0,
            amplitude: 0.5,
            frequency: 2.0,
            phase: 0.3,
        },
    )
    .unwrap();
    for m in [1, 3, 7] {
        let disc = discretize(&spec, m, BOUND_TOL).unwrap();
        for i in 0..disc.layout.len() {
            assert!((disc.discretized_mass(i) - disc.nu_mass[i].value).abs() < 1e-12);
        }
    }
}

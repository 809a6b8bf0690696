//! Simulates tempered stable jump paths away from the origin and bins them
//! into the count statistic.

use jumpcount::grid::GridLayout;
use jumpcount::measures::MeasureSpec;
use jumpcount::simulate::{extract_statistic, kernel_pi1, JumpSampler, RandomStream};
use jumpcount::Region;

fn main() -> jumpcount::Result<()> {
    let spec = MeasureSpec::example3(0.5, 1.0, 1.0, 2.0, 1.5, 1.0, 2.0)?;
    let m = 4;
    let region = Region::outside(1.0 / m as f64);
    let sampler = JumpSampler::with_default_resolution(&spec, &region)?;
    println!("jump intensity on {{|y| > 1/{m}}}: {:.6}", sampler.intensity());

    let layout = GridLayout::new(m)?;
    for i in 0..3 {
        let path = sampler.simulate_path(2.0, 0.1, RandomStream::new(7, i))?;
        println!(
            "\npath {i}: {} jumps, x_T = {:.4}",
            path.jumps().len(),
            path.value_at(path.horizon)
        );
        for (t, y) in path.jumps() {
            println!("  t = {t:.4}  Δx = {y:+.4}");
        }
        let pure = kernel_pi1(&path);
        println!("  without drift: x_T = {:.4}", pure.value_at(pure.horizon));
        let counts = extract_statistic(&path, &layout);
        for (bin, c) in layout.bins().iter().zip(&counts.counts).filter(|(_, c)| **c > 0) {
            println!("  {} : {c}", bin.tag);
        }
    }
    Ok(())
}

//! Prints the 2m² bins of the grid for a small m and looks up a few points.

use jumpcount::grid::GridLayout;

fn main() -> jumpcount::Result<()> {
    let layout = GridLayout::new(2)?;
    println!(
        "m = {}, {} bins, identity region {}",
        layout.m(),
        layout.len(),
        layout.identity_region()
    );
    for (i, bin) in layout.bins().iter().enumerate() {
        println!("{i:>2}  {:<10} {}", bin.tag.to_string(), bin.interval);
    }
    for y in [-3.0, -0.5, 0.2, 0.5, 0.75, 1.0, 2.0, 7.5] {
        match layout.bin_of(y) {
            Some(tag) => println!("{y:>5} -> {tag}"),
            None => println!("{y:>5} -> identity region"),
        }
    }
    Ok(())
}

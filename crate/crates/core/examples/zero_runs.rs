//! Circular zero runs and the objective vector of a favorability matrix.
//!
//! Run with `cargo run --example zero_runs`.

use psrsched::{max_circular_zero_run, objective_vector, FavorabilityMatrix};

fn main() -> psrsched::Result<()> {
    let row = [false, true, false, true, false, false];
    // the last two zeros wrap around to the first one
    println!("zero run of 010100: {}", max_circular_zero_run(&row)?);

    let f = FavorabilityMatrix::from_rows(&[vec![1, 0, 0, 1, 0, 0], vec![0, 1, 1, 0, 0, 0], vec![1, 1, 1, 1, 1, 1]])?;
    println!("{f}");
    println!("objective: {:?}", objective_vector(&f)?.values());

    let better = f.reordered(&[0, 1, 4, 3, 2, 5])?;
    println!("reordered:\n{better}");
    println!("objective: {:?}", objective_vector(&better)?.values());
    Ok(())
}

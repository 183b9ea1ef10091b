//! Brute force against greedy insertion on a random instance.
//!
//! Run with `cargo run --release --example solve_schedule -- [n] [m] [seed]`.

use psrsched::cli::random_nontrivial;
use psrsched::{brute_force_schedule, evaluate_gap, greedy_schedule, FavorabilityMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psrsched::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("numeric argument"));
    let n = args.next().unwrap_or(9) as usize;
    let m = args.next().unwrap_or(4) as usize;
    let seed = args.next().unwrap_or(7);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors = random_nontrivial(n, m, &mut rng)?;
    println!("{}", FavorabilityMatrix::new(vectors.clone())?);

    let brute = brute_force_schedule(&vectors)?;
    let greedy = greedy_schedule(&vectors)?;
    for sol in [&brute, &greedy] {
        println!(
            "{:>6}: order {:?}  objective {:?}  in {:?}",
            sol.solver.to_string(),
            sol.order,
            sol.objective.values(),
            sol.elapsed
        );
    }

    let gap = evaluate_gap(&vectors, 20, seed)?;
    println!(
        "greedy optimal: {}, on shuffled inputs {:.0}% of the time, worst leading gap {}",
        gap.objectives_equal,
        100.0 * gap.shuffled_equal_rate().unwrap_or(1.0),
        gap.max_shuffled_leading_gap().unwrap_or(0)
    );
    Ok(())
}

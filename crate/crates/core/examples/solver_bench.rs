//! Greedy runtime growth and optimality rate on random instances.
//!
//! Run with `cargo run --release --example solver_bench`.

use std::time::Instant;

use psrsched::cli::random_nontrivial;
use psrsched::{brute_force_schedule, greedy_schedule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psrsched::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    println!("   n  greedy us/instance");
    for n in [16, 32, 64, 128, 256] {
        let reps = 20;
        let instances = (0..reps)
            .map(|_| random_nontrivial(n, 8, &mut rng))
            .collect::<psrsched::Result<Vec<_>>>()?;
        let start = Instant::now();
        for v in &instances {
            greedy_schedule(v)?;
        }
        println!("{n:>4}  {:>10.1}", start.elapsed().as_secs_f64() * 1e6 / reps as f64);
    }

    println!("\n   n  m  greedy optimal");
    for m in [2, 4] {
        for n in 4..=9 {
            let trials = 200;
            let mut equal = 0;
            for _ in 0..trials {
                let v = random_nontrivial(n, m, &mut rng)?;
                equal += usize::from(greedy_schedule(&v)?.objective == brute_force_schedule(&v)?.objective);
            }
            println!("{n:>4} {m:>2}  {:>6.1}%", 100.0 * equal as f64 / trials as f64);
        }
    }
    Ok(())
}

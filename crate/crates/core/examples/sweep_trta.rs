//! Delay quantile and loss against the RTA packet period, averaged over
//! random placements.
//!
//! Run with `cargo run --release --example sweep_trta -- [placements] [seconds]`.

use psrsched::scenario::ScenarioFile;
use psrsched::sim::{run_policy, PolicyKind};
use rayon::prelude::*;

fn main() -> psrsched::Result<()> {
    let mut args = std::env::args().skip(1);
    let placements: u64 = args.next().map_or(10, |a| a.parse().expect("placement count"));
    let seconds: f64 = args.next().map_or(20.0, |a| a.parse().expect("duration in seconds"));

    let mut file = ScenarioFile::two_apartments(2)?;
    file.simulation.duration_s = seconds;

    println!("T_RTA  policy    q0.999 ms  loss");
    for trta in [10.0, 15.0, 20.0, 25.0, 30.0] {
        file.traffic.rta_period_ms = trta;
        for kind in PolicyKind::ALL {
            let runs = (0..placements)
                .into_par_iter()
                .map(|p| run_policy(&file.resolve(p)?, kind, file.run_seed(p, 0)))
                .collect::<psrsched::Result<Vec<_>>>()?;
            let k = runs.len() as f64;
            let q = runs.iter().filter_map(|r| r.metrics.delay_quantile_ms).sum::<f64>() / k;
            let loss = runs.iter().filter_map(|r| r.metrics.loss_ratio).sum::<f64>() / k;
            println!("{trta:>5}  {:<8}  {q:>9.2}  {loss:.2e}", kind.as_str());
        }
    }
    Ok(())
}

//! Baseline, brute-force and greedy schedules on one placement.
//!
//! Run with `cargo run --release --example simulate_policies -- [placement] [seconds]`.

use psrsched::scenario::ScenarioFile;
use psrsched::sim::{run_policy, PolicyKind};

fn main() -> psrsched::Result<()> {
    let mut args = std::env::args().skip(1);
    let placement: u64 = args.next().map_or(0, |a| a.parse().expect("placement index"));
    let seconds: f64 = args.next().map_or(30.0, |a| a.parse().expect("duration in seconds"));

    let mut file = ScenarioFile::two_apartments(2)?;
    file.simulation.duration_s = seconds;
    let cfg = file.resolve(placement)?;
    println!("favorability:\n{}", cfg.measurement_round()?);

    let seed = file.run_seed(placement, 0);
    println!("policy    q0.999 ms   loss      Mb/s/sta  jain    psr   gap");
    for kind in PolicyKind::ALL {
        let r = run_policy(&cfg, kind, seed)?;
        let m = &r.metrics;
        println!(
            "{:<8}  {:>9.2}  {:.2e}  {:>8.3}  {:.4}  {:>5} {:>5}",
            kind.as_str(),
            m.delay_quantile_ms.unwrap_or(f64::NAN),
            m.loss_ratio.unwrap_or(f64::NAN),
            m.mean_throughput_mbps,
            m.jain_index.unwrap_or(f64::NAN),
            r.counts.psr_transmissions,
            r.counts.gap_transmissions
        );
    }
    Ok(())
}

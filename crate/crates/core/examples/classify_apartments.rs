//! Expected PSR SINR for every station pair of the two-apartment layout.
//!
//! Run with `cargo run --example classify_apartments -- [placement]`.

use psrsched::link::WindowedClassifier;
use psrsched::scenario::ScenarioFile;
use psrsched::sim::Radio;

fn main() -> psrsched::Result<()> {
    let placement = std::env::args()
        .nth(1)
        .map_or(0, |a| a.parse().expect("placement index"));
    let file = ScenarioFile::two_apartments(2)?;
    let cfg = file.resolve(placement)?;
    let Radio::Geometry { topology, link } = &cfg.radio else {
        unreachable!("preset scenarios use geometry")
    };

    println!("sta   position        rta  tf_rssi  psr_dBm   signal  interf   sinr");
    for row in topology.sinr_table(link)? {
        for p in row {
            let pos = topology.nonrta_stas[p.nonrta].position;
            println!(
                "{:>3}  ({:5.2}, {:4.2})  {:>3}  {:7.1}  {:7.1}  {:7.1}  {:6.1}  {:5.1}",
                p.nonrta,
                pos.x,
                pos.y,
                p.rta,
                p.tf_rssi_dbm,
                p.psr_tx_power_dbm,
                p.signal_dbm,
                p.interference_dbm,
                p.sinr_db
            );
        }
    }

    let f = WindowedClassifier::settled(&cfg.measurement_round()?, cfg.run.window_depth)?;
    println!("\nfavorability (threshold {} dB):\n{f}", link.sinr_threshold_db);
    Ok(())
}

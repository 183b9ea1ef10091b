use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::budget::{
    accept_interference_dbm, noise_floor_dbm, pathloss_db, power_sum_dbm, psr_max_tx_power, LinkBudgetConfig,
};
use super::geometry::{FloorPlan, NodePosition};
use crate::error::{Error, Result};
use crate::favorability::{FavorabilityMatrix, FavorabilityVector};

/// Measurement rounds kept per pair by default.
pub const DEFAULT_WINDOW_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonRtaStation {
    pub position: NodePosition,
    /// MCS of the station's trigger-based uplink.
    pub mcs: u8,
    /// Whether the station's uplinks offer PSR at all.
    pub allows_psr: bool,
}

/// Placement of both BSSs on one floor.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    pub plan: FloorPlan,
    pub nonrta_ap: NodePosition,
    pub rta_ap: NodePosition,
    pub nonrta_stas: Vec<NonRtaStation>,
    pub rta_stas: Vec<NodePosition>,
}

/// Every intermediate quantity of one expected-SINR evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsrLinkBudget {
    pub nonrta: usize,
    pub rta: usize,
    /// Trigger frame power measured by the RTA station.
    pub tf_rssi_dbm: f64,
    pub accept_interference_dbm: f64,
    pub psr_tx_power_dbm: f64,
    /// PSR signal at the RTA AP.
    pub signal_dbm: f64,
    /// Non-RTA uplink at the RTA AP.
    pub interference_dbm: f64,
    pub noise_dbm: f64,
    pub sinr_db: f64,
}

impl Topology {
    pub fn validate(&self) -> Result<()> {
        let all = [self.nonrta_ap, self.rta_ap]
            .into_iter()
            .chain(self.nonrta_stas.iter().map(|s| s.position))
            .chain(self.rta_stas.iter().copied());
        for p in all {
            if !p.is_finite() {
                return Err(Error::config(format!("node position {p:?} is not finite")));
            }
        }
        Ok(())
    }

    pub fn pathloss(&self, a: &NodePosition, b: &NodePosition, cfg: &LinkBudgetConfig) -> Result<f64> {
        pathloss_db(a, b, self.plan.walls_between(a, b), cfg)
    }

    /// Uplink power of a non-RTA station received at its own AP.
    pub fn uplink_rx_dbm(&self, nonrta: usize, cfg: &LinkBudgetConfig) -> Result<f64> {
        let sta = &self.nonrta_stas[nonrta];
        Ok(cfg.sta_tx_power_dbm - self.pathloss(&sta.position, &self.nonrta_ap, cfg)?)
    }

    pub fn accept_interference_dbm(&self, nonrta: usize, cfg: &LinkBudgetConfig) -> Result<f64> {
        let rx = self.uplink_rx_dbm(nonrta, cfg)?;
        accept_interference_dbm(rx, self.nonrta_stas[nonrta].mcs, cfg)
    }

    /// SINR at the RTA AP of a PSR transmission by RTA station `rta` during
    /// the trigger-based uplink of non-RTA station `nonrta`.
    pub fn expected_psr_sinr(&self, rta: usize, nonrta: usize, cfg: &LinkBudgetConfig) -> Result<PsrLinkBudget> {
        let rta_pos = self.rta_stas[rta];
        let sta_pos = self.nonrta_stas[nonrta].position;

        let tf_rssi = cfg.ap_tx_power_dbm - self.pathloss(&self.nonrta_ap, &rta_pos, cfg)?;
        let accept = self.accept_interference_dbm(nonrta, cfg)?;
        let psr_power = psr_max_tx_power(tf_rssi, cfg.ap_tx_power_dbm, accept, cfg);
        let signal = psr_power - self.pathloss(&rta_pos, &self.rta_ap, cfg)?;
        let interference = cfg.sta_tx_power_dbm - self.pathloss(&sta_pos, &self.rta_ap, cfg)?;
        let noise = noise_floor_dbm(cfg);

        Ok(PsrLinkBudget {
            nonrta,
            rta,
            tf_rssi_dbm: tf_rssi,
            accept_interference_dbm: accept,
            psr_tx_power_dbm: psr_power,
            signal_dbm: signal,
            interference_dbm: interference,
            noise_dbm: noise,
            sinr_db: signal - power_sum_dbm(interference, noise),
        })
    }

    /// Expected SINR of every pair, indexed `[nonrta][rta]`.
    pub fn sinr_table(&self, cfg: &LinkBudgetConfig) -> Result<Vec<Vec<PsrLinkBudget>>> {
        (0..self.nonrta_stas.len())
            .map(|i| {
                (0..self.rta_stas.len())
                    .map(|j| self.expected_psr_sinr(j, i, cfg))
                    .collect()
            })
            .collect()
    }
}

/// One measurement round: entry `(j, i)` is set iff station `i` allows PSR and
/// the expected SINR for RTA station `j` is strictly above the threshold.
pub fn classify_favorability(topo: &Topology, cfg: &LinkBudgetConfig) -> Result<FavorabilityMatrix> {
    let columns = topo
        .nonrta_stas
        .iter()
        .enumerate()
        .map(|(i, sta)| {
            let entries = (0..topo.rta_stas.len())
                .map(|j| {
                    let sinr = topo.expected_psr_sinr(j, i, cfg)?.sinr_db;
                    Ok(sta.allows_psr && sinr > cfg.sinr_threshold_db)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FavorabilityVector::new(i, entries))
        })
        .collect::<Result<Vec<_>>>()?;
    if topo.rta_stas.is_empty() {
        return Ok(FavorabilityMatrix::without_rows(topo.nonrta_stas.len()));
    }
    FavorabilityMatrix::new(columns)
}

/// The most recent classification outcomes of one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementWindow {
    capacity: usize,
    outcomes: VecDeque<bool>,
}

impl MeasurementWindow {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::config("measurement window depth must be at least 1"));
        }
        Ok(Self {
            capacity,
            outcomes: VecDeque::with_capacity(capacity),
        })
    }

    pub fn push(&mut self, passed: bool) {
        if self.outcomes.len() == self.capacity {
            self.outcomes.pop_front();
        }
        self.outcomes.push_back(passed);
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}

/// Favorable only if every kept measurement passed.
pub fn windowed_favorable(window: &MeasurementWindow) -> Result<bool> {
    if window.is_empty() {
        return Err(Error::InvalidState("measurement window holds no outcomes".into()));
    }
    Ok(window.outcomes.iter().all(|&o| o))
}

/// Measurement windows for every (non-RTA, RTA) pair.
#[derive(Clone, Debug)]
pub struct WindowedClassifier {
    n: usize,
    m: usize,
    windows: Vec<MeasurementWindow>,
}

impl WindowedClassifier {
    pub fn new(n: usize, m: usize, depth: usize) -> Result<Self> {
        let window = MeasurementWindow::new(depth)?;
        Ok(Self {
            n,
            m,
            windows: vec![window; n * m],
        })
    }

    /// Classification after `depth` identical rounds, as for a static
    /// topology.
    pub fn settled(round: &FavorabilityMatrix, depth: usize) -> Result<FavorabilityMatrix> {
        let mut c = Self::new(round.n_cols(), round.n_rows(), depth)?;
        for _ in 0..depth {
            c.record(round)?;
        }
        c.current()
    }

    pub fn record(&mut self, round: &FavorabilityMatrix) -> Result<()> {
        if round.n_cols() != self.n || round.n_rows() != self.m {
            return Err(Error::invalid(format!(
                "measurement round is {}x{}, expected {}x{}",
                round.n_rows(),
                round.n_cols(),
                self.m,
                self.n
            )));
        }
        for i in 0..self.n {
            for j in 0..self.m {
                self.windows[i * self.m + j].push(round.entry(j, i));
            }
        }
        Ok(())
    }

    pub fn is_favorable(&self, nonrta: usize, rta: usize) -> Result<bool> {
        windowed_favorable(&self.windows[nonrta * self.m + rta])
    }

    pub fn current(&self) -> Result<FavorabilityMatrix> {
        if self.m == 0 {
            return Ok(FavorabilityMatrix::without_rows(self.n));
        }
        let columns = (0..self.n)
            .map(|i| {
                let entries = (0..self.m)
                    .map(|j| self.is_favorable(i, j))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FavorabilityVector::new(i, entries))
            })
            .collect::<Result<Vec<_>>>()?;
        FavorabilityMatrix::new(columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::geometry::Rect;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn two_apartments() -> FloorPlan {
        FloorPlan::from_apartments(&[Rect::new(0.0, 0.0, 10.0, 7.0), Rect::new(17.0, 0.0, 27.0, 7.0)]).unwrap()
    }

    fn topo(rta: Vec<NodePosition>, stas: Vec<(f64, f64)>) -> Topology {
        Topology {
            plan: two_apartments(),
            nonrta_ap: NodePosition::new(9.5, 3.5),
            rta_ap: NodePosition::new(17.5, 3.5),
            nonrta_stas: stas
                .into_iter()
                .map(|(x, y)| NonRtaStation {
                    position: NodePosition::new(x, y),
                    mcs: 8,
                    allows_psr: true,
                })
                .collect(),
            rta_stas: rta,
        }
    }

    /// Same chain in milliwatts.
    fn linear_sinr(t: &Topology, rta: usize, nonrta: usize, cfg: &LinkBudgetConfig) -> f64 {
        let mw = |dbm: f64| 10f64.powf(dbm / 10.0);
        let pl = |a: &NodePosition, b: &NodePosition| t.pathloss(a, b, cfg).unwrap();
        let sta = t.nonrta_stas[nonrta].position;
        let uplink_rx = mw(cfg.sta_tx_power_dbm) / mw(pl(&sta, &t.nonrta_ap));
        let accept = uplink_rx / mw(cfg.required_sinr(8).unwrap()) / mw(cfg.psr_safety_margin_db);
        let tf_rssi = mw(cfg.ap_tx_power_dbm) / mw(pl(&t.nonrta_ap, &t.rta_stas[rta]));
        let power =
            (mw(cfg.ap_tx_power_dbm) * accept / tf_rssi / mw(cfg.psr_safety_margin_db)).min(mw(cfg.sta_tx_power_dbm));
        let signal = power / mw(pl(&t.rta_stas[rta], &t.rta_ap));
        let interference = mw(cfg.sta_tx_power_dbm) / mw(pl(&sta, &t.rta_ap));
        let noise = mw(-174.0) * cfg.channel_width_mhz * 1e6 * mw(cfg.noise_figure_db);
        10.0 * (signal / (interference + noise)).log10()
    }

    #[test]
    fn equal_interference_and_noise_costs_three_db() {
        let cfg = LinkBudgetConfig::default();
        let noise = noise_floor_dbm(&cfg);
        assert_abs_diff_eq!(
            -60.0 - power_sum_dbm(noise, noise),
            -60.0 - noise - 3.0103,
            epsilon = 1e-3
        );
    }

    #[test]
    fn noise_limited_interferer() {
        let cfg = LinkBudgetConfig::default();
        let noise = noise_floor_dbm(&cfg);
        let signal = -70.0;
        let sinr = signal - power_sum_dbm(noise - 30.0, noise);
        assert_abs_diff_eq!(sinr, signal - noise, epsilon = 0.01);
    }

    #[test]
    fn near_ap_rta_station_is_favorable() {
        let cfg = LinkBudgetConfig::default();
        let t = topo(vec![NodePosition::new(17.7, 3.5)], vec![(1.0, 1.0), (2.0, 6.0)]);
        let f = classify_favorability(&t, &cfg).unwrap();
        assert_eq!(f.row(0), vec![true, true]);
    }

    #[test]
    fn threshold_is_strict_and_psr_flag_respected() {
        let t = topo(vec![NodePosition::new(20.0, 2.0)], vec![(3.0, 3.0)]);
        let cfg = LinkBudgetConfig::default();
        let sinr = t.expected_psr_sinr(0, 0, &cfg).unwrap().sinr_db;
        let at = LinkBudgetConfig {
            sinr_threshold_db: sinr,
            ..cfg.clone()
        };
        assert!(!classify_favorability(&t, &at).unwrap().entry(0, 0));
        let below = LinkBudgetConfig {
            sinr_threshold_db: sinr - 1e-9,
            ..cfg.clone()
        };
        assert!(classify_favorability(&t, &below).unwrap().entry(0, 0));

        let mut closed = t.clone();
        closed.nonrta_stas[0].allows_psr = false;
        assert!(!classify_favorability(&closed, &below).unwrap().entry(0, 0));
    }

    #[test]
    fn unknown_mcs_is_config_error() {
        let mut t = topo(vec![NodePosition::new(20.0, 2.0)], vec![(3.0, 3.0)]);
        t.nonrta_stas[0].mcs = 4;
        assert!(matches!(
            classify_favorability(&t, &LinkBudgetConfig::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn window_examples() {
        let mut w = MeasurementWindow::new(3).unwrap();
        assert!(matches!(windowed_favorable(&w), Err(Error::InvalidState(_))));
        for o in [true, true, true] {
            w.push(o);
        }
        assert!(windowed_favorable(&w).unwrap());
        let mut w = MeasurementWindow::new(3).unwrap();
        for o in [true, false, true] {
            w.push(o);
        }
        assert!(!windowed_favorable(&w).unwrap());
        // the failure ages out after three more passes
        for _ in 0..3 {
            w.push(true);
        }
        assert!(windowed_favorable(&w).unwrap());
        assert_eq!(w.len(), 3);

        let mut w = MeasurementWindow::new(1).unwrap();
        w.push(true);
        assert!(windowed_favorable(&w).unwrap());
        assert!(MeasurementWindow::new(0).is_err());
    }

    #[test]
    fn windowed_classifier_ands_rounds() {
        let a = FavorabilityMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let b = FavorabilityMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let mut c = WindowedClassifier::new(2, 2, 2).unwrap();
        assert!(c.current().is_err());
        c.record(&a).unwrap();
        assert_eq!(c.current().unwrap(), a);
        c.record(&b).unwrap();
        assert_eq!(c.current().unwrap(), b);
        c.record(&a).unwrap();
        assert_eq!(c.current().unwrap(), b);
        assert!(c.record(&FavorabilityMatrix::from_rows(&[vec![1]]).unwrap()).is_err());
    }

    fn coord(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
        lo..hi
    }

    proptest! {
        #[test]
        fn db_chain_matches_milliwatts(
            rx in coord(17.5, 26.5), ry in coord(0.5, 6.5),
            sx in coord(0.5, 9.0), sy in coord(0.5, 6.5),
        ) {
            let cfg = LinkBudgetConfig::default();
            let t = topo(vec![NodePosition::new(rx, ry)], vec![(sx, sy)]);
            prop_assume!(t.rta_stas[0].distance_to(&t.rta_ap) > 0.05);
            let db = t.expected_psr_sinr(0, 0, &cfg).unwrap().sinr_db;
            prop_assert!((db - linear_sinr(&t, 0, 0, &cfg)).abs() < 1e-9);
        }

        /// RTA station moved along a circle around the non-RTA AP, so only its
        /// distance to its own AP changes.
        #[test]
        fn sinr_monotone_in_rta_distance_fixed_tf(r in 8.6f64..9.4, t1 in 0.0f64..0.38, dt in 0.0f64..0.38) {
            let cfg = LinkBudgetConfig::default();
            let t2 = (t1 + dt).min(0.38);
            let at = |th: f64| NodePosition::new(9.5 + r * th.cos(), 3.5 + r * th.sin());
            let t = topo(vec![at(t1), at(t2)], vec![(3.0, 5.0)]);
            prop_assert!(t.rta_stas[1].distance_to(&t.rta_ap) >= t.rta_stas[0].distance_to(&t.rta_ap));
            let a = t.expected_psr_sinr(0, 0, &cfg).unwrap().sinr_db;
            let b = t.expected_psr_sinr(1, 0, &cfg).unwrap().sinr_db;
            prop_assert!(b <= a + 1e-9);
        }

        #[test]
        fn sinr_monotone_in_rta_distance(d1 in 0.3f64..9.0, extra in 0.0f64..8.0, sx in 0.5f64..9.0) {
            let cfg = LinkBudgetConfig::default();
            let near = topo(vec![NodePosition::new(17.5 + d1.min(9.0), 3.5)], vec![(sx, 2.0)]);
            let far = topo(vec![NodePosition::new(17.5 + (d1 + extra).min(9.0), 3.5)], vec![(sx, 2.0)]);
            let a = near.expected_psr_sinr(0, 0, &cfg).unwrap().sinr_db;
            let b = far.expected_psr_sinr(0, 0, &cfg).unwrap().sinr_db;
            prop_assert!(b <= a + 1e-9);
        }

        #[test]
        fn sinr_monotone_in_accepted_interference(rx in 17.6f64..26.0, ry in 0.5f64..6.5, delta in 0.0f64..20.0) {
            let base = LinkBudgetConfig::default();
            let mut looser = base.clone();
            *looser.required_sinr_db.get_mut(&8).unwrap() -= delta;
            let t = topo(vec![NodePosition::new(rx, ry)], vec![(4.0, 4.0)]);
            let a = t.expected_psr_sinr(0, 0, &base).unwrap();
            let b = t.expected_psr_sinr(0, 0, &looser).unwrap();
            prop_assert!(b.accept_interference_dbm >= a.accept_interference_dbm);
            prop_assert!(b.sinr_db >= a.sinr_db - 1e-9);
            prop_assert!(b.psr_tx_power_dbm <= base.sta_tx_power_dbm);
        }

        #[test]
        fn raising_threshold_only_clears_entries(th in -10.0f64..30.0, up in 0.0f64..20.0, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let stas = (0..6).map(|_| (rng.gen_range(0.5..9.5), rng.gen_range(0.5..6.5))).collect();
            let rtas = (0..3).map(|_| NodePosition::new(rng.gen_range(18.0..26.0), rng.gen_range(0.5..6.5))).collect();
            let t = topo(rtas, stas);
            let lo = LinkBudgetConfig { sinr_threshold_db: th, ..LinkBudgetConfig::default() };
            let hi = LinkBudgetConfig { sinr_threshold_db: th + up, ..LinkBudgetConfig::default() };
            let a = classify_favorability(&t, &lo).unwrap();
            let b = classify_favorability(&t, &hi).unwrap();
            for i in 0..6 { for j in 0..3 { prop_assert!(!b.entry(j, i) || a.entry(j, i)); } }
        }

        #[test]
        fn pathloss_symmetric(ax in 0.0f64..27.0, ay in 0.0f64..7.0, bx in 0.0f64..27.0, by in 0.0f64..7.0) {
            let t = topo(vec![], vec![]);
            let (a, b) = (NodePosition::new(ax, ay), NodePosition::new(bx, by));
            prop_assume!(a.distance_to(&b) > 1e-6);
            let cfg = LinkBudgetConfig::default();
            prop_assert_eq!(t.pathloss(&a, &b, &cfg).unwrap(), t.pathloss(&b, &a, &cfg).unwrap());
        }
    }
}

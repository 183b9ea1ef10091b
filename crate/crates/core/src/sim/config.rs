use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::favorability::FavorabilityMatrix;
use crate::link::{classify_favorability, LinkBudgetConfig, Topology, DEFAULT_WINDOW_DEPTH};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrafficConfig {
    /// Period of each RTA station's uplink packets.
    pub rta_period_ms: f64,
    pub rta_packet_bytes: u32,
    pub nonrta_packet_bytes: u32,
    pub rta_mcs: u8,
    pub nonrta_mcs: u8,
    /// PHY rate per MCS for one spatial stream at the configured width.
    pub data_rate_mbps: BTreeMap<u8, f64>,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        Self {
            rta_period_ms: 20.0,
            rta_packet_bytes: 256,
            nonrta_packet_bytes: 1000,
            rta_mcs: 0,
            nonrta_mcs: 8,
            data_rate_mbps: BTreeMap::from([(0, 8.6), (8, 103.2)]),
        }
    }
}

impl TrafficConfig {
    pub fn rate_mbps(&self, mcs: u8) -> Result<f64> {
        self.data_rate_mbps
            .get(&mcs)
            .copied()
            .ok_or_else(|| Error::config(format!("no data rate configured for MCS {mcs}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MacConfig {
    /// Non-RTA TXOP, split evenly between downlink and trigger-based uplink.
    pub txop_duration_ms: f64,
    /// Preamble, trigger frame and acknowledgement cost per PPDU.
    pub ppdu_overhead_us: f64,
    /// Idle time between TXOPs in which RTA stations contend.
    pub inter_txop_gap_us: f64,
    /// Chance that an RTA station with a queued packet seizes a gap.
    pub edca_win_probability: f64,
}

impl Default for MacConfig {
    fn default() -> Self {
        Self {
            txop_duration_ms: 5.0,
            ppdu_overhead_us: 100.0,
            inter_txop_gap_us: 100.0,
            edca_win_probability: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Traffic generation horizon.
    pub duration_s: f64,
    /// Leading share of the horizon excluded from all metrics.
    pub warmup_fraction: f64,
    /// After the horizon the channel keeps running until queues drain or
    /// this much time passes; what is left counts as lost.
    pub drain_limit_s: f64,
    pub delay_bound_ms: f64,
    pub quantile: f64,
    /// Measurement rounds kept per (non-RTA, RTA) pair.
    pub window_depth: usize,
    /// Keep the sequence of uplink stations in the report.
    pub record_schedule: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            duration_s: 100.0,
            warmup_fraction: 0.1,
            drain_limit_s: 1.0,
            delay_bound_ms: 20.0,
            quantile: 0.999,
            window_depth: DEFAULT_WINDOW_DEPTH,
            record_schedule: false,
        }
    }
}

/// Where per-pair favorability comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Radio {
    Geometry {
        topology: Topology,
        link: LinkBudgetConfig,
    },
    /// Fixed matrix, bypassing the link budget.
    Explicit(FavorabilityMatrix),
}

/// Fully resolved simulation input.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub radio: Radio,
    pub traffic: TrafficConfig,
    pub mac: MacConfig,
    pub run: RunConfig,
}

impl ScenarioConfig {
    /// Number of non-RTA stations.
    pub fn n(&self) -> usize {
        match &self.radio {
            Radio::Geometry { topology, .. } => topology.nonrta_stas.len(),
            Radio::Explicit(f) => f.n_cols(),
        }
    }

    /// Number of RTA stations.
    pub fn m(&self) -> usize {
        match &self.radio {
            Radio::Geometry { topology, .. } => topology.rta_stas.len(),
            Radio::Explicit(f) => f.n_rows(),
        }
    }

    /// One classification round.
    pub fn measurement_round(&self) -> Result<FavorabilityMatrix> {
        match &self.radio {
            Radio::Geometry { topology, link } => classify_favorability(topology, link),
            Radio::Explicit(f) => Ok(f.clone()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.traffic;
        let mac = &self.mac;
        let run = &self.run;
        if !(t.rta_period_ms > 0.0 && t.rta_period_ms.is_finite()) {
            return Err(Error::config("rta_period_ms must be positive"));
        }
        if t.rta_packet_bytes == 0 || t.nonrta_packet_bytes == 0 {
            return Err(Error::config("packet sizes must be positive"));
        }
        for (mcs, rate) in &t.data_rate_mbps {
            if !(*rate > 0.0 && rate.is_finite()) {
                return Err(Error::config(format!("data rate of MCS {mcs} must be positive")));
            }
        }
        t.rate_mbps(t.rta_mcs)?;
        t.rate_mbps(t.nonrta_mcs)?;
        if !(mac.txop_duration_ms > 0.0 && mac.txop_duration_ms.is_finite()) {
            return Err(Error::config("txop_duration_ms must be positive"));
        }
        if !(mac.ppdu_overhead_us >= 0.0 && mac.inter_txop_gap_us >= 0.0) {
            return Err(Error::config("overheads and gaps must not be negative"));
        }
        if mac.ppdu_overhead_us * 1e-3 >= mac.txop_duration_ms / 2.0 {
            return Err(Error::config("ppdu_overhead_us leaves no room for data in half a TXOP"));
        }
        if !(0.0..=1.0).contains(&mac.edca_win_probability) {
            return Err(Error::config("edca_win_probability must lie in [0, 1]"));
        }
        if !(run.duration_s > 0.0 && run.duration_s.is_finite()) {
            return Err(Error::config("duration_s must be positive"));
        }
        if !(0.0..1.0).contains(&run.warmup_fraction) {
            return Err(Error::config("warmup_fraction must lie in [0, 1)"));
        }
        if !(run.drain_limit_s >= 0.0 && run.drain_limit_s.is_finite()) {
            return Err(Error::config("drain_limit_s must not be negative"));
        }
        if !(run.quantile > 0.0 && run.quantile < 1.0) {
            return Err(Error::config("quantile must lie in (0, 1)"));
        }
        if run.delay_bound_ms.is_nan() || run.delay_bound_ms < 0.0 {
            return Err(Error::config("delay_bound_ms must not be negative"));
        }
        if run.window_depth == 0 {
            return Err(Error::config("window_depth must be at least 1"));
        }
        if self.n() == 0 {
            return Err(Error::config("scenario has no non-RTA stations"));
        }
        if let Radio::Geometry { topology, link } = &self.radio {
            link.validate()?;
            topology.validate()?;
            for sta in &topology.nonrta_stas {
                link.required_sinr(sta.mcs)?;
            }
        }
        Ok(())
    }

    /// Short hash identifying this configuration in reports.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{self:?}").as_bytes());
        hex::encode(&h.finalize()[..8])
    }
}

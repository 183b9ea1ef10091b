use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::metrics::{delay_quantile, jain_index, loss_ratio};
use crate::error::Result;

/// One RTA packet generated after warmup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelaySample {
    pub sta: usize,
    pub enqueue_ns: u64,
    /// `None` when the packet was never delivered.
    pub delay_ns: Option<u64>,
}

impl DelaySample {
    pub fn delay_ms(&self) -> f64 {
        self.delay_ns.map_or(f64::INFINITY, |d| d as f64 * 1e-6)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCounts {
    pub txops: u64,
    pub cycles: u64,
    /// RTA packets generated over the whole run, warmup included.
    pub generated: u64,
    pub delivered: u64,
    pub undelivered: u64,
    pub psr_transmissions: u64,
    pub gap_transmissions: u64,
    /// Uplink phases in which an RTA station had a packet queued but the
    /// scheduled non-RTA station was unfavorable for it.
    pub denied_opportunities: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QosMetrics {
    pub rta_packets: usize,
    /// Empty when there is no RTA traffic; may be infinite.
    #[serde(with = "maybe_infinite")]
    pub delay_quantile_ms: Option<f64>,
    pub loss_ratio: Option<f64>,
    pub mean_throughput_mbps: f64,
    /// Empty when no non-RTA station delivered anything.
    pub jain_index: Option<f64>,
}

impl QosMetrics {
    pub fn compute(delays_ms: &[f64], throughputs_mbps: &[f64], quantile: f64, delay_bound_ms: f64) -> Result<Self> {
        let (delay_quantile_ms, loss) = if delays_ms.is_empty() {
            (None, None)
        } else {
            (
                Some(delay_quantile(delays_ms, quantile)?),
                Some(loss_ratio(delays_ms, delay_bound_ms)?),
            )
        };
        let mean = if throughputs_mbps.is_empty() {
            0.0
        } else {
            throughputs_mbps.iter().sum::<f64>() / throughputs_mbps.len() as f64
        };
        let jain = if throughputs_mbps.iter().any(|&x| x > 0.0) {
            Some(jain_index(throughputs_mbps)?)
        } else {
            None
        };
        Ok(Self {
            rta_packets: delays_ms.len(),
            delay_quantile_ms,
            loss_ratio: loss,
            mean_throughput_mbps: mean,
            jain_index: jain,
        })
    }
}

/// Result of one simulation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub seed: u64,
    pub config_digest: String,
    pub policy: String,
    pub n: usize,
    pub m: usize,
    /// Span over which throughput is measured.
    pub measured_s: f64,
    pub quantile: f64,
    pub delay_bound_ms: f64,
    pub delays: Vec<DelaySample>,
    pub nonrta_bytes: Vec<u64>,
    pub nonrta_throughput_mbps: Vec<f64>,
    pub metrics: QosMetrics,
    pub counts: EventCounts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
}

impl SimReport {
    pub fn delays_ms(&self) -> Vec<f64> {
        self.delays.iter().map(DelaySample::delay_ms).collect()
    }

    /// Metrics rebuilt from the raw samples.
    pub fn recompute_metrics(&self) -> Result<QosMetrics> {
        QosMetrics::compute(
            &self.delays_ms(),
            &self.nonrta_throughput_mbps,
            self.quantile,
            self.delay_bound_ms,
        )
    }
}

/// `Option<f64>` that keeps infinities through JSON as the string `"inf"`.
pub(crate) mod maybe_infinite {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(x) if x.is_infinite() && *x > 0.0 => s.serialize_some("inf"),
            Some(x) => s.serialize_some(x),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Num(x)) => Ok(Some(x)),
            Some(Repr::Text(t)) if t == "inf" => Ok(Some(f64::INFINITY)),
            Some(Repr::Text(t)) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {t:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_quantile_round_trips() {
        let m = QosMetrics {
            rta_packets: 3,
            delay_quantile_ms: Some(f64::INFINITY),
            loss_ratio: Some(1.0 / 3.0),
            mean_throughput_mbps: 90.5,
            jain_index: Some(1.0),
        };
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"inf\""));
        assert_eq!(serde_json::from_str::<QosMetrics>(&text).unwrap(), m);

        let empty = QosMetrics {
            delay_quantile_ms: None,
            loss_ratio: None,
            ..m
        };
        let text = serde_json::to_string(&empty).unwrap();
        assert_eq!(serde_json::from_str::<QosMetrics>(&text).unwrap(), empty);
    }

    #[test]
    fn metrics_without_rta_traffic() {
        let m = QosMetrics::compute(&[], &[10.0, 10.0], 0.999, 20.0).unwrap();
        assert_eq!(m.delay_quantile_ms, None);
        assert_eq!(m.loss_ratio, None);
        assert_eq!(m.jain_index, Some(1.0));
    }
}

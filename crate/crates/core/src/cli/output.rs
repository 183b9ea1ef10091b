use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{EventCounts, QosMetrics, SimReport};

/// Columns of the long-format simulation CSV.
pub(crate) const LONG_HEADER: [&str; 8] = [
    "root_seed",
    "scope",
    "policy",
    "trta_ms",
    "placement",
    "seed",
    "metric",
    "value",
];

pub(crate) fn fmt_value(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) if x == f64::INFINITY => "inf".into(),
        Some(x) => x.to_string(),
    }
}

pub(crate) fn csv_writer(w: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().from_writer(w)
}

pub(crate) fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|source| Error::Json {
        context: "writing output".into(),
        source,
    })?;
    writeln!(w).map_err(|source| Error::Io {
        path: "<output>".into(),
        source,
    })
}

/// Per-run metrics in output order.
pub(crate) fn run_metrics(m: &QosMetrics, c: &EventCounts, throughput_mbps: &[f64]) -> Vec<(String, Option<f64>)> {
    let mut out = vec![
        ("rta_packets".to_string(), Some(m.rta_packets as f64)),
        ("delay_quantile_ms".to_string(), m.delay_quantile_ms),
        ("loss_ratio".to_string(), m.loss_ratio),
        ("mean_throughput_mbps".to_string(), Some(m.mean_throughput_mbps)),
        ("jain_index".to_string(), m.jain_index),
        ("psr_transmissions".to_string(), Some(c.psr_transmissions as f64)),
        ("gap_transmissions".to_string(), Some(c.gap_transmissions as f64)),
        ("denied_opportunities".to_string(), Some(c.denied_opportunities as f64)),
    ];
    for (i, t) in throughput_mbps.iter().enumerate() {
        out.push((format!("throughput_mbps_sta{i}"), Some(*t)));
    }
    out
}

/// Mean and extremes of one metric over several runs; empty when no run
/// defines it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    #[serde(with = "crate::sim::report::maybe_infinite")]
    pub mean: Option<f64>,
    #[serde(with = "crate::sim::report::maybe_infinite")]
    pub min: Option<f64>,
    #[serde(with = "crate::sim::report::maybe_infinite")]
    pub max: Option<f64>,
}

impl Stats {
    pub fn of(values: impl IntoIterator<Item = Option<f64>>) -> Self {
        let v: Vec<f64> = values.into_iter().flatten().collect();
        if v.is_empty() {
            return Self {
                mean: None,
                min: None,
                max: None,
            };
        }
        Self {
            mean: Some(v.iter().sum::<f64>() / v.len() as f64),
            min: v.iter().copied().reduce(f64::min),
            max: v.iter().copied().reduce(f64::max),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub runs: usize,
    pub delay_quantile_ms: Stats,
    pub loss_ratio: Stats,
    pub mean_throughput_mbps: Stats,
    pub jain_index: Stats,
    pub sta_throughput_mbps: Vec<Stats>,
}

impl Aggregate {
    pub fn from_reports(reports: &[SimReport]) -> Self {
        let n = reports.first().map_or(0, |r| r.nonrta_throughput_mbps.len());
        Self {
            runs: reports.len(),
            delay_quantile_ms: Stats::of(reports.iter().map(|r| r.metrics.delay_quantile_ms)),
            loss_ratio: Stats::of(reports.iter().map(|r| r.metrics.loss_ratio)),
            mean_throughput_mbps: Stats::of(reports.iter().map(|r| Some(r.metrics.mean_throughput_mbps))),
            jain_index: Stats::of(reports.iter().map(|r| r.metrics.jain_index)),
            sta_throughput_mbps: (0..n)
                .map(|i| Stats::of(reports.iter().map(|r| Some(r.nonrta_throughput_mbps[i]))))
                .collect(),
        }
    }

    pub(crate) fn named(&self) -> Vec<(String, &Stats)> {
        let mut out = vec![
            ("delay_quantile_ms".to_string(), &self.delay_quantile_ms),
            ("loss_ratio".to_string(), &self.loss_ratio),
            ("mean_throughput_mbps".to_string(), &self.mean_throughput_mbps),
            ("jain_index".to_string(), &self.jain_index),
        ];
        for (i, s) in self.sta_throughput_mbps.iter().enumerate() {
            out.push((format!("throughput_mbps_sta{i}"), s));
        }
        out
    }
}

/// JSON document written by `simulate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub root_seed: u64,
    pub policy: String,
    pub placement: u64,
    pub trta_ms: f64,
    pub reports: Vec<SimReport>,
    pub aggregate: Aggregate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub trta_ms: f64,
    pub placement: u64,
    pub policy: String,
    pub seed: u64,
    pub metrics: QosMetrics,
    pub counts: EventCounts,
    pub nonrta_throughput_mbps: Vec<f64>,
}

/// JSON document written by `sweep`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub root_seed: u64,
    pub cells: Vec<SweepCell>,
}

/// Parses `1,3,5`, ranges `4-8` (inclusive) or a mix of both.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::invalid(format!("cannot parse integer list {text:?}"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// Parses `5,10,20` or `start:end:step` (end included when hit).
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::invalid(format!("cannot parse number list {text:?}"));
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    let out = match parts.as_slice() {
        [list] => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse)
            .collect::<Result<Vec<_>>>()?,
        [start, end, step] => {
            let (start, end, step) = (parse(start)?, parse(end)?, parse(step)?);
            if step.is_nan() || step <= 0.0 || end < start {
                return Err(bad());
            }
            let count = ((end - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|k| start + k as f64 * step).collect()
        }
        _ => return Err(bad()),
    };
    if out.is_empty() || out.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(out)
}

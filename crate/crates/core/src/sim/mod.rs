//! Discrete-event simulation of a non-RTA BSS and an overlapping RTA BSS.
//!
//! See [`engine`] for the channel model. [`run_simulation`] is the entry
//! point; [`metrics`] holds the QoS statistics used in reports.

mod config;
pub mod engine;
pub mod metrics;
mod policy;
pub(crate) mod report;

pub use config::{MacConfig, Radio, RunConfig, ScenarioConfig, TrafficConfig};
pub use engine::{run_policy, run_simulation, run_with_orders};
pub use metrics::{delay_quantile, jain_index, loss_ratio};
pub use policy::{airtime_fair_order, CycleOrder, PolicyKind, SchedulePolicy};
pub use report::{DelaySample, EventCounts, QosMetrics, SimReport};

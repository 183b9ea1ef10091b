use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::favorability::{check_permutation, FavorabilityMatrix};
use crate::solvers::{brute_force_schedule, greedy_schedule};

/// Order of non-RTA uplinks, one schedule cycle at a time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchedulePolicy {
    /// Fresh uniformly random permutation every cycle.
    AirtimeFair,
    /// The same permutation every cycle.
    FixedOrder(Vec<usize>),
}

impl SchedulePolicy {
    pub fn tag(&self) -> &'static str {
        match self {
            SchedulePolicy::AirtimeFair => "baseline",
            SchedulePolicy::FixedOrder(_) => "fixed-order",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            SchedulePolicy::AirtimeFair => Ok(()),
            SchedulePolicy::FixedOrder(order) => check_permutation(order, n),
        }
    }
}

impl fmt::Display for SchedulePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Scheduler compared in simulations and sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    /// Airtime fairness.
    Baseline,
    /// Fixed order from exhaustive search.
    Brute,
    /// Fixed order from greedy insertion.
    Greedy,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [PolicyKind::Baseline, PolicyKind::Brute, PolicyKind::Greedy];

    pub fn as_str(&self) -> &'static str {
        match self {
            PolicyKind::Baseline => "baseline",
            PolicyKind::Brute => "brute",
            PolicyKind::Greedy => "greedy",
        }
    }

    /// Concrete policy for a favorability matrix.
    pub fn policy_for(&self, f: &FavorabilityMatrix) -> Result<SchedulePolicy> {
        Ok(match self {
            PolicyKind::Baseline => SchedulePolicy::AirtimeFair,
            PolicyKind::Brute => SchedulePolicy::FixedOrder(brute_force_schedule(f.columns())?.order),
            PolicyKind::Greedy => SchedulePolicy::FixedOrder(greedy_schedule(f.columns())?.order),
        })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" | "airtime" => Ok(PolicyKind::Baseline),
            "brute" | "brute-force" => Ok(PolicyKind::Brute),
            "greedy" => Ok(PolicyKind::Greedy),
            _ => Err(Error::invalid(format!(
                "unknown policy {s:?} (expected baseline, brute or greedy)"
            ))),
        }
    }
}

/// Source of per-cycle uplink orders for the simulator.
pub trait CycleOrder {
    /// Order for the next cycle; must be a permutation of `0..n`.
    fn next_cycle(&mut self, n: usize, rng: &mut dyn RngCore) -> Vec<usize>;
}

impl CycleOrder for SchedulePolicy {
    fn next_cycle(&mut self, n: usize, rng: &mut dyn RngCore) -> Vec<usize> {
        match self {
            SchedulePolicy::AirtimeFair => airtime_fair_order(n, rng),
            SchedulePolicy::FixedOrder(order) => order.clone(),
        }
    }
}

/// One cycle of the airtime-fairness baseline: every station once, in a
/// uniformly random order.
pub fn airtime_fair_order(n: usize, rng: &mut dyn RngCore) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

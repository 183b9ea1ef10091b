//! Exact and greedy solvers for the transmission-order problem.
//!
//! Both solvers take favorability vectors in caller order and return a
//! [`ScheduleSolution`] whose `order` indexes into that input. Rows that are
//! all zeros or all ones are removed before searching and accounted for again
//! in the reported objective.

mod brute;
mod gap;
mod greedy;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::favorability::{
    objective_vector, strip_trivial_rows, FavorabilityMatrix, FavorabilityVector, ObjectiveVector,
};

pub use brute::{brute_force_schedule, brute_force_schedule_with_cap, DEFAULT_BRUTE_FORCE_CAP};
pub use gap::{evaluate_gap, GapReport, ShuffleOutcome};
pub use greedy::greedy_schedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    BruteForce,
    Greedy,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::BruteForce => "brute",
            SolverKind::Greedy => "greedy",
        })
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" | "brute-force" => Ok(SolverKind::BruteForce),
            "greedy" => Ok(SolverKind::Greedy),
            other => Err(Error::invalid(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSolution {
    /// Input indices in transmission order; a permutation of `0..N`.
    pub order: Vec<usize>,
    /// Objective over all rows, trivial ones included.
    pub objective: ObjectiveVector,
    pub solver: SolverKind,
    pub elapsed: Duration,
}

impl ScheduleSolution {
    /// Station ids of the input vectors, in transmission order.
    pub fn sta_order(&self, vectors: &[FavorabilityVector]) -> Vec<usize> {
        self.order.iter().map(|&i| vectors[i].sta_id()).collect()
    }
}

/// Reduced problem shared by the solvers: the non-trivial rows only, stored
/// row-major and indexed by input column.
struct Instance {
    full: FavorabilityMatrix,
    rows: Vec<Vec<bool>>,
}

impl Instance {
    fn new(vectors: &[FavorabilityVector]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::invalid("no favorability vectors to schedule"));
        }
        let full = FavorabilityMatrix::new(vectors.to_vec())?;
        let (reduced, _) = strip_trivial_rows(&full);
        Ok(Self {
            rows: reduced.rows(),
            full,
        })
    }

    fn n(&self) -> usize {
        self.full.n_cols()
    }

    fn solution(&self, order: Vec<usize>, solver: SolverKind, elapsed: Duration) -> Result<ScheduleSolution> {
        let objective = objective_vector(&self.full.reordered(&order)?)?;
        Ok(ScheduleSolution {
            order,
            objective,
            solver,
            elapsed,
        })
    }
}

/// Writes `zero_runs` sorted non-increasing into `buf`.
fn sort_desc_into(buf: &mut Vec<usize>, zero_runs: impl IntoIterator<Item = usize>) {
    buf.clear();
    buf.extend(zero_runs);
    buf.sort_unstable_by(|a, b| b.cmp(a));
}

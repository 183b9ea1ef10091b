//! PSR-aware transmission ordering for overlapping Wi-Fi BSSs.
//!
//! A non-RTA access point serves its stations with trigger-based uplinks. An
//! overlapping RTA network can piggyback on those uplinks with parameterized
//! spatial reuse (PSR), but only some uplinks leave enough SINR margin for a
//! given RTA station. This crate
//!
//! - classifies each (non-RTA station, RTA station) pair from geometry and
//!   link budget ([`link`]),
//! - orders the non-RTA uplinks so that no RTA station waits long for a usable
//!   PSR opportunity ([`favorability`], [`solvers`]),
//! - and simulates both BSSs to compare that order against an airtime-fairness
//!   scheduler ([`sim`]).
//!
//! The [`scenario`] and [`cli`] modules provide the JSON scenario format and
//! the `psrsched` command-line front end.

pub mod cli;
pub mod error;
pub mod favorability;
pub mod link;
pub mod scenario;
pub mod sim;
pub mod solvers;

pub use error::{Error, Result};
pub use favorability::{
    lexicographically_less, max_circular_zero_run, objective_vector, strip_trivial_rows, FavorabilityMatrix,
    FavorabilityVector, ObjectiveVector,
};
pub use solvers::{brute_force_schedule, evaluate_gap, greedy_schedule, ScheduleSolution, SolverKind};

//! Link budget and PSR-favorability classification.
//!
//! Geometry lives in [`geometry`], the dB arithmetic of the PSR power
//! restriction and the expected SINR in [`budget`], and the per-pair
//! classification with its measurement windows in [`classify`].

pub mod budget;
pub mod classify;
pub mod geometry;

pub use budget::{
    accept_interference_dbm, noise_floor_dbm, pathloss_db, power_sum_dbm, psr_max_tx_power, LinkBudgetConfig,
};
pub use classify::{
    classify_favorability, windowed_favorable, MeasurementWindow, NonRtaStation, PsrLinkBudget, Topology,
    WindowedClassifier, DEFAULT_WINDOW_DEPTH,
};
pub use geometry::{FloorPlan, NodePosition, Rect};

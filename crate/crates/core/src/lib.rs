//! Cooperative multi-UAV mission toolkit.
//!
//! The crate plans connectivity-preserving coverage paths for a UAV fleet
//! over a set of target points, validates plans against the slotted motion
//! model (speed / connectivity / coverage), predicts per-UAV energy with a
//! two-step learned model, and executes missions in a deterministic
//! discrete-time simulator that speaks the agent/monitor packet protocol.
//!
//! Module map:
//! - [`geometry`]: planar primitives (hulls, inward offsets, projections).
//! - [`model`]: problem instances, slotted trajectories and the validator.
//! - [`planner`]: ring-decomposition scanning planner, greedy baseline,
//!   lower bound and mid-flight replanning.
//! - [`energy`]: linear calibration + kernel ridge consumption model.
//! - [`protocol`]: wire packets, task steps, sync barrier, agent machine.
//! - [`sim`]: the mission simulator and its monitors.

pub mod energy;
pub mod geometry;
pub mod model;
pub mod planner;
pub mod protocol;
pub mod sim;

pub use geometry::Point2;

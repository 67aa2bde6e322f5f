//! Problem instances, slotted trajectories and the constraint validator.
//!
//! The motion model is discrete: a UAV may move at most `d_max` metres per
//! time slot. A plan is valid when every trajectory respects the speed
//! cap, every UAV keeps at least one fleet member within transmission
//! range at every slot, and every target point is passed within
//! [`EPS_COV`] by some inter-slot segment.

use crate::geometry::{point_segment_distance, Point2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coverage tolerance in metres: a target is passed when some swept
/// segment comes this close. GPS-scale "passes through".
pub const EPS_COV: f64 = 0.5;

/// Slack for speed/connectivity comparisons, metres.
pub const EPS_CHECK: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("empty waypoint list for uav {0}")]
    EmptyWaypoints(usize),
    #[error("trajectory length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid instance: {0}")]
    BadInstance(String),
}

/// Fleet-wide parameters.
///
/// `battery_capacity` (joules per UAV) only feeds the energy feasibility
/// check; the planner itself is distance-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FleetConfig {
    pub m: usize,
    /// Transmission range, metres.
    pub w: f64,
    /// Maximum travel per time slot, metres.
    pub d_max: f64,
    #[serde(rename = "speed")]
    pub cruise_speed: f64,
    #[serde(rename = "battery_j")]
    pub battery_capacity: f64,
}

impl FleetConfig {
    /// Maximal formation span: m UAVs evenly spaced at spacing w.
    pub fn w_max(&self) -> f64 {
        (self.m as f64 - 1.0) * self.w
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.m < 1 {
            return Err(ModelError::BadInstance("fleet must have m >= 1".into()));
        }
        if !(self.w > 0.0) || !(self.d_max > 0.0) || !(self.cruise_speed > 0.0) {
            return Err(ModelError::BadInstance(
                "w, d_max and speed must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

/// One planning problem: an area, the target points and the fleet.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub area: Area,
    pub targets: Vec<Point2>,
    pub fleet: FleetConfig,
    pub seed: u64,
}

impl Instance {
    /// Uniform i.i.d. targets over the area rectangle, seeded.
    pub fn generate(area: Area, n: usize, fleet: FleetConfig, seed: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let targets = (0..n)
            .map(|_| {
                Point2::new(
                    rng.gen::<f64>() * area.width,
                    rng.gen::<f64>() * area.height,
                )
            })
            .collect();
        Instance {
            area,
            targets,
            fleet,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.fleet.validate()?;
        if self.targets.is_empty() {
            return Err(ModelError::BadInstance("no targets".into()));
        }
        if !(self.area.width > 0.0) || !(self.area.height > 0.0) {
            return Err(ModelError::BadInstance("non-positive area".into()));
        }
        for (i, t) in self.targets.iter().enumerate() {
            if !t.is_finite() {
                return Err(ModelError::BadInstance(format!("target {i} non-finite")));
            }
            if t.x < -1e-9
                || t.y < -1e-9
                || t.x > self.area.width + 1e-9
                || t.y > self.area.height + 1e-9
            {
                return Err(ModelError::BadInstance(format!(
                    "target {i} outside area"
                )));
            }
        }
        Ok(())
    }
}

/// Slotted trajectory of one UAV; slot `t` is `positions[t]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub uav_id: usize,
    pub positions: Vec<Point2>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn path_length(&self) -> f64 {
        self.positions
            .windows(2)
            .map(|w| w[0].dist(w[1]))
            .sum()
    }
}

/// Cost ledger of a plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanReport {
    /// Per-UAV route length attributed by the planning cost model.
    #[serde(rename = "L_j")]
    pub per_uav_distance: Vec<f64>,
    #[serde(rename = "L_fleet")]
    pub fleet_cost: f64,
    #[serde(rename = "LB")]
    pub lower_bound: f64,
    #[serde(rename = "L_adjust")]
    pub adjust: f64,
    #[serde(rename = "L_trans")]
    pub transfer: f64,
    #[serde(rename = "K")]
    pub rounds: usize,
    /// Outer-boundary perimeter per scanning round, not serialized to the
    /// plan file (derivable from the rings).
    #[serde(skip)]
    pub per_round_boundary: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedViolation {
    pub uav: usize,
    pub slot: usize,
    pub dist: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityViolation {
    pub uav: usize,
    pub slot: usize,
    pub nearest: f64,
}

/// Interpolate waypoint polylines into slotted trajectories.
///
/// Each leg advances exactly `d_max` per slot with a final partial step, so
/// every waypoint appears as a slot position. A repeated waypoint (zero
/// length leg) holds position for one slot, which is how planners express
/// a deliberate stall. Shorter paths hover at their final point so that
/// all trajectories share the same slot count.
pub fn discretize(
    waypoints: &[Vec<Point2>],
    fleet: &FleetConfig,
) -> Result<Vec<Trajectory>, ModelError> {
    let d_max = fleet.d_max;
    let mut trajs: Vec<Trajectory> = Vec::with_capacity(waypoints.len());
    for (uav_id, path) in waypoints.iter().enumerate() {
        if path.is_empty() {
            return Err(ModelError::EmptyWaypoints(uav_id));
        }
        let mut positions = vec![path[0]];
        for leg in path.windows(2) {
            let (a, b) = (leg[0], leg[1]);
            let len = a.dist(b);
            if len <= 1e-12 {
                positions.push(b); // one-slot hover
                continue;
            }
            let steps = ((len - 1e-9) / d_max).ceil().max(1.0) as usize;
            for s in 1..=steps {
                let travelled = (s as f64 * d_max).min(len);
                positions.push(a.lerp(b, travelled / len));
            }
        }
        trajs.push(Trajectory { uav_id, positions });
    }
    let horizon = trajs.iter().map(|t| t.len()).max().unwrap_or(0);
    for t in &mut trajs {
        let last = *t.positions.last().unwrap();
        t.positions.resize(horizon, last);
    }
    Ok(trajs)
}

/// Every (uav, slot) whose next step exceeds `d_max` plus slack.
pub fn check_speed(trajs: &[Trajectory], d_max: f64) -> Vec<SpeedViolation> {
    let mut out = Vec::new();
    for t in trajs {
        for (slot, w) in t.positions.windows(2).enumerate() {
            let dist = w[0].dist(w[1]);
            if dist > d_max + EPS_CHECK {
                out.push(SpeedViolation {
                    uav: t.uav_id,
                    slot,
                    dist,
                });
            }
        }
    }
    out
}

/// Every (uav, slot) with no other fleet member within `w` plus slack.
/// Single-UAV fleets trivially pass.
pub fn check_connectivity(
    trajs: &[Trajectory],
    w: f64,
) -> Result<Vec<ConnectivityViolation>, ModelError> {
    if trajs.len() <= 1 {
        return Ok(Vec::new());
    }
    let horizon = trajs[0].len();
    for t in trajs {
        if t.len() != horizon {
            return Err(ModelError::LengthMismatch(horizon, t.len()));
        }
    }
    let mut out = Vec::new();
    for slot in 0..horizon {
        for a in trajs {
            let nearest = trajs
                .iter()
                .filter(|b| b.uav_id != a.uav_id)
                .map(|b| a.positions[slot].dist(b.positions[slot]))
                .fold(f64::INFINITY, f64::min);
            if nearest > w + EPS_CHECK {
                out.push(ConnectivityViolation {
                    uav: a.uav_id,
                    slot,
                    nearest,
                });
            }
        }
    }
    Ok(out)
}

/// Indices of targets not passed within `eps_cov` by any inter-slot
/// segment. Swept segments, not slot samples: a UAV may cross a target
/// mid-slot.
pub fn check_coverage(trajs: &[Trajectory], targets: &[Point2], eps_cov: f64) -> Vec<usize> {
    targets
        .iter()
        .enumerate()
        .filter(|(_, target)| {
            !trajs.iter().any(|t| {
                if t.positions.len() == 1 {
                    return t.positions[0].dist(**target) <= eps_cov + 1e-9;
                }
                t.positions.windows(2).any(|w| {
                    point_segment_distance(**target, w[0], w[1]).0 <= eps_cov + 1e-9
                })
            })
        })
        .map(|(i, _)| i)
        .collect()
}

/// Exact per-UAV path lengths and their maximum.
pub fn fleet_cost(trajs: &[Trajectory]) -> (Vec<f64>, f64) {
    let per_uav: Vec<f64> = trajs.iter().map(|t| t.path_length()).collect();
    let max = per_uav.iter().copied().fold(0.0, f64::max);
    (per_uav, max)
}

/// Optional extra check: at every slot at least one UAV within `range` of
/// the ground station. Not part of the standard validation set.
pub fn check_station_connectivity(
    trajs: &[Trajectory],
    station: Point2,
    range: f64,
) -> Vec<usize> {
    if trajs.is_empty() {
        return Vec::new();
    }
    let horizon = trajs.iter().map(|t| t.len()).max().unwrap_or(0);
    (0..horizon)
        .filter(|&slot| {
            !trajs
                .iter()
                .any(|t| t.positions.get(slot).map_or(false, |p| p.dist(station) <= range + EPS_CHECK))
        })
        .collect()
}

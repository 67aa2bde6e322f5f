//! Deterministic discrete-time mission execution.
//!
//! One simulation advances a fixed event loop: agents receive packets,
//! the flight controller moves every UAV one `dt` toward its active
//! waypoint (wind-perturbed, GPS-noised telemetry), completed actions
//! drive the protocol machines, and the monitor runs the cooperation
//! services — sync barrier, divergence compensation, collision
//! prediction, geo-fence/battery watch and energy integration. All
//! randomness comes from one seeded generator drawn in a fixed order, so
//! a (instance, plan, config) triple replays byte-identically.
//!
//! Navigation runs on true positions (the autopilot's inner loop); GPS
//! noise corrupts only the telemetry stream, which is what the
//! sensor-driven services (divergence, status logs) consume. Coverage and
//! connectivity over the trace are judged on true positions.

use crate::energy::{predict_energy, CalibrationModel, ConsumptionModel};
use crate::geometry::{point_segment_distance, Point2};
use crate::model::{FleetConfig, Instance, EPS_COV};
use crate::planner::{replan, Plan};
use crate::protocol::{
    Action, ActionKind, AgentEvent, AgentMachine, AgentOutput, AgentState, AgentStatusView,
    BarrierOutcome, ExceptionMonitor, FleetException, GeoFence, MonitorBarrier, Packet, SyncPhase,
    DEFAULT_BATTERY_FLOOR, DEFAULT_LINK_TIMEOUT,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

/// Slack added to the transmission range when judging connectivity over a
/// noisy trace: covers wind/GPS jitter and the one-slot quantization of
/// formation re-aiming.
pub const CONNECTIVITY_MARGIN: f64 = 1.0;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("plan has {plan} waypoint streams but the fleet has {fleet} UAVs")]
    FleetSizeMismatch { plan: usize, fleet: usize },
    #[error("plan waypoint streams are empty")]
    EmptyPlan,
    #[error(transparent)]
    Planner(#[from] crate::planner::PlannerError),
}

/// Scheduled constant wind on top of the per-tick gusting noise.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Gust {
    pub start: f64,
    pub end: f64,
    pub vector: (f64, f64),
}

/// Simulation knobs. Defaults give a mildly noisy but safe flight.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub wind_sigma: f64,
    pub gust: Option<Gust>,
    pub gps_sigma: f64,
    pub div_correct: f64,
    pub div_replan: f64,
    pub collide_dist: f64,
    pub collide_horizon: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 0.1,
            wind_sigma: 0.3,
            gust: None,
            gps_sigma: 1.0,
            div_correct: 3.0,
            div_replan: 10.0,
            collide_dist: 2.0,
            collide_horizon: 2.0,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn noiseless(seed: u64) -> Self {
        SimConfig {
            wind_sigma: 0.0,
            gps_sigma: 0.0,
            seed,
            ..SimConfig::default()
        }
    }
}

/// Physical and telemetry state of one vehicle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UavState {
    pub true_pos: Point2,
    pub reported_pos: Point2,
    pub velocity: (f64, f64),
    pub battery: f64,
    pub cumulative_distance: f64,
    /// Seconds spent actually flying (hover waits excluded).
    pub cumulative_time: f64,
}

pub struct EnergyModels {
    pub calibration: CalibrationModel,
    pub consumption: ConsumptionModel,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceEvent {
    Handshake {
        uav: usize,
    },
    Status {
        uav: usize,
        true_pos: Point2,
        reported_pos: Point2,
        battery_frac: f64,
        distance: f64,
        flight_time: f64,
        energy: Option<f64>,
    },
    SyncDone {
        uav: usize,
        step: u64,
    },
    SyncRelease {
        step: u64,
    },
    DivergenceCorrection {
        uav: usize,
        deviation: f64,
    },
    Replan {
        uav: usize,
        deviation: f64,
    },
    CollisionWarning {
        a: usize,
        b: usize,
        predicted_min: f64,
    },
    Exception {
        uav: usize,
        exception: FleetException,
    },
    MissionEnd {
        completed: bool,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    #[serde(flatten)]
    pub event: TraceEvent,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UavSummary {
    pub uav: usize,
    pub t: f64,
    pub d: f64,
    pub energy: f64,
    pub violations: ViolationCounts,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ViolationCounts {
    pub connectivity_ticks: usize,
    pub collision_warnings: usize,
    pub corrections: usize,
    pub replans: usize,
    pub exceptions: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MissionSummary {
    pub completed: bool,
    pub duration: f64,
    /// Route length of the plan-critical UAV (index 0, the boundary
    /// rider), the simulated counterpart of the planned fleet cost.
    pub fleet_distance: f64,
    pub covered_targets: usize,
    pub uncovered_targets: Vec<usize>,
    pub min_pairwise_distance: f64,
    pub uavs: Vec<UavSummary>,
}

/// Full record of one simulated mission.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MissionTrace {
    pub records: Vec<TraceRecord>,
    pub summary: MissionSummary,
}

impl MissionTrace {
    /// Newline-delimited JSON records; byte-stable for a given seed.
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            out.push_str(&serde_json::to_string(rec).expect("trace record serializes"));
            out.push('\n');
        }
        out
    }
}

/// Distance from a reported position to the planned segment of the
/// current step; the divergence measure.
pub fn divergence_deviation(reported: Point2, seg_start: Point2, seg_end: Point2) -> f64 {
    point_segment_distance(reported, seg_start, seg_end).0
}

/// Minimal distance between two constant-velocity extrapolations within
/// the horizon.
pub fn predicted_min_distance(
    pa: Point2,
    va: (f64, f64),
    pb: Point2,
    vb: (f64, f64),
    horizon: f64,
) -> f64 {
    let dp = (pb.x - pa.x, pb.y - pa.y);
    let dv = (vb.0 - va.0, vb.1 - va.1);
    let dv2 = dv.0 * dv.0 + dv.1 * dv.1;
    let tau = if dv2 <= 1e-12 {
        0.0
    } else {
        (-(dp.0 * dv.0 + dp.1 * dv.1) / dv2).clamp(0.0, horizon)
    };
    let candidates = [0.0, tau, horizon];
    candidates
        .iter()
        .map(|&t| ((dp.0 + t * dv.0).powi(2) + (dp.1 + t * dv.1).powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min)
}

struct SimAgent {
    machine: AgentMachine,
    state: UavState,
    /// Action currently executed by the flight controller.
    active: Option<Action>,
    /// Start of the planned segment for the active goto.
    seg_start: Point2,
    /// Temporary waypoint issued by the divergence service.
    correction: Option<Point2>,
    wait_elapsed: f64,
    hold_ticks: u32,
    exception_monitor: ExceptionMonitor,
    inbox: VecDeque<Packet>,
    last_energy: f64,
}

struct Rand {
    rng: ChaCha8Rng,
}

impl Rand {
    fn gauss(&mut self) -> f64 {
        let u1: f64 = self.rng.gen::<f64>().max(1e-12);
        let u2: f64 = self.rng.gen::<f64>();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Execute `plan` on `instance` under `config`, returning the trace.
pub fn run_mission(
    instance: &Instance,
    plan: &Plan,
    models: Option<&EnergyModels>,
    config: &SimConfig,
) -> Result<MissionTrace, SimError> {
    let fleet = &instance.fleet;
    if plan.waypoints.len() != fleet.m {
        return Err(SimError::FleetSizeMismatch {
            plan: plan.waypoints.len(),
            fleet: fleet.m,
        });
    }
    if plan.waypoints.iter().any(|w| w.is_empty()) {
        return Err(SimError::EmptyPlan);
    }

    let mut rand = Rand {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
    };
    let mut records: Vec<TraceRecord> = Vec::new();
    let mut barrier = MonitorBarrier::new();
    let mut agents: Vec<SimAgent> = Vec::with_capacity(fleet.m);

    // generous circular fence around the area; fault-injection tests set
    // their own geometry through the exception monitor directly
    let fence_center = Point2::new(instance.area.width / 2.0, instance.area.height / 2.0);
    let fence_radius = 1.5 * fence_center.dist(Point2::new(0.0, 0.0)).max(1.0)
        + fleet.w_max()
        + 2.0 * fleet.w;
    let fence = GeoFence {
        center: fence_center,
        radius: fence_radius,
    };

    // handshake and task upload happen before the clock starts
    for (id, wps) in plan.waypoints.iter().enumerate() {
        let mut machine = AgentMachine::new();
        machine.step(AgentEvent::Start);
        machine.step(AgentEvent::Receive(Packet::ConnectResponse {
            connection_id: id as u32,
        }));
        machine.step(AgentEvent::Receive(Packet::SetGeoFence(fence)));
        barrier.register(id as u32);
        records.push(TraceRecord {
            t: 0.0,
            event: TraceEvent::Handshake { uav: id },
        });
        agents.push(SimAgent {
            machine,
            state: UavState {
                true_pos: wps[0],
                reported_pos: wps[0],
                velocity: (0.0, 0.0),
                battery: fleet.battery_capacity,
                cumulative_distance: 0.0,
                cumulative_time: 0.0,
            },
            active: None,
            seg_start: wps[0],
            correction: None,
            wait_elapsed: 0.0,
            hold_ticks: 0,
            exception_monitor: ExceptionMonitor::new(),
            inbox: VecDeque::new(),
            last_energy: 0.0,
        });
    }
    let mut monitor_inbox: VecDeque<(usize, Packet)> = VecDeque::new();
    for (id, wps) in plan.waypoints.iter().enumerate() {
        let task = task_from_waypoints(id as u32, wps);
        let outputs = agents[id]
            .machine
            .step(AgentEvent::Receive(Packet::PerformActions { actions: task }));
        handle_agent_outputs(id, outputs, &mut agents, &mut monitor_inbox);
    }

    let mut visited: HashSet<usize> = HashSet::new();
    mark_initial_coverage(&agents, &instance.targets, &mut visited);

    let mut t = 0.0;
    let horizon_guess = plan.report.fleet_cost.max(1.0) / fleet.cruise_speed;
    let max_t = 20.0 * horizon_guess + 600.0;
    let mut min_pairwise = f64::INFINITY;
    let mut connectivity_ticks = vec![0usize; fleet.m];
    let mut collision_warnings = vec![0usize; fleet.m];
    let mut corrections = vec![0usize; fleet.m];
    let mut replans = vec![0usize; fleet.m];
    let mut exceptions = vec![0usize; fleet.m];
    let mut last_status_t = -1.0;
    let mut last_replan_t = f64::NEG_INFINITY;
    let mut current_plan: Plan = plan.clone();
    let mut completed = false;

    while t < max_t {
        t += config.dt;

        // deliver monitor -> agent traffic queued last tick
        for id in 0..fleet.m {
            while let Some(packet) = agents[id].inbox.pop_front() {
                let outputs = agents[id].machine.step(AgentEvent::Receive(packet));
                handle_agent_outputs(id, outputs, &mut agents, &mut monitor_inbox);
            }
        }

        // flight controller: one kinematic step per UAV
        for id in 0..fleet.m {
            // fixed-order noise draws keep the stream stable
            let wind = (
                rand.gauss() * config.wind_sigma,
                rand.gauss() * config.wind_sigma,
            );
            let gps = (
                rand.gauss() * config.gps_sigma,
                rand.gauss() * config.gps_sigma,
            );
            let gust = match &config.gust {
                Some(g) if t >= g.start && t <= g.end => g.vector,
                _ => (0.0, 0.0),
            };
            let agent = &mut agents[id];
            if agent.hold_ticks > 0 {
                agent.hold_ticks -= 1;
                agent.velocity_zero(gps);
                continue;
            }
            let target = agent.navigation_target();
            let mut moved = (0.0, 0.0);
            if let Some(target) = target {
                let remaining = agent.state.true_pos.dist(target);
                if remaining > 1e-12 {
                    let speed = fleet.cruise_speed.min(remaining / config.dt);
                    let dir = (
                        (target.x - agent.state.true_pos.x) / remaining,
                        (target.y - agent.state.true_pos.y) / remaining,
                    );
                    moved = (dir.0 * speed * config.dt, dir.1 * speed * config.dt);
                }
            }
            moved.0 += (wind.0 + gust.0) * config.dt;
            moved.1 += (wind.1 + gust.1) * config.dt;
            let step_len = moved.0.hypot(moved.1);
            agent.state.true_pos = agent.state.true_pos.add(moved.0, moved.1);
            agent.state.cumulative_distance += step_len;
            if step_len > 1e-12 {
                agent.state.cumulative_time += config.dt;
            }
            agent.state.velocity = (moved.0 / config.dt, moved.1 / config.dt);
            agent.state.reported_pos = agent.state.true_pos.add(gps.0, gps.1);

            // sweep-based coverage bookkeeping on true positions
            let swept_from = agent.state.true_pos.add(-moved.0, -moved.1);
            for (i, target) in instance.targets.iter().enumerate() {
                if !visited.contains(&i)
                    && point_segment_distance(*target, swept_from, agent.state.true_pos).0
                        <= EPS_COV + 1e-9
                {
                    visited.insert(i);
                }
            }

            // action progress
            if agent.correction.is_some() {
                let c = agent.correction.unwrap();
                if agent.state.true_pos.dist(c) <= EPS_COV {
                    agent.correction = None;
                }
            } else if let Some(action) = agent.active.clone() {
                let done = match action.kind {
                    ActionKind::Goto => {
                        let dest = agent.goto_destination(&action);
                        agent.state.true_pos.dist(dest) <= EPS_COV
                    }
                    ActionKind::Wait => {
                        agent.wait_elapsed += config.dt;
                        agent.wait_elapsed + 1e-9 >= action.duration.unwrap_or(0.0)
                    }
                    // takeoff/land/return-home resolve in one tick here:
                    // vertical motion is out of scope
                    _ => true,
                };
                if done {
                    agent.active = None;
                    agent.wait_elapsed = 0.0;
                    let outputs = agents[id].machine.step(AgentEvent::ActionCompleted);
                    handle_agent_outputs(id, outputs, &mut agents, &mut monitor_inbox);
                }
            }
        }

        // 1 Hz status reports
        let status_due = (t - last_status_t) + 1e-9 >= 1.0;
        if status_due {
            last_status_t = t;
            for id in 0..fleet.m {
                let battery_frac =
                    (agents[id].state.battery / fleet.battery_capacity).clamp(0.0, 1.0);
                let ev = AgentEvent::StatusTick {
                    t,
                    position: agents[id].state.reported_pos,
                    battery: battery_frac,
                };
                let outputs = agents[id].machine.step(ev);
                handle_agent_outputs(id, outputs, &mut agents, &mut monitor_inbox);
            }
        }

        // monitor: drain inbound packets, run services
        let mut want_replan: Option<(usize, f64)> = None;
        while let Some((from, packet)) = monitor_inbox.pop_front() {
            match packet {
                Packet::Sync {
                    phase: SyncPhase::Done,
                    step,
                } => {
                    records.push(TraceRecord {
                        t,
                        event: TraceEvent::SyncDone { uav: from, step },
                    });
                    if let Ok(BarrierOutcome::Release(step)) =
                        barrier.on_sync(from as u32, step)
                    {
                        records.push(TraceRecord {
                            t,
                            event: TraceEvent::SyncRelease { step },
                        });
                        for agent in agents.iter_mut() {
                            agent.inbox.push_back(Packet::Sync {
                                phase: SyncPhase::Release,
                                step,
                            });
                        }
                    }
                }
                Packet::Status(report) => {
                    let id = from;
                    let energy = models.map(|m| {
                        let d = agents[id].state.cumulative_distance;
                        predict_energy(
                            &m.calibration,
                            &m.consumption,
                            d / fleet.cruise_speed,
                            d,
                        )
                    });
                    if let Some(e) = energy {
                        let delta = (e - agents[id].last_energy).max(0.0);
                        agents[id].state.battery = (agents[id].state.battery - delta).max(0.0);
                        agents[id].last_energy = e;
                    }
                    records.push(TraceRecord {
                        t,
                        event: TraceEvent::Status {
                            uav: id,
                            true_pos: agents[id].state.true_pos,
                            reported_pos: report.position,
                            battery_frac: report.battery,
                            distance: agents[id].state.cumulative_distance,
                            flight_time: agents[id].state.cumulative_time,
                            energy,
                        },
                    });

                    // exception watch on the reported view
                    let view = AgentStatusView {
                        position: report.position,
                        battery: report.battery,
                        last_contact_age: 0.0,
                    };
                    let fired = agents[id].exception_monitor.check(
                        &view,
                        Some(&fence),
                        DEFAULT_BATTERY_FLOOR,
                        DEFAULT_LINK_TIMEOUT,
                    );
                    for exception in fired {
                        exceptions[id] += 1;
                        records.push(TraceRecord {
                            t,
                            event: TraceEvent::Exception {
                                uav: id,
                                exception,
                            },
                        });
                    }

                    // divergence service: compare telemetry with the plan
                    if let Some(action) = agents[id].active.clone() {
                        if action.kind == ActionKind::Goto && agents[id].correction.is_none() {
                            let dest = agents[id].goto_destination(&action);
                            let deviation =
                                divergence_deviation(report.position, agents[id].seg_start, dest);
                            if deviation > config.div_replan
                                && t - last_replan_t > 5.0
                                && want_replan.is_none()
                            {
                                want_replan = Some((id, deviation));
                            } else if deviation > config.div_correct
                                && deviation <= config.div_replan
                            {
                                let back =
                                    point_segment_distance(report.position, agents[id].seg_start, dest)
                                        .1;
                                agents[id].correction = Some(back);
                                corrections[id] += 1;
                                records.push(TraceRecord {
                                    t,
                                    event: TraceEvent::DivergenceCorrection {
                                        uav: id,
                                        deviation,
                                    },
                                });
                            }
                        }
                    }
                }
                _ => {}
            }
        }

        // divergence beyond the replan threshold: rebuild the remaining
        // mission over unvisited targets from current positions
        if let Some((id, deviation)) = want_replan {
            if visited.len() < instance.targets.len() {
                let positions: Vec<Point2> =
                    agents.iter().map(|a| a.state.reported_pos).collect();
                let new_plan = replan(instance, &visited, &positions)?;
                replans[id] += 1;
                last_replan_t = t;
                records.push(TraceRecord {
                    t,
                    event: TraceEvent::Replan { uav: id, deviation },
                });
                barrier = MonitorBarrier::new();
                for (aid, wps) in new_plan.waypoints.iter().enumerate() {
                    barrier.register(aid as u32);
                    agents[aid].active = None;
                    agents[aid].correction = None;
                    let task = task_from_waypoints(aid as u32, wps);
                    let outputs = agents[aid].machine.load_task(task);
                    handle_agent_outputs(aid, outputs, &mut agents, &mut monitor_inbox);
                }
                current_plan = new_plan;
            }
        }

        // collision service on true kinematic state
        for a in 0..fleet.m {
            for b in (a + 1)..fleet.m {
                let d_now = agents[a].state.true_pos.dist(agents[b].state.true_pos);
                min_pairwise = min_pairwise.min(d_now);
                let d_pred = predicted_min_distance(
                    agents[a].state.true_pos,
                    agents[a].state.velocity,
                    agents[b].state.true_pos,
                    agents[b].state.velocity,
                    config.collide_horizon,
                );
                if d_now < config.collide_dist || d_pred < config.collide_dist {
                    collision_warnings[a] += 1;
                    collision_warnings[b] += 1;
                    agents[b].hold_ticks = agents[b].hold_ticks.max(1);
                    records.push(TraceRecord {
                        t,
                        event: TraceEvent::CollisionWarning {
                            a,
                            b,
                            predicted_min: d_pred,
                        },
                    });
                }
            }
            if fleet.m > 1 {
                let nearest = (0..fleet.m)
                    .filter(|&b| b != a)
                    .map(|b| agents[a].state.true_pos.dist(agents[b].state.true_pos))
                    .fold(f64::INFINITY, f64::min);
                if nearest > fleet.w + CONNECTIVITY_MARGIN {
                    connectivity_ticks[a] += 1;
                }
            }
        }

        if agents
            .iter()
            .all(|a| a.machine.state == AgentState::Idle && a.active.is_none())
        {
            completed = true;
            break;
        }
    }

    records.push(TraceRecord {
        t,
        event: TraceEvent::MissionEnd { completed },
    });

    let uncovered: Vec<usize> = (0..instance.targets.len())
        .filter(|i| !visited.contains(i))
        .collect();
    let uav_summaries: Vec<UavSummary> = agents
        .iter()
        .enumerate()
        .map(|(id, a)| UavSummary {
            uav: id,
            t: a.state.cumulative_time,
            d: a.state.cumulative_distance,
            energy: a.last_energy,
            violations: ViolationCounts {
                connectivity_ticks: connectivity_ticks[id],
                collision_warnings: collision_warnings[id],
                corrections: corrections[id],
                replans: replans[id],
                exceptions: exceptions[id],
            },
        })
        .collect();
    let _ = &current_plan;
    let summary = MissionSummary {
        completed,
        duration: t,
        fleet_distance: uav_summaries.first().map(|u| u.d).unwrap_or(0.0),
        covered_targets: visited.len(),
        uncovered_targets: uncovered,
        min_pairwise_distance: if min_pairwise.is_finite() {
            min_pairwise
        } else {
            0.0
        },
        uavs: uav_summaries,
    };
    Ok(MissionTrace { records, summary })
}

fn task_from_waypoints(id: u32, wps: &[Point2]) -> Vec<Action> {
    let mut task = Vec::with_capacity(wps.len() + 1);
    task.push(Action::simple(ActionKind::Takeoff, id, true));
    for wp in wps.iter().skip(1) {
        task.push(Action::goto_abs(id, *wp, true));
    }
    task.push(Action::simple(ActionKind::Land, id, true));
    task
}

fn mark_initial_coverage(agents: &[SimAgent], targets: &[Point2], visited: &mut HashSet<usize>) {
    for (i, target) in targets.iter().enumerate() {
        if agents
            .iter()
            .any(|a| a.state.true_pos.dist(*target) <= EPS_COV)
        {
            visited.insert(i);
        }
    }
}

fn handle_agent_outputs(
    id: usize,
    outputs: Vec<AgentOutput>,
    agents: &mut [SimAgent],
    monitor_inbox: &mut VecDeque<(usize, Packet)>,
) {
    for output in outputs {
        match output {
            AgentOutput::Send(packet) => monitor_inbox.push_back((id, packet)),
            AgentOutput::Execute(action) => {
                let agent = &mut agents[id];
                agent.seg_start = agent.state.true_pos;
                agent.wait_elapsed = 0.0;
                agent.active = Some(action);
            }
        }
    }
}

impl SimAgent {
    fn navigation_target(&self) -> Option<Point2> {
        if let Some(c) = self.correction {
            return Some(c);
        }
        match &self.active {
            Some(action) if action.kind == ActionKind::Goto => {
                Some(self.goto_destination(action))
            }
            // hold position while waiting, idle or at the barrier
            _ => Some(self.hold_point()),
        }
    }

    fn goto_destination(&self, action: &Action) -> Point2 {
        if let Some(dest) = action.absolute_destination {
            return dest;
        }
        if let Some((dx, dy)) = action.relative_distance {
            return self.seg_start.add(dx, dy);
        }
        self.seg_start
    }

    fn hold_point(&self) -> Point2 {
        // station-keep wherever the last action left us
        self.seg_start
    }

    fn velocity_zero(&mut self, gps: (f64, f64)) {
        self.state.velocity = (0.0, 0.0);
        self.state.reported_pos = self.state.true_pos.add(gps.0, gps.1);
    }
}

/// Per-status-tick predicted cumulative energy for each UAV, extracted
/// from a trace. Curves are non-decreasing after the zero clamp.
pub fn energy_curves(trace: &MissionTrace, m: usize) -> Vec<Vec<(f64, f64)>> {
    let mut curves = vec![Vec::new(); m];
    for rec in &trace.records {
        if let TraceEvent::Status {
            uav,
            energy: Some(e),
            ..
        } = &rec.event
        {
            curves[*uav].push((rec.t, *e));
        }
    }
    curves
}

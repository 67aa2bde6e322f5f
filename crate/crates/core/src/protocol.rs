//! Agent/monitor wire protocol.
//!
//! Packets are newline-delimited JSON lines `{"type":N,"body":{...}}` with
//! seven type tags: connection request (0) and response (1), status report
//! (2), geo-fence setting (3), action delivery (4), synchronization (5)
//! and connection close (6). A task is an ordered action list; it is cut
//! into steps after every action flagged `sync`, and the monitor releases
//! the next step only after every registered agent reported the current
//! one (the sync barrier). Type 5 carries a `phase` field to tell the
//! agent's "done" report from the monitor's "release" broadcast.

use crate::geometry::Point2;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("unknown packet type {0}")]
    UnknownType(u64),
    #[error("malformed body for type {ptype}: {detail}")]
    MalformedBody { ptype: u8, detail: String },
    #[error("malformed packet line: {0}")]
    MalformedLine(String),
    #[error("missing trailing newline")]
    MissingNewline,
    #[error("unknown agent {0}")]
    UnknownAgent(u32),
    #[error("agent {agent} reported future step {got}, expected {expected}")]
    FutureStep { agent: u32, got: u64, expected: u64 },
    #[error("invalid action: {0}")]
    InvalidAction(String),
}

/// Basic flight action, one entry of a task file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub kind: ActionKind,
    pub connection_id: u32,
    pub sync: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub relative_distance: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub absolute_destination: Option<Point2>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duration: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Takeoff,
    Goto,
    Land,
    ReturnHome,
    Wait,
}

impl Action {
    pub fn goto_abs(connection_id: u32, destination: Point2, sync: bool) -> Self {
        Action {
            kind: ActionKind::Goto,
            connection_id,
            sync,
            relative_distance: None,
            absolute_destination: Some(destination),
            duration: None,
        }
    }

    pub fn simple(kind: ActionKind, connection_id: u32, sync: bool) -> Self {
        Action {
            kind,
            connection_id,
            sync,
            relative_distance: None,
            absolute_destination: None,
            duration: None,
        }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.kind == ActionKind::Goto {
            let rel = self.relative_distance.is_some();
            let abs = self.absolute_destination.is_some();
            if rel == abs {
                return Err(ProtocolError::InvalidAction(
                    "goto needs exactly one of relative_distance/absolute_destination".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One synchronization unit of a task: at most one `sync` action, last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub index: u64,
    pub actions: Vec<Action>,
}

/// Circular flight boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoFence {
    pub center: Point2,
    pub radius: f64,
}

/// Periodic vehicle status, the body of a type-2 packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatusReport {
    pub connection_id: u32,
    pub t: f64,
    pub position: Point2,
    /// Remaining battery as a fraction of capacity.
    pub battery: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyncPhase {
    /// Agent -> monitor: step complete.
    Done,
    /// Monitor -> agents: barrier open, proceed.
    Release,
}

/// A wire message. The numeric tag is fixed by the packet table.
#[derive(Debug, Clone, PartialEq)]
pub enum Packet {
    ConnectRequest,
    ConnectResponse { connection_id: u32 },
    Status(StatusReport),
    SetGeoFence(GeoFence),
    PerformActions { actions: Vec<Action> },
    Sync { phase: SyncPhase, step: u64 },
    Close { connection_id: u32 },
}

impl Packet {
    pub fn ptype(&self) -> u8 {
        match self {
            Packet::ConnectRequest => 0,
            Packet::ConnectResponse { .. } => 1,
            Packet::Status(_) => 2,
            Packet::SetGeoFence(_) => 3,
            Packet::PerformActions { .. } => 4,
            Packet::Sync { .. } => 5,
            Packet::Close { .. } => 6,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    #[serde(rename = "type")]
    ptype: u8,
    body: serde_json::Value,
}

/// Encode a packet as one JSON line, trailing newline included.
pub fn encode(p: &Packet) -> String {
    let body = match p {
        Packet::ConnectRequest => serde_json::json!({}),
        Packet::ConnectResponse { connection_id } => {
            serde_json::json!({ "connection_id": connection_id })
        }
        Packet::Status(s) => serde_json::to_value(s).expect("status serializes"),
        Packet::SetGeoFence(f) => serde_json::to_value(f).expect("fence serializes"),
        Packet::PerformActions { actions } => serde_json::json!({ "actions": actions }),
        Packet::Sync { phase, step } => serde_json::json!({ "phase": phase, "step": step }),
        Packet::Close { connection_id } => serde_json::json!({ "connection_id": connection_id }),
    };
    let mut line = serde_json::to_string(&Wire {
        ptype: p.ptype(),
        body,
    })
    .expect("packet serializes");
    line.push('\n');
    line
}

/// Decode one newline-terminated JSON line into a packet.
pub fn decode(line: &str) -> Result<Packet, ProtocolError> {
    let stripped = line
        .strip_suffix('\n')
        .ok_or(ProtocolError::MissingNewline)?;
    if stripped.contains('\n') {
        return Err(ProtocolError::MalformedLine("embedded newline".into()));
    }
    let wire: Wire =
        serde_json::from_str(stripped).map_err(|e| ProtocolError::MalformedLine(e.to_string()))?;
    let body = wire.body;
    let fail = |ptype: u8, e: serde_json::Error| ProtocolError::MalformedBody {
        ptype,
        detail: e.to_string(),
    };
    match wire.ptype {
        0 => Ok(Packet::ConnectRequest),
        1 => {
            #[derive(Deserialize)]
            struct B {
                connection_id: u32,
            }
            let b: B = serde_json::from_value(body).map_err(|e| fail(1, e))?;
            Ok(Packet::ConnectResponse {
                connection_id: b.connection_id,
            })
        }
        2 => serde_json::from_value(body)
            .map(Packet::Status)
            .map_err(|e| fail(2, e)),
        3 => serde_json::from_value(body)
            .map(Packet::SetGeoFence)
            .map_err(|e| fail(3, e)),
        4 => {
            #[derive(Deserialize)]
            struct B {
                actions: Vec<Action>,
            }
            let b: B = serde_json::from_value(body).map_err(|e| fail(4, e))?;
            for a in &b.actions {
                a.validate()?;
            }
            Ok(Packet::PerformActions { actions: b.actions })
        }
        5 => {
            #[derive(Deserialize)]
            struct B {
                phase: SyncPhase,
                step: u64,
            }
            let b: B = serde_json::from_value(body).map_err(|e| fail(5, e))?;
            Ok(Packet::Sync {
                phase: b.phase,
                step: b.step,
            })
        }
        6 => {
            #[derive(Deserialize)]
            struct B {
                connection_id: u32,
            }
            let b: B = serde_json::from_value(body).map_err(|e| fail(6, e))?;
            Ok(Packet::Close {
                connection_id: b.connection_id,
            })
        }
        other => Err(ProtocolError::UnknownType(other as u64)),
    }
}

/// Cut a task after every sync action, preserving order.
pub fn partition_steps(task: &[Action]) -> Vec<Step> {
    let mut steps = Vec::new();
    let mut current: Vec<Action> = Vec::new();
    for action in task {
        let is_sync = action.sync;
        current.push(action.clone());
        if is_sync {
            steps.push(Step {
                index: steps.len() as u64,
                actions: std::mem::take(&mut current),
            });
        }
    }
    if !current.is_empty() {
        steps.push(Step {
            index: steps.len() as u64,
            actions: current,
        });
    }
    steps
}

/// What the barrier did with a sync report.
#[derive(Debug, Clone, PartialEq)]
pub enum BarrierOutcome {
    /// Recorded; still waiting for others.
    Pending,
    /// Everyone reported: broadcast a release for this step.
    Release(u64),
    /// Agent already reported this step.
    Duplicate,
    /// Report for an already-released step; logged, not counted.
    Stale { step: u64 },
}

/// Step barrier kept by the flight monitor.
///
/// An agent becomes barrier-relevant when it completes the handshake and
/// is registered. All registered agents must report step k before the
/// single release for k goes out; duplicates are idempotent and reports
/// for future steps are rejected.
#[derive(Debug, Default)]
pub struct MonitorBarrier {
    agents: BTreeSet<u32>,
    expected_step: u64,
    reported: BTreeSet<u32>,
}

impl MonitorBarrier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, agent: u32) {
        self.agents.insert(agent);
    }

    pub fn registered(&self) -> usize {
        self.agents.len()
    }

    pub fn expected_step(&self) -> u64 {
        self.expected_step
    }

    pub fn on_sync(&mut self, agent: u32, step: u64) -> Result<BarrierOutcome, ProtocolError> {
        if !self.agents.contains(&agent) {
            return Err(ProtocolError::UnknownAgent(agent));
        }
        if step < self.expected_step {
            return Ok(BarrierOutcome::Stale { step });
        }
        if step > self.expected_step {
            return Err(ProtocolError::FutureStep {
                agent,
                got: step,
                expected: self.expected_step,
            });
        }
        if !self.reported.insert(agent) {
            return Ok(BarrierOutcome::Duplicate);
        }
        if self.reported.len() == self.agents.len() {
            let released = self.expected_step;
            self.expected_step += 1;
            self.reported.clear();
            return Ok(BarrierOutcome::Release(released));
        }
        Ok(BarrierOutcome::Pending)
    }
}

/// Agent lifecycle states.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentState {
    Disconnected,
    Handshaking,
    Idle,
    ExecutingStep,
    AwaitingRelease,
    Emergency { reason: String },
    Closed,
}

/// Inputs to the agent state machine.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentEvent {
    /// Power-on: open the connection.
    Start,
    Receive(Packet),
    /// The flight controller finished the current action.
    ActionCompleted,
    /// Periodic status sample from the flight controller.
    StatusTick {
        t: f64,
        position: Point2,
        battery: f64,
    },
    Exception(String),
}

/// Outputs of one machine transition.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentOutput {
    Send(Packet),
    /// Hand an action to the flight controller.
    Execute(Action),
}

/// Deterministic agent-side protocol machine.
///
/// Drives the handshake, executes steps action by action, reports at sync
/// actions and waits for the barrier release. Protocol violations and
/// raised exceptions park the machine in `Emergency`, from which only a
/// fresh (high-priority) type-4 task or a close packet moves it.
#[derive(Debug)]
pub struct AgentMachine {
    pub state: AgentState,
    pub connection_id: Option<u32>,
    pub fence: Option<GeoFence>,
    steps: Vec<Step>,
    step_idx: usize,
    action_idx: usize,
}

impl AgentMachine {
    pub fn new() -> Self {
        AgentMachine {
            state: AgentState::Disconnected,
            connection_id: None,
            fence: None,
            steps: Vec::new(),
            step_idx: 0,
            action_idx: 0,
        }
    }

    pub fn current_step(&self) -> Option<&Step> {
        self.steps.get(self.step_idx)
    }

    fn begin_task(&mut self, actions: Vec<Action>, out: &mut Vec<AgentOutput>) {
        self.steps = partition_steps(&actions);
        self.step_idx = 0;
        self.action_idx = 0;
        if let Some(step) = self.steps.first() {
            let first = step.actions[0].clone();
            self.state = AgentState::ExecutingStep;
            out.push(AgentOutput::Execute(first));
        } else {
            self.state = AgentState::Idle;
        }
    }

    fn advance_after_completion(&mut self, out: &mut Vec<AgentOutput>) {
        let step = self.steps[self.step_idx].clone();
        let completed = &step.actions[self.action_idx];
        if completed.sync {
            out.push(AgentOutput::Send(Packet::Sync {
                phase: SyncPhase::Done,
                step: step.index,
            }));
            self.state = AgentState::AwaitingRelease;
            return;
        }
        if self.action_idx + 1 < step.actions.len() {
            self.action_idx += 1;
            out.push(AgentOutput::Execute(step.actions[self.action_idx].clone()));
            return;
        }
        self.enter_next_step(out);
    }

    fn enter_next_step(&mut self, out: &mut Vec<AgentOutput>) {
        self.step_idx += 1;
        self.action_idx = 0;
        if let Some(step) = self.steps.get(self.step_idx) {
            self.state = AgentState::ExecutingStep;
            out.push(AgentOutput::Execute(step.actions[0].clone()));
        } else {
            self.state = AgentState::Idle;
        }
    }

    fn emergency(&mut self, reason: impl Into<String>) {
        self.state = AgentState::Emergency {
            reason: reason.into(),
        };
    }

    pub fn step(&mut self, event: AgentEvent) -> Vec<AgentOutput> {
        let mut out = Vec::new();
        match (&self.state, event) {
            (AgentState::Closed, _) => {}
            (_, AgentEvent::Exception(reason)) => self.emergency(reason),
            (_, AgentEvent::Receive(Packet::Close { .. })) => {
                self.state = AgentState::Closed;
            }
            (AgentState::Disconnected, AgentEvent::Start) => {
                out.push(AgentOutput::Send(Packet::ConnectRequest));
                self.state = AgentState::Handshaking;
            }
            (AgentState::Handshaking, AgentEvent::Receive(Packet::ConnectResponse { connection_id })) => {
                self.connection_id = Some(connection_id);
                self.state = AgentState::Idle;
            }
            (_, AgentEvent::Receive(Packet::SetGeoFence(f))) => {
                if self.connection_id.is_some() {
                    self.fence = Some(f);
                } else {
                    self.emergency("geo-fence before handshake");
                }
            }
            (_, AgentEvent::StatusTick { t, position, battery }) => {
                if let Some(id) = self.connection_id {
                    out.push(AgentOutput::Send(Packet::Status(StatusReport {
                        connection_id: id,
                        t,
                        position,
                        battery,
                    })));
                }
            }
            (AgentState::Idle, AgentEvent::Receive(Packet::PerformActions { actions })) => {
                self.begin_task(actions, &mut out);
            }
            (AgentState::Emergency { .. }, AgentEvent::Receive(Packet::PerformActions { actions })) => {
                // high-priority task (e.g. return home) overrides the fault
                self.begin_task(actions, &mut out);
            }
            (AgentState::ExecutingStep, AgentEvent::ActionCompleted) => {
                self.advance_after_completion(&mut out);
            }
            (AgentState::AwaitingRelease, AgentEvent::Receive(Packet::Sync { phase, step })) => {
                let current = self.steps[self.step_idx].index;
                if phase == SyncPhase::Release && step == current {
                    self.enter_next_step(&mut out);
                }
                // releases for other steps are ignored: the barrier never
                // re-releases a step, so this can only be stale traffic
            }
            (_, AgentEvent::Receive(Packet::PerformActions { .. })) => {
                self.emergency("task delivery in invalid state");
            }
            (_, AgentEvent::Receive(Packet::ConnectResponse { .. })) => {
                self.emergency("unexpected connection response");
            }
            (_, AgentEvent::Receive(_)) => {}
            (_, AgentEvent::Start) => {}
            (_, AgentEvent::ActionCompleted) => {}
        }
        out
    }
}

impl Default for AgentMachine {
    fn default() -> Self {
        Self::new()
    }
}

/// Exception kinds raised by the monitor-side checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FleetException {
    LowBattery { battery: f64 },
    GeoFenceBreach { distance: f64 },
    LinkUnhealthy { age: f64 },
}

/// Snapshot fed to the exception checks.
#[derive(Debug, Clone, Copy)]
pub struct AgentStatusView {
    pub position: Point2,
    /// Battery fraction remaining in [0, 1].
    pub battery: f64,
    /// Seconds since the last packet from this agent.
    pub last_contact_age: f64,
}

pub const DEFAULT_BATTERY_FLOOR: f64 = 0.20;
pub const DEFAULT_LINK_TIMEOUT: f64 = 5.0;

/// Episodic exception detector: each condition fires once per continuous
/// violation episode and re-arms when the condition clears.
#[derive(Debug, Default, Clone)]
pub struct ExceptionMonitor {
    in_low_battery: bool,
    in_breach: bool,
    in_link_loss: bool,
}

impl ExceptionMonitor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(
        &mut self,
        status: &AgentStatusView,
        fence: Option<&GeoFence>,
        battery_floor: f64,
        link_timeout: f64,
    ) -> Vec<FleetException> {
        let mut out = Vec::new();

        let low = status.battery < battery_floor;
        if low && !self.in_low_battery {
            out.push(FleetException::LowBattery {
                battery: status.battery,
            });
        }
        self.in_low_battery = low;

        if let Some(fence) = fence {
            let dist = status.position.dist(fence.center);
            // boundary inclusive: sitting exactly on the radius is fine
            let breach = dist > fence.radius + 1e-9;
            if breach && !self.in_breach {
                out.push(FleetException::GeoFenceBreach { distance: dist });
            }
            self.in_breach = breach;
        }

        let lost = status.last_contact_age > link_timeout;
        if lost && !self.in_link_loss {
            out.push(FleetException::LinkUnhealthy {
                age: status.last_contact_age,
            });
        }
        self.in_link_loss = lost;

        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_action() -> impl Strategy<Value = Action> {
        (
            0..5u8,
            0..8u32,
            any::<bool>(),
            -50.0..50.0f64,
            -50.0..50.0f64,
            0.0..30.0f64,
        )
            .prop_map(|(kind, id, sync, a, b, dur)| match kind {
                0 => Action::simple(ActionKind::Takeoff, id, sync),
                1 => Action::goto_abs(id, Point2::new(a, b), sync),
                2 => Action {
                    kind: ActionKind::Goto,
                    connection_id: id,
                    sync,
                    relative_distance: Some((a, b)),
                    absolute_destination: None,
                    duration: None,
                },
                3 => Action::simple(ActionKind::Land, id, sync),
                4 => Action {
                    kind: ActionKind::Wait,
                    connection_id: id,
                    sync,
                    relative_distance: None,
                    absolute_destination: None,
                    duration: Some(dur),
                },
                _ => Action::simple(ActionKind::ReturnHome, id, sync),
            })
    }

    fn arb_packet() -> impl Strategy<Value = Packet> {
        prop_oneof![
            Just(Packet::ConnectRequest),
            any::<u32>().prop_map(|id| Packet::ConnectResponse { connection_id: id }),
            (0..100u32, 0.0..1000.0f64, -500.0..500.0f64, -500.0..500.0f64, 0.0..1.0f64)
                .prop_map(|(id, t, x, y, b)| Packet::Status(StatusReport {
                    connection_id: id,
                    t,
                    position: Point2::new(x, y),
                    battery: b,
                })),
            (-100.0..100.0f64, -100.0..100.0f64, 1.0..500.0f64).prop_map(|(x, y, r)| {
                Packet::SetGeoFence(GeoFence {
                    center: Point2::new(x, y),
                    radius: r,
                })
            }),
            proptest::collection::vec(arb_action(), 0..5)
                .prop_map(|actions| Packet::PerformActions { actions }),
            (any::<bool>(), 0..50u64).prop_map(|(done, step)| Packet::Sync {
                phase: if done { SyncPhase::Done } else { SyncPhase::Release },
                step,
            }),
            any::<u32>().prop_map(|id| Packet::Close { connection_id: id }),
        ]
    }

    #[test]
    fn handshake_roundtrip() {
        let p = Packet::ConnectRequest;
        let line = encode(&p);
        assert_eq!(line, "{\"type\":0,\"body\":{}}\n");
        assert_eq!(decode(&line).unwrap(), p);
    }

    #[test]
    fn geofence_roundtrip_matches_shape() {
        let p = Packet::SetGeoFence(GeoFence {
            center: Point2::new(0.0, 0.0),
            radius: 50.0,
        });
        let line = encode(&p);
        assert_eq!(line, "{\"type\":3,\"body\":{\"center\":[0.0,0.0],\"radius\":50.0}}\n");
        assert_eq!(decode(&line).unwrap(), p);
    }

    #[test]
    fn decode_rejects_bad_input() {
        assert_eq!(
            decode("{\"type\":0,\"body\":{}}"),
            Err(ProtocolError::MissingNewline)
        );
        assert!(matches!(
            decode("{\"type\":9,\"body\":{}}\n"),
            Err(ProtocolError::UnknownType(9))
        ));
        match decode("{\"type\":1,\"body\":{}}\n") {
            Err(ProtocolError::MalformedBody { ptype: 1, detail }) => {
                assert!(detail.contains("connection_id"), "{detail}");
            }
            other => panic!("expected malformed body, got {other:?}"),
        }
        assert!(matches!(
            decode("not json\n"),
            Err(ProtocolError::MalformedLine(_))
        ));
    }

    proptest! {
        #[test]
        fn packets_roundtrip_byte_identically(p in arb_packet()) {
            let line = encode(&p);
            let back = decode(&line).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(encode(&back), line);
        }

        #[test]
        fn partition_is_a_round_trip(task in proptest::collection::vec(arb_action(), 0..20)) {
            let steps = partition_steps(&task);
            let flat: Vec<Action> = steps.iter().flat_map(|s| s.actions.clone()).collect();
            prop_assert_eq!(flat, task);
            for step in &steps {
                let syncs = step.actions.iter().filter(|a| a.sync).count();
                prop_assert!(syncs <= 1);
                if syncs == 1 {
                    prop_assert!(step.actions.last().unwrap().sync);
                }
            }
        }
    }

    #[test]
    fn partition_examples() {
        let a = |sync| Action::simple(ActionKind::Wait, 0, sync);
        assert_eq!(partition_steps(&[a(false), a(false), a(false)]).len(), 1);
        let two = partition_steps(&[a(true), a(true)]);
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].actions.len(), 1);
        assert_eq!(two[1].index, 1);
    }

    #[test]
    fn barrier_releases_once_per_step() {
        let mut barrier = MonitorBarrier::new();
        for id in [1, 2, 3] {
            barrier.register(id);
        }
        assert_eq!(barrier.on_sync(2, 0).unwrap(), BarrierOutcome::Pending);
        assert_eq!(barrier.on_sync(1, 0).unwrap(), BarrierOutcome::Pending);
        assert_eq!(barrier.on_sync(1, 0).unwrap(), BarrierOutcome::Duplicate);
        assert_eq!(barrier.on_sync(3, 0).unwrap(), BarrierOutcome::Release(0));
        // stale and unknown afterwards
        assert_eq!(
            barrier.on_sync(1, 0).unwrap(),
            BarrierOutcome::Stale { step: 0 }
        );
        assert_eq!(barrier.on_sync(9, 1), Err(ProtocolError::UnknownAgent(9)));
        assert!(matches!(
            barrier.on_sync(1, 5),
            Err(ProtocolError::FutureStep { .. })
        ));
    }

    #[test]
    fn machine_happy_path() {
        let mut m = AgentMachine::new();
        let out = m.step(AgentEvent::Start);
        assert_eq!(out, vec![AgentOutput::Send(Packet::ConnectRequest)]);
        assert_eq!(m.state, AgentState::Handshaking);
        m.step(AgentEvent::Receive(Packet::ConnectResponse { connection_id: 4 }));
        assert_eq!(m.state, AgentState::Idle);

        let task = vec![
            Action::goto_abs(4, Point2::new(1.0, 1.0), false),
            Action::goto_abs(4, Point2::new(2.0, 2.0), true),
            Action::simple(ActionKind::Land, 4, true),
        ];
        let out = m.step(AgentEvent::Receive(Packet::PerformActions { actions: task }));
        assert!(matches!(out.as_slice(), [AgentOutput::Execute(_)]));
        assert_eq!(m.state, AgentState::ExecutingStep);

        let out = m.step(AgentEvent::ActionCompleted);
        assert!(matches!(out.as_slice(), [AgentOutput::Execute(_)]));
        let out = m.step(AgentEvent::ActionCompleted);
        assert_eq!(
            out,
            vec![AgentOutput::Send(Packet::Sync { phase: SyncPhase::Done, step: 0 })]
        );
        assert_eq!(m.state, AgentState::AwaitingRelease);

        let out = m.step(AgentEvent::Receive(Packet::Sync {
            phase: SyncPhase::Release,
            step: 0,
        }));
        assert!(matches!(out.as_slice(), [AgentOutput::Execute(_)]));
        assert_eq!(m.state, AgentState::ExecutingStep);
        let out = m.step(AgentEvent::ActionCompleted);
        assert_eq!(
            out,
            vec![AgentOutput::Send(Packet::Sync { phase: SyncPhase::Done, step: 1 })]
        );
        m.step(AgentEvent::Receive(Packet::Sync {
            phase: SyncPhase::Release,
            step: 1,
        }));
        assert_eq!(m.state, AgentState::Idle);
    }

    #[test]
    fn machine_status_tick_reports_when_connected() {
        let mut m = AgentMachine::new();
        let none = m.step(AgentEvent::StatusTick {
            t: 0.0,
            position: Point2::new(0.0, 0.0),
            battery: 1.0,
        });
        assert!(none.is_empty());
        m.step(AgentEvent::Start);
        m.step(AgentEvent::Receive(Packet::ConnectResponse { connection_id: 7 }));
        let out = m.step(AgentEvent::StatusTick {
            t: 1.0,
            position: Point2::new(3.0, 4.0),
            battery: 0.9,
        });
        match out.as_slice() {
            [AgentOutput::Send(Packet::Status(s))] => {
                assert_eq!(s.connection_id, 7);
                assert_eq!(s.battery, 0.9);
            }
            other => panic!("unexpected output {other:?}"),
        }
    }

    #[test]
    fn machine_protocol_violation_goes_emergency() {
        let mut m = AgentMachine::new();
        m.step(AgentEvent::Receive(Packet::PerformActions { actions: vec![] }));
        assert!(matches!(m.state, AgentState::Emergency { .. }));
        // high-priority task recovers it
        let out = m.step(AgentEvent::Receive(Packet::PerformActions {
            actions: vec![Action::simple(ActionKind::ReturnHome, 0, false)],
        }));
        assert!(matches!(out.as_slice(), [AgentOutput::Execute(_)]));
        assert_eq!(m.state, AgentState::ExecutingStep);
    }

    #[test]
    fn machine_never_reaches_undefined_transition_under_fuzz() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let mut m = AgentMachine::new();
            for _ in 0..60 {
                let ev = match rng.gen_range(0..6) {
                    0 => AgentEvent::Start,
                    1 => AgentEvent::Receive(Packet::ConnectResponse {
                        connection_id: rng.gen_range(0..4),
                    }),
                    2 => AgentEvent::Receive(Packet::PerformActions {
                        actions: vec![Action::goto_abs(0, Point2::new(1.0, 2.0), rng.gen())],
                    }),
                    3 => AgentEvent::ActionCompleted,
                    4 => AgentEvent::Receive(Packet::Sync {
                        phase: if rng.gen() { SyncPhase::Release } else { SyncPhase::Done },
                        step: rng.gen_range(0..3),
                    }),
                    _ => AgentEvent::StatusTick {
                        t: 0.0,
                        position: Point2::new(0.0, 0.0),
                        battery: 1.0,
                    },
                };
                let _ = m.step(ev); // must not panic
            }
        }
    }

    #[test]
    fn exception_monitor_thresholds() {
        let fence = GeoFence {
            center: Point2::new(0.0, 0.0),
            radius: 50.0,
        };
        let mut mon = ExceptionMonitor::new();
        let at = |x: f64, battery: f64| AgentStatusView {
            position: Point2::new(x, 0.0),
            battery,
            last_contact_age: 0.0,
        };
        let out = mon.check(&at(0.0, 0.19), Some(&fence), DEFAULT_BATTERY_FLOOR, 5.0);
        assert!(matches!(out.as_slice(), [FleetException::LowBattery { .. }]));
        // exactly on the fence: inclusive, no breach
        let out = mon.check(&at(50.0, 0.19), Some(&fence), DEFAULT_BATTERY_FLOOR, 5.0);
        assert!(out.is_empty());
        let out = mon.check(&at(50.1, 0.19), Some(&fence), DEFAULT_BATTERY_FLOOR, 5.0);
        assert!(matches!(out.as_slice(), [FleetException::GeoFenceBreach { .. }]));
    }

    #[test]
    fn exception_monitor_fires_once_per_episode() {
        let mut mon = ExceptionMonitor::new();
        let status = |battery: f64| AgentStatusView {
            position: Point2::new(0.0, 0.0),
            battery,
            last_contact_age: 0.0,
        };
        // oscillate around the floor: one exception per downward crossing
        let series = [0.25, 0.19, 0.18, 0.22, 0.19, 0.17, 0.16, 0.30, 0.10];
        let mut fired = 0;
        for b in series {
            fired += mon
                .check(&status(b), None, DEFAULT_BATTERY_FLOOR, 5.0)
                .len();
        }
        assert_eq!(fired, 3);
    }
}

//! Fleet path planning by iterated convex-hull ring scanning.
//!
//! The planner peels the target set like an onion. Each round takes the
//! convex hull of the remaining targets as the outer boundary, offsets it
//! inward by the fleet's formation span `w_max = (m-1)*w` to get the inner
//! boundary, and sweeps the ring between them with the fleet in a line
//! formation perpendicular to the boundary: the outermost UAV rides the
//! hull, inner UAVs ride parallel offset lines at depths `(j-1)*w`.
//! Targets strictly inside a ring are picked up by short inward excursions
//! of the whole formation; targets inside the inner boundary wait for the
//! next round. Rounds are stitched together along the shortest transfer
//! segment from the innermost hull to the outermost boundary.
//!
//! Cost accounting follows the formation anchor (the boundary UAV): one
//! round costs the outer perimeter plus twice the excursions, and the
//! fleet cost is the sum over rounds plus the transfer length. Formation
//! re-aiming at polygon corners moves the inner UAVs but not the anchor;
//! that travel is charged to no one, which keeps the anchor the critical
//! route. The lower bound is the same ledger without the excursion term.
//!
//! Waypoint streams are built so that slot-discretization (`model::discretize`)
//! keeps the formation exact at every slot: corresponding legs of all UAVs
//! either have equal length (edge runs, excursions, transfers) or take the
//! same number of slots (corner pivots are subdivided until every chord
//! fits in one slot; the anchor hovers via repeated waypoints).

use crate::geometry::{
    convex_hull, distance_to_boundary, inward_offset, project_onto_boundary, ring_membership,
    segment_polygon_intersection, ConvexPolygon, Degeneracy, Edge, GeometryError, Point2, EPS,
};
use crate::model::{FleetConfig, Instance, ModelError, PlanReport, EPS_COV};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

/// Along-coordinate tolerance for grouping targets onto one scanning line.
pub const EPS_LINE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("target {0:?} outside ring")]
    TargetOutsideRing(Point2),
    #[error("ring decomposition stalled")]
    DecompositionStalled,
    #[error("nothing to plan")]
    NothingToPlan,
}

/// One scanning round: the area between an outer hull and its inward
/// offset, the targets it owns, and the boundary point where the fleet
/// enters and leaves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingRegion {
    pub round_index: usize,
    pub outer: ConvexPolygon,
    pub inner: Option<ConvexPolygon>,
    pub targets: Vec<Point2>,
    pub entry: Point2,
}

/// Targets sharing one scanning line, with the formation excursion needed
/// to reach the deepest of them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanGroup {
    pub edge_index: usize,
    pub along: f64,
    /// (target, perpendicular depth from the outer boundary)
    pub members: Vec<(Point2, f64)>,
    pub excursion: f64,
}

/// A complete fleet plan: per-UAV waypoints plus the cost ledger.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Plan {
    pub waypoints: Vec<Vec<Point2>>,
    pub report: PlanReport,
    #[serde(skip)]
    pub rings: Vec<RingRegion>,
    #[serde(skip)]
    pub groups: Vec<Vec<ScanGroup>>,
}

/// Iteratively peel convex hulls off the remaining targets.
///
/// Ring k owns every remaining target between its hull and the hull's
/// inward offset by `w_max` (inner-boundary points inclusive). With a
/// single UAV the span is zero and each ring is just the hull boundary.
pub fn decompose_rings(
    targets: &[Point2],
    fleet: &FleetConfig,
) -> Result<Vec<RingRegion>, PlannerError> {
    if targets.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite.into());
    }
    let w_max = fleet.w_max();
    let mut remaining: Vec<Point2> = targets.to_vec();
    let mut rings = Vec::new();
    let mut round_index = 0;
    while !remaining.is_empty() {
        let outer = convex_hull(&remaining)?;
        let inner = if w_max <= EPS {
            Some(outer.clone()) // ring degenerates to the boundary itself
        } else {
            inward_offset(&outer, w_max)
        };
        let (mine, rest): (Vec<Point2>, Vec<Point2>) = remaining
            .into_iter()
            .partition(|p| ring_membership(*p, &outer, inner.as_ref()));
        if mine.is_empty() {
            return Err(PlannerError::DecompositionStalled);
        }
        let entry = default_entry(&outer, &mine);
        rings.push(RingRegion {
            round_index,
            outer,
            inner,
            targets: mine,
            entry,
        });
        remaining = rest;
        round_index += 1;
    }
    Ok(rings)
}

/// Boundary point closest to the targets' centroid; used for single-ring
/// plans and as a deterministic placeholder until the transfer scheme
/// assigns real entries.
fn default_entry(outer: &ConvexPolygon, targets: &[Point2]) -> Point2 {
    let n = targets.len() as f64;
    let centroid = targets.iter().fold(Point2::new(0.0, 0.0), |acc, p| {
        Point2::new(acc.x + p.x / n, acc.y + p.y / n)
    });
    distance_to_boundary(centroid, outer).1
}

/// Group the ring's targets by scanning line.
///
/// Each target projects perpendicular onto the outer boundary; targets on
/// the same edge with along-coordinates within [`EPS_LINE`] share a line.
/// The excursion is how far the formation must dip so that some UAV lane
/// passes the deepest member: a target at depth d is first reached at
/// inward displacement `d mod w`, snapped to zero when the target already
/// sits within [`EPS_COV`] of a lane.
pub fn scan_groups(ring: &RingRegion, fleet: &FleetConfig) -> Result<Vec<ScanGroup>, PlannerError> {
    if ring.outer.degeneracy() == Degeneracy::Point {
        return Ok(Vec::new());
    }
    let mut projected: Vec<(usize, f64, Point2, f64)> = Vec::new();
    for &p in &ring.targets {
        if !ring_membership(p, &ring.outer, ring.inner.as_ref()) {
            return Err(PlannerError::TargetOutsideRing(p));
        }
        let proj = project_onto_boundary(p, &ring.outer)?;
        let edge_len = edge_by_index(&ring.outer, proj.edge_index).length;
        let along = proj.along.clamp(0.0, edge_len);
        projected.push((proj.edge_index, along, p, proj.depth));
    }
    projected.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));

    let mut groups: Vec<ScanGroup> = Vec::new();
    for (edge_index, along, p, depth) in projected {
        let fits = groups.last().map_or(false, |g: &ScanGroup| {
            g.edge_index == edge_index && (along - g.along).abs() <= EPS_LINE
        });
        if !fits {
            groups.push(ScanGroup {
                edge_index,
                along,
                members: Vec::new(),
                excursion: 0.0,
            });
        }
        let group = groups.last_mut().unwrap();
        group.members.push((p, depth));
        let a = lane_excursion(depth, fleet);
        if a > group.excursion {
            group.excursion = a;
        }
    }
    Ok(groups)
}

/// Inward displacement needed for some lane to pass depth `d` exactly;
/// zero when a lane already passes within coverage tolerance.
pub fn lane_excursion(depth: f64, fleet: &FleetConfig) -> f64 {
    let w = fleet.w;
    let lane = ((depth / w).floor() as usize).min(fleet.m - 1);
    let a = depth - lane as f64 * w;
    if a <= EPS_COV {
        return 0.0;
    }
    if lane + 1 < fleet.m && w - a <= EPS_COV {
        return 0.0;
    }
    a
}

fn edge_by_index(poly: &ConvexPolygon, index: usize) -> Edge {
    poly.edges()
        .into_iter()
        .find(|e| e.index == index)
        .expect("edge index from projection is valid")
}

/// Edge of the boundary containing point `c` (preferring the edge where
/// `c` is not the end vertex, so an entry at a vertex starts that edge).
fn boundary_edge_at(poly: &ConvexPolygon, c: Point2) -> Option<Edge> {
    let edges = poly.edges();
    let mut best: Option<(f64, Edge)> = None;
    for e in &edges {
        let along = (c.x - e.start.x) * e.tangent.0 + (c.y - e.start.y) * e.tangent.1;
        let foot = e.start.lerp(e.end, (along / e.length).clamp(0.0, 1.0));
        let dist = c.dist(foot);
        if dist <= 1e-6 && along <= e.length - 1e-9 {
            return Some(*e);
        }
        if best.as_ref().map_or(true, |(d, _)| dist < *d) {
            best = Some((dist, *e));
        }
    }
    best.map(|(_, e)| e)
}

fn rotate(v: (f64, f64), angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (v.0 * c - v.1 * s, v.0 * s + v.1 * c)
}

fn angle_between(from: (f64, f64), to: (f64, f64)) -> f64 {
    (from.0 * to.1 - from.1 * to.0).atan2(from.0 * to.0 + from.1 * to.1)
}

/// Builder for the synchronized per-UAV waypoint streams.
///
/// A formation state is an anchor point plus a unit spread direction; UAV j
/// sits at `anchor + j*w*spread`. Emitting a state appends one waypoint per
/// UAV, so corresponding legs line up across the fleet by construction.
struct FormationPath {
    streams: Vec<Vec<Point2>>,
    spacing: f64,
    anchor: Point2,
    spread: (f64, f64),
    /// Maximum pivot step in radians: keeps every rotation chord within one
    /// slot and bounds formation skew while UAVs fly chords at equal speed.
    max_pivot_step: f64,
}

impl FormationPath {
    fn new(fleet: &FleetConfig, anchor: Point2, spread: (f64, f64)) -> Self {
        let w_max = fleet.w_max();
        let max_pivot_step = if w_max <= EPS {
            std::f64::consts::PI
        } else {
            let slot_cap = 2.0 * (fleet.d_max / (2.0 * w_max)).min(1.0).asin();
            let skew_cap = fleet.w.sqrt() / w_max;
            slot_cap.min(skew_cap).max(1e-3)
        };
        let mut fp = Self {
            streams: vec![Vec::new(); fleet.m],
            spacing: fleet.w,
            anchor,
            spread,
            max_pivot_step,
        };
        fp.emit();
        fp
    }

    fn emit(&mut self) {
        for (j, stream) in self.streams.iter_mut().enumerate() {
            let d = j as f64 * self.spacing;
            let p = Point2::new(
                self.anchor.x + d * self.spread.0,
                self.anchor.y + d * self.spread.1,
            );
            if stream.last().map_or(true, |q: &Point2| q.dist(p) > 1e-12) {
                stream.push(p);
            }
        }
    }

    /// Translate the whole formation so the anchor lands on `to`.
    fn translate_to(&mut self, to: Point2) {
        if self.anchor.dist(to) <= 1e-12 {
            return;
        }
        self.anchor = to;
        self.emit();
    }

    /// Dip the formation `depth` metres along the spread and come back.
    fn excursion(&mut self, depth: f64) {
        if depth <= 0.0 {
            return;
        }
        let home = self.anchor;
        self.translate_to(Point2::new(
            home.x + depth * self.spread.0,
            home.y + depth * self.spread.1,
        ));
        self.translate_to(home);
    }

    /// Rigidly rotate the spread onto `target` about the anchor, in steps
    /// small enough that every UAV's chord fits in one slot. The anchor
    /// holds position (repeated waypoints discretize to hover slots).
    fn pivot_to(&mut self, target: (f64, f64)) {
        let total = angle_between(self.spread, target);
        if total.abs() <= 1e-12 {
            return;
        }
        if self.streams.len() == 1 {
            self.spread = target;
            return; // a lone UAV has no formation to re-aim
        }
        let steps = (total.abs() / self.max_pivot_step).ceil().max(1.0) as usize;
        let start = self.spread;
        for s in 1..=steps {
            self.spread = rotate(start, total * s as f64 / steps as f64);
            self.emit_forced();
        }
        self.spread = target; // kill accumulated rounding
    }

    /// Emit even when a stream's position is unchanged (anchor hover).
    fn emit_forced(&mut self) {
        for (j, stream) in self.streams.iter_mut().enumerate() {
            let d = j as f64 * self.spacing;
            stream.push(Point2::new(
                self.anchor.x + d * self.spread.0,
                self.anchor.y + d * self.spread.1,
            ));
        }
    }
}

struct RingScan {
    cost: f64,
    groups: Vec<ScanGroup>,
}

/// Sweep one ring with the formation, appending waypoints to `path`.
///
/// The anchor enters at `ring.entry`, traverses the outer boundary CCW back
/// to the entry, dips inward at every scanning line with a positive
/// excursion, and re-aims at each corner. Returns the round cost
/// `perimeter + sum of 2*excursion` and the scan groups.
fn scan_ring(
    ring: &RingRegion,
    fleet: &FleetConfig,
    path: &mut FormationPath,
) -> Result<RingScan, PlannerError> {
    let groups = scan_groups(ring, fleet)?;
    let adjust: f64 = groups.iter().map(|g| 2.0 * g.excursion).sum();

    match ring.outer.degeneracy() {
        Degeneracy::Point => {
            path.translate_to(ring.entry);
            return Ok(RingScan {
                cost: adjust,
                groups,
            });
        }
        _ => {}
    }

    let entry_edge =
        boundary_edge_at(&ring.outer, ring.entry).ok_or(GeometryError::NoEdges)?;
    path.translate_to(ring.entry);
    path.pivot_to(entry_edge.normal);

    let edges = ring.outer.edges();
    let n = edges.len();
    let along_entry = (ring.entry.x - entry_edge.start.x) * entry_edge.tangent.0
        + (ring.entry.y - entry_edge.start.y) * entry_edge.tangent.1;

    // Walk the boundary as (edge, window) segments starting and ending at
    // the entry point.
    let mut legs: Vec<(Edge, f64, f64)> = Vec::new();
    legs.push((entry_edge, along_entry, entry_edge.length));
    for off in 1..n {
        let e = edges[(entry_edge.index + off) % n];
        legs.push((e, 0.0, e.length));
    }
    if along_entry > 1e-9 {
        legs.push((entry_edge, 0.0, along_entry));
    }

    for (i, &(edge, from, to)) in legs.iter().enumerate() {
        if i > 0 {
            // we just arrived at this edge's start vertex: re-aim
            path.pivot_to(edge.normal);
        }
        let first_window = i == 0;
        let mut stops: Vec<&ScanGroup> = groups
            .iter()
            .filter(|g| g.edge_index == edge.index && g.excursion > 0.0)
            .filter(|g| {
                if edge.index != entry_edge.index {
                    true
                } else if first_window {
                    g.along >= from - EPS_LINE
                } else {
                    g.along < along_entry - EPS_LINE
                }
            })
            .collect();
        stops.sort_by(|a, b| a.along.partial_cmp(&b.along).unwrap());
        for g in stops {
            let foot = Point2::new(
                edge.start.x + g.along * edge.tangent.0,
                edge.start.y + g.along * edge.tangent.1,
            );
            path.translate_to(foot);
            path.excursion(g.excursion);
        }
        let end = Point2::new(
            edge.start.x + to * edge.tangent.0,
            edge.start.y + to * edge.tangent.1,
        );
        path.translate_to(end);
    }
    // close the loop at the entry (a full traversal already ends there,
    // but guard the degenerate-segment bookkeeping)
    path.translate_to(ring.entry);

    Ok(RingScan {
        cost: ring.outer.perimeter() + adjust,
        groups,
    })
}

/// Single-round scanning: waypoints for one ring plus its cost.
pub fn psta_scan(
    ring: &RingRegion,
    fleet: &FleetConfig,
) -> Result<(Vec<Vec<Point2>>, f64), PlannerError> {
    let spread = boundary_edge_at(&ring.outer, ring.entry)
        .map(|e| e.normal)
        .unwrap_or((0.0, 1.0));
    let mut path = FormationPath::new(fleet, ring.entry, spread);
    let scan = scan_ring(ring, fleet, &mut path)?;
    Ok((path.streams, scan.cost))
}

/// Entry points and total length of the transfer scheme.
///
/// The transfer segment runs from the innermost hull vertex closest to the
/// outermost boundary out to that closest boundary point; it crosses each
/// ring boundary exactly once by nesting, and those crossings are the
/// per-round entries. A single round needs no transfer.
pub fn transfer_path(rings: &[RingRegion]) -> (Vec<Point2>, f64) {
    let k = rings.len();
    if k == 0 {
        return (Vec::new(), 0.0);
    }
    if k == 1 {
        return (vec![default_entry(&rings[0].outer, &rings[0].targets)], 0.0);
    }
    let innermost = &rings[k - 1].outer;
    let mut best: Option<(f64, Point2, Point2)> = None;
    for &v in innermost.vertices() {
        let (d, closest) = distance_to_boundary(v, &rings[0].outer);
        if best.as_ref().map_or(true, |(bd, _, _)| d < *bd) {
            best = Some((d, v, closest));
        }
    }
    let (l_trans, v_star, b_star) = best.expect("innermost hull has vertices");
    let mut entries = Vec::with_capacity(k);
    entries.push(b_star);
    for ring in rings.iter().take(k - 1).skip(1) {
        let hits = segment_polygon_intersection(v_star, b_star, &ring.outer);
        let c = hits
            .first()
            .copied()
            .unwrap_or_else(|| distance_to_boundary(v_star, &ring.outer).1);
        entries.push(c);
    }
    entries.push(v_star);
    (entries, l_trans)
}

fn assemble(
    instance: &Instance,
    rings: Vec<RingRegion>,
    approach: Option<&[Point2]>,
) -> Result<Plan, PlannerError> {
    let fleet = &instance.fleet;
    let (entries, mut l_trans) = transfer_path(&rings);
    let mut rings = rings;
    for (ring, entry) in rings.iter_mut().zip(&entries) {
        ring.entry = *entry;
    }

    let first_spread = boundary_edge_at(&rings[0].outer, rings[0].entry)
        .map(|e| e.normal)
        .unwrap_or((0.0, 1.0));

    let mut path = match approach {
        None => FormationPath::new(fleet, rings[0].entry, first_spread),
        Some(current) => {
            // Resume from wherever the fleet is: translate the current
            // shape to the new entry, then reassemble the line formation.
            let anchor = current[0];
            let mut path = FormationPath::new(fleet, anchor, first_spread);
            path.streams = vec![Vec::new(); fleet.m];
            for (j, stream) in path.streams.iter_mut().enumerate() {
                stream.push(*current.get(j).unwrap_or(&anchor));
            }
            let shift = (rings[0].entry.x - anchor.x, rings[0].entry.y - anchor.y);
            l_trans += anchor.dist(rings[0].entry);
            let shifted: Vec<Point2> = path
                .streams
                .iter()
                .map(|s| s.last().unwrap().add(shift.0, shift.1))
                .collect();
            if shift.0.hypot(shift.1) > 1e-12 {
                for (stream, p) in path.streams.iter_mut().zip(&shifted) {
                    stream.push(*p);
                }
            }
            let slots: Vec<Point2> = (0..fleet.m)
                .map(|j| {
                    let d = j as f64 * fleet.w;
                    Point2::new(
                        rings[0].entry.x + d * first_spread.0,
                        rings[0].entry.y + d * first_spread.1,
                    )
                })
                .collect();
            // equal slot counts for the reassembly legs
            let reassembly: f64 = shifted
                .iter()
                .zip(&slots)
                .map(|(a, b)| a.dist(*b))
                .fold(0.0, f64::max);
            if reassembly > 1e-9 {
                let steps = ((reassembly - 1e-9) / fleet.d_max).ceil().max(1.0) as usize;
                for (j, stream) in path.streams.iter_mut().enumerate() {
                    for s in 1..=steps {
                        stream.push(shifted[j].lerp(slots[j], s as f64 / steps as f64));
                    }
                }
            }
            path.anchor = rings[0].entry;
            path.spread = first_spread;
            path
        }
    };

    let mut per_round_boundary = Vec::with_capacity(rings.len());
    let mut adjust_total = 0.0;
    let mut all_groups = Vec::with_capacity(rings.len());
    for (k, ring) in rings.iter().enumerate() {
        if k > 0 {
            path.translate_to(ring.entry);
        }
        let scan = scan_ring(ring, fleet, &mut path)?;
        per_round_boundary.push(ring.outer.perimeter());
        adjust_total += scan.groups.iter().map(|g| 2.0 * g.excursion).sum::<f64>();
        all_groups.push(scan.groups);
    }

    let lower_bound: f64 = per_round_boundary.iter().sum::<f64>() + l_trans;
    let fleet_cost = lower_bound + adjust_total;
    let report = PlanReport {
        per_uav_distance: vec![fleet_cost; fleet.m],
        fleet_cost,
        lower_bound,
        adjust: adjust_total,
        transfer: l_trans,
        rounds: rings.len(),
        per_round_boundary,
    };
    Ok(Plan {
        waypoints: path.streams,
        report,
        rings,
        groups: all_groups,
    })
}

/// Plan a full mission: decompose into rings, scan each, stitch with the
/// transfer scheme. The fleet starts at the first entry in formation.
pub fn psa_plan(instance: &Instance) -> Result<Plan, PlannerError> {
    instance.validate()?;
    let rings = decompose_rings(&instance.targets, &instance.fleet)?;
    assemble(instance, rings, None)
}

/// Lower bound on any feasible fleet cost: boundary perimeters plus the
/// transfer length (the excursion term drops).
pub fn lower_bound(plan: &Plan) -> f64 {
    plan.rings
        .iter()
        .map(|r| r.outer.perimeter())
        .sum::<f64>()
        + plan.report.transfer
}

/// Nearest-neighbour baseline: a rigid vertical line formation translates
/// to the closest unvisited target until everything is swept.
pub fn greedy_plan(instance: &Instance) -> Result<Plan, PlannerError> {
    instance.validate()?;
    let fleet = &instance.fleet;
    let m = fleet.m;
    let n = instance.targets.len() as f64;
    let centroid = instance
        .targets
        .iter()
        .fold(Point2::new(0.0, 0.0), |acc, p| {
            Point2::new(acc.x + p.x / n, acc.y + p.y / n)
        });
    let mut positions: Vec<Point2> = (0..m)
        .map(|j| Point2::new(centroid.x, centroid.y + j as f64 * fleet.w))
        .collect();
    let mut waypoints: Vec<Vec<Point2>> = positions.iter().map(|p| vec![*p]).collect();
    let mut visited = vec![false; instance.targets.len()];
    for (i, t) in instance.targets.iter().enumerate() {
        if positions.iter().any(|p| p.dist(*t) <= EPS_COV) {
            visited[i] = true;
        }
    }
    let mut cost = 0.0;
    loop {
        let mut pick: Option<(f64, usize, usize)> = None; // (dist, target, uav)
        for (i, t) in instance.targets.iter().enumerate() {
            if visited[i] {
                continue;
            }
            for (j, p) in positions.iter().enumerate() {
                let d = p.dist(*t);
                let better = pick.map_or(true, |(bd, bi, bj)| {
                    d < bd - 1e-12 || ((d - bd).abs() <= 1e-12 && (i, j) < (bi, bj))
                });
                if better {
                    pick = Some((d, i, j));
                }
            }
        }
        let Some((dist, target_idx, uav)) = pick else {
            break;
        };
        let target = instance.targets[target_idx];
        let shift = (target.x - positions[uav].x, target.y - positions[uav].y);
        let moved: Vec<Point2> = positions.iter().map(|p| p.add(shift.0, shift.1)).collect();
        for (i, t) in instance.targets.iter().enumerate() {
            if visited[i] {
                continue;
            }
            let hit = positions.iter().zip(&moved).any(|(a, b)| {
                crate::geometry::point_segment_distance(*t, *a, *b).0 <= EPS_COV
            });
            if hit {
                visited[i] = true;
            }
        }
        visited[target_idx] = true;
        for (stream, p) in waypoints.iter_mut().zip(&moved) {
            stream.push(*p);
        }
        positions = moved;
        cost += dist;
    }
    let report = PlanReport {
        per_uav_distance: vec![cost; m],
        fleet_cost: cost,
        lower_bound: 0.0,
        adjust: 0.0,
        transfer: 0.0,
        rounds: 0,
        per_round_boundary: Vec::new(),
    };
    Ok(Plan {
        waypoints,
        report,
        rings: Vec::new(),
        groups: Vec::new(),
    })
}

/// Replan mid-mission over the targets not yet visited, approaching the new
/// first ring from the fleet's current position.
pub fn replan(
    instance: &Instance,
    visited: &HashSet<usize>,
    fleet_positions: &[Point2],
) -> Result<Plan, PlannerError> {
    let unvisited: Vec<Point2> = instance
        .targets
        .iter()
        .enumerate()
        .filter(|(i, _)| !visited.contains(i))
        .map(|(_, p)| *p)
        .collect();
    if unvisited.is_empty() {
        return Err(PlannerError::NothingToPlan);
    }
    let sub = Instance {
        targets: unvisited,
        ..instance.clone()
    };
    let rings = decompose_rings(&sub.targets, &sub.fleet)?;
    assemble(&sub, rings, Some(fleet_positions))
}

//! Route specification and compiled centreline geometry.
//!
//! A route is a list of segments (command, length, junction flag) compiled
//! into a world-frame polyline sampled every half metre. Turn segments are
//! quarter-circle arcs whose radius follows from the segment length; the
//! active navigation command switches to the turn command a fixed distance
//! before the arc so the direction monitor has an approach phase to observe.

use alloc::string::String;
use alloc::vec::Vec;

use crate::math;
use crate::scene::{Lane, NavigationIntent, Vec2, Weather};

/// Polyline sampling step, metres.
pub const ROUTE_STEP_M: f64 = 0.5;
/// Distance before a turn arc at which the turn command becomes active.
pub const TURN_COMMAND_ACTIVATION_M: f64 = 12.0;
/// Margin added around a junction's geometric extent.
pub const JUNCTION_DISC_MARGIN_M: f64 = 4.0;
/// Length of the junction box crossed by a straight segment flagged
/// `junction_at_end`.
pub const JUNCTION_BOX_LEN_M: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RouteSegment {
    pub command: NavigationIntent,
    pub length_m: f64,
    pub junction_at_end: bool,
}

impl RouteSegment {
    pub fn new(command: NavigationIntent, length_m: f64) -> Self {
        RouteSegment { command, length_m, junction_at_end: false }
    }
}

/// Fixed-cycle scripted traffic signal applied to the route's junctions.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignalScript {
    pub green_s: f64,
    pub yellow_s: f64,
    pub red_s: f64,
    pub offset_s: f64,
}

/// Deterministic actor spawn rules, positioned by route arc-length and
/// signed lateral offset (positive = right of the centreline).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "kind"))]
pub enum ActorScript {
    /// A stationary vehicle.
    Parked { s: f64, lateral: f64 },
    /// A vehicle driving along the route at constant speed.
    Lead { s: f64, lateral: f64, speed_kmh: f64 },
    /// A pedestrian waiting at `lateral_from`, crossing to the mirrored side
    /// once the ego is within `trigger_m` of its station.
    CrossingPed { s: f64, lateral_from: f64, speed_ms: f64, trigger_m: f64 },
    /// `count` vehicles driving against the route direction, the first at
    /// `s_front`, the rest spaced `spacing_m` further along.
    OncomingStream { s_front: f64, lateral: f64, speed_kmh: f64, count: u32, spacing_m: f64 },
}

/// Route specification: drives geometry compilation, scripted traffic, and
/// the scene's static context. Deterministic for a given seed.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RouteSpec {
    pub label: String,
    pub segments: Vec<RouteSegment>,
    pub speed_limit_kmh: f64,
    pub scripted_actors: Vec<ActorScript>,
    pub seed: u64,
    #[cfg_attr(feature = "serde", serde(default = "default_lanes"))]
    pub lanes_open: Vec<Lane>,
    #[cfg_attr(feature = "serde", serde(default = "Weather::clear"))]
    pub weather: Weather,
    #[cfg_attr(feature = "serde", serde(default))]
    pub signal: Option<SignalScript>,
}

fn default_lanes() -> Vec<Lane> {
    alloc::vec![Lane::Ego]
}

impl RouteSpec {
    pub fn new(label: &str, segments: Vec<RouteSegment>, speed_limit_kmh: f64, seed: u64) -> Self {
        RouteSpec {
            label: String::from(label),
            segments,
            speed_limit_kmh,
            scripted_actors: Vec::new(),
            seed,
            lanes_open: default_lanes(),
            weather: Weather::clear(),
            signal: None,
        }
    }

    /// Same route with a different seed (used for repetitions).
    pub fn with_seed(&self, seed: u64) -> RouteSpec {
        let mut r = self.clone();
        r.seed = seed;
        r
    }

    pub fn compile(&self) -> RouteGeometry {
        RouteGeometry::compile(self)
    }
}

#[derive(Debug, Clone, Copy)]
struct RouteSample {
    position: Vec2,
    heading: f64,
    curvature: f64,
    command: NavigationIntent,
}

/// A junction's extent, both in arc-length and as a world-frame disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionZone {
    pub start_s: f64,
    pub end_s: f64,
    pub center: Vec2,
    pub radius: f64,
}

/// Compiled world-frame centreline with per-sample command and junction
/// registry.
#[derive(Debug, Clone)]
pub struct RouteGeometry {
    samples: Vec<RouteSample>,
    total_m: f64,
    junctions: Vec<JunctionZone>,
    speed_limit_kmh: f64,
}

impl RouteGeometry {
    pub fn compile(spec: &RouteSpec) -> RouteGeometry {
        // Segment boundaries in arc-length, plus junction spans.
        let mut bounds = Vec::with_capacity(spec.segments.len() + 1);
        let mut acc = 0.0;
        bounds.push(0.0);
        for seg in &spec.segments {
            acc += seg.length_m;
            bounds.push(acc);
        }
        let total = acc.max(ROUTE_STEP_M);

        let n = (total / ROUTE_STEP_M) as usize + 1;
        let mut samples = Vec::with_capacity(n + 1);

        // March the cursor through the segments, emitting a sample per step.
        let mut pos = Vec2::ZERO;
        let mut heading = core::f64::consts::FRAC_PI_2; // forward = +y
        let mut seg_idx = 0usize;
        let mut s = 0.0;
        for _ in 0..=n {
            while seg_idx + 1 < bounds.len() - 1 && s >= bounds[seg_idx + 1] {
                seg_idx += 1;
            }
            let seg = &spec.segments[seg_idx];
            let curvature = turn_curvature(seg);
            samples.push(RouteSample {
                position: pos,
                heading,
                curvature,
                command: seg.command,
            });
            let dh = curvature * ROUTE_STEP_M;
            // advance along the arc midpoint heading for a smoother polyline
            let mid = heading + dh * 0.5;
            pos = pos.add(Vec2::new(math::cos(mid), math::sin(mid)).scale(ROUTE_STEP_M));
            heading += dh;
            s += ROUTE_STEP_M;
        }

        let mut geometry = RouteGeometry {
            samples,
            total_m: total,
            junctions: Vec::new(),
            speed_limit_kmh: spec.speed_limit_kmh,
        };

        // Junction registry: every turn segment is a junction; a straight
        // segment flagged junction_at_end opens a box past its end.
        let mut spans: Vec<(f64, f64)> = Vec::new();
        for (i, seg) in spec.segments.iter().enumerate() {
            if seg.command.is_turn() {
                spans.push((bounds[i], bounds[i + 1]));
            }
            if seg.junction_at_end && !next_is_turn(spec, i) {
                spans.push((bounds[i + 1], (bounds[i + 1] + JUNCTION_BOX_LEN_M).min(total)));
            }
        }
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for span in spans {
            match merged.last_mut() {
                Some(last) if span.0 <= last.1 => last.1 = last.1.max(span.1),
                _ => merged.push(span),
            }
        }
        for (start, end) in merged {
            let a = geometry.point_at(start);
            let b = geometry.point_at(end);
            let center = Vec2::new((a.x + b.x) * 0.5, (a.y + b.y) * 0.5);
            let radius = a.sub(b).norm() * 0.5 + JUNCTION_DISC_MARGIN_M;
            geometry.junctions.push(JunctionZone { start_s: start, end_s: end, center, radius });
        }

        // Approach activation: samples within the activation window before a
        // turn arc carry the turn command.
        let activations: Vec<(f64, f64, NavigationIntent)> = spec
            .segments
            .iter()
            .enumerate()
            .filter(|(_, seg)| seg.command.is_turn())
            .map(|(i, seg)| {
                (
                    (bounds[i] - TURN_COMMAND_ACTIVATION_M).max(0.0),
                    bounds[i],
                    seg.command,
                )
            })
            .collect();
        for (idx, sample) in geometry.samples.iter_mut().enumerate() {
            let s = idx as f64 * ROUTE_STEP_M;
            for &(from, to, cmd) in &activations {
                if s >= from && s < to {
                    sample.command = cmd;
                }
            }
        }

        geometry
    }

    pub fn total_m(&self) -> f64 {
        self.total_m
    }

    pub fn speed_limit_kmh(&self) -> f64 {
        self.speed_limit_kmh
    }

    pub fn junctions(&self) -> &[JunctionZone] {
        &self.junctions
    }

    fn index_for(&self, s: f64) -> usize {
        let idx = (s.max(0.0) / ROUTE_STEP_M) as usize;
        idx.min(self.samples.len() - 1)
    }

    /// Centreline point at arc-length `s` (clamped), linearly interpolated.
    pub fn point_at(&self, s: f64) -> Vec2 {
        let s = s.clamp(0.0, self.total_m);
        let idx = self.index_for(s);
        if idx + 1 >= self.samples.len() {
            return self.samples[idx].position;
        }
        let t = (s - idx as f64 * ROUTE_STEP_M) / ROUTE_STEP_M;
        let a = self.samples[idx].position;
        let b = self.samples[idx + 1].position;
        Vec2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
    }

    pub fn heading_at(&self, s: f64) -> f64 {
        self.samples[self.index_for(s)].heading
    }

    pub fn curvature_at(&self, s: f64) -> f64 {
        self.samples[self.index_for(s)].curvature
    }

    /// Navigation command in effect at arc-length `s`, including approach
    /// activation.
    pub fn command_at(&self, s: f64) -> NavigationIntent {
        self.samples[self.index_for(s)].command
    }

    /// Whether a world point sits inside any junction disc.
    pub fn in_junction(&self, point: Vec2) -> bool {
        self.junctions
            .iter()
            .any(|j| point.sub(j.center).norm() <= j.radius)
    }

    /// Arc-length distance to the next junction ahead of `s`, if within
    /// detection reach.
    pub fn junction_distance(&self, s: f64) -> Option<f64> {
        self.junctions
            .iter()
            .filter(|j| j.end_s >= s)
            .map(|j| (j.start_s - s).max(0.0))
            .fold(None, |acc: Option<f64>, d| {
                Some(acc.map_or(d, |a| a.min(d)))
            })
            .filter(|d| *d <= crate::scene::DETECTION_FORWARD_M)
    }

    /// Project a world point onto the route, full scan.
    pub fn project(&self, point: Vec2) -> f64 {
        self.project_in(point, 0.0, self.total_m)
    }

    /// Project with a monotone search window around a previous estimate.
    pub fn project_near(&self, point: Vec2, s_hint: f64) -> f64 {
        self.project_in(point, s_hint - 5.0, s_hint + 15.0)
    }

    fn project_in(&self, point: Vec2, from_s: f64, to_s: f64) -> f64 {
        let lo = self.index_for(from_s.max(0.0));
        let hi = self.index_for(to_s.min(self.total_m));
        let mut best = lo;
        let mut best_d = f64::INFINITY;
        for idx in lo..=hi {
            let d = self.samples[idx].position.sub(point).norm();
            if d < best_d {
                best_d = d;
                best = idx;
            }
        }
        (best as f64 * ROUTE_STEP_M).min(self.total_m)
    }

    /// Express a world point in the frame of an observer at `origin` with
    /// the given heading: x lateral (negative = left), y longitudinal.
    pub fn to_ego_frame(&self, origin: Vec2, heading: f64, point: Vec2) -> Vec2 {
        world_to_ego(origin, heading, point)
    }
}

/// World -> ego-frame conversion shared across the harness.
pub fn world_to_ego(origin: Vec2, heading: f64, point: Vec2) -> Vec2 {
    let d = point.sub(origin);
    let fwd = Vec2::new(math::cos(heading), math::sin(heading));
    let right = Vec2::new(math::sin(heading), -math::cos(heading));
    Vec2::new(d.x * right.x + d.y * right.y, d.x * fwd.x + d.y * fwd.y)
}

/// Ego-frame -> world conversion.
pub fn ego_to_world(origin: Vec2, heading: f64, rel: Vec2) -> Vec2 {
    let fwd = Vec2::new(math::cos(heading), math::sin(heading));
    let right = Vec2::new(math::sin(heading), -math::cos(heading));
    Vec2::new(
        origin.x + right.x * rel.x + fwd.x * rel.y,
        origin.y + right.y * rel.x + fwd.y * rel.y,
    )
}

/// Rightward unit vector at heading.
pub fn right_of(heading: f64) -> Vec2 {
    Vec2::new(math::sin(heading), -math::cos(heading))
}

/// Forward unit vector at heading.
pub fn forward_of(heading: f64) -> Vec2 {
    Vec2::new(math::cos(heading), math::sin(heading))
}

fn turn_curvature(seg: &RouteSegment) -> f64 {
    match seg.command {
        // quarter-circle arc: heading change of +/- pi/2 over the length
        NavigationIntent::LeftTurn => core::f64::consts::FRAC_PI_2 / seg.length_m,
        NavigationIntent::RightTurn => -core::f64::consts::FRAC_PI_2 / seg.length_m,
        _ => 0.0,
    }
}

fn next_is_turn(spec: &RouteSpec, i: usize) -> bool {
    spec.segments.get(i + 1).map_or(false, |s| s.command.is_turn())
}

/// Arc length of a quarter-circle turn with the given radius.
pub fn quarter_turn_length(radius_m: f64) -> f64 {
    radius_m * core::f64::consts::FRAC_PI_2
}

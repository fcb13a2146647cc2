//! Simplex-style runtime safety supervision.
//!
//! The decision module evaluates a semantic safety envelope over the advanced
//! controller's waypoint output: direction consistency during junction
//! approach (phi1) and liveness under throttle (phi2). Leaving the envelope
//! hands control to the baseline controller for a minimum dwell; authority
//! returns to the advanced controller only once the dwell has elapsed and the
//! envelope is satisfied again.

use alloc::vec::Vec;

use crate::math;
use crate::scene::{NavigationIntent, SceneState, Vec2};
use crate::sim::route::RouteGeometry;

/// Predicted waypoint trajectory in the ego frame; the last point is the one
/// the direction monitor evaluates and always lies ahead of the vehicle.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WaypointTrajectory {
    points: Vec<Vec2>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum TrajectoryError {
    #[error("waypoint trajectory is empty")]
    Empty,
    #[error("last waypoint must lie ahead of the vehicle (longitudinal > 0)")]
    LastPointNotForward,
}

impl WaypointTrajectory {
    pub fn new(points: Vec<Vec2>) -> Result<Self, TrajectoryError> {
        let last = points.last().ok_or(TrajectoryError::Empty)?;
        if last.y <= 0.0 {
            return Err(TrajectoryError::LastPointNotForward);
        }
        Ok(WaypointTrajectory { points })
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn last(&self) -> Vec2 {
        *self.points.last().expect("non-empty by construction")
    }

    /// Mirror the lateral axis; used by the direction-flip policy stub.
    /// The forward invariant is unaffected.
    pub fn mirrored(&self) -> WaypointTrajectory {
        WaypointTrajectory {
            points: self.points.iter().map(|p| Vec2::new(-p.x, p.y)).collect(),
        }
    }
}

/// Supervisor parameters; the defaults are the operating values used
/// throughout the tests.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupervisorConfig {
    /// Direction-consistency threshold, degrees.
    pub theta_thr_deg: f64,
    /// Minimum intervention dwell, steps.
    pub t_min_steps: u32,
    /// Throttle above which liveness is demanded.
    pub tau_thr: f64,
    /// Speed below which the vehicle counts as not moving, m/s.
    pub v_min_ms: f64,
    /// Consecutive stuck frames before a liveness violation.
    pub t_stuck_frames: u32,
    /// Passive steering clamp (absolute value).
    pub steer_clamp: f64,
    /// Passive throttle clamp.
    pub throttle_clamp: f64,
    /// Steering clamp relaxation factor during takeover.
    pub takeover_steer_factor: f64,
    /// Throttle cap factor during takeover.
    pub takeover_throttle_factor: f64,
    /// Bearing-angle denominator guard.
    pub epsilon: f64,
}

impl Default for SupervisorConfig {
    fn default() -> Self {
        SupervisorConfig {
            theta_thr_deg: 20.0,
            t_min_steps: 20,
            tau_thr: 0.2,
            v_min_ms: 0.1,
            t_stuck_frames: 30,
            steer_clamp: 0.8,
            throttle_clamp: 0.9,
            takeover_steer_factor: 1.2,
            takeover_throttle_factor: 0.6,
            epsilon: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ControlMode {
    /// Advanced controller (the policy under supervision).
    Ac,
    /// Baseline controller (rule-based fallback).
    Bc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Violation {
    Phi1,
    Phi2,
}

/// Decision-module state threaded through [`step_supervisor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupervisorState {
    pub mode: ControlMode,
    pub intervention_countdown: u32,
    pub stuck_counter: u32,
    pub last_violation: Option<Violation>,
}

impl SupervisorState {
    pub fn new() -> Self {
        SupervisorState {
            mode: ControlMode::Ac,
            intervention_countdown: 0,
            stuck_counter: 0,
            last_violation: None,
        }
    }
}

impl Default for SupervisorState {
    fn default() -> Self {
        Self::new()
    }
}

/// Which controller's output gets executed this step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Authority {
    UseAc,
    UseBc,
}

/// Actuation triple.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ControlCommand {
    /// Steering in [-1, 1]; positive steers left (CCW).
    pub steer: f64,
    /// Throttle in [0, 1].
    pub throttle: f64,
    /// Brake in [0, 1].
    pub brake: f64,
}

impl ControlCommand {
    pub fn coast() -> Self {
        ControlCommand::default()
    }
}

/// One monitor record per supervised step; serialised line-by-line by the
/// trace log.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonitorRecord {
    pub frame: u64,
    pub mode: ControlMode,
    pub theta_deg: f64,
    pub phi1: bool,
    pub phi2: bool,
    pub stuck_counter: u32,
    pub countdown: u32,
    pub action_source: Authority,
}

/// Bearing angle of the last predicted waypoint, degrees.
///
/// `theta = atan(x / (y + epsilon))`; negative bears left. Waypoints always
/// lie ahead, so plain `atan` covers the full range of interest.
pub fn bearing_angle(traj: &WaypointTrajectory, epsilon: f64) -> f64 {
    let w = traj.last();
    math::atan(w.x / (w.y + epsilon)) * math::DEG_PER_RAD
}

/// Direction-consistency property phi1 with junction gating.
///
/// Vacuously satisfied inside a junction or when the command is not a turn;
/// otherwise a left turn demands `theta < -theta_thr` and a right turn
/// `theta > +theta_thr`.
pub fn check_phi1(
    theta_deg: f64,
    command: NavigationIntent,
    in_junction: bool,
    config: &SupervisorConfig,
) -> bool {
    if in_junction {
        return true;
    }
    match command {
        NavigationIntent::LeftTurn => theta_deg < -config.theta_thr_deg,
        NavigationIntent::RightTurn => theta_deg > config.theta_thr_deg,
        _ => true,
    }
}

/// Liveness property phi2: under throttle the vehicle must move.
///
/// A frame qualifies as stuck when `throttle > tau_thr` and `speed < v_min`
/// (both strict); the counter resets on any non-qualifying frame and the
/// property is violated once `t_stuck_frames` consecutive qualifying frames
/// accumulate.
pub fn check_phi2(
    throttle: f64,
    speed_ms: f64,
    state: &SupervisorState,
    config: &SupervisorConfig,
) -> (bool, SupervisorState) {
    let mut next = *state;
    if throttle > config.tau_thr && speed_ms < config.v_min_ms {
        next.stuck_counter = (state.stuck_counter + 1).min(config.t_stuck_frames);
    } else {
        next.stuck_counter = 0;
    }
    let satisfied = next.stuck_counter < config.t_stuck_frames;
    (satisfied, next)
}

/// Advance the decision module by one step.
///
/// In AC mode any violation switches to BC with the full dwell. In BC mode
/// the countdown ticks down; control returns to AC only on a step where the
/// countdown has already reached zero and both properties hold. A violation
/// during the dwell refreshes `last_violation` without extending the
/// countdown.
pub fn step_supervisor(
    state: &SupervisorState,
    traj: &WaypointTrajectory,
    command: NavigationIntent,
    in_junction: bool,
    throttle: f64,
    speed_ms: f64,
    config: &SupervisorConfig,
) -> (SupervisorState, Authority) {
    let theta = bearing_angle(traj, config.epsilon);
    let phi1 = check_phi1(theta, command, in_junction, config);
    let (phi2, mut next) = check_phi2(throttle, speed_ms, state, config);
    let envelope_ok = phi1 && phi2;

    if !phi1 {
        next.last_violation = Some(Violation::Phi1);
    } else if !phi2 {
        next.last_violation = Some(Violation::Phi2);
    }

    match state.mode {
        ControlMode::Ac => {
            if envelope_ok {
                next.mode = ControlMode::Ac;
                next.intervention_countdown = 0;
                (next, Authority::UseAc)
            } else {
                next.mode = ControlMode::Bc;
                next.intervention_countdown = config.t_min_steps;
                (next, Authority::UseBc)
            }
        }
        ControlMode::Bc => {
            if state.intervention_countdown == 0 && envelope_ok {
                next.mode = ControlMode::Ac;
                next.intervention_countdown = 0;
                (next, Authority::UseAc)
            } else {
                next.mode = ControlMode::Bc;
                next.intervention_countdown = state.intervention_countdown.saturating_sub(1);
                (next, Authority::UseBc)
            }
        }
    }
}

/// Apply the per-step control limits.
///
/// AC mode is the passive clamp applied on every timestep: |steer| <= 0.8,
/// throttle <= 0.9. Takeover (BC) relaxes steering to 1.2x the passive limit
/// and caps throttle at 0.6x of it.
pub fn clamp_controls(
    cmd: ControlCommand,
    mode: ControlMode,
    config: &SupervisorConfig,
) -> ControlCommand {
    let (steer_limit, throttle_limit) = match mode {
        ControlMode::Ac => (config.steer_clamp, config.throttle_clamp),
        ControlMode::Bc => (
            config.steer_clamp * config.takeover_steer_factor,
            config.throttle_clamp * config.takeover_throttle_factor,
        ),
    };
    ControlCommand {
        steer: cmd.steer.clamp(-steer_limit, steer_limit),
        throttle: cmd.throttle.clamp(0.0, throttle_limit),
        brake: cmd.brake.clamp(0.0, 1.0),
    }
}

/// Baseline-controller fallback: a conservative rule follower.
///
/// Tracks the route centreline, targets 60% of the applicable speed limit,
/// holds at least a 5 m gap to the lead actor, never initiates a lane
/// change, and stops for red signals near a junction (a beyond-baseline
/// conservative extension).
pub fn fallback_controls(scene: &SceneState, route: &RouteGeometry) -> ControlCommand {
    /// Following distance floor, metres.
    const GAP_MIN_M: f64 = 5.0;
    /// Fallback speed reduction factor.
    const SPEED_FACTOR: f64 = 0.6;

    let speed_ms = scene.ego.speed_ms();

    // Steer toward a point on the centreline a short distance down the route.
    let s = route.project(scene.ego.position);
    let lookahead = (speed_ms * 1.2).max(4.0);
    let target = route.point_at(s + lookahead);
    let rel = route.to_ego_frame(scene.ego.position, scene.ego.heading, target);
    let bearing = math::atan(rel.x / (rel.y.max(0.5)));
    // positive steer turns left; a leftward target (x < 0) needs positive steer
    let steer = (-bearing * 2.0).clamp(-1.0, 1.0);

    // Speed control toward the reduced limit.
    let limit_kmh = scene.ego.speed_limit_kmh.min(route.speed_limit_kmh());
    let target_ms = SPEED_FACTOR * limit_kmh / 3.6;
    let err = target_ms - speed_ms;
    let mut throttle = (err * 0.5).clamp(0.0, 1.0);
    let mut brake: f64 = if err < -0.5 { (-err * 0.4).min(1.0) } else { 0.0 };

    // Gap keeping against the nearest lead actor in the pure-ahead corridor.
    let lead_gap = scene
        .actors
        .iter()
        .filter(|a| {
            a.rel_position.y > 0.0
                && math::fabs(a.rel_position.x) < crate::scene::SECTOR_CORRIDOR_M
        })
        .map(|a| a.rel_position.y)
        .fold(f64::INFINITY, f64::min);
    if lead_gap < GAP_MIN_M {
        throttle = 0.0;
        brake = 1.0;
    } else if lead_gap < GAP_MIN_M + speed_ms * 1.5 {
        throttle = 0.0;
        brake = brake.max(0.4);
    }

    // Red light close to the junction: stop.
    if matches!(scene.signal.state, crate::scene::SignalState::Red) {
        if let Some(d) = scene.road.junction_distance_m {
            if d < GAP_MIN_M + speed_ms * 2.0 {
                throttle = 0.0;
                brake = 1.0;
            }
        }
    }

    ControlCommand { steer, throttle, brake }
}

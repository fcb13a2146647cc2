//! Scripted policy stubs standing in for the advanced controller.
//!
//! All stubs plan waypoints from the route geometry and track them with a
//! pure-pursuit steering law plus a proportional speed governor. The faithful
//! stub follows the route; direction-flip mirrors its waypoints whenever a
//! turn command is active (the direction-misinterpretation failure class);
//! freeze keeps predicting forward motion regardless of obstacles; the noisy
//! variant jitters the faithful waypoints.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use crate::math;
use crate::scene::{NavigationIntent, SceneState, Vec2, SECTOR_CORRIDOR_M};
use crate::supervisor::{ControlCommand, WaypointTrajectory};

use super::route::{world_to_ego, RouteGeometry};
use super::world::{MAX_STEER_RAD, WHEELBASE_M};

/// Number of points in a planned trajectory.
pub const WAYPOINT_COUNT: usize = 5;
/// Cruising speed cap while a turn command is active, km/h.
pub const TURN_SPEED_KMH: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PolicyKind {
    Faithful,
    DirectionFlip,
    Freeze,
    NoisyFaithful,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PolicyStub {
    pub kind: PolicyKind,
    /// Waypoint jitter for the noisy variant, metres (ignored otherwise).
    pub jitter_sigma_m: f64,
}

impl PolicyStub {
    pub fn faithful() -> Self {
        PolicyStub { kind: PolicyKind::Faithful, jitter_sigma_m: 0.0 }
    }

    pub fn direction_flip() -> Self {
        PolicyStub { kind: PolicyKind::DirectionFlip, jitter_sigma_m: 0.0 }
    }

    pub fn freeze() -> Self {
        PolicyStub { kind: PolicyKind::Freeze, jitter_sigma_m: 0.0 }
    }

    pub fn noisy_faithful(jitter_sigma_m: f64) -> Self {
        PolicyStub { kind: PolicyKind::NoisyFaithful, jitter_sigma_m }
    }

    /// Plan a waypoint trajectory for the current state.
    pub fn plan_waypoints(
        &self,
        geometry: &RouteGeometry,
        scene: &SceneState,
        s_ego: f64,
        command: NavigationIntent,
        rng: &mut ChaCha8Rng,
    ) -> WaypointTrajectory {
        if self.kind == PolicyKind::Freeze {
            return straight_fan();
        }

        let ego = &scene.ego;
        // Horizon: reach past the junction exit when a turn is commanded so
        // the final waypoint points at the exit; otherwise speed-scaled.
        let horizon = if command.is_turn() {
            let arc_end = geometry
                .junctions()
                .iter()
                .filter(|j| j.end_s + 2.0 >= s_ego)
                .map(|j| j.end_s)
                .fold(f64::INFINITY, f64::min);
            if arc_end.is_finite() {
                (arc_end - s_ego).max(4.0) + 3.0
            } else {
                (ego.speed_ms() * 1.5).max(8.0)
            }
        } else {
            (ego.speed_ms() * 1.5).max(8.0)
        };

        let mut points: Vec<Vec2> = (1..=WAYPOINT_COUNT)
            .map(|k| {
                let target = geometry.point_at(s_ego + horizon * k as f64 / WAYPOINT_COUNT as f64);
                world_to_ego(ego.position, ego.heading, target)
            })
            .collect();

        if self.kind == PolicyKind::NoisyFaithful && self.jitter_sigma_m > 0.0 {
            use rand_distr::Distribution;
            let normal = rand_distr::Normal::new(0.0, self.jitter_sigma_m).expect("sigma >= 0");
            for p in points.iter_mut() {
                p.x += normal.sample(rng);
                p.y += normal.sample(rng);
            }
        }

        // A heavily deviated ego can see the route behind it; predict a
        // plain forward fan in that case, like a model that has lost the
        // route context.
        let traj = match WaypointTrajectory::new(points) {
            Ok(t) => t,
            Err(_) => return straight_fan(),
        };

        if self.kind == PolicyKind::DirectionFlip && command.is_turn() {
            traj.mirrored()
        } else {
            traj
        }
    }

    /// Track the planned waypoints: pure-pursuit steering plus a
    /// proportional speed governor with (except for freeze) lead-gap keeping.
    pub fn track(
        &self,
        traj: &WaypointTrajectory,
        scene: &SceneState,
        geometry: &RouteGeometry,
        command: NavigationIntent,
    ) -> ControlCommand {
        let speed = scene.ego.speed_ms();

        // Aim at the first waypoint beyond a short lookahead.
        let lookahead = (speed * 0.8).max(3.0);
        let aim = traj
            .points()
            .iter()
            .find(|p| p.norm() >= lookahead)
            .copied()
            .unwrap_or_else(|| traj.last());
        let ld = aim.norm().max(0.5);
        let bearing = math::atan(aim.x / (aim.y + 1e-6));
        let delta = -math::atan(2.0 * WHEELBASE_M * math::sin(bearing) / ld);
        let steer = (delta / MAX_STEER_RAD).clamp(-1.0, 1.0);

        let mut target_kmh = geometry.speed_limit_kmh().min(scene.ego.speed_limit_kmh);
        if command.is_turn() && self.kind != PolicyKind::Freeze {
            target_kmh = target_kmh.min(TURN_SPEED_KMH);
        }
        let err = target_kmh / 3.6 - speed;
        let mut throttle = (err * 0.6).clamp(0.0, 1.0);
        let mut brake = if err < -0.3 { (-err * 0.5).clamp(0.0, 1.0) } else { 0.0 };

        // Lead-gap keeping; the freeze stub deliberately has none.
        if self.kind != PolicyKind::Freeze {
            let lead_gap = scene
                .actors
                .iter()
                .filter(|a| {
                    a.rel_position.y > 0.0
                        && a.rel_position.y <= 40.0
                        && math::fabs(a.rel_position.x) < SECTOR_CORRIDOR_M
                })
                .map(|a| a.rel_position.y)
                .fold(f64::INFINITY, f64::min);
            let desired = 5.0 + speed * 1.2;
            if lead_gap < 5.0 {
                throttle = 0.0;
                brake = 1.0;
            } else if lead_gap < desired {
                throttle = 0.0;
                brake = brake.max((0.3 + (desired - lead_gap) * 0.1).min(0.8));
            }
        }

        ControlCommand { steer, throttle, brake }
    }
}

fn straight_fan() -> WaypointTrajectory {
    let points = (1..=WAYPOINT_COUNT)
        .map(|k| Vec2::new(0.0, 1.6 * k as f64))
        .collect();
    WaypointTrajectory::new(points).expect("forward fan is always valid")
}

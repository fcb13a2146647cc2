//! Kinematic world stepping: bicycle-model ego dynamics, constant-velocity
//! actor advancement, and disc-overlap collision tests.

use alloc::vec::Vec;

use crate::math;
use crate::scene::{Actor, SceneState, Vec2};
use crate::supervisor::ControlCommand;

use super::route::{ego_to_world, world_to_ego};

/// Simulation timestep, seconds (20 FPS).
pub const DT_S: f64 = 0.05;
/// Bicycle-model wheelbase, metres (mid-size sedan).
pub const WHEELBASE_M: f64 = 2.8;
/// Road-wheel angle at full steering command, radians (35 degrees).
pub const MAX_STEER_RAD: f64 = 35.0 * core::f64::consts::PI / 180.0;
/// Peak acceleration at full throttle, m/s^2.
pub const ACCEL_MAX_MS2: f64 = 3.0;
/// Peak deceleration at full brake, m/s^2.
pub const BRAKE_DECEL_MS2: f64 = 8.0;
/// Rolling/coast deceleration, m/s^2.
pub const COAST_DECEL_MS2: f64 = 0.5;
/// Collision disc radius of a vehicle, metres.
pub const VEHICLE_RADIUS_M: f64 = 1.5;
/// Collision disc radius of a pedestrian, metres.
pub const PEDESTRIAN_RADIUS_M: f64 = 0.4;

/// Minimal ego kinematic state used by the integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EgoKinematics {
    pub position: Vec2,
    pub heading: f64,
    pub speed_ms: f64,
    pub yaw_rate: f64,
}

/// One Euler step of the kinematic bicycle model (rear-axle reference).
pub fn integrate_ego(ego: &EgoKinematics, cmd: &ControlCommand, dt: f64) -> EgoKinematics {
    let steer_angle = cmd.steer.clamp(-1.0, 1.0) * MAX_STEER_RAD;
    let accel = cmd.throttle.clamp(0.0, 1.0) * ACCEL_MAX_MS2
        - cmd.brake.clamp(0.0, 1.0) * BRAKE_DECEL_MS2
        - COAST_DECEL_MS2;
    let speed = (ego.speed_ms + accel * dt).max(0.0);

    let yaw_rate = speed * math::tan(steer_angle) / WHEELBASE_M;
    // midpoint heading keeps the constant-steer path on a circle
    let mid_heading = ego.heading + yaw_rate * dt * 0.5;
    let position = ego
        .position
        .add(Vec2::new(math::cos(mid_heading), math::sin(mid_heading)).scale(speed * dt));

    EgoKinematics {
        position,
        heading: ego.heading + yaw_rate * dt,
        speed_ms: speed,
        yaw_rate,
    }
}

pub fn collision_radius(kind: crate::scene::ActorKind) -> f64 {
    match kind {
        crate::scene::ActorKind::Vehicle => VEHICLE_RADIUS_M,
        crate::scene::ActorKind::Pedestrian => PEDESTRIAN_RADIUS_M,
    }
}

/// Advance a scene by one timestep: bicycle update of the ego, scripted
/// actors dead-reckoned along their current velocities, relative coordinates
/// rebuilt against the new ego pose.
pub fn step_world(scene: &SceneState, cmd: &ControlCommand, dt: f64) -> SceneState {
    let ego_kin = EgoKinematics {
        position: scene.ego.position,
        heading: scene.ego.heading,
        speed_ms: scene.ego.speed_ms(),
        yaw_rate: scene.ego.yaw_rate,
    };
    let ego_vel = super::route::forward_of(scene.ego.heading).scale(ego_kin.speed_ms);
    let next_ego = integrate_ego(&ego_kin, cmd, dt);

    let actors: Vec<Actor> = scene
        .actors
        .iter()
        .map(|a| {
            let world_pos = ego_to_world(scene.ego.position, scene.ego.heading, a.rel_position);
            let rel_v = a.rel_velocity_ms;
            // rel velocity is expressed in the ego frame; rotate back out
            let world_vel = Vec2::new(
                ego_vel.x
                    + math::sin(scene.ego.heading) * rel_v.x
                    + math::cos(scene.ego.heading) * rel_v.y,
                ego_vel.y - math::cos(scene.ego.heading) * rel_v.x
                    + math::sin(scene.ego.heading) * rel_v.y,
            );
            let new_world = world_pos.add(world_vel.scale(dt));
            let new_ego_vel = super::route::forward_of(next_ego.heading).scale(next_ego.speed_ms);
            Actor {
                rel_position: world_to_ego(next_ego.position, next_ego.heading, new_world),
                rel_velocity_ms: world_to_ego(
                    Vec2::ZERO,
                    next_ego.heading,
                    world_vel.sub(new_ego_vel),
                ),
                ..*a
            }
        })
        .collect();

    let mut next = scene.clone();
    next.ego.position = next_ego.position;
    next.ego.heading = next_ego.heading;
    next.ego.speed_kmh = next_ego.speed_ms * 3.6;
    next.ego.yaw_rate = next_ego.yaw_rate;
    next.actors = actors;
    next.frame = scene.frame + 1;
    next
}

/// Actors whose collision disc overlaps the ego's.
pub fn overlapping_actors(scene: &SceneState) -> Vec<&Actor> {
    scene
        .actors
        .iter()
        .filter(|a| a.rel_position.norm() < VEHICLE_RADIUS_M + collision_radius(a.kind))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{EgoState, RoadTopology, TrafficSignal, Weather};
    use alloc::vec;

    fn scene_at_rest() -> SceneState {
        SceneState {
            ego: EgoState {
                speed_kmh: 0.0,
                speed_limit_kmh: 50.0,
                yaw_rate: 0.0,
                position: Vec2::ZERO,
                heading: core::f64::consts::FRAC_PI_2,
            },
            actors: vec![],
            signal: TrafficSignal::none(),
            road: RoadTopology::open_road(),
            weather: Weather::clear(),
            frame: 0,
        }
    }

    #[test]
    fn zero_controls_at_rest_is_a_fixed_point() {
        let scene = scene_at_rest();
        let next = step_world(&scene, &ControlCommand::coast(), DT_S);
        assert_eq!(next.ego.position, scene.ego.position);
        assert_eq!(next.ego.heading, scene.ego.heading);
        assert_eq!(next.ego.speed_kmh, 0.0);
    }

    #[test]
    fn throttle_from_rest_moves_straight_forward() {
        let mut scene = scene_at_rest();
        let cmd = ControlCommand { steer: 0.0, throttle: 0.8, brake: 0.0 };
        for _ in 0..40 {
            scene = step_world(&scene, &cmd, DT_S);
        }
        // forward is +y at the initial heading
        assert!(scene.ego.position.y > 1.0);
        assert!(scene.ego.position.x.abs() < 1e-9);
        assert!(scene.ego.speed_kmh > 0.0);
    }

    #[test]
    fn constant_steer_traces_the_bicycle_circle() {
        // hold speed and steering; the path radius must match
        // wheelbase / tan(steer_angle) within 1%.
        let steer = 0.5;
        let radius_expected = WHEELBASE_M / math::tan(steer * MAX_STEER_RAD);

        let mut ego = EgoKinematics {
            position: Vec2::ZERO,
            heading: 0.0,
            speed_ms: 5.0,
            yaw_rate: 0.0,
        };
        // counteract coast decel to hold speed near 5 m/s
        let cmd = ControlCommand { steer, throttle: COAST_DECEL_MS2 / ACCEL_MAX_MS2, brake: 0.0 };

        let mut points = alloc::vec::Vec::new();
        for _ in 0..2000 {
            ego = integrate_ego(&ego, &cmd, DT_S);
            points.push(ego.position);
        }
        // fit the circle centre as the mean of the (closed) loop
        let n = points.len() as f64;
        let cx = points.iter().map(|p| p.x).sum::<f64>() / n;
        let cy = points.iter().map(|p| p.y).sum::<f64>() / n;
        let radii: alloc::vec::Vec<f64> = points
            .iter()
            .map(|p| math::hypot(p.x - cx, p.y - cy))
            .collect();
        let mean_r = radii.iter().sum::<f64>() / n;
        assert!(
            (mean_r - radius_expected).abs() / radius_expected < 0.01,
            "radius {mean_r} vs expected {radius_expected}"
        );
    }

    #[test]
    fn actors_advance_on_their_paths() {
        let mut scene = scene_at_rest();
        scene.actors.push(Actor {
            id: 9,
            kind: crate::scene::ActorKind::Vehicle,
            rel_position: Vec2::new(0.0, 20.0),
            rel_velocity_ms: Vec2::new(0.0, 2.0),
            speed_kmh: 7.2,
            is_stationary: false,
        });
        let next = step_world(&scene, &ControlCommand::coast(), DT_S);
        assert!((next.actors[0].rel_position.y - 20.1).abs() < 1e-9);
    }

    #[test]
    fn disc_overlap_detection() {
        let mut scene = scene_at_rest();
        scene.actors.push(Actor {
            id: 1,
            kind: crate::scene::ActorKind::Vehicle,
            rel_position: Vec2::new(0.0, 2.9),
            rel_velocity_ms: Vec2::ZERO,
            speed_kmh: 0.0,
            is_stationary: true,
        });
        scene.actors.push(Actor {
            id: 2,
            kind: crate::scene::ActorKind::Pedestrian,
            rel_position: Vec2::new(0.0, -3.0),
            rel_velocity_ms: Vec2::ZERO,
            speed_kmh: 0.0,
            is_stationary: true,
        });
        let hits = overlapping_actors(&scene);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].id, 1);
    }
}

//! Closed-loop episode execution.
//!
//! Per frame: sense -> narrate (optionally through the noise model) ->
//! policy -> decision module / TTC override -> clamp -> integrate. The
//! narrator only ever sees the (possibly perturbed) sensing view; driving
//! always runs on ground truth, matching the noise-ablation protocol.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::math;
use crate::narrator::{self, NarrationCondition};
use crate::scene::{
    within_detection_range, Actor, ActorKind, EgoState, NavigationIntent, RoadTopology,
    SceneState, SignalState, TrafficSignal, Vec2,
};
use crate::supervisor::{
    bearing_angle, check_phi1, clamp_controls, fallback_controls, step_supervisor, Authority,
    ControlCommand, ControlMode, MonitorRecord, SupervisorConfig, SupervisorState,
};

use super::noise::{inject_noise, NoiseConfig};
use super::policy::PolicyStub;
use super::route::{forward_of, right_of, world_to_ego, ActorScript, RouteGeometry, RouteSpec};
use super::ttc::ttc_monitor;
use super::world::{collision_radius, integrate_ego, EgoKinematics, DT_S, VEHICLE_RADIUS_M};

/// Frame budget per route.
pub const FRAME_BUDGET: u64 = 6000;
/// Consecutive frames below walking pace before the agent counts as blocked.
pub const BLOCKED_FRAMES: u64 = 200;
/// Speed below which the blockage counter accumulates, m/s.
pub const BLOCKED_SPEED_MS: f64 = 0.1;
/// Collisions tolerated before the episode aborts.
pub const COLLISION_LIMIT: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InfractionKind {
    CollisionPedestrian,
    CollisionVehicle,
    CollisionStatic,
    RedLight,
    Blocked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Termination {
    Completed,
    Blocked,
    CollisionLimit,
    Timeout,
}

/// Who produced the executed control this frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ActionSource {
    Policy,
    Fallback,
    TtcBrake,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameRecord {
    pub frame: u64,
    pub scene: SceneState,
    pub narration: String,
    pub controls: ControlCommand,
    pub action_source: ActionSource,
    pub monitor: Option<MonitorRecord>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpisodeTrace {
    pub route_label: String,
    pub frames: Vec<FrameRecord>,
    pub infractions: Vec<(InfractionKind, u64)>,
    pub rc_fraction: f64,
    pub terminated: Termination,
    /// Frames on which the TTC override braked.
    pub ttc_brake_frames: u64,
    /// Frames driven by the baseline controller.
    pub fallback_frames: u64,
}

impl EpisodeTrace {
    pub fn count(&self, kind: InfractionKind) -> usize {
        self.infractions.iter().filter(|(k, _)| *k == kind).count()
    }
}

// ---------------------------------------------------------------------------
// Scripted actors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Behavior {
    Static,
    /// Moves along the route at `speed_ms`; negative speed drives against it.
    AlongRoute { s: f64, lateral: f64, speed_ms: f64 },
    /// Waits, then crosses the road once the ego is within the trigger.
    Crossing {
        station_s: f64,
        lateral: f64,
        speed_ms: f64,
        trigger_m: f64,
        walked: f64,
        travel: f64,
        started: bool,
    },
}

#[derive(Debug, Clone)]
struct ScriptedActor {
    id: u64,
    kind: ActorKind,
    position: Vec2,
    velocity: Vec2,
    behavior: Behavior,
    active: bool,
}

fn spawn_actors(spec: &RouteSpec, geometry: &RouteGeometry) -> Vec<ScriptedActor> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut actors = Vec::new();
    let mut next_id = 1u64;

    for script in &spec.scripted_actors {
        // per-rep variety: station and speed jitter, deterministic in the seed
        let jitter_s: f64 = rng.random_range(-2.0..=2.0);
        let speed_scale: f64 = 1.0 + rng.random_range(-0.05..=0.05);
        match *script {
            ActorScript::Parked { s, lateral } => {
                let s = (s + jitter_s).clamp(0.0, geometry.total_m());
                let pos = geometry
                    .point_at(s)
                    .add(right_of(geometry.heading_at(s)).scale(lateral));
                actors.push(ScriptedActor {
                    id: next_id,
                    kind: ActorKind::Vehicle,
                    position: pos,
                    velocity: Vec2::ZERO,
                    behavior: Behavior::Static,
                    active: true,
                });
                next_id += 1;
            }
            ActorScript::Lead { s, lateral, speed_kmh } => {
                let s = (s + jitter_s).clamp(0.0, geometry.total_m());
                actors.push(ScriptedActor {
                    id: next_id,
                    kind: ActorKind::Vehicle,
                    position: along_route_pos(geometry, s, lateral),
                    velocity: forward_of(geometry.heading_at(s)).scale(speed_kmh / 3.6),
                    behavior: Behavior::AlongRoute {
                        s,
                        lateral,
                        speed_ms: speed_kmh * speed_scale / 3.6,
                    },
                    active: true,
                });
                next_id += 1;
            }
            ActorScript::CrossingPed { s, lateral_from, speed_ms, trigger_m } => {
                let s = (s + jitter_s).clamp(0.0, geometry.total_m());
                let pos = geometry
                    .point_at(s)
                    .add(right_of(geometry.heading_at(s)).scale(lateral_from));
                actors.push(ScriptedActor {
                    id: next_id,
                    kind: ActorKind::Pedestrian,
                    position: pos,
                    velocity: Vec2::ZERO,
                    behavior: Behavior::Crossing {
                        station_s: s,
                        lateral: lateral_from,
                        speed_ms: speed_ms * speed_scale,
                        trigger_m,
                        walked: 0.0,
                        travel: 2.0 * math::fabs(lateral_from),
                        started: false,
                    },
                    active: true,
                });
                next_id += 1;
            }
            ActorScript::OncomingStream { s_front, lateral, speed_kmh, count, spacing_m } => {
                for i in 0..count {
                    let s = s_front + jitter_s + i as f64 * spacing_m;
                    actors.push(ScriptedActor {
                        id: next_id,
                        kind: ActorKind::Vehicle,
                        position: along_route_pos(geometry, s.min(geometry.total_m()), lateral),
                        velocity: forward_of(geometry.heading_at(s.min(geometry.total_m())))
                            .scale(-speed_kmh / 3.6),
                        behavior: Behavior::AlongRoute {
                            s,
                            lateral,
                            speed_ms: -speed_kmh * speed_scale / 3.6,
                        },
                        active: true,
                    });
                    next_id += 1;
                }
            }
        }
    }
    actors
}

fn along_route_pos(geometry: &RouteGeometry, s: f64, lateral: f64) -> Vec2 {
    // the stream may start beyond the compiled route; extrapolate straight
    if s > geometry.total_m() {
        let heading = geometry.heading_at(geometry.total_m());
        geometry
            .point_at(geometry.total_m())
            .add(forward_of(heading).scale(s - geometry.total_m()))
            .add(right_of(heading).scale(lateral))
    } else {
        geometry
            .point_at(s)
            .add(right_of(geometry.heading_at(s)).scale(lateral))
    }
}

fn update_scripts(actors: &mut [ScriptedActor], geometry: &RouteGeometry, ego_s: f64, dt: f64) {
    for actor in actors.iter_mut() {
        if !actor.active {
            continue;
        }
        match &mut actor.behavior {
            Behavior::Static => {}
            Behavior::AlongRoute { s, lateral, speed_ms } => {
                *s += *speed_ms * dt;
                if *s < ego_s - 40.0 || *s < -5.0 {
                    actor.active = false;
                    continue;
                }
                let heading = geometry.heading_at(s.clamp(0.0, geometry.total_m()));
                actor.position = along_route_pos(geometry, *s, *lateral);
                actor.velocity = forward_of(heading).scale(*speed_ms);
            }
            Behavior::Crossing {
                station_s,
                lateral,
                speed_ms,
                trigger_m,
                walked,
                travel,
                started,
            } => {
                if !*started && ego_s >= *station_s - *trigger_m && ego_s < *station_s {
                    *started = true;
                }
                if *started {
                    if *walked >= *travel {
                        actor.active = false;
                        continue;
                    }
                    let heading = geometry.heading_at(*station_s);
                    // walk toward and past the centreline
                    let dir = right_of(heading).scale(if *lateral > 0.0 { -1.0 } else { 1.0 });
                    actor.velocity = dir.scale(*speed_ms);
                    actor.position = actor.position.add(actor.velocity.scale(dt));
                    *walked += *speed_ms * dt;
                } else {
                    actor.velocity = Vec2::ZERO;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Sensing
// ---------------------------------------------------------------------------

fn signal_state(spec: &RouteSpec, t_s: f64) -> TrafficSignal {
    let Some(script) = &spec.signal else {
        return TrafficSignal::none();
    };
    let cycle = script.green_s + script.yellow_s + script.red_s;
    if cycle <= 0.0 {
        return TrafficSignal::none();
    }
    let mut phase = (t_s + script.offset_s) % cycle;
    if phase < 0.0 {
        phase += cycle;
    }
    let (state, elapsed) = if phase < script.green_s {
        (SignalState::Green, phase)
    } else if phase < script.green_s + script.yellow_s {
        (SignalState::Yellow, phase - script.green_s)
    } else {
        (SignalState::Red, phase - script.green_s - script.yellow_s)
    };
    TrafficSignal { state, elapsed_s: elapsed, speed_limit_kmh: None }
}

#[allow(clippy::too_many_arguments)]
fn sense(
    spec: &RouteSpec,
    geometry: &RouteGeometry,
    ego: &EgoKinematics,
    actors: &[ScriptedActor],
    s_ego: f64,
    frame: u64,
) -> SceneState {
    let ego_vel = forward_of(ego.heading).scale(ego.speed_ms);
    let sensed: Vec<Actor> = actors
        .iter()
        .filter(|a| a.active)
        .map(|a| {
            let rel_position = world_to_ego(ego.position, ego.heading, a.position);
            let rel_velocity_ms = world_to_ego(Vec2::ZERO, ego.heading, a.velocity.sub(ego_vel));
            Actor {
                id: a.id,
                kind: a.kind,
                rel_position,
                rel_velocity_ms,
                speed_kmh: a.velocity.norm() * 3.6,
                is_stationary: a.velocity.norm() < crate::scene::STATIONARY_SPEED_MS,
            }
        })
        .filter(within_detection_range)
        .collect();

    let in_junction = geometry.in_junction(ego.position);
    let junction_distance_m = if in_junction {
        Some(0.0)
    } else {
        geometry.junction_distance(s_ego)
    };

    SceneState {
        ego: EgoState {
            speed_kmh: ego.speed_ms * 3.6,
            speed_limit_kmh: spec.speed_limit_kmh,
            yaw_rate: ego.yaw_rate,
            position: ego.position,
            heading: ego.heading,
        },
        actors: sensed,
        signal: signal_state(spec, frame as f64 * DT_S),
        road: RoadTopology {
            junction_distance_m,
            in_junction,
            lanes_open: spec.lanes_open.clone(),
            curvature: geometry.curvature_at(s_ego),
        },
        weather: spec.weather,
        frame,
    }
}

fn narration_text(scene: &SceneState, intent: NavigationIntent, cond: NarrationCondition) -> String {
    match cond {
        NarrationCondition::Template => narrator::render_template(scene, intent).instruction,
        NarrationCondition::Flat => narrator::render_flat(scene, intent),
        NarrationCondition::Csn => narrator::render_csn(scene, intent).instruction,
    }
}

// ---------------------------------------------------------------------------
// The loop
// ---------------------------------------------------------------------------

/// Run one closed-loop episode.
///
/// Enabling both the supervisor and the TTC override is permitted (the
/// ablation grid does it); the TTC brake then applies after the decision
/// module's choice.
pub fn run_episode(
    route: &RouteSpec,
    policy: &PolicyStub,
    condition: NarrationCondition,
    supervisor: Option<SupervisorConfig>,
    ttc_threshold_s: Option<f64>,
    noise: Option<NoiseConfig>,
) -> EpisodeTrace {
    let geometry = route.compile();
    let mut actors = spawn_actors(route, &geometry);
    let mut policy_rng = ChaCha8Rng::seed_from_u64(route.seed.wrapping_mul(0x5851_F42D_4C95_7F2D));

    let mut ego = EgoKinematics {
        position: geometry.point_at(0.0),
        heading: geometry.heading_at(0.0),
        speed_ms: 0.0,
        yaw_rate: 0.0,
    };
    let mut s_ego = 0.0;
    let mut sup_state = SupervisorState::new();
    let mut applied = ControlCommand::coast();

    let mut frames: Vec<FrameRecord> = Vec::new();
    let mut infractions: Vec<(InfractionKind, u64)> = Vec::new();
    let mut contacts: Vec<u64> = Vec::new();
    let mut rc_fraction: f64 = 0.0;
    let mut still_frames: u64 = 0;
    let mut collisions: u32 = 0;
    let mut ttc_brake_frames: u64 = 0;
    let mut fallback_frames: u64 = 0;
    let mut terminated = Termination::Timeout;

    for frame in 0..FRAME_BUDGET {
        update_scripts(&mut actors, &geometry, s_ego, DT_S);
        let scene = sense(route, &geometry, &ego, &actors, s_ego, frame);
        let command = geometry.command_at(s_ego);
        let in_junction = scene.road.in_junction;

        let narrated_view = match &noise {
            Some(cfg) => inject_noise(&scene, cfg),
            None => scene.clone(),
        };
        let narration = narration_text(&narrated_view, command, condition);

        let traj = policy.plan_waypoints(&geometry, &scene, s_ego, command, &mut policy_rng);
        let ac_raw = policy.track(&traj, &scene, &geometry, command);

        let (mut cmd, mut source, monitor) = match &supervisor {
            Some(cfg) => {
                let (next_state, authority) = step_supervisor(
                    &sup_state,
                    &traj,
                    command,
                    in_junction,
                    applied.throttle,
                    ego.speed_ms,
                    cfg,
                );
                let theta = bearing_angle(&traj, cfg.epsilon);
                let record = MonitorRecord {
                    frame,
                    mode: next_state.mode,
                    theta_deg: theta,
                    phi1: check_phi1(theta, command, in_junction, cfg),
                    phi2: next_state.stuck_counter < cfg.t_stuck_frames,
                    stuck_counter: next_state.stuck_counter,
                    countdown: next_state.intervention_countdown,
                    action_source: authority,
                };
                sup_state = next_state;
                match authority {
                    Authority::UseAc => (
                        clamp_controls(ac_raw, ControlMode::Ac, cfg),
                        ActionSource::Policy,
                        Some(record),
                    ),
                    Authority::UseBc => {
                        fallback_frames += 1;
                        (
                            clamp_controls(
                                fallback_controls(&scene, &geometry),
                                ControlMode::Bc,
                                cfg,
                            ),
                            ActionSource::Fallback,
                            Some(record),
                        )
                    }
                }
            }
            None => (
                ControlCommand {
                    steer: ac_raw.steer.clamp(-1.0, 1.0),
                    throttle: ac_raw.throttle.clamp(0.0, 1.0),
                    brake: ac_raw.brake.clamp(0.0, 1.0),
                },
                ActionSource::Policy,
                None,
            ),
        };

        if let Some(threshold) = ttc_threshold_s {
            if ttc_monitor(&scene, threshold) {
                cmd = ControlCommand { steer: cmd.steer, throttle: 0.0, brake: 1.0 };
                source = ActionSource::TtcBrake;
                ttc_brake_frames += 1;
            }
        }

        // Integrate; a forward contact holds the ego in place.
        let prev_s = s_ego;
        let next_ego = integrate_ego(&ego, &cmd, DT_S);
        let mut blocked_by_contact = false;
        for actor in actors.iter().filter(|a| a.active) {
            let dist = next_ego.position.sub(actor.position).norm();
            let radii = VEHICLE_RADIUS_M + collision_radius(actor.kind);
            if dist < radii {
                if !contacts.contains(&actor.id) {
                    contacts.push(actor.id);
                    collisions += 1;
                    let kind = match actor.kind {
                        ActorKind::Pedestrian => InfractionKind::CollisionPedestrian,
                        ActorKind::Vehicle => InfractionKind::CollisionVehicle,
                    };
                    infractions.push((kind, frame));
                }
                let rel = world_to_ego(ego.position, ego.heading, actor.position);
                if rel.y > -0.5 {
                    blocked_by_contact = true;
                }
            } else if dist > radii + 0.5 {
                contacts.retain(|id| *id != actor.id);
            }
        }
        if blocked_by_contact {
            ego = EgoKinematics { speed_ms: 0.0, yaw_rate: 0.0, ..ego };
        } else {
            ego = next_ego;
        }

        s_ego = geometry.project_near(ego.position, s_ego);
        rc_fraction = rc_fraction.max((s_ego / geometry.total_m()).clamp(0.0, 1.0));

        // Red light: crossing a junction entry while the signal shows red.
        if matches!(scene.signal.state, SignalState::Red) {
            let crossed = geometry
                .junctions()
                .iter()
                .any(|j| prev_s < j.start_s && s_ego >= j.start_s);
            if crossed {
                infractions.push((InfractionKind::RedLight, frame));
            }
        }

        frames.push(FrameRecord {
            frame,
            scene,
            narration,
            controls: cmd,
            action_source: source,
            monitor,
        });
        applied = cmd;

        if ego.speed_ms < BLOCKED_SPEED_MS {
            still_frames += 1;
        } else {
            still_frames = 0;
        }

        if s_ego >= geometry.total_m() - 0.5 {
            rc_fraction = 1.0;
            terminated = Termination::Completed;
            break;
        }
        if still_frames >= BLOCKED_FRAMES {
            infractions.push((InfractionKind::Blocked, frame));
            terminated = Termination::Blocked;
            break;
        }
        if collisions >= COLLISION_LIMIT {
            terminated = Termination::CollisionLimit;
            break;
        }
    }

    EpisodeTrace {
        route_label: route.label.clone(),
        frames,
        infractions,
        rc_fraction,
        terminated,
        ttc_brake_frames,
        fallback_frames,
    }
}

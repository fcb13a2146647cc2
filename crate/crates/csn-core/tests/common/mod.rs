//! Shared narration fixtures: the canonical left-turn scene, the wet-road
//! scene, and an empty straight-road scene.

use csn_core::scene::{
    Actor, ActorKind, EgoState, Lane, RoadTopology, SceneState, SignalState, TrafficSignal, Vec2,
    Weather,
};

pub fn table2_scene() -> SceneState {
    SceneState {
        ego: EgoState {
            speed_kmh: 25.0,
            speed_limit_kmh: 30.0,
            yaw_rate: 0.0,
            position: Vec2::ZERO,
            heading: core::f64::consts::FRAC_PI_2,
        },
        actors: vec![
            Actor {
                id: 1,
                kind: ActorKind::Vehicle,
                rel_position: Vec2::new(0.0, 12.0),
                rel_velocity_ms: Vec2::new(0.0, 5.0 / 3.6),
                speed_kmh: 30.0,
                is_stationary: false,
            },
            Actor {
                id: 2,
                kind: ActorKind::Pedestrian,
                rel_position: Vec2::new(1.4, 4.8),
                rel_velocity_ms: Vec2::new(-1.5, -25.0 / 3.6),
                speed_kmh: 5.4,
                is_stationary: false,
            },
        ],
        signal: TrafficSignal {
            state: SignalState::Red,
            elapsed_s: 3.0,
            speed_limit_kmh: None,
        },
        road: RoadTopology {
            junction_distance_m: Some(20.0),
            in_junction: false,
            lanes_open: vec![Lane::Ego, Lane::Right],
            curvature: 0.0,
        },
        weather: Weather::clear(),
        frame: 0,
    }
}

pub fn wet_scene() -> SceneState {
    SceneState {
        ego: EgoState {
            speed_kmh: 45.0,
            speed_limit_kmh: 50.0,
            yaw_rate: 0.0,
            position: Vec2::ZERO,
            heading: core::f64::consts::FRAC_PI_2,
        },
        actors: vec![],
        signal: TrafficSignal::none(),
        road: RoadTopology::open_road(),
        weather: Weather {
            precipitation: 0.2,
            fog_density: 0.0,
            wetness: 0.8,
            sun_altitude_deg: 40.0,
        },
        frame: 0,
    }
}

pub fn empty_scene() -> SceneState {
    SceneState {
        ego: EgoState {
            speed_kmh: 30.0,
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

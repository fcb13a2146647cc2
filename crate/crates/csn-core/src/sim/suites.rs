//! Built-in route suites used by the ablation grid and the directional
//! experiments.

use alloc::vec;
use alloc::vec::Vec;

use crate::scene::NavigationIntent;

use super::route::{quarter_turn_length, ActorScript, RouteSegment, RouteSpec};

fn seg(command: NavigationIntent, length_m: f64) -> RouteSegment {
    RouteSegment::new(command, length_m)
}

fn turn() -> f64 {
    quarter_turn_length(10.0)
}

/// Junction-heavy suite: exercises the direction monitor. No conflicting
/// traffic, a little parked scenery off the driven lane.
pub fn turn_suite(base_seed: u64) -> Vec<RouteSpec> {
    let mut routes = vec![
        RouteSpec::new(
            "turns-L",
            vec![
                seg(NavigationIntent::Follow, 40.0),
                seg(NavigationIntent::LeftTurn, turn()),
                seg(NavigationIntent::Follow, 50.0),
            ],
            40.0,
            0,
        ),
        RouteSpec::new(
            "turns-RL",
            vec![
                seg(NavigationIntent::Follow, 35.0),
                seg(NavigationIntent::RightTurn, turn()),
                seg(NavigationIntent::Follow, 30.0),
                seg(NavigationIntent::LeftTurn, turn()),
                seg(NavigationIntent::Follow, 40.0),
            ],
            40.0,
            0,
        ),
        RouteSpec::new(
            "turns-LL",
            vec![
                seg(NavigationIntent::Follow, 50.0),
                seg(NavigationIntent::LeftTurn, turn()),
                seg(NavigationIntent::Follow, 25.0),
                seg(NavigationIntent::LeftTurn, turn()),
                seg(NavigationIntent::Follow, 35.0),
            ],
            40.0,
            0,
        ),
        RouteSpec::new(
            "turns-R",
            vec![
                seg(NavigationIntent::Follow, 45.0),
                seg(NavigationIntent::RightTurn, turn()),
                seg(NavigationIntent::Follow, 45.0),
            ],
            40.0,
            0,
        ),
    ];
    for (i, route) in routes.iter_mut().enumerate() {
        route.seed = base_seed.wrapping_add(i as u64 * 101);
        route.scripted_actors = vec![ActorScript::Parked { s: 20.0, lateral: 5.5 }];
    }
    routes
}

/// Dense-traffic suite: oncoming streams and roadside clutter inside the
/// naive TTC corridor but outside the collision path.
pub fn dense_traffic_suite(base_seed: u64) -> Vec<RouteSpec> {
    let mut routes = vec![
        RouteSpec::new(
            "dense-stream",
            vec![seg(NavigationIntent::Follow, 300.0)],
            40.0,
            0,
        ),
        RouteSpec::new(
            "dense-stream-2",
            vec![seg(NavigationIntent::Follow, 250.0)],
            50.0,
            0,
        ),
        RouteSpec::new(
            "dense-lead",
            vec![seg(NavigationIntent::Follow, 220.0)],
            50.0,
            0,
        ),
    ];
    routes[0].scripted_actors = vec![
        ActorScript::OncomingStream {
            s_front: 120.0,
            lateral: 3.2,
            speed_kmh: 29.0,
            count: 12,
            spacing_m: 14.0,
        },
        ActorScript::Parked { s: 250.0, lateral: 3.4 },
    ];
    routes[1].scripted_actors = vec![ActorScript::OncomingStream {
        s_front: 100.0,
        lateral: 3.2,
        speed_kmh: 25.0,
        count: 10,
        spacing_m: 13.0,
    }];
    routes[2].scripted_actors = vec![
        ActorScript::Lead { s: 40.0, lateral: 0.0, speed_kmh: 20.0 },
        ActorScript::Parked { s: 180.0, lateral: 3.4 },
    ];
    for (i, route) in routes.iter_mut().enumerate() {
        route.seed = base_seed.wrapping_add(i as u64 * 313);
    }
    routes
}

/// A straight route with an in-lane stalled vehicle: the stuck-detection
/// scenario.
pub fn blockage_route(seed: u64) -> RouteSpec {
    let mut route = RouteSpec::new(
        "blockage",
        vec![seg(NavigationIntent::Follow, 120.0)],
        40.0,
        seed,
    );
    route.scripted_actors = vec![ActorScript::Parked { s: 60.0, lateral: 0.0 }];
    route
}

/// Narration-rich route: a crossing pedestrian near the junction plus a lead
/// vehicle, used for the noise sweep.
pub fn narration_route(seed: u64) -> RouteSpec {
    let mut route = RouteSpec::new(
        "narration",
        vec![
            seg(NavigationIntent::Follow, 45.0),
            seg(NavigationIntent::LeftTurn, turn()),
            seg(NavigationIntent::Follow, 40.0),
        ],
        40.0,
        seed,
    );
    route.scripted_actors = vec![
        ActorScript::Lead { s: 25.0, lateral: 0.0, speed_kmh: 30.0 },
        ActorScript::CrossingPed { s: 38.0, lateral_from: 6.0, speed_ms: 1.4, trigger_m: 25.0 },
    ];
    route
}

/// Per-repetition seed derivation shared by the grid and the experiments;
/// the same (route, rep) pair gets the same seed in every configuration.
pub fn rep_seed(route_seed: u64, rep: u32) -> u64 {
    route_seed.wrapping_add((rep as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_have_labels_and_positive_lengths() {
        for route in turn_suite(7).iter().chain(dense_traffic_suite(7).iter()) {
            assert!(!route.label.is_empty());
            assert!(route.segments.iter().all(|s| s.length_m > 0.0));
        }
    }

    #[test]
    fn rep_seeds_are_distinct_and_stable() {
        assert_eq!(rep_seed(1, 0), rep_seed(1, 0));
        assert_ne!(rep_seed(1, 0), rep_seed(1, 1));
        assert_ne!(rep_seed(1, 0), rep_seed(2, 0));
    }
}

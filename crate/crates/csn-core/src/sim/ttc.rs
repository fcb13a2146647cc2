//! Reactive time-to-collision monitor: the negative-control baseline.
//!
//! Watches the nearest forward actor inside a fixed corridor and demands an
//! emergency brake whenever gap / closing-speed drops below the threshold.
//! The corridor is deliberately generous (a plain proximity monitor has no
//! notion of lanes or intent), which is exactly what makes it over-brake.

use crate::math;
use crate::scene::SceneState;

/// Default braking threshold, seconds.
pub const TTC_DEFAULT_THRESHOLD_S: f64 = 2.0;
/// Corridor half-width the monitor treats as "same lane", metres.
pub const TTC_CORRIDOR_HALF_WIDTH_M: f64 = 3.5;

/// True when the time-to-collision against the nearest forward in-corridor
/// actor falls below the threshold.
pub fn ttc_monitor(scene: &SceneState, threshold_s: f64) -> bool {
    let nearest = scene
        .actors
        .iter()
        .filter(|a| {
            a.rel_position.y > 0.0 && math::fabs(a.rel_position.x) <= TTC_CORRIDOR_HALF_WIDTH_M
        })
        .min_by(|a, b| a.rel_position.y.total_cmp(&b.rel_position.y));

    let Some(actor) = nearest else {
        return false;
    };
    let gap = actor.rel_position.y;
    let closing = -actor.rel_velocity_ms.y;
    if closing <= 0.0 {
        return false;
    }
    gap / closing < threshold_s
}

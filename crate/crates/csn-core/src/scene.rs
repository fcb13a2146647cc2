//! World-state data model and spatial classification primitives.
//!
//! Ego-frame convention used throughout the crate: `x` is lateral with
//! negative values to the **left**, `y` is longitudinal with positive values
//! **forward**. This makes the bearing angle of a leftward waypoint negative,
//! which is what the direction-consistency monitor expects.

use alloc::vec::Vec;

use crate::math;

/// Lateral half-width of the detection region, metres (per side).
pub const DETECTION_LATERAL_M: f64 = 15.0;
/// Forward extent of the detection region, metres.
pub const DETECTION_FORWARD_M: f64 = 50.0;
/// Rear extent of the detection region, metres (mirrors the lateral bound).
pub const DETECTION_REAR_M: f64 = 15.0;

/// Half-width of the pure ahead/behind and left/right corridors, metres.
pub const SECTOR_CORRIDOR_M: f64 = 2.0;
/// Outer radius of the near band, metres (inclusive).
pub const BAND_NEAR_M: f64 = 10.0;
/// Outer radius of the mid band, metres (inclusive).
pub const BAND_MID_M: f64 = 25.0;

/// World speed below which an actor counts as stationary, m/s.
pub const STATIONARY_SPEED_MS: f64 = 0.1;

/// A 2-vector. In the ego frame: `x` lateral (negative = left), `y`
/// longitudinal (positive = forward). In the world frame: plain Cartesian.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(from = "[f64; 2]", into = "[f64; 2]"))]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    pub fn scale(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }

    pub fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Vec2::new(v[0], v[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

/// Ego vehicle state. `position` and `heading` are world-frame (heading is
/// the CCW angle of the forward axis from world +x, radians).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EgoState {
    pub speed_kmh: f64,
    pub speed_limit_kmh: f64,
    pub yaw_rate: f64,
    pub position: Vec2,
    pub heading: f64,
}

impl EgoState {
    pub fn speed_ms(&self) -> f64 {
        self.speed_kmh / 3.6
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ActorKind {
    Vehicle,
    Pedestrian,
}

/// A detected actor, expressed in the ego frame.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Actor {
    pub id: u64,
    pub kind: ActorKind,
    pub rel_position: Vec2,
    pub rel_velocity_ms: Vec2,
    pub speed_kmh: f64,
    pub is_stationary: bool,
}

impl Actor {
    pub fn distance_m(&self) -> f64 {
        self.rel_position.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SignalState {
    Red,
    Yellow,
    Green,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrafficSignal {
    pub state: SignalState,
    pub elapsed_s: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub speed_limit_kmh: Option<f64>,
}

impl TrafficSignal {
    pub fn none() -> Self {
        TrafficSignal {
            state: SignalState::None,
            elapsed_s: 0.0,
            speed_limit_kmh: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Lane {
    Left,
    Right,
    Ego,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoadTopology {
    #[cfg_attr(feature = "serde", serde(default))]
    pub junction_distance_m: Option<f64>,
    pub in_junction: bool,
    pub lanes_open: Vec<Lane>,
    pub curvature: f64,
}

impl RoadTopology {
    pub fn open_road() -> Self {
        RoadTopology {
            junction_distance_m: None,
            in_junction: false,
            lanes_open: alloc::vec![Lane::Ego],
            curvature: 0.0,
        }
    }
}

/// Environmental conditions; unit-interval intensities plus sun altitude.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Weather {
    pub precipitation: f64,
    pub fog_density: f64,
    pub wetness: f64,
    pub sun_altitude_deg: f64,
}

impl Weather {
    pub fn clear() -> Self {
        Weather {
            precipitation: 0.0,
            fog_density: 0.0,
            wetness: 0.0,
            sun_altitude_deg: 45.0,
        }
    }
}

/// Full per-frame world snapshot.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SceneState {
    pub ego: EgoState,
    pub actors: Vec<Actor>,
    pub signal: TrafficSignal,
    pub road: RoadTopology,
    pub weather: Weather,
    pub frame: u64,
}

/// Route-planner navigation command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NavigationIntent {
    LeftTurn,
    RightTurn,
    Straight,
    LaneChangeLeft,
    LaneChangeRight,
    Follow,
}

impl NavigationIntent {
    pub fn is_turn(self) -> bool {
        matches!(self, NavigationIntent::LeftTurn | NavigationIntent::RightTurn)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Sector {
    Ahead,
    AheadLeft,
    AheadRight,
    Left,
    Right,
    Behind,
    BehindLeft,
    BehindRight,
}

impl Sector {
    pub const ALL: [Sector; 8] = [
        Sector::Ahead,
        Sector::AheadLeft,
        Sector::AheadRight,
        Sector::Left,
        Sector::Right,
        Sector::Behind,
        Sector::BehindLeft,
        Sector::BehindRight,
    ];

    /// Left/right mirror image of the sector.
    pub fn mirrored(self) -> Sector {
        match self {
            Sector::Ahead => Sector::Ahead,
            Sector::AheadLeft => Sector::AheadRight,
            Sector::AheadRight => Sector::AheadLeft,
            Sector::Left => Sector::Right,
            Sector::Right => Sector::Left,
            Sector::Behind => Sector::Behind,
            Sector::BehindLeft => Sector::BehindRight,
            Sector::BehindRight => Sector::BehindLeft,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Band {
    Near,
    Mid,
    Far,
}

impl Band {
    pub fn rank(self) -> u8 {
        match self {
            Band::Near => 0,
            Band::Mid => 1,
            Band::Far => 2,
        }
    }
}

/// Spatial zone of an in-range actor: one of eight sectors plus a distance band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Zone {
    pub sector: Sector,
    pub band: Band,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SceneError {
    #[error("actor at ({lateral:.2}, {longitudinal:.2}) m is outside the detection range")]
    OutOfRange { lateral: f64, longitudinal: f64 },
}

/// True iff the actor sits inside the detection region:
/// longitudinal in [-15, 50] m and |lateral| <= 15 m.
pub fn within_detection_range(actor: &Actor) -> bool {
    let p = actor.rel_position;
    p.is_finite()
        && p.y >= -DETECTION_REAR_M
        && p.y <= DETECTION_FORWARD_M
        && math::fabs(p.x) <= DETECTION_LATERAL_M
}

/// Classify an in-range actor into its spatial zone.
///
/// Sector rule: inside the 2 m lateral corridor the actor is purely
/// ahead/behind; otherwise inside the 2 m longitudinal corridor it is purely
/// left/right; otherwise diagonal. Bands by Euclidean distance: near up to
/// 10 m inclusive, mid up to 25 m inclusive, far beyond.
pub fn classify_zone(actor: &Actor) -> Result<Zone, SceneError> {
    let p = actor.rel_position;
    if !within_detection_range(actor) {
        return Err(SceneError::OutOfRange {
            lateral: p.x,
            longitudinal: p.y,
        });
    }

    let lat = p.x;
    let lon = p.y;
    let sector = if math::fabs(lat) < SECTOR_CORRIDOR_M {
        if lon >= 0.0 {
            Sector::Ahead
        } else {
            Sector::Behind
        }
    } else if math::fabs(lon) < SECTOR_CORRIDOR_M {
        if lat < 0.0 {
            Sector::Left
        } else {
            Sector::Right
        }
    } else {
        match (lat < 0.0, lon > 0.0) {
            (true, true) => Sector::AheadLeft,
            (false, true) => Sector::AheadRight,
            (true, false) => Sector::BehindLeft,
            (false, false) => Sector::BehindRight,
        }
    };

    let d = p.norm();
    let band = if d <= BAND_NEAR_M {
        Band::Near
    } else if d <= BAND_MID_M {
        Band::Mid
    } else {
        Band::Far
    };

    Ok(Zone { sector, band })
}

/// Conflict-side sectors for a navigation intent.
///
/// The left-turn set is {ahead-left, ahead, left}; the right-turn set is its
/// mirror; straight and follow conflict only with ahead; lane changes with
/// the full target-side column.
pub fn conflict_zones(intent: NavigationIntent) -> &'static [Sector] {
    match intent {
        NavigationIntent::LeftTurn => &[Sector::AheadLeft, Sector::Ahead, Sector::Left],
        NavigationIntent::RightTurn => &[Sector::AheadRight, Sector::Ahead, Sector::Right],
        NavigationIntent::Straight | NavigationIntent::Follow => &[Sector::Ahead],
        NavigationIntent::LaneChangeLeft => {
            &[Sector::Left, Sector::AheadLeft, Sector::BehindLeft]
        }
        NavigationIntent::LaneChangeRight => {
            &[Sector::Right, Sector::AheadRight, Sector::BehindRight]
        }
    }
}

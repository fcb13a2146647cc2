//! Scene narration: relevance filtering, conflict classification, connective
//! selection, and the three text conditions used for ablation.
//!
//! The three renderers share one constraint pipeline
//! ([`filter_relevant`] -> [`rank_urgency`]) and differ only in how much
//! structure survives into the surface text:
//!
//! - **template**: fixed instruction phrase plus one generic notice, no
//!   metric values;
//! - **flat**: every quantitative fact as period-separated fragments, no
//!   causal connectives;
//! - **csn**: a causal clause chain linking the maneuver to each relevant
//!   constraint (`BUT` / `BUT .. BEFORE` / `BECAUSE`) plus a structured
//!   `[EGO] [ROAD] [SIGNAL] [ACTORS]` notice.
//!
//! All output is deterministic; the exact surface grammar is pinned by the
//! golden corpus under `tests/golden/`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::math;
use crate::scene::{
    classify_zone, conflict_zones, within_detection_range, Actor, ActorKind, Band, Lane,
    NavigationIntent, SceneState, Sector, SignalState, Zone,
};

/// Weather intensity at or above which a condition is narrated.
pub const WEATHER_NARRATE_THRESHOLD: f64 = 0.5;
/// Road curvature magnitude at or above which a curve is narrated, 1/m.
pub const CURVE_NARRATE_THRESHOLD: f64 = 0.02;
/// Maximum number of constraint clauses in a CSN instruction.
pub const MAX_INSTRUCTION_CLAUSES: usize = 3;

/// Conflict type of a relevant constraint; priority blocking > temporal >
/// explanatory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConflictType {
    Blocking,
    Temporal,
    Explanatory,
}

impl ConflictType {
    /// Lower value = higher priority.
    pub fn priority(self) -> u8 {
        match self {
            ConflictType::Blocking => 0,
            ConflictType::Temporal => 1,
            ConflictType::Explanatory => 2,
        }
    }
}

/// Causal connective selected for a conflict type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Connective {
    But,
    YieldBefore,
    Because,
}

/// What a constraint record refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConstraintSubject {
    /// Index into `SceneState::actors`.
    Actor(usize),
    /// Wet-road context derived from the weather block.
    WetRoad,
    /// A posted speed limit below the current ego speed.
    SignalSpeedLimit,
}

/// One detected environmental constraint, ready for ranking and narration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintRecord {
    pub subject: ConstraintSubject,
    pub zone: Zone,
    pub distance_m: f64,
    pub speed_kmh: f64,
    pub conflict_type: Option<ConflictType>,
    /// Scalar rank key; smaller = more urgent. See [`rank_urgency`].
    pub urgency: f64,
}

impl ConstraintRecord {
    fn is_ambient(&self) -> bool {
        !matches!(self.subject, ConstraintSubject::Actor(_))
    }

    fn tiebreak_id(&self, scene: &SceneState) -> u64 {
        match self.subject {
            ConstraintSubject::Actor(i) => scene.actors[i].id,
            ConstraintSubject::WetRoad => u64::MAX - 1,
            ConstraintSubject::SignalSpeedLimit => u64::MAX,
        }
    }
}

/// The three rendered text conditions for one scene.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NarrationBundle {
    pub template: TemplateText,
    pub flat: String,
    pub csn: CsnText,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TemplateText {
    pub instruction: String,
    pub notice: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CsnText {
    pub instruction: String,
    pub notice: String,
}

/// Which text condition a configuration narrates with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NarrationCondition {
    Template,
    Flat,
    Csn,
}

/// Filter the scene's constraints for relevance to the intent.
///
/// Conflict-side actors are always retained; actors outside the conflict
/// zones are kept as explanatory context unless they sit in a rear sector,
/// which is dropped entirely. Ambient context (wet road, posted speed limit
/// below current speed) is appended as explanatory records.
pub fn filter_relevant(scene: &SceneState, intent: NavigationIntent) -> Vec<ConstraintRecord> {
    let zones = conflict_zones(intent);
    let mut records = Vec::new();

    for (idx, actor) in scene.actors.iter().enumerate() {
        if !within_detection_range(actor) {
            continue;
        }
        let zone = match classify_zone(actor) {
            Ok(z) => z,
            Err(_) => continue,
        };
        let on_conflict_side = zones.contains(&zone.sector);
        let behind = matches!(
            zone.sector,
            Sector::Behind | Sector::BehindLeft | Sector::BehindRight
        );
        if !on_conflict_side && behind {
            continue;
        }
        let mut record = ConstraintRecord {
            subject: ConstraintSubject::Actor(idx),
            zone,
            distance_m: actor.distance_m(),
            speed_kmh: actor.speed_kmh,
            conflict_type: None,
            urgency: 0.0,
        };
        record.conflict_type = Some(classify_conflict(intent, &record, scene));
        record.urgency = urgency_key(&record, actor.is_stationary);
        records.push(record);
    }

    if scene.weather.wetness >= WEATHER_NARRATE_THRESHOLD {
        let mut record = ConstraintRecord {
            subject: ConstraintSubject::WetRoad,
            zone: Zone { sector: Sector::Ahead, band: Band::Far },
            distance_m: 0.0,
            speed_kmh: scene.ego.speed_kmh,
            conflict_type: Some(ConflictType::Explanatory),
            urgency: 0.0,
        };
        record.urgency = urgency_key(&record, true);
        records.push(record);
    }

    if let Some(limit) = scene.signal.speed_limit_kmh {
        if limit < scene.ego.speed_kmh {
            let mut record = ConstraintRecord {
                subject: ConstraintSubject::SignalSpeedLimit,
                zone: Zone { sector: Sector::Ahead, band: Band::Far },
                distance_m: 0.0,
                speed_kmh: limit,
                conflict_type: Some(ConflictType::Explanatory),
                urgency: 0.0,
            };
            record.urgency = urgency_key(&record, true);
            records.push(record);
        }
    }

    records
}

// Composite scalar: ambient context ranks after actors; within actors,
// closer bands first, moving before stationary within a band, then distance.
fn urgency_key(record: &ConstraintRecord, stationary: bool) -> f64 {
    let class = if record.is_ambient() { 1.0 } else { 0.0 };
    let band = record.zone.band.rank() as f64;
    let motion = if stationary { 1.0 } else { 0.0 };
    class * 1e6 + band * 1e4 + motion * 1e3 + record.distance_m
}

/// Stable sort by the urgency key; ties broken by actor id.
pub fn rank_urgency(
    mut records: Vec<ConstraintRecord>,
    scene: &SceneState,
) -> Vec<ConstraintRecord> {
    records.sort_by(|a, b| {
        a.urgency
            .total_cmp(&b.urgency)
            .then_with(|| a.tiebreak_id(scene).cmp(&b.tiebreak_id(scene)))
    });
    records
}

/// Conflict type of one filtered constraint under the given intent.
///
/// Actors: blocking when stationary on the conflict side, temporal when
/// moving on the conflict side, explanatory off it. Ambient context is
/// always explanatory.
pub fn classify_conflict(
    intent: NavigationIntent,
    record: &ConstraintRecord,
    scene: &SceneState,
) -> ConflictType {
    let idx = match record.subject {
        ConstraintSubject::Actor(i) => i,
        _ => return ConflictType::Explanatory,
    };
    let on_conflict_side = conflict_zones(intent).contains(&record.zone.sector);
    if !on_conflict_side {
        ConflictType::Explanatory
    } else if scene.actors[idx].is_stationary {
        ConflictType::Blocking
    } else {
        ConflictType::Temporal
    }
}

/// The connective selection function: blocking -> BUT, temporal ->
/// YIELD_BEFORE, explanatory -> BECAUSE.
pub fn select_connective(conflict: ConflictType) -> Connective {
    match conflict {
        ConflictType::Blocking => Connective::But,
        ConflictType::Temporal => Connective::YieldBefore,
        ConflictType::Explanatory => Connective::Because,
    }
}

// ---------------------------------------------------------------------------
// Surface realisation
// ---------------------------------------------------------------------------

fn fmt_whole(value: f64) -> i64 {
    math::round(value) as i64
}

fn maneuver_phrase(intent: NavigationIntent) -> &'static str {
    match intent {
        NavigationIntent::LeftTurn => "Turn left at intersection",
        NavigationIntent::RightTurn => "Turn right at intersection",
        NavigationIntent::Straight => "Go straight",
        NavigationIntent::Follow => "Follow the road",
        NavigationIntent::LaneChangeLeft => "Change to the left lane",
        NavigationIntent::LaneChangeRight => "Change to the right lane",
    }
}

fn maneuver_phrase_short(intent: NavigationIntent) -> &'static str {
    match intent {
        NavigationIntent::LeftTurn => "Turn left",
        NavigationIntent::RightTurn => "Turn right",
        NavigationIntent::Straight => "Go straight",
        NavigationIntent::Follow => "Follow the road",
        NavigationIntent::LaneChangeLeft => "Change lane left",
        NavigationIntent::LaneChangeRight => "Change lane right",
    }
}

fn maneuver_noun(intent: NavigationIntent) -> &'static str {
    match intent {
        NavigationIntent::LeftTurn | NavigationIntent::RightTurn => "turn",
        NavigationIntent::LaneChangeLeft | NavigationIntent::LaneChangeRight => "lane change",
        NavigationIntent::Straight | NavigationIntent::Follow => "maneuver",
    }
}

fn subject_word(kind: ActorKind) -> &'static str {
    match kind {
        ActorKind::Vehicle => "sedan",
        ActorKind::Pedestrian => "pedestrian",
    }
}

// Abbreviated sector vocabulary used in notices and flat fragments.
fn sector_abbrev(sector: Sector) -> &'static str {
    match sector {
        Sector::Ahead => "ahead",
        Sector::AheadLeft => "ahead-L",
        Sector::AheadRight => "ahead-R",
        Sector::Left => "L",
        Sector::Right => "R",
        Sector::Behind => "behind",
        Sector::BehindLeft => "behind-L",
        Sector::BehindRight => "behind-R",
    }
}

// Spelled-out sector vocabulary used inside instruction clauses.
fn sector_phrase(sector: Sector) -> &'static str {
    match sector {
        Sector::Ahead => "ahead",
        Sector::AheadLeft => "ahead-left",
        Sector::AheadRight => "ahead-right",
        Sector::Left => "on the left",
        Sector::Right => "on the right",
        Sector::Behind => "behind",
        Sector::BehindLeft => "behind-left",
        Sector::BehindRight => "behind-right",
    }
}

// Side of the ego centreline an actor sits on, from the lateral sign.
fn side_word(actor: &Actor) -> &'static str {
    if actor.rel_position.x < 0.0 {
        "left"
    } else {
        "right"
    }
}

fn side_abbrev(actor: &Actor) -> &'static str {
    if actor.rel_position.x < 0.0 {
        "L"
    } else {
        "R"
    }
}

// Direction a pedestrian is walking, from the lateral velocity sign.
fn crossing_dir(actor: &Actor) -> Option<&'static str> {
    if actor.is_stationary {
        return None;
    }
    let vx = actor.rel_velocity_ms.x;
    if vx < -0.05 {
        Some("left")
    } else if vx > 0.05 {
        Some("right")
    } else {
        None
    }
}

/// Render the fixed-phrase template condition: instruction per intent plus a
/// generic notice chosen by the most urgent constraint kind. No metric values.
pub fn render_template(scene: &SceneState, intent: NavigationIntent) -> TemplateText {
    let records = rank_urgency(filter_relevant(scene, intent), scene);
    let top_actor = records.iter().find_map(|r| match r.subject {
        ConstraintSubject::Actor(i) => Some(&scene.actors[i]),
        _ => None,
    });

    let notice = if let Some(actor) = top_actor {
        Some(match actor.kind {
            ActorKind::Pedestrian => String::from("Watch out for pedestrians."),
            ActorKind::Vehicle => String::from("Watch for nearby vehicles."),
        })
    } else if matches!(scene.signal.state, SignalState::Red | SignalState::Yellow) {
        Some(String::from("Obey the traffic signal."))
    } else if records.iter().any(|r| r.is_ambient()) {
        Some(String::from("Reduce speed and drive carefully."))
    } else {
        None
    };

    TemplateText {
        instruction: format!("{}.", maneuver_phrase(intent)),
        notice,
    }
}

/// Render the flat condition: the same quantitative facts as CSN as
/// period-separated fragments, without causal connectives.
pub fn render_flat(scene: &SceneState, intent: NavigationIntent) -> String {
    let records = rank_urgency(filter_relevant(scene, intent), scene);
    let mut fragments: Vec<String> = Vec::new();

    fragments.push(format!("{}.", maneuver_phrase_short(intent)));
    fragments.push(format!("Speed {} km/h.", fmt_whole(scene.ego.speed_kmh)));

    for record in &records {
        let idx = match record.subject {
            ConstraintSubject::Actor(i) => i,
            _ => continue,
        };
        let actor = &scene.actors[idx];
        let d = fmt_whole(record.distance_m);
        match actor.kind {
            ActorKind::Pedestrian => match crossing_dir(actor) {
                Some(dir) => fragments.push(format!(
                    "Pedestrian {}m {} crossing {}.",
                    d,
                    side_word(actor),
                    dir
                )),
                None => {
                    fragments.push(format!("Pedestrian {}m {} standing.", d, side_word(actor)))
                }
            },
            ActorKind::Vehicle => {
                if actor.is_stationary {
                    fragments.push(format!(
                        "Sedan {}m {} stopped.",
                        d,
                        sector_abbrev(record.zone.sector)
                    ));
                } else {
                    fragments.push(format!(
                        "Sedan {}m {} {} km/h.",
                        d,
                        sector_abbrev(record.zone.sector),
                        fmt_whole(actor.speed_kmh)
                    ));
                }
            }
        }
    }

    match scene.signal.state {
        SignalState::Red => fragments.push(String::from("RED light.")),
        SignalState::Yellow => fragments.push(String::from("YELLOW light.")),
        SignalState::Green => fragments.push(String::from("GREEN light.")),
        SignalState::None => {}
    }
    if let Some(limit) = scene.signal.speed_limit_kmh {
        fragments.push(format!("Limit {} km/h.", fmt_whole(limit)));
    }

    if scene.road.in_junction {
        fragments.push(String::from("In junction."));
    } else if let Some(d) = scene.road.junction_distance_m {
        fragments.push(format!("Junction {}m.", fmt_whole(d)));
    }

    if scene.weather.precipitation >= WEATHER_NARRATE_THRESHOLD {
        fragments.push(String::from("Rain."));
    }
    if scene.weather.fog_density >= WEATHER_NARRATE_THRESHOLD {
        fragments.push(String::from("Fog."));
    }
    if scene.weather.wetness >= WEATHER_NARRATE_THRESHOLD {
        fragments.push(String::from("Wet road."));
    }
    if scene.weather.sun_altitude_deg < 0.0 {
        fragments.push(String::from("Night."));
    }

    fragments.join(" ")
}

/// Render the causal condition: instruction as a connective-linked clause
/// chain over the ranked constraints, notice as ordered `[EGO] [ROAD]
/// [SIGNAL] [ACTORS]` segments.
pub fn render_csn(scene: &SceneState, intent: NavigationIntent) -> CsnText {
    let records = rank_urgency(filter_relevant(scene, intent), scene);
    CsnText {
        instruction: csn_instruction(scene, intent, &records),
        notice: csn_notice(scene, &records),
    }
}

fn csn_instruction(
    scene: &SceneState,
    intent: NavigationIntent,
    records: &[ConstraintRecord],
) -> String {
    let conflicts: Vec<&ConstraintRecord> = records
        .iter()
        .filter(|r| {
            matches!(
                r.conflict_type,
                Some(ConflictType::Blocking) | Some(ConflictType::Temporal)
            )
        })
        .collect();
    let explanatory: Vec<&ConstraintRecord> = records
        .iter()
        .filter(|r| r.conflict_type == Some(ConflictType::Explanatory))
        .collect();

    let mut sentences: Vec<String> = Vec::new();
    let mut clauses_used = 0usize;

    match conflicts.first() {
        Some(primary) => {
            sentences.push(primary_clause(scene, intent, primary));
            clauses_used += 1;
        }
        None => sentences.push(format!("{}.", maneuver_phrase(intent))),
    }

    for record in conflicts.iter().skip(1) {
        if clauses_used >= MAX_INSTRUCTION_CLAUSES {
            break;
        }
        sentences.push(secondary_clause(scene, record));
        clauses_used += 1;
    }

    for record in &explanatory {
        if clauses_used >= MAX_INSTRUCTION_CLAUSES {
            break;
        }
        sentences.push(explanatory_clause(scene, intent, record));
        clauses_used += 1;
    }

    sentences.join(" ")
}

// The top-ranked conflict attaches to the maneuver clause with its
// connective: bare BUT for blocking, the BUT .. BEFORE pair for temporal.
fn primary_clause(
    scene: &SceneState,
    intent: NavigationIntent,
    record: &ConstraintRecord,
) -> String {
    let idx = match record.subject {
        ConstraintSubject::Actor(i) => i,
        _ => unreachable!("conflict records always reference actors"),
    };
    let actor = &scene.actors[idx];
    let d = fmt_whole(record.distance_m);
    match record.conflict_type {
        Some(ConflictType::Temporal) => {
            let approach = match actor.kind {
                ActorKind::Pedestrian => format!("crossing from {}", side_word(actor)),
                ActorKind::Vehicle => String::from("approaching"),
            };
            format!(
                "{}, BUT yield to {} {} at {}m BEFORE executing {}.",
                maneuver_phrase(intent),
                subject_word(actor.kind),
                approach,
                d,
                maneuver_noun(intent)
            )
        }
        _ => format!(
            "{}, BUT stop for {} blocking path at {}m.",
            maneuver_phrase(intent),
            subject_word(actor.kind),
            d
        ),
    }
}

fn secondary_clause(scene: &SceneState, record: &ConstraintRecord) -> String {
    let idx = match record.subject {
        ConstraintSubject::Actor(i) => i,
        _ => unreachable!("conflict records always reference actors"),
    };
    let actor = &scene.actors[idx];
    match (record.conflict_type, actor.kind) {
        (Some(ConflictType::Temporal), ActorKind::Vehicle) => format!(
            "Maintain distance from sedan {}.",
            sector_phrase(record.zone.sector)
        ),
        (Some(ConflictType::Temporal), ActorKind::Pedestrian) => format!(
            "Watch for pedestrian {}.",
            sector_phrase(record.zone.sector)
        ),
        _ => format!(
            "Stop for {} blocking at {}m.",
            subject_word(actor.kind),
            fmt_whole(record.distance_m)
        ),
    }
}

fn explanatory_clause(
    scene: &SceneState,
    intent: NavigationIntent,
    record: &ConstraintRecord,
) -> String {
    match record.subject {
        ConstraintSubject::WetRoad => format!(
            "Reduce speed BECAUSE wet road reduces braking effectiveness at current {} km/h.",
            fmt_whole(scene.ego.speed_kmh)
        ),
        ConstraintSubject::SignalSpeedLimit => format!(
            "Reduce speed BECAUSE speed limit {} km/h ahead.",
            fmt_whole(record.speed_kmh)
        ),
        ConstraintSubject::Actor(idx) => {
            let actor = &scene.actors[idx];
            format!(
                "Proceed BECAUSE {} {} at {}m does not cross the {} path.",
                subject_word(actor.kind),
                sector_phrase(record.zone.sector),
                fmt_whole(record.distance_m),
                maneuver_noun(intent)
            )
        }
    }
}

fn csn_notice(scene: &SceneState, records: &[ConstraintRecord]) -> String {
    let mut segments: Vec<String> = Vec::new();

    segments.push(format!(
        "[EGO] {}/{} km/h.",
        fmt_whole(scene.ego.speed_kmh),
        fmt_whole(scene.ego.speed_limit_kmh)
    ));

    let mut road = if scene.road.in_junction {
        String::from("In junction")
    } else if let Some(d) = scene.road.junction_distance_m {
        format!("Junction {}m", fmt_whole(d))
    } else {
        String::from("No junction")
    };
    if scene.road.lanes_open.contains(&Lane::Left) {
        road.push_str(", L-lane open");
    }
    if scene.road.lanes_open.contains(&Lane::Right) {
        road.push_str(", R-lane open");
    }
    if scene.weather.precipitation >= WEATHER_NARRATE_THRESHOLD {
        road.push_str(", rain");
    }
    if scene.weather.fog_density >= WEATHER_NARRATE_THRESHOLD {
        road.push_str(", fog");
    }
    if scene.weather.wetness >= WEATHER_NARRATE_THRESHOLD {
        road.push_str(", wet road");
    }
    if scene.weather.sun_altitude_deg < 0.0 {
        road.push_str(", night");
    }
    if math::fabs(scene.road.curvature) >= CURVE_NARRATE_THRESHOLD {
        road.push_str(if scene.road.curvature > 0.0 {
            ", curving L"
        } else {
            ", curving R"
        });
    }
    segments.push(format!("[ROAD] {}.", road));

    let state = match scene.signal.state {
        SignalState::Red => "RED",
        SignalState::Yellow => "YELLOW",
        SignalState::Green => "GREEN",
        SignalState::None => "NONE",
    };
    let mut signal = String::from(state);
    if let Some(limit) = scene.signal.speed_limit_kmh {
        signal.push_str(&format!(", limit {} km/h", fmt_whole(limit)));
    }
    segments.push(format!("[SIGNAL] {}.", signal));

    // Actor roster in scene declaration order: the notice is an observation
    // encoding; urgency ordering happens in the instruction.
    let mut actor_entries: Vec<(usize, String)> = Vec::new();
    for record in records {
        let idx = match record.subject {
            ConstraintSubject::Actor(i) => i,
            _ => continue,
        };
        let actor = &scene.actors[idx];
        let d = fmt_whole(record.distance_m);
        let entry = match actor.kind {
            ActorKind::Vehicle => {
                if actor.is_stationary {
                    format!("Sedan {}m {} stopped.", d, sector_abbrev(record.zone.sector))
                } else {
                    format!(
                        "Sedan {}m {} {} km/h.",
                        d,
                        sector_abbrev(record.zone.sector),
                        fmt_whole(actor.speed_kmh)
                    )
                }
            }
            ActorKind::Pedestrian => match crossing_dir(actor) {
                Some(dir) => {
                    let dir_abbrev = if dir == "left" { "L" } else { "R" };
                    format!("Ped {}m {}, crossing {}.", d, side_abbrev(actor), dir_abbrev)
                }
                None => format!("Ped {}m {}, standing.", d, side_abbrev(actor)),
            },
        };
        actor_entries.push((idx, entry));
    }
    actor_entries.sort_by_key(|(idx, _)| *idx);

    if actor_entries.is_empty() {
        segments.push(String::from("[ACTORS] none."));
    } else {
        let roster: Vec<String> = actor_entries.into_iter().map(|(_, e)| e).collect();
        segments.push(format!("[ACTORS] {}", roster.join(" ")));
    }

    segments.join(" ")
}

/// Render all three conditions for one scene.
pub fn narrate(scene: &SceneState, intent: NavigationIntent) -> NarrationBundle {
    NarrationBundle {
        template: render_template(scene, intent),
        flat: render_flat(scene, intent),
        csn: render_csn(scene, intent),
    }
}

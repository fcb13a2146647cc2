//! Desk-scale closed-loop kinematic harness.

pub mod episode;
pub mod metrics;
pub mod noise;
pub mod policy;
pub mod route;
pub mod suites;
pub mod ttc;
pub mod world;

pub use episode::{
    run_episode, ActionSource, EpisodeTrace, FrameRecord, InfractionKind, Termination,
    BLOCKED_FRAMES, FRAME_BUDGET,
};
pub use metrics::{compute_metrics, episode_metrics, EpisodeMetrics, MetricsError, MetricsSummary, RouteMetrics};
pub use noise::{inject_noise, NoiseConfig, NoiseLevel};
pub use policy::{PolicyKind, PolicyStub};
pub use route::{ActorScript, RouteGeometry, RouteSegment, RouteSpec, SignalScript};
pub use ttc::{ttc_monitor, TTC_DEFAULT_THRESHOLD_S};
pub use world::{step_world, DT_S};

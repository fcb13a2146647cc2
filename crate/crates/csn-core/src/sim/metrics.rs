//! Leaderboard-style driving metrics: route completion, cumulative
//! infraction penalty, and their product, the driving score.

use alloc::string::String;
use alloc::vec::Vec;

use super::episode::{EpisodeTrace, InfractionKind};

/// Penalty multiplier per infraction (public Leaderboard convention).
pub fn penalty(kind: InfractionKind) -> f64 {
    match kind {
        InfractionKind::CollisionPedestrian => 0.50,
        InfractionKind::CollisionVehicle => 0.60,
        InfractionKind::CollisionStatic => 0.65,
        InfractionKind::RedLight => 0.70,
        // blockage already costs its unfinished route completion
        InfractionKind::Blocked => 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("cannot compute metrics over an empty trace list")]
    Empty,
}

/// Metrics of a single episode.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpisodeMetrics {
    /// Driving score = RC x IS, in [0, 100].
    pub ds: f64,
    /// Route completion, percent.
    pub rc: f64,
    /// Infraction score: product of penalty coefficients, in (0, 1].
    pub is: f64,
}

pub fn episode_metrics(trace: &EpisodeTrace) -> EpisodeMetrics {
    let is: f64 = trace
        .infractions
        .iter()
        .map(|(kind, _)| penalty(*kind))
        .product();
    let rc = trace.rc_fraction * 100.0;
    EpisodeMetrics { ds: rc * is, rc, is }
}

/// Per-route means over repetitions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RouteMetrics {
    pub label: String,
    pub episodes: usize,
    pub ds: f64,
    pub rc: f64,
    pub is: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsSummary {
    pub per_route: Vec<RouteMetrics>,
    /// Mean of the per-route means.
    pub aggregate: EpisodeMetrics,
}

/// Aggregate a batch of traces per route (grouped by label, first-seen
/// order) and overall.
pub fn compute_metrics(traces: &[EpisodeTrace]) -> Result<MetricsSummary, MetricsError> {
    if traces.is_empty() {
        return Err(MetricsError::Empty);
    }

    let mut order: Vec<&str> = Vec::new();
    for t in traces {
        if !order.contains(&t.route_label.as_str()) {
            order.push(&t.route_label);
        }
    }

    let mut per_route = Vec::with_capacity(order.len());
    for label in &order {
        let group: Vec<EpisodeMetrics> = traces
            .iter()
            .filter(|t| t.route_label == *label)
            .map(episode_metrics)
            .collect();
        let n = group.len() as f64;
        per_route.push(RouteMetrics {
            label: String::from(*label),
            episodes: group.len(),
            ds: group.iter().map(|m| m.ds).sum::<f64>() / n,
            rc: group.iter().map(|m| m.rc).sum::<f64>() / n,
            is: group.iter().map(|m| m.is).sum::<f64>() / n,
        });
    }

    let n = per_route.len() as f64;
    let aggregate = EpisodeMetrics {
        ds: per_route.iter().map(|r| r.ds).sum::<f64>() / n,
        rc: per_route.iter().map(|r| r.rc).sum::<f64>() / n,
        is: per_route.iter().map(|r| r.is).sum::<f64>() / n,
    };

    Ok(MetricsSummary { per_route, aggregate })
}

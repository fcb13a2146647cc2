//! Experiment orchestration and reporting: utility decomposition, percentile
//! bootstrap confidence intervals, the ablation grid, and the noise sweep.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::narrator::NarrationCondition;
use crate::sim::episode::{run_episode, Termination};
use crate::sim::metrics::episode_metrics;
use crate::sim::noise::NoiseLevel;
use crate::sim::suites::rep_seed;
use crate::sim::{PolicyStub, RouteSpec};
use crate::supervisor::SupervisorConfig;

/// Split of a driving-score gain into its information and structure parts.
///
/// `total` is stored as the sum of the two parts so the additivity identity
/// holds bit-exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Decomposition {
    pub total: f64,
    pub utility_info: f64,
    pub utility_struct: f64,
    /// `utility_struct / total`; zero (flagged degenerate) when total is 0.
    pub struct_share: f64,
    pub degenerate: bool,
}

/// Decompose the template -> flat -> csn driving-score chain.
pub fn decompose_utility(ds_template: f64, ds_disc: f64, ds_csn: f64) -> Decomposition {
    let utility_info = ds_disc - ds_template;
    let utility_struct = ds_csn - ds_disc;
    let total = utility_info + utility_struct;
    let degenerate = total == 0.0;
    Decomposition {
        total,
        utility_info,
        utility_struct,
        struct_share: if degenerate { 0.0 } else { utility_struct / total },
        degenerate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("bootstrap over an empty sample")]
    EmptySample,
}

/// Percentile bootstrap confidence interval for the mean. Deterministic per
/// seed; the resample set does not depend on the level, so widening the
/// level can only widen the interval.
pub fn bootstrap_ci(
    values: &[f64],
    level: f64,
    resamples: u32,
    seed: u64,
) -> Result<(f64, f64), StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let n = values.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means = Vec::with_capacity(resamples as usize);
    for _ in 0..resamples {
        let mut acc = 0.0;
        for _ in 0..n {
            acc += values[rng.random_range(0..n)];
        }
        means.push(acc / n as f64);
    }
    means.sort_by(f64::total_cmp);

    let alpha = 1.0 - level;
    let b = resamples as f64;
    let lo_idx = ((alpha / 2.0) * b) as usize;
    let hi_idx = (((1.0 - alpha / 2.0) * b) as usize).min(resamples as usize - 1);
    Ok((means[lo_idx], means[hi_idx]))
}

// ---------------------------------------------------------------------------
// Ablation grid
// ---------------------------------------------------------------------------

/// One grid cell: a narration condition plus the safety-layer switches.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridConfig {
    pub label: String,
    pub condition: NarrationCondition,
    pub semantic_supervisor: bool,
    pub ttc_threshold_s: Option<f64>,
    pub noise: Option<NoiseLevel>,
    /// Block tag, mirroring the two weight configurations of the published
    /// grid; at desk scale both blocks drive the same stub policy.
    pub block: u8,
}

impl GridConfig {
    fn new(label: &str, condition: NarrationCondition, block: u8) -> Self {
        GridConfig {
            label: String::from(label),
            condition,
            semantic_supervisor: false,
            ttc_threshold_s: None,
            noise: None,
            block,
        }
    }

    fn with_supervisor(mut self) -> Self {
        self.semantic_supervisor = true;
        self
    }

    fn with_ttc(mut self, threshold: f64) -> Self {
        self.ttc_threshold_s = Some(threshold);
        self
    }
}

/// The ten-condition grid, shaped like the published ablation: a base block
/// and a preference-variant block (the same stub at desk scale), covering
/// template/flat/csn narration and the two safety monitors.
pub fn standard_grid() -> Vec<GridConfig> {
    alloc::vec![
        GridConfig::new("base", NarrationCondition::Template, 1),
        GridConfig::new("base+csn", NarrationCondition::Csn, 1),
        GridConfig::new("base+flat", NarrationCondition::Flat, 1),
        GridConfig::new("base+semantic", NarrationCondition::Template, 1).with_supervisor(),
        GridConfig::new("pref", NarrationCondition::Template, 2),
        GridConfig::new("pref+ttc", NarrationCondition::Template, 2).with_ttc(2.0),
        GridConfig::new("pref+semantic", NarrationCondition::Template, 2).with_supervisor(),
        GridConfig::new("pref+csn", NarrationCondition::Csn, 2),
        GridConfig::new("pref+csn+semantic", NarrationCondition::Csn, 2).with_supervisor(),
        GridConfig::new("pref+flat", NarrationCondition::Flat, 2),
    ]
}

/// Aggregated result of one grid condition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionResult {
    pub label: String,
    pub per_route_ds: Vec<f64>,
    /// Across-route mean DS per repetition; the bootstrap resamples these.
    pub per_rep_ds: Vec<f64>,
    pub mean_ds: f64,
    pub mean_rc: f64,
    pub mean_is: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub blocked_terminations: u32,
    pub ttc_brake_frames: u64,
    pub fallback_frames: u64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionRow {
    pub block: u8,
    pub decomposition: Decomposition,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseRow {
    pub label: String,
    pub dist_sigma_m: f64,
    pub speed_noise_frac: f64,
    pub miss_rate: f64,
    pub mean_ds: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub overlaps_clean: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AblationReport {
    pub conditions: Vec<ConditionResult>,
    pub decompositions: Vec<DecompositionRow>,
    pub noise_rows: Vec<NoiseRow>,
    pub routes: Vec<String>,
    pub reps: u32,
    pub seed: u64,
}

/// Bootstrap parameters used across report assembly.
pub const CI_LEVEL: f64 = 0.95;
pub const CI_RESAMPLES: u32 = 10_000;

fn run_condition(
    routes: &[RouteSpec],
    config: &GridConfig,
    reps: u32,
    seed: u64,
    ci_seed: u64,
) -> ConditionResult {
    let policy = PolicyStub::faithful();
    let supervisor = config.semantic_supervisor.then(SupervisorConfig::default);

    // traces[route][rep]
    let mut per_route_ds = Vec::with_capacity(routes.len());
    let mut per_rep_accum = alloc::vec![0.0f64; reps as usize];
    let mut mean_rc = 0.0;
    let mut mean_is = 0.0;
    let mut blocked = 0u32;
    let mut ttc_frames = 0u64;
    let mut bc_frames = 0u64;

    for route in routes {
        let mut route_ds = 0.0;
        for rep in 0..reps {
            let seeded = route.with_seed(rep_seed(route.seed.wrapping_add(seed), rep));
            let noise = config.noise.map(|lvl| lvl.config(seeded.seed ^ 0xA5A5));
            let trace = run_episode(
                &seeded,
                &policy,
                config.condition,
                supervisor,
                config.ttc_threshold_s,
                noise,
            );
            let m = episode_metrics(&trace);
            route_ds += m.ds;
            per_rep_accum[rep as usize] += m.ds;
            mean_rc += m.rc;
            mean_is += m.is;
            if trace.terminated == Termination::Blocked {
                blocked += 1;
            }
            ttc_frames += trace.ttc_brake_frames;
            bc_frames += trace.fallback_frames;
        }
        per_route_ds.push(route_ds / reps as f64);
    }

    let episodes = (routes.len() as u32 * reps) as f64;
    let per_rep_ds: Vec<f64> = per_rep_accum
        .iter()
        .map(|total| total / routes.len() as f64)
        .collect();
    let mean_ds = per_route_ds.iter().sum::<f64>() / routes.len() as f64;
    let (ci_low, ci_high) =
        bootstrap_ci(&per_rep_ds, CI_LEVEL, CI_RESAMPLES, ci_seed).expect("reps >= 1");

    ConditionResult {
        label: config.label.clone(),
        per_route_ds,
        per_rep_ds,
        mean_ds,
        mean_rc: mean_rc / episodes,
        mean_is: mean_is / episodes,
        ci_low,
        ci_high,
        blocked_terminations: blocked,
        ttc_brake_frames: ttc_frames,
        fallback_frames: bc_frames,
    }
}

fn find_ds(conditions: &[ConditionResult], grid: &[GridConfig], block: u8, cond: NarrationCondition) -> Option<f64> {
    grid.iter()
        .zip(conditions)
        .find(|(g, _)| {
            g.block == block
                && g.condition == cond
                && !g.semantic_supervisor
                && g.ttc_threshold_s.is_none()
                && g.noise.is_none()
        })
        .map(|(_, r)| r.mean_ds)
}

/// Run the full grid, then the Table-3-shaped noise sweep, and assemble the
/// report. Seeds are paired across conditions: the same (route, rep) always
/// replays the same world.
pub fn run_ablation_grid(
    routes: &[RouteSpec],
    grid: &[GridConfig],
    reps: u32,
    seed: u64,
) -> AblationReport {
    let mut conditions = Vec::with_capacity(grid.len());
    for (idx, config) in grid.iter().enumerate() {
        conditions.push(run_condition(
            routes,
            config,
            reps,
            seed,
            seed ^ (idx as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03),
        ));
    }

    let mut decompositions = Vec::new();
    for block in [1u8, 2u8] {
        let template = find_ds(&conditions, grid, block, NarrationCondition::Template);
        let flat = find_ds(&conditions, grid, block, NarrationCondition::Flat);
        let csn = find_ds(&conditions, grid, block, NarrationCondition::Csn);
        if let (Some(t), Some(f), Some(c)) = (template, flat, csn) {
            decompositions.push(DecompositionRow {
                block,
                decomposition: decompose_utility(t, f, c),
            });
        }
    }

    let noise_rows = run_noise_sweep(routes, reps, seed);

    AblationReport {
        conditions,
        decompositions,
        noise_rows,
        routes: routes.iter().map(|r| r.label.clone()).collect(),
        reps,
        seed,
    }
}

/// The five-level perception-noise sweep with the faithful policy under the
/// causal narration condition.
pub fn run_noise_sweep(routes: &[RouteSpec], reps: u32, seed: u64) -> Vec<NoiseRow> {
    let mut rows: Vec<NoiseRow> = Vec::with_capacity(NoiseLevel::ALL.len());
    let mut clean_interval: Option<(f64, f64)> = None;

    for (idx, level) in NoiseLevel::ALL.iter().enumerate() {
        let config = GridConfig {
            label: String::from(level.label()),
            condition: NarrationCondition::Csn,
            semantic_supervisor: false,
            ttc_threshold_s: None,
            noise: Some(*level),
            block: 0,
        };
        let result = run_condition(
            routes,
            &config,
            reps,
            seed,
            seed ^ (0x77 + idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let (sigma, frac, miss) = level.params();
        let overlaps = match clean_interval {
            Some((lo, hi)) => result.ci_low <= hi && lo <= result.ci_high,
            None => {
                clean_interval = Some((result.ci_low, result.ci_high));
                true
            }
        };
        rows.push(NoiseRow {
            label: String::from(level.label()),
            dist_sigma_m: sigma,
            speed_noise_frac: frac,
            miss_rate: miss,
            mean_ds: result.mean_ds,
            ci_low: result.ci_low,
            ci_high: result.ci_high,
            overlaps_clean: overlaps,
        });
    }
    rows
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Plain-text report; byte-identical across runs with the same seeds.
pub fn render_report(report: &AblationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "ablation grid  routes={} reps={} seed={}\n",
        report.routes.join(","),
        report.reps,
        report.seed
    ));
    out.push_str(&format!(
        "{:<20} {:>8} {:>8} {:>7} {:>9} {:>9} {:>8} {:>9}\n",
        "condition", "DS", "RC%", "IS", "CI-low", "CI-high", "blocked", "bc-frames"
    ));
    for c in &report.conditions {
        out.push_str(&format!(
            "{:<20} {:>8.2} {:>8.2} {:>7.3} {:>9.2} {:>9.2} {:>8} {:>9}\n",
            c.label,
            c.mean_ds,
            c.mean_rc,
            c.mean_is,
            c.ci_low,
            c.ci_high,
            c.blocked_terminations,
            c.fallback_frames
        ));
    }

    for row in &report.decompositions {
        let d = &row.decomposition;
        out.push_str(&format!(
            "decomposition block{}: total={:+.2} info={:+.2} struct={:+.2} share={:.1}%{}\n",
            row.block,
            d.total,
            d.utility_info,
            d.utility_struct,
            d.struct_share * 100.0,
            if d.degenerate { " (degenerate)" } else { "" }
        ));
    }

    if !report.noise_rows.is_empty() {
        out.push_str(&format!(
            "{:<10} {:>7} {:>7} {:>6} {:>8} {:>9} {:>9} {:>8}\n",
            "noise", "sigma", "speed", "miss", "DS", "CI-low", "CI-high", "overlap"
        ));
        for row in &report.noise_rows {
            out.push_str(&format!(
                "{:<10} {:>7.1} {:>6.0}% {:>5.0}% {:>8.2} {:>9.2} {:>9.2} {:>8}\n",
                row.label,
                row.dist_sigma_m,
                row.speed_noise_frac * 100.0,
                row.miss_rate * 100.0,
                row.mean_ds,
                row.ci_low,
                row.ci_high,
                if row.overlaps_clean { "yes" } else { "no" }
            ));
        }
    }
    out
}

/// Comma-separated variant of the same data.
pub fn render_csv(report: &AblationReport) -> String {
    let mut out = String::from(
        "section,label,ds,rc,is,ci_low,ci_high,blocked,ttc_brake_frames,fallback_frames\n",
    );
    for c in &report.conditions {
        out.push_str(&format!(
            "condition,{},{:.4},{:.4},{:.4},{:.4},{:.4},{},{},{}\n",
            c.label,
            c.mean_ds,
            c.mean_rc,
            c.mean_is,
            c.ci_low,
            c.ci_high,
            c.blocked_terminations,
            c.ttc_brake_frames,
            c.fallback_frames
        ));
    }
    for row in &report.decompositions {
        let d = &row.decomposition;
        out.push_str(&format!(
            "decomposition,block{},{:.4},{:.4},{:.4},{:.4},,,,\n",
            row.block, d.total, d.utility_info, d.utility_struct, d.struct_share
        ));
    }
    for row in &report.noise_rows {
        out.push_str(&format!(
            "noise,{},{:.4},,,{:.4},{:.4},,,\n",
            row.label, row.mean_ds, row.ci_low, row.ci_high
        ));
    }
    out
}

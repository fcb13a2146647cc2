//! Command-line front end: scene narration, monitor replay, closed-loop
//! simulation, preference-loss checking, and ablation reports.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use csn_core::narrator::{self, NarrationCondition};
use csn_core::pldpo::{loss_gradient, pl_dpo_loss, pl_dpo_nll_loss, BetaTable, PreferenceSample};
use csn_core::report::{
    decompose_utility, render_csv, render_report, run_ablation_grid, standard_grid, GridConfig,
};
use csn_core::scene::{NavigationIntent, SceneState, Vec2};
use csn_core::sim::suites::{
    blockage_route, dense_traffic_suite, narration_route, rep_seed, turn_suite,
};
use csn_core::sim::{
    compute_metrics, episode_metrics, run_episode, world::DT_S, NoiseLevel, PolicyStub, RouteSpec,
};
use csn_core::supervisor::{
    bearing_angle, check_phi1, step_supervisor, MonitorRecord, SupervisorConfig,
    SupervisorState, WaypointTrajectory,
};

#[derive(Parser)]
#[command(name = "csn", version, about = "Causal scene narration and runtime safety toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntentArg {
    LeftTurn,
    RightTurn,
    Straight,
    LaneChangeLeft,
    LaneChangeRight,
    Follow,
}

impl From<IntentArg> for NavigationIntent {
    fn from(value: IntentArg) -> Self {
        match value {
            IntentArg::LeftTurn => NavigationIntent::LeftTurn,
            IntentArg::RightTurn => NavigationIntent::RightTurn,
            IntentArg::Straight => NavigationIntent::Straight,
            IntentArg::LaneChangeLeft => NavigationIntent::LaneChangeLeft,
            IntentArg::LaneChangeRight => NavigationIntent::LaneChangeRight,
            IntentArg::Follow => NavigationIntent::Follow,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConditionArg {
    Template,
    Flat,
    Csn,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Faithful,
    DirectionFlip,
    Freeze,
    NoisyFaithful,
}

#[derive(Clone, Copy, ValueEnum)]
enum SupervisorArg {
    Off,
    Semantic,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    Clean,
    Mild,
    Moderate,
    Severe,
    Extreme,
}

impl From<NoiseArg> for NoiseLevel {
    fn from(value: NoiseArg) -> Self {
        match value {
            NoiseArg::Clean => NoiseLevel::Clean,
            NoiseArg::Mild => NoiseLevel::Mild,
            NoiseArg::Moderate => NoiseLevel::Moderate,
            NoiseArg::Severe => NoiseLevel::Severe,
            NoiseArg::Extreme => NoiseLevel::Extreme,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Render a scene file into one or all text conditions.
    Narrate {
        /// SceneState JSON file.
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, value_enum)]
        intent: IntentArg,
        #[arg(long, value_enum, default_value = "all")]
        condition: ConditionArg,
        /// Write the full NarrationBundle as JSON instead of plain text.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a waypoint-trajectory log against a route and emit the
    /// monitor trace (one JSON record per line).
    Monitor {
        /// JSONL input: {"waypoints": [[x,y],..], "throttle": t, "speed_ms": v}
        #[arg(long)]
        input: PathBuf,
        /// RouteSpec JSON file.
        #[arg(long)]
        route: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run closed-loop episodes on a route.
    Simulate {
        /// RouteSpec JSON file, or builtin:<label> (see `--route builtin:list`).
        #[arg(long)]
        route: String,
        #[arg(long, value_enum, default_value = "faithful")]
        policy: PolicyArg,
        /// Waypoint jitter for the noisy-faithful policy, metres.
        #[arg(long, default_value_t = 0.5)]
        jitter: f64,
        #[arg(long, value_enum, default_value = "csn")]
        condition: ConditionArg,
        #[arg(long, value_enum, default_value = "off")]
        supervisor: SupervisorArg,
        /// Enable the reactive TTC monitor with this threshold in seconds.
        #[arg(long)]
        ttc: Option<f64>,
        /// Perception-noise level applied to the narrator's view.
        #[arg(long, value_enum)]
        noise: Option<NoiseArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: u32,
        /// Write one EpisodeTrace JSON per repetition into this directory.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Evaluate PL-DPO / PL-DPO-NLL losses and gradients for a sample batch,
    /// with finite-difference residuals.
    LossCheck {
        /// JSON array of PreferenceSample objects.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a driving-score gain into information and structure parts.
    Decompose {
        #[arg(long)]
        template: f64,
        #[arg(long)]
        flat: f64,
        #[arg(long)]
        csn: f64,
    },
    /// Run the ablation grid and noise sweep, emitting text and CSV tables.
    Grid {
        /// "builtin" or a JSON file with an array of RouteSpec objects.
        #[arg(long, default_value = "builtin")]
        routes: String,
        /// Optional JSON file with an array of grid conditions; defaults to
        /// the built-in ten-condition grid.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        reps: u32,
        #[arg(long, default_value_t = 2026)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Narrate { scene, intent, condition, out } => {
            cmd_narrate(&scene, intent.into(), condition, out.as_deref())
        }
        Command::Monitor { input, route, out } => cmd_monitor(&input, &route, out.as_deref()),
        Command::Simulate {
            route,
            policy,
            jitter,
            condition,
            supervisor,
            ttc,
            noise,
            seed,
            reps,
            trace_out,
        } => cmd_simulate(
            &route,
            policy,
            jitter,
            condition,
            supervisor,
            ttc,
            noise,
            seed,
            reps,
            trace_out.as_deref(),
        ),
        Command::LossCheck { input, out } => cmd_loss_check(&input, out.as_deref()),
        Command::Decompose { template, flat, csn } => cmd_decompose(template, flat, csn),
        Command::Grid { routes, config, reps, seed, out_dir } => {
            cmd_grid(&routes, config.as_deref(), reps, seed, out_dir.as_deref())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_narrate(
    scene_path: &Path,
    intent: NavigationIntent,
    condition: ConditionArg,
    out: Option<&Path>,
) -> Result<()> {
    let scene: SceneState = read_json(scene_path)?;
    let bundle = narrator::narrate(&scene, intent);

    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&bundle)?)?;
        println!("wrote {}", path.display());
        return Ok(());
    }

    match condition {
        ConditionArg::Template => {
            println!("{}", bundle.template.instruction);
            if let Some(notice) = &bundle.template.notice {
                println!("{notice}");
            }
        }
        ConditionArg::Flat => println!("{}", bundle.flat),
        ConditionArg::Csn => {
            println!("{}", bundle.csn.instruction);
            println!("{}", bundle.csn.notice);
        }
        ConditionArg::All => {
            println!("[template] {}", bundle.template.instruction);
            if let Some(notice) = &bundle.template.notice {
                println!("[template] {notice}");
            }
            println!("[flat] {}", bundle.flat);
            println!("[csn] {}", bundle.csn.instruction);
            println!("[csn] {}", bundle.csn.notice);
        }
    }
    Ok(())
}

/// One line of a trajectory replay log.
#[derive(serde::Deserialize)]
struct ReplayFrame {
    waypoints: Vec<[f64; 2]>,
    throttle: f64,
    speed_ms: f64,
}

fn cmd_monitor(input: &Path, route_path: &Path, out: Option<&Path>) -> Result<()> {
    let route: RouteSpec = read_json(route_path)?;
    let geometry = route.compile();
    let cfg = SupervisorConfig::default();

    let reader = BufReader::new(
        fs::File::open(input).with_context(|| format!("opening {}", input.display()))?,
    );
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };

    let mut state = SupervisorState::new();
    let mut s = 0.0f64;
    for (frame, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let replay: ReplayFrame =
            serde_json::from_str(&line).with_context(|| format!("line {}", frame + 1))?;
        let points: Vec<Vec2> = replay.waypoints.iter().map(|&p| Vec2::from(p)).collect();
        let traj = WaypointTrajectory::new(points)
            .map_err(|e| anyhow::anyhow!("line {}: {e}", frame + 1))?;

        let command = geometry.command_at(s);
        let in_junction = geometry.in_junction(geometry.point_at(s));
        let (next, authority) = step_supervisor(
            &state,
            &traj,
            command,
            in_junction,
            replay.throttle,
            replay.speed_ms,
            &cfg,
        );
        let theta = bearing_angle(&traj, cfg.epsilon);
        let record = MonitorRecord {
            frame: frame as u64,
            mode: next.mode,
            theta_deg: theta,
            phi1: check_phi1(theta, command, in_junction, &cfg),
            phi2: next.stuck_counter < cfg.t_stuck_frames,
            stuck_counter: next.stuck_counter,
            countdown: next.intervention_countdown,
            action_source: authority,
        };
        writeln!(sink, "{}", serde_json::to_string(&record)?)?;

        state = next;
        s += replay.speed_ms * DT_S;
    }
    Ok(())
}

fn builtin_routes() -> Vec<RouteSpec> {
    let mut routes = turn_suite(101);
    routes.push(narration_route(202));
    routes.extend(dense_traffic_suite(303));
    routes.push(blockage_route(404));
    routes
}

fn resolve_route(spec: &str) -> Result<RouteSpec> {
    if let Some(label) = spec.strip_prefix("builtin:") {
        let routes = builtin_routes();
        if label == "list" {
            let labels: Vec<&str> = routes.iter().map(|r| r.label.as_str()).collect();
            bail!("available builtin routes: {}", labels.join(", "));
        }
        return routes
            .into_iter()
            .find(|r| r.label == label)
            .with_context(|| format!("no builtin route named {label}"));
    }
    read_json(Path::new(spec))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    route_spec: &str,
    policy: PolicyArg,
    jitter: f64,
    condition: ConditionArg,
    supervisor: SupervisorArg,
    ttc: Option<f64>,
    noise: Option<NoiseArg>,
    seed: u64,
    reps: u32,
    trace_out: Option<&Path>,
) -> Result<()> {
    let route = resolve_route(route_spec)?;
    let policy = match policy {
        PolicyArg::Faithful => PolicyStub::faithful(),
        PolicyArg::DirectionFlip => PolicyStub::direction_flip(),
        PolicyArg::Freeze => PolicyStub::freeze(),
        PolicyArg::NoisyFaithful => PolicyStub::noisy_faithful(jitter),
    };
    let condition = match condition {
        ConditionArg::Template => NarrationCondition::Template,
        ConditionArg::Flat => NarrationCondition::Flat,
        ConditionArg::Csn | ConditionArg::All => NarrationCondition::Csn,
    };
    let sup = matches!(supervisor, SupervisorArg::Semantic).then(SupervisorConfig::default);
    if sup.is_some() && ttc.is_some() {
        eprintln!("note: both the semantic supervisor and the TTC monitor are enabled");
    }

    let mut traces = Vec::with_capacity(reps as usize);
    for rep in 0..reps {
        let seeded = route.with_seed(rep_seed(route.seed.wrapping_add(seed), rep));
        let noise_cfg = noise.map(|n| NoiseLevel::from(n).config(seeded.seed ^ 0xA5A5));
        let trace = run_episode(&seeded, &policy, condition, sup, ttc, noise_cfg);
        let m = episode_metrics(&trace);
        println!(
            "rep {rep}: ds={:.2} rc={:.1}% is={:.3} terminated={:?} frames={} infractions={}",
            m.ds,
            m.rc,
            m.is,
            trace.terminated,
            trace.frames.len(),
            trace.infractions.len()
        );
        if let Some(dir) = trace_out {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}-rep{rep}.json", route.label));
            fs::write(&path, serde_json::to_string(&trace)?)?;
            println!("  trace -> {}", path.display());
        }
        traces.push(trace);
    }

    let summary = compute_metrics(&traces)?;
    println!(
        "mean: ds={:.2} rc={:.1}% is={:.3}",
        summary.aggregate.ds, summary.aggregate.rc, summary.aggregate.is
    );
    Ok(())
}

fn cmd_loss_check(input: &Path, out: Option<&Path>) -> Result<()> {
    let samples: Vec<PreferenceSample> = read_json(input)?;
    let table = BetaTable::default();

    #[derive(serde::Serialize)]
    struct Row {
        index: usize,
        scene_type: csn_core::pldpo::SceneType,
        beta: f64,
        pl_loss: f64,
        nll_loss: f64,
        gradient: Vec<f64>,
        fd_max_residual: f64,
    }

    let mut rows = Vec::with_capacity(samples.len());
    for (index, sample) in samples.iter().enumerate() {
        sample
            .validate()
            .map_err(|e| anyhow::anyhow!("sample {index}: {e}"))?;
        let beta = table.beta_for(sample.scene_type);
        let pl = pl_dpo_loss(sample, beta)?;
        let nll = pl_dpo_nll_loss(sample, &table)?;
        let gradient = loss_gradient(sample, &table)?;

        // central finite differences as an on-the-spot cross-check
        let h = 1e-5;
        let mut fd_max_residual = 0.0f64;
        for i in 0..sample.policy_logprobs.len() {
            let mut plus = sample.clone();
            plus.policy_logprobs[i] += h;
            let mut minus = sample.clone();
            minus.policy_logprobs[i] -= h;
            let fd = (pl_dpo_nll_loss(&plus, &table)? - pl_dpo_nll_loss(&minus, &table)?)
                / (2.0 * h);
            fd_max_residual = fd_max_residual.max((fd - gradient[i]).abs());
        }

        println!(
            "sample {index}: scene={:?} beta={:.2} pl={:.6} nll={:.6} fd_residual={:.3e}",
            sample.scene_type, beta, pl, nll, fd_max_residual
        );
        rows.push(Row {
            index,
            scene_type: sample.scene_type,
            beta,
            pl_loss: pl,
            nll_loss: nll,
            gradient,
            fd_max_residual,
        });
    }

    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&rows)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_decompose(template: f64, flat: f64, csn: f64) -> Result<()> {
    let d = decompose_utility(template, flat, csn);
    println!(
        "total={:+.2} info={:+.2} struct={:+.2} share={:.1}%{}",
        d.total,
        d.utility_info,
        d.utility_struct,
        d.struct_share * 100.0,
        if d.degenerate { " (degenerate)" } else { "" }
    );
    Ok(())
}

fn cmd_grid(
    routes_spec: &str,
    config: Option<&Path>,
    reps: u32,
    seed: u64,
    out_dir: Option<&Path>,
) -> Result<()> {
    let routes: Vec<RouteSpec> = if routes_spec == "builtin" {
        builtin_routes()
    } else {
        read_json(Path::new(routes_spec))?
    };
    let grid: Vec<GridConfig> = match config {
        Some(path) => read_json(path)?,
        None => standard_grid(),
    };

    let report = run_ablation_grid(&routes, &grid, reps, seed);
    let text = render_report(&report);
    print!("{text}");

    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.txt"), &text)?;
        fs::write(dir.join("report.csv"), render_csv(&report))?;
        fs::write(
            dir.join("report.json"),
            serde_json::to_string_pretty(&report)?,
        )?;
        println!("wrote report.txt, report.csv, report.json -> {}", dir.display());
    }
    Ok(())
}

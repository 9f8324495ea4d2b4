//! `vflock`: run, sweep, classify and render vision-only flock simulations.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use visual_flock::config::Config;
use visual_flock::metrics::compute_metrics;
use visual_flock::output;
use visual_flock::params::Variant;
use visual_flock::render::{render_diagram, RenderChannel};
use visual_flock::simulator::{run_observed, RunOptions};
use visual_flock::sweep::{linspace, run_sweep, PhaseDiagram, SweepGrid};
use visual_flock::trace::TraceWriter;
use visual_flock::vision::build_all_panoramas;

#[derive(Parser)]
#[command(name = "vflock", version, about = "Vision-only collective motion simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write trajectory, collision and metric files.
    Run(RunArgs),
    /// Sweep the (k_attract, k_align) grid with replicated runs.
    Sweep(SweepArgs),
    /// Recompute metrics and the phase label from a trajectory CSV.
    Classify(ClassifyArgs),
    /// Render heatmaps from sweep output (CSV or aggregated JSON).
    Render(RenderArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML config file; unset fields use built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Model variant (overrides the config's gains/delay switches).
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl CommonArgs {
    fn load_config(&self) -> anyhow::Result<Config> {
        match &self.config {
            Some(path) => {
                Config::load(path).with_context(|| format!("loading {}", path.display()))
            }
            None => Ok(Config::default()),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Attraction gain override.
    #[arg(long)]
    k_attract: Option<f64>,
    /// Alignment gain override.
    #[arg(long)]
    k_align: Option<f64>,
    /// Total simulated time override.
    #[arg(long)]
    t_end: Option<f64>,
    /// Flock size override.
    #[arg(long)]
    n_agents: Option<usize>,
    /// Trajectory recording cadence in steps (0 disables).
    #[arg(long)]
    record_every: Option<usize>,
    /// Write a JSON-lines debug trace (panoramas, flow, steering).
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Grid resolution as AxB (e.g. 7x7 or 31x31).
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// Replicates per cell.
    #[arg(long)]
    replicates: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Trajectory CSV (t,agent_id,x,y,theta).
    #[arg(long)]
    trajectory: PathBuf,
    /// Classification window override, in time units.
    #[arg(long)]
    window: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RenderArgs {
    /// Sweep output: a sweep CSV or an aggregated diagram JSON.
    #[arg(long)]
    input: PathBuf,
    /// Channels to render (default: all).
    #[arg(long, value_enum)]
    channel: Vec<RenderChannel>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Variant label when rendering from a CSV (cosmetic).
    #[arg(long, value_enum, default_value = "delay")]
    variant: Variant,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected AxB, got {s:?}"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("bad grid size {t:?}"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let config = args.common.load_config()?;
    let mut params = match args.common.variant {
        Some(v) => v.apply(&config.model),
        None => config.model.clone(),
    };
    if let Some(k) = args.k_attract {
        params.k_attract = k;
    }
    if let Some(k) = args.k_align {
        params.k_align = k;
    }
    if let Some(t) = args.t_end {
        params.t_end = t;
    }
    if let Some(n) = args.n_agents {
        params.n_agents = n;
    }
    let seed = args.common.seed.unwrap_or(config.run.seed);
    let record_every = args.record_every.unwrap_or(config.run.record_every);

    let out_dir = &args.common.out;
    fs::create_dir_all(out_dir)?;

    let opts = RunOptions { record_every };
    let mut tracer = if args.trace {
        let file = fs::File::create(out_dir.join("trace.jsonl"))?;
        Some(TraceWriter::new(BufWriter::new(file), record_every.max(1)))
    } else {
        None
    };
    let result = run_observed(&params, seed, &opts, |view| {
        if let Some(t) = tracer.as_mut() {
            t.observe(&view, &params).expect("trace write");
        }
    })?;

    write_file(out_dir, "trajectory.csv", &output::trajectory_csv(&result.trajectory))?;
    write_file(out_dir, "collisions.csv", &output::collisions_csv(&result.collisions))?;
    write_file(out_dir, "metrics.csv", &output::metrics_csv(&result.metrics))?;
    let summary = output::summarize_run(&params, &result)?;
    write_file(
        out_dir,
        "summary.json",
        &serde_json::to_string_pretty(&summary)?,
    )?;

    println!(
        "phase={} P={:.3} M={:.3} O={:.3} collisions={:.1}% (seed {}, tau_eff {})",
        summary.phase.phase,
        summary.phase.mean_polarization,
        summary.phase.mean_milling,
        summary.phase.mean_opacity,
        100.0 * summary.collisions.contact_fraction(),
        seed,
        summary.effective_tau,
    );
    println!("outputs in {}", out_dir.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let config = args.common.load_config()?;
    let s = &config.sweep;
    let (na, nj) = args.grid.unwrap_or((s.grid, s.grid));
    let grid = SweepGrid {
        k_attract: linspace(s.k_attract_min, s.k_attract_max, na),
        k_align: linspace(s.k_align_min, s.k_align_max, nj),
        replicates: args.replicates.unwrap_or(s.replicates),
        variant: args.common.variant.unwrap_or(s.variant),
        base: config.model.clone(),
    };
    let seed = args.common.seed.unwrap_or(config.run.seed);
    let workers = args.workers.unwrap_or(s.workers);

    eprintln!(
        "sweep: {}x{} cells, {} replicates, variant {:?}, seed {seed}",
        na, nj, grid.replicates, grid.variant
    );
    let diagram = run_sweep(&grid, seed, workers)?;

    let out_dir = &args.common.out;
    fs::create_dir_all(out_dir)?;
    write_file(out_dir, "sweep.csv", &output::sweep_csv(&diagram))?;
    write_file(out_dir, "diagram.json", &diagram.to_json())?;
    println!("outputs in {}", out_dir.display());

    let failed = diagram.failed_replicates();
    if failed > 0 {
        bail!("{failed} replicate(s) failed; see diagram.json for details");
    }
    Ok(())
}

fn cmd_classify(args: ClassifyArgs) -> anyhow::Result<()> {
    let config = args.common.load_config()?;
    let mut params = config.model.clone();
    if let Some(w) = args.window {
        params.metrics_window = w;
    }

    let text = fs::read_to_string(&args.trajectory)
        .with_context(|| format!("reading {}", args.trajectory.display()))?;
    let rows = output::parse_trajectory_csv(&text)?;
    let frames = output::trajectory_frames(&rows)?;
    if frames.is_empty() {
        bail!("trajectory contains no frames");
    }

    let series: Vec<_> = frames
        .iter()
        .map(|(t, states)| {
            let mut p = params.clone();
            p.n_agents = states.len();
            let panoramas = build_all_panoramas(states, &p, *t);
            compute_metrics(states, &panoramas)
        })
        .collect();
    let label =
        visual_flock::metrics::classify_phase(&series, params.metrics_window, params.bistable_occupancy)?;

    let out_dir = &args.common.out;
    fs::create_dir_all(out_dir)?;
    write_file(out_dir, "metrics.csv", &output::metrics_csv(&series))?;
    write_file(out_dir, "phase.json", &serde_json::to_string_pretty(&label)?)?;
    println!(
        "phase={} P={:.3} M={:.3} O={:.3} (window {})",
        label.phase, label.mean_polarization, label.mean_milling, label.mean_opacity, params.metrics_window
    );
    Ok(())
}

fn cmd_render(args: RenderArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let diagram: PhaseDiagram = if args.input.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).context("parsing diagram JSON")?
    } else {
        let rows = output::parse_sweep_csv(&text)?;
        PhaseDiagram::from_rows(&rows, args.variant, 0)?
    };

    let channels = if args.channel.is_empty() {
        vec![
            RenderChannel::Polarization,
            RenderChannel::Milling,
            RenderChannel::Opacity,
            RenderChannel::Phase,
        ]
    } else {
        args.channel.clone()
    };

    fs::create_dir_all(&args.out)?;
    for ch in channels {
        let svg = render_diagram(&diagram, ch);
        let path = write_file(&args.out, &format!("diagram_{}.svg", ch.name()), &svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Render(args) => cmd_render(args),
    }
}

//! `swarmnav` — generate scenes, run navigation strategies, verify travel-time
//! bounds, render traces to SVG, and sweep parameters to CSV.
//!
//! Exit codes: 0 success, 1 bound-check failure, 2 usage or invalid
//! parameters, 3 non-halting run detected, 4 other non-arrival (budget
//! exceeded or target unreachable).

mod gen;
mod svg;
mod sweep;
mod trace;

use std::collections::BTreeMap;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use swarmnav::bounds::{self, BoundReport};
use swarmnav::scene::Scene;
use swarmnav::sim::{Algorithm, SimConfig, SimResult, SimStatus};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "swarmnav",
    version,
    about = "Swarm navigation among polygonal obstacles: scenes, runs, bounds, renders, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a scene file and print its metrics
    Generate {
        #[command(subcommand)]
        which: GenCmd,
    },
    /// Run one algorithm on a scene; write a trace and a summary
    Run(RunArgs),
    /// Run algorithms and check every applicable travel-time bound
    Verify(VerifyArgs),
    /// Render a recorded trace over its scene as SVG
    Render(RenderArgs),
    /// Run a parameter grid and write one CSV row per run
    Sweep(sweep::SweepArgs),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Thin vertical wall centered between start and target
    LongWall {
        /// Start-target distance
        #[arg(long)]
        d: f64,
        /// Wall half-length
        #[arg(long)]
        l: f64,
        /// Wall thickness
        #[arg(long)]
        w: f64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Fixed slit trap that defeats the split-at-hit strategy
    ComTrap {
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Comb maze with k interleaved fingers across the start-target line
    Comb {
        /// Finger count (at least 2)
        #[arg(long)]
        k: usize,
        /// Nominal perimeter parameter; each finger pass costs p/(k+1)
        #[arg(long)]
        p: f64,
        /// Start-target distance (defaults to the minimum viable)
        #[arg(long)]
        d: Option<f64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Bracket obstacle whose slowest group walks the long arc twice
    Doubleback {
        /// Fraction of the perimeter on the doubled arc (0.2..=0.98)
        #[arg(long)]
        fraction: f64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Seeded random scene with disjoint polygonal obstacles
    Random {
        #[arg(long)]
        seed: u64,
        /// Number of obstacles
        #[arg(long)]
        count: usize,
        /// Convex obstacles only
        #[arg(long)]
        convex: bool,
        /// Bounding box width
        #[arg(long, default_value_t = 20.0)]
        bw: f64,
        /// Bounding box height
        #[arg(long, default_value_t = 12.0)]
        bh: f64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

/// Flags shared by every command that runs simulations.
#[derive(Args, Clone)]
struct SimFlags {
    /// RNG seed (used by the split strategy's lone-agent direction draw)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Integration step; defaults to 1e-3 of the scene diameter
    #[arg(long)]
    step_h: Option<f64>,
    /// Travel budget multiplier K in d + K * (sum of perimeters)
    #[arg(long, default_value_t = 10.0)]
    budget_factor: f64,
    /// Let the line-guided swarm run with fewer agents than its splits need
    #[arg(long)]
    allow_undersized: bool,
}

impl SimFlags {
    fn config(&self, n: usize) -> SimConfig {
        let mut cfg = SimConfig::new(n);
        cfg.rng_seed = self.seed;
        cfg.step_h = self.step_h;
        cfg.budget_factor = self.budget_factor;
        cfg.allow_undersized = self.allow_undersized;
        cfg
    }
}

#[derive(Args)]
struct RunArgs {
    /// Scene JSON file (exactly one of --scene / --gen)
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Inline generator spec, e.g. "long-wall:d=10,l=100,w=0.01" or
    /// "random:seed=7,count=3,convex=1"
    #[arg(long)]
    gen: Option<String>,
    /// One of: com, swarm-com, bug1, swarm-bug1, bug2, swarm-bug2
    #[arg(short, long)]
    algorithm: String,
    /// Agent count
    #[arg(short, long, default_value_t = 1)]
    n: usize,
    #[command(flatten)]
    sim: SimFlags,
    /// Output stem: writes STEM.trace.jsonl and STEM.summary.json
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scene JSON file (exactly one of --scene / --gen)
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Inline generator spec (alternative to --scene)
    #[arg(long)]
    gen: Option<String>,
    /// Comma-separated algorithm names
    #[arg(long, value_delimiter = ',', required = true)]
    algorithms: Vec<String>,
    /// Comma-separated agent counts; each gets its own report
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    /// Margin for the worst-case floors; omitting skips those entries
    #[arg(long)]
    delta: Option<f64>,
    #[command(flatten)]
    sim: SimFlags,
    /// Also write the reports as JSON
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Trace file produced by `run`
    #[arg(long)]
    trace: PathBuf,
    /// Scene the trace was recorded on
    #[arg(long)]
    scene: PathBuf,
    /// Output SVG path
    #[arg(short, long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Generate { which } => cmd_generate(which),
        Cmd::Run(args) => cmd_run(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Render(args) => cmd_render(args),
        Cmd::Sweep(args) => sweep::cmd_sweep(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_generate(which: GenCmd) -> Result<u8, String> {
    let (scene, out) = match which {
        GenCmd::LongWall { d, l, w, out } => (
            swarmnav::scene::gen_long_wall(d, l, w).map_err(|e| e.to_string())?,
            out,
        ),
        GenCmd::ComTrap { out } => (swarmnav::scene::gen_com_trap(), out),
        GenCmd::Comb { k, p, d, out } => (
            swarmnav::scene::gen_comb(k, p, d).map_err(|e| e.to_string())?,
            out,
        ),
        GenCmd::Doubleback { fraction, out } => (
            swarmnav::scene::gen_doubleback(fraction).map_err(|e| e.to_string())?,
            out,
        ),
        GenCmd::Random {
            seed,
            count,
            convex,
            bw,
            bh,
            out,
        } => (
            swarmnav::scene::gen_random(seed, count, convex, (bw, bh))
                .map_err(|e| e.to_string())?,
            out,
        ),
    };
    let metrics = scene.validate().map_err(|e| e.to_string())?;
    std::fs::write(&out, scene.to_json()).map_err(|e| format!("{}: {e}", out.display()))?;
    println!("wrote {}", out.display());
    println!(
        "name={} d={} sum_p={} p_bar={} m={:?} perimeters={:?}",
        scene.name, metrics.d, metrics.sum_p, metrics.p_bar, metrics.m, metrics.perimeters
    );
    Ok(0)
}

/// Appends a suffix to a path's file name (`runs/a` + `.trace.jsonl` →
/// `runs/a.trace.jsonl`).
fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut name = stem.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    stem.with_file_name(name)
}

#[derive(Serialize)]
struct RunSummary<'a> {
    tool_version: &'a str,
    algorithm: Algorithm,
    scene: &'a str,
    config: &'a SimConfig,
    status: SimStatus,
    t_f: Option<f64>,
    t_l: Option<f64>,
    warnings: &'a [String],
}

fn exit_for_status(status: SimStatus) -> u8 {
    match status {
        SimStatus::AllArrived => 0,
        SimStatus::NonhaltingCycle => 3,
        SimStatus::BudgetExceeded | SimStatus::TargetUnreachable => 4,
    }
}

fn parse_algorithm(name: &str) -> Result<Algorithm, String> {
    name.parse::<Algorithm>().map_err(|e| e.to_string())
}

fn run_one(scene: &Scene, alg: Algorithm, cfg: &SimConfig) -> Result<SimResult, String> {
    alg.run(scene, cfg).map_err(|e| e.to_string())
}

fn cmd_run(args: RunArgs) -> Result<u8, String> {
    let scene = gen::load_scene(args.scene.as_deref(), args.gen.as_deref())?;
    let alg = parse_algorithm(&args.algorithm)?;
    let cfg = args.sim.config(args.n);
    let result = run_one(&scene, alg, &cfg)?;

    let trace_path = with_suffix(&args.out, ".trace.jsonl");
    std::fs::write(&trace_path, trace::render_trace(&result))
        .map_err(|e| format!("{}: {e}", trace_path.display()))?;

    let summary = RunSummary {
        tool_version: TOOL_VERSION,
        algorithm: alg,
        scene: &scene.name,
        config: &cfg,
        status: result.status,
        t_f: result.t_f,
        t_l: result.t_l,
        warnings: &result.warnings,
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    let summary_path = with_suffix(&args.out, ".summary.json");
    std::fs::write(&summary_path, &text).map_err(|e| format!("{}: {e}", summary_path.display()))?;
    print!("{text}");
    Ok(exit_for_status(result.status))
}

fn print_table(report: &BoundReport) {
    let color =
        std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none();
    for line in report.to_table().lines() {
        if color && line.ends_with("FAIL") {
            println!("\x1b[31m{line}\x1b[0m");
        } else {
            println!("{line}");
        }
    }
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    tool_version: &'a str,
    scene: &'a str,
    algorithms: Vec<Algorithm>,
    delta: Option<f64>,
    reports: Vec<VerifyReport<'a>>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    n: usize,
    config: SimConfig,
    report: &'a BoundReport,
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, String> {
    let scene = gen::load_scene(args.scene.as_deref(), args.gen.as_deref())?;
    let algorithms: Vec<Algorithm> = args
        .algorithms
        .iter()
        .map(|s| parse_algorithm(s))
        .collect::<Result<_, _>>()?;

    let mut all_ok = true;
    let mut reports: Vec<(usize, SimConfig, BoundReport)> = Vec::new();
    for &n in &args.n_list {
        let cfg = args.sim.config(n);
        let mut results: BTreeMap<Algorithm, SimResult> = BTreeMap::new();
        for &alg in &algorithms {
            results.insert(alg, run_one(&scene, alg, &cfg)?);
        }
        let report =
            bounds::verify(&scene, &cfg, &results, args.delta).map_err(|e| e.to_string())?;
        if args.n_list.len() > 1 {
            println!("== n = {n} ==");
        }
        print_table(&report);
        all_ok &= report.all_passed();
        reports.push((n, cfg, report));
    }

    if let Some(path) = &args.json_out {
        let doc = VerifyDocument {
            tool_version: TOOL_VERSION,
            scene: &scene.name,
            algorithms,
            delta: args.delta,
            reports: reports
                .iter()
                .map(|(n, cfg, report)| VerifyReport {
                    n: *n,
                    config: cfg.clone(),
                    report,
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_render(args: RenderArgs) -> Result<u8, String> {
    let scene = gen::load_scene(Some(&args.scene), None)?;
    let lines = trace::read_trace(&args.trace)?;
    let svg = svg::render(&scene, &lines);
    std::fs::write(&args.out, svg).map_err(|e| format!("{}: {e}", args.out.display()))?;
    println!("wrote {}", args.out.display());
    Ok(0)
}

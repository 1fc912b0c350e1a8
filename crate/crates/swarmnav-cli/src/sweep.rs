//! Parameter sweeps: a seed × algorithm × agent-count grid over one scene
//! source, one CSV row per run. Rows carry the scene metrics, measured
//! times, and every closed-form bound that applies, so bound tightness can
//! be studied straight from the file.

use std::io::Write as _;
use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use swarmnav::bounds;
use swarmnav::scene::Scene;
use swarmnav::sim::Algorithm;

use crate::gen::{load_scene, GenSpec};
use crate::{parse_algorithm, run_one, SimFlags, TOOL_VERSION};

#[derive(Args)]
pub struct SweepArgs {
    /// Scene JSON file (exactly one of --scene / --gen)
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Inline generator spec; required when --seeds is given (random only)
    #[arg(long)]
    gen: Option<String>,
    /// Scene seeds for the random generator: "0..200" (end-exclusive) or
    /// "3,17,42"; each seed becomes its own scene
    #[arg(long)]
    seeds: Option<String>,
    /// Comma-separated algorithm names; empty means header-only output
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<String>,
    /// Comma-separated agent counts; empty means header-only output
    #[arg(long = "n-list", value_delimiter = ',')]
    n_list: Vec<usize>,
    #[command(flatten)]
    sim: SimFlags,
    /// Output CSV path
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    scene: Option<String>,
    gen: Option<&'a str>,
    seeds: Option<&'a str>,
    algorithms: &'a [Algorithm],
    n_list: &'a [usize],
    seed: u64,
    step_h: Option<f64>,
    budget_factor: f64,
    allow_undersized: bool,
}

const HEADER: [&str; 21] = [
    "scene",
    "scene_seed",
    "algorithm",
    "n",
    "status",
    "t_f",
    "t_l",
    "d",
    "sum_p",
    "p_bar",
    "m_total",
    "event_count",
    "slack",
    "swarmbug1_upper",
    "last_slack",
    "bug1_upper_single",
    "swarmbug2_slowest_upper",
    "two_crossing_first_upper",
    "two_crossing_last_gap",
    "out_obstacle_upper",
    "min_agents",
];

fn parse_seeds(spec: Option<&str>) -> Result<Vec<Option<u64>>, String> {
    let Some(s) = spec else {
        return Ok(vec![None]);
    };
    let bad = |part: &str| format!("seed '{part}' does not parse as an unsigned integer");
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad(a))?;
        let b: u64 = b.trim().parse().map_err(|_| bad(b))?;
        if b < a {
            return Err(format!("seed range {a}..{b} runs backwards"));
        }
        Ok((a..b).map(Some).collect())
    } else {
        s.split(',')
            .map(|part| part.trim().parse().map(Some).map_err(|_| bad(part)))
            .collect()
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::parse_seeds;

    #[test]
    fn seed_specs_parse_as_ranges_or_lists() {
        assert_eq!(parse_seeds(None).unwrap(), vec![None]);
        assert_eq!(
            parse_seeds(Some("0..3")).unwrap(),
            vec![Some(0), Some(1), Some(2)]
        );
        assert_eq!(parse_seeds(Some("5..5")).unwrap(), Vec::<Option<u64>>::new());
        assert_eq!(
            parse_seeds(Some("3, 17,42")).unwrap(),
            vec![Some(3), Some(17), Some(42)]
        );
        assert!(parse_seeds(Some("9..2")).is_err());
        assert!(parse_seeds(Some("a..b")).is_err());
        assert!(parse_seeds(Some("1,x")).is_err());
    }
}

fn row(
    scene: &Scene,
    scene_seed: Option<u64>,
    alg: Algorithm,
    n: usize,
    flags: &SimFlags,
) -> Result<Vec<String>, String> {
    let cfg = flags.config(n);
    let result = run_one(scene, alg, &cfg)?;
    let m = &result.metrics;
    let step = cfg.step_h.unwrap_or(1e-3 * scene.diameter());
    let events = result.event_count();
    let slack = bounds::SLACK_PER_EVENT * step * events as f64;
    let status = serde_json::to_value(result.status)
        .expect("status serializes")
        .as_str()
        .expect("status is a string")
        .to_string();

    let is = |a: Algorithm| alg == a;
    let swarmbug1_upper = is(Algorithm::SwarmBug1)
        .then(|| bounds::swarmbug1_upper(m, n).ok())
        .flatten();
    let last_slack = is(Algorithm::SwarmBug1).then(|| bounds::swarmbug1_last_slack(m));
    let bug1_upper = is(Algorithm::Bug1).then(|| bounds::bug1_upper_single(m));
    let slowest = is(Algorithm::SwarmBug2).then(|| bounds::swarmbug2_slowest_upper(m));
    let two_crossing = is(Algorithm::SwarmBug2)
        .then(|| bounds::two_crossing_bounds(m))
        .flatten();
    let out_obstacle = if is(Algorithm::SwarmBug2) {
        bounds::out_obstacle_upper(m, scene).map_err(|e| e.to_string())?
    } else {
        None
    };
    let min_agents =
        is(Algorithm::SwarmBug2).then(|| bounds::min_agents_swarmbug2(m).to_string());

    Ok(vec![
        scene.name.clone(),
        scene_seed.map(|s| s.to_string()).unwrap_or_default(),
        alg.name().to_string(),
        n.to_string(),
        status,
        cell(result.t_f),
        cell(result.t_l),
        m.d.to_string(),
        m.sum_p.to_string(),
        m.p_bar.to_string(),
        m.m.iter().sum::<usize>().to_string(),
        events.to_string(),
        slack.to_string(),
        cell(swarmbug1_upper),
        cell(last_slack),
        cell(bug1_upper),
        cell(slowest),
        cell(two_crossing.map(|(first, _)| first)),
        cell(two_crossing.map(|(_, gap)| gap)),
        cell(out_obstacle),
        min_agents.unwrap_or_default(),
    ])
}

pub fn cmd_sweep(args: SweepArgs) -> Result<u8, String> {
    let algorithms: Vec<Algorithm> = args
        .algorithms
        .iter()
        .map(|s| parse_algorithm(s))
        .collect::<Result<_, _>>()?;
    let seeds = parse_seeds(args.seeds.as_deref())?;

    // One scene per seed; a single shared scene when seeds are not swept.
    let scenes: Vec<(Option<u64>, Scene)> = if args.seeds.is_some() {
        let spec_text = args
            .gen
            .as_deref()
            .ok_or("--seeds needs --gen with the random generator")?;
        if args.scene.is_some() {
            return Err("--seeds cannot be combined with --scene".into());
        }
        let spec = GenSpec::parse(spec_text)?;
        seeds
            .iter()
            .map(|&seed| Ok((seed, spec.build(seed)?)))
            .collect::<Result<_, String>>()?
    } else {
        vec![(
            None,
            load_scene(args.scene.as_deref(), args.gen.as_deref())?,
        )]
    };

    // Grid in input order: seeds outermost, then algorithms, then n.
    let mut grid: Vec<(usize, Algorithm, usize)> = Vec::new();
    for si in 0..scenes.len() {
        for &alg in &algorithms {
            for &n in &args.n_list {
                grid.push((si, alg, n));
            }
        }
    }

    let rows: Vec<Vec<String>> = grid
        .par_iter()
        .map(|&(si, alg, n)| {
            let (seed, scene) = &scenes[si];
            row(scene, *seed, alg, n, &args.sim)
        })
        .collect::<Result<_, String>>()?;

    let echo = ConfigEcho {
        scene: args.scene.as_ref().map(|p| p.display().to_string()),
        gen: args.gen.as_deref(),
        seeds: args.seeds.as_deref(),
        algorithms: &algorithms,
        n_list: &args.n_list,
        seed: args.sim.seed,
        step_h: args.sim.step_h,
        budget_factor: args.sim.budget_factor,
        allow_undersized: args.sim.allow_undersized,
    };
    let mut file = std::fs::File::create(&args.out)
        .map_err(|e| format!("{}: {e}", args.out.display()))?;
    writeln!(file, "# tool_version={TOOL_VERSION}").map_err(|e| e.to_string())?;
    writeln!(
        file,
        "# config={}",
        serde_json::to_string(&echo).expect("config serializes")
    )
    .map_err(|e| e.to_string())?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(HEADER).map_err(|e| e.to_string())?;
    for r in &rows {
        w.write_record(r).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())?;
    println!("wrote {} ({} rows)", args.out.display(), rows.len());
    Ok(0)
}
